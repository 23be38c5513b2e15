#pragma once

#include "cooploss/collective_operator.hpp"
#include "cooploss/qubit_core.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace cooploss {

/// Sign-convention CNOT acting on computational bits: flips the target when
/// the control bit is 0 (label +1), i.e. (e1, e2) -> (e1, -e1*e2).
struct PmCnot {
  std::size_t control;
  std::size_t target;
};

struct LocalRotation {
  std::size_t site;
  Eigen::Matrix2cd unitary;
};

using Gate = std::variant<PmCnot, LocalRotation>;

class Circuit {
 public:
  explicit Circuit(std::size_t num_qubits, std::vector<Gate> gates = {});

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t cnot_count() const;

  /// Validates indices, control != target and unitarity (1e-12).
  void append(Gate gate);
  PureState apply(const PureState& state) const;

 private:
  std::size_t num_qubits_;
  std::vector<Gate> gates_;
};

/// Text form: header `QUBITS <n>`, then one gate per line:
/// `PMCNOT <control> <target>` or `ROT <site> <a_re> <a_im> ... <d_re> <d_im>`
/// (row-major 2x2, reals with 17 significant digits).
std::string serialize_circuit(const Circuit& circuit);
Circuit parse_circuit(const std::string& text);

/// Data qubit l sits at position 2l, its ancilla at 2l+1 (0-based).
struct CodecLayout {
  static constexpr std::size_t data(std::size_t l) { return 2 * l; }
  static constexpr std::size_t ancilla(std::size_t l) { return 2 * l + 1; }
};

/// Applies the sign-convention CNOT in the eigenbasis of `basis` on both qubits.
PureState pm_cnot(const PureState& state, std::size_t control, std::size_t target,
                  const LocalEigensystem& basis);

/// |+1> x ... x |+1> in the eigenbasis of `basis`.
PureState prepare_ancillas(std::size_t L, const LocalEigensystem& basis);

/// The L-gate CNOT layer C_{11'} ... C_{LL'} on the interleaved layout,
/// conjugated into the coupling eigenbasis by local rotations when that basis
/// is not the computational one.
Circuit codec_circuit(std::size_t L, const LocalEigensystem& basis);

/// Maps an L-qubit state to the 2L-qubit coherence-preserving codeword
/// sum c_{i} |i_1, -i_1, ..., i_L, -i_L>. Requires a uniform coupling; only
/// its common triple is used.
PureState encode(const PureState& state, const CouplingSpec& coupling);

/// Inverse of encode. Throws NotACodewordError when the ancillas do not return
/// to |+1> within 1e-10 after the CNOT layer.
PureState decode(const PureState& encoded, const CouplingSpec& coupling);

struct EfficiencyReport {
  std::size_t L = 0;
  double eta = 0.0;        // log2 C(2L, L) / (2L)
  double asymptote = 0.0;  // 1 - log2(pi L) / (4L)
  // Qubits needed for L logical qubits, under the two readings of the
  // large-L cost formula: L + log2(pi L / 2)/2 and L + log2(pi / (2L))/2.
  double cost_pi_L_over_2 = 0.0;
  double cost_pi_over_2L = 0.0;
};

/// Maximal encoding efficiency when the whole m = 0 sector of 2L qubits is used.
EfficiencyReport efficiency_max(std::size_t L);

/// log2 C(2L, L): exact integer binomial for L <= 33, log-gamma beyond.
double log2_central_binomial(std::size_t L);

}  // namespace cooploss

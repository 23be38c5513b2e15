#pragma once

#include "cooploss/qubit_core.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace cooploss {

/// Weights (x, y, z) of one qubit's coupling operator
/// A_l = w_x sigma_x + w_y sigma_y + w_z sigma_z.
using CouplingTriple = std::array<double, 3>;

/// Per-qubit couplings defining the collective operator A = sum_l A_l.
class CouplingSpec {
 public:
  /// Throws DomainError on an empty list or a zero triple.
  explicit CouplingSpec(std::vector<CouplingTriple> per_qubit);
  static CouplingSpec uniform(const CouplingTriple& triple, std::size_t num_qubits);

  const std::vector<CouplingTriple>& per_qubit() const { return per_qubit_; }
  std::size_t num_qubits() const { return per_qubit_.size(); }
  /// True when every triple is identical.
  bool is_uniform() const { return uniform_; }
  /// The shared triple; throws DomainError for non-uniform couplings.
  const CouplingTriple& common_triple() const;

 private:
  std::vector<CouplingTriple> per_qubit_;
  bool uniform_ = false;
};

/// Eigenpairs of a single A_l: eigenvalues +a and -a. The first nonzero
/// component of each eigenvector is real and positive.
struct LocalEigensystem {
  double a = 0.0;
  Eigen::Vector2cd plus_vec;
  Eigen::Vector2cd minus_vec;

  /// Unitary whose columns are (plus_vec, minus_vec): maps the label basis
  /// (bit 0 = +1, bit 1 = -1) to the computational basis.
  Eigen::Matrix2cd basis_change() const;
};

Eigen::Matrix2cd local_operator(const CouplingTriple& triple);
LocalEigensystem local_eigensystem(const CouplingTriple& triple);

/// A|s> (unnormalized). Throws on qubit-count mismatch.
CVector apply_A(const CouplingSpec& coupling, const PureState& state);
/// <A> in state s.
double expectation_A(const CouplingSpec& coupling, const PureState& state);
/// <A^2> - <A>^2, clamped to 0 for roundoff-sized negatives.
double variance_A(const CouplingSpec& coupling, const PureState& state);

/// Dimension of each sector of a uniform A on 2L qubits, keyed by the label
/// m = sum of local +-1 labels.
struct EigenspaceTable {
  std::size_t num_qubits = 0;
  std::map<int, std::uint64_t> entries;

  std::uint64_t total() const;
};

/// Table for 2L qubits. Supports 1 <= L <= 31 (2^{2L} fits in 64 bits).
EigenspaceTable eigenspace_dims(std::size_t L);

/// Physical eigenvalue of A in sector m; the label m alone ignores the local
/// magnitude a.
inline double sector_eigenvalue(double a, int m) { return a * m; }

/// Amplitudes of `state` in the product eigenbasis of a uniform coupling
/// (each qubit rotated by basis_change().adjoint()).
CVector to_eigenbasis(const PureState& state, const LocalEigensystem& local);
CVector from_eigenbasis(std::span<const std::size_t> dims, const CVector& coefficients,
                        const LocalEigensystem& local);

struct SectorProjection {
  std::optional<PureState> state;  // empty when weight == 0
  double weight = 0.0;
};

/// Projection onto the sector with label sum m. Requires uniform coupling and
/// |m| <= n with m of the same parity as n.
SectorProjection project_m(const CouplingSpec& coupling, const PureState& state, int m);

}  // namespace cooploss

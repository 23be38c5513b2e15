#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cooploss {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Sites are little-endian: site 0 varies fastest in the flattened index.
/// A qubit's bit 0 is the label +1 and bit 1 is the label -1 (label = 1 - 2*bit).
constexpr int label_of_bit(int bit) { return 1 - 2 * bit; }
constexpr int bit_of_label(int label) { return (1 - label) / 2; }

enum class PauliAxis { I, X, Y, Z };

Eigen::Matrix2cd pauli_matrix(PauliAxis axis);

struct PauliTerm {
  std::size_t site;
  PauliAxis axis;
};

/// Product of the entries of `dims`.
std::size_t total_dimension(std::span<const std::size_t> dims);

/// Normalized state vector over sites of arbitrary local dimension.
class PureState {
 public:
  /// Throws DomainError unless amplitudes.size() == prod(dims) and the norm is
  /// 1 within 1e-12.
  PureState(std::vector<std::size_t> dims, CVector amplitudes);

  /// Rescales `amplitudes` to unit norm; throws on a zero vector.
  static PureState normalized(std::vector<std::size_t> dims, CVector amplitudes);
  /// All-qubit state; the qubit count is inferred from the vector length.
  static PureState qubits(CVector amplitudes);
  static PureState basis(std::vector<std::size_t> dims, std::size_t index);

  const std::vector<std::size_t>& dims() const { return dims_; }
  const CVector& amplitudes() const { return amplitudes_; }
  std::size_t num_sites() const { return dims_.size(); }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  bool all_qubits() const;

 private:
  std::vector<std::size_t> dims_;
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12 elementwise), unit trace (1e-12) and
  /// eigenvalues >= -1e-10.
  DensityMatrix(std::vector<std::size_t> dims, CMatrix entries);

  static DensityMatrix from_pure(const PureState& state);

  const std::vector<std::size_t>& dims() const { return dims_; }
  const CMatrix& entries() const { return entries_; }
  std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }

 private:
  std::vector<std::size_t> dims_;
  CMatrix entries_;
};

PureState tensor(const PureState& a, const PureState& b);

/// (I x ... x op x ... x I)|amplitudes> without building the full operator.
CVector apply_site_operator(std::span<const std::size_t> dims, const CVector& amplitudes,
                            std::size_t site, const CMatrix& op);
/// Same, for a unitary `op`; the result must stay normalized.
PureState apply_site_operator(const PureState& state, std::size_t site, const CMatrix& op);

/// <s| prod sigma |s> for Pauli factors on distinct qubit sites.
double pauli_string_expectation(const PureState& state, std::span<const PauliTerm> ops);

/// Reduced state on `keep` (any order, no duplicates); kept sites appear in
/// ascending order in the result.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const PureState& state, std::span<const std::size_t> keep);

double purity(const DensityMatrix& rho);
/// tr(rho) - tr(rho^2).
double idempotency_defect(const DensityMatrix& rho);

/// |<a|b>|^2; insensitive to global phase.
double fidelity(const PureState& a, const PureState& b);

/// Reorders sites: site k of the result is site order[k] of `state`.
PureState permute_sites(const PureState& state, std::span<const std::size_t> order);

}  // namespace cooploss

#include "cooploss/collective_operator.hpp"

#include "cooploss/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace cooploss {

namespace {

void require_covers(const CouplingSpec& coupling, const PureState& state) {
  if (!state.all_qubits()) throw DomainError("collective operator: state has non-qubit sites");
  if (coupling.num_qubits() != state.num_sites())
    throw DomainError("collective operator: coupling covers " + std::to_string(coupling.num_qubits()) +
                      " qubits but the state has " + std::to_string(state.num_sites()));
}

Eigen::Vector2cd phase_fixed(Eigen::Vector2cd v) {
  v.normalize();
  for (Eigen::Index k = 0; k < 2; ++k) {
    if (std::abs(v(k)) > 1e-12) {
      v *= std::conj(v(k)) / std::abs(v(k));
      v(k) = std::abs(v(k));
      break;
    }
  }
  return v;
}

// Eigenvector of [[z, x - iy], [x + iy, -z]] for eigenvalue s*a (s = +-1); of
// the two algebraically equivalent candidates, the larger one is used.
Eigen::Vector2cd eigenvector(const CouplingTriple& t, double a, double s) {
  const Complex off{t[0], t[1]};
  Eigen::Vector2cd u1(Complex(t[2] + s * a), off);
  Eigen::Vector2cd u2(std::conj(off), Complex(s * a - t[2]));
  return phase_fixed(u1.norm() >= u2.norm() ? u1 : u2);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ typedef unsigned __int128 wide;
  wide r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;  // exact at every step
  return static_cast<std::uint64_t>(r);
}

}  // namespace

CouplingSpec::CouplingSpec(std::vector<CouplingTriple> per_qubit) : per_qubit_(std::move(per_qubit)) {
  if (per_qubit_.empty()) throw DomainError("CouplingSpec: no qubits");
  for (const auto& t : per_qubit_) {
    for (double w : t) {
      if (!std::isfinite(w)) throw DomainError("CouplingSpec: non-finite coupling weight");
    }
    if (t[0] == 0.0 && t[1] == 0.0 && t[2] == 0.0)
      throw DomainError("CouplingSpec: degenerate coupling (zero triple)");
  }
  uniform_ = std::all_of(per_qubit_.begin(), per_qubit_.end(),
                         [&](const CouplingTriple& t) { return t == per_qubit_.front(); });
}

CouplingSpec CouplingSpec::uniform(const CouplingTriple& triple, std::size_t num_qubits) {
  return CouplingSpec(std::vector<CouplingTriple>(num_qubits, triple));
}

const CouplingTriple& CouplingSpec::common_triple() const {
  if (!uniform_) throw DomainError("CouplingSpec: coupling is not uniform across qubits");
  return per_qubit_.front();
}

Eigen::Matrix2cd LocalEigensystem::basis_change() const {
  Eigen::Matrix2cd w;
  w.col(0) = plus_vec;
  w.col(1) = minus_vec;
  return w;
}

Eigen::Matrix2cd local_operator(const CouplingTriple& t) {
  return t[0] * pauli_matrix(PauliAxis::X) + t[1] * pauli_matrix(PauliAxis::Y) +
         t[2] * pauli_matrix(PauliAxis::Z);
}

LocalEigensystem local_eigensystem(const CouplingTriple& t) {
  const double a = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
  if (!(a > 0.0)) throw DomainError("local_eigensystem: degenerate coupling (zero triple)");
  return LocalEigensystem{a, eigenvector(t, a, +1.0), eigenvector(t, a, -1.0)};
}

CVector apply_A(const CouplingSpec& coupling, const PureState& state) {
  require_covers(coupling, state);
  CVector out = CVector::Zero(state.amplitudes().size());
  for (std::size_t l = 0; l < coupling.num_qubits(); ++l) {
    out += apply_site_operator(state.dims(), state.amplitudes(), l, local_operator(coupling.per_qubit()[l]));
  }
  return out;
}

double expectation_A(const CouplingSpec& coupling, const PureState& state) {
  return state.amplitudes().dot(apply_A(coupling, state)).real();
}

double variance_A(const CouplingSpec& coupling, const PureState& state) {
  const CVector as = apply_A(coupling, state);
  const double second = as.squaredNorm();
  const double mean = state.amplitudes().dot(as).real();
  const double var = second - mean * mean;
  if (var < -1e-12 * std::max(1.0, second))
    throw DomainError("variance_A: negative variance beyond roundoff");
  return std::max(var, 0.0);
}

std::uint64_t EigenspaceTable::total() const {
  std::uint64_t sum = 0;
  for (const auto& [m, dim] : entries) sum += dim;
  return sum;
}

EigenspaceTable eigenspace_dims(std::size_t L) {
  if (L < 1 || L > 31) throw DomainError("eigenspace_dims: L must be in 1..31");
  EigenspaceTable table;
  table.num_qubits = 2 * L;
  table.entries[0] = binomial(2 * L, L);
  for (std::size_t k = 1; k <= L; ++k) {
    const auto dim = binomial(2 * L, L - k);
    table.entries[static_cast<int>(2 * k)] = dim;
    table.entries[-static_cast<int>(2 * k)] = dim;
  }
  return table;
}

CVector to_eigenbasis(const PureState& state, const LocalEigensystem& local) {
  const CMatrix w_dag = local.basis_change().adjoint();
  CVector v = state.amplitudes();
  for (std::size_t l = 0; l < state.num_sites(); ++l) v = apply_site_operator(state.dims(), v, l, w_dag);
  return v;
}

CVector from_eigenbasis(std::span<const std::size_t> dims, const CVector& coefficients,
                        const LocalEigensystem& local) {
  const CMatrix w = local.basis_change();
  CVector v = coefficients;
  for (std::size_t l = 0; l < dims.size(); ++l) v = apply_site_operator(dims, v, l, w);
  return v;
}

SectorProjection project_m(const CouplingSpec& coupling, const PureState& state, int m) {
  require_covers(coupling, state);
  const auto n = static_cast<int>(state.num_sites());
  if (std::abs(m) > n || (m + n) % 2 != 0)
    throw DomainError("project_m: invalid sector label " + std::to_string(m));
  const LocalEigensystem local = local_eigensystem(coupling.common_triple());

  CVector coeffs = to_eigenbasis(state, local);
  for (Eigen::Index idx = 0; idx < coeffs.size(); ++idx) {
    // label sum = (#zeros) - (#ones) = n - 2 popcount
    const int label_sum = n - 2 * std::popcount(static_cast<std::uint64_t>(idx));
    if (label_sum != m) coeffs(idx) = 0.0;
  }
  SectorProjection out;
  out.weight = coeffs.squaredNorm();
  if (out.weight > 0.0) {
    out.state = PureState::normalized(state.dims(), from_eigenbasis(state.dims(), coeffs, local));
  }
  return out;
}

}  // namespace cooploss

#include "cooploss/qubit_core.hpp"

#include "cooploss/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace cooploss {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kTraceTolerance = 1e-12;
constexpr double kEigenvalueFloor = -1e-10;

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> strides(dims.size());
  std::size_t s = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    strides[k] = s;
    s *= dims[k];
  }
  return strides;
}

// Flat offsets of every multi-index over `sites` (first listed site fastest),
// with all other digits zero.
std::vector<std::size_t> site_offsets(std::span<const std::size_t> dims,
                                      const std::vector<std::size_t>& sites) {
  const auto strides = strides_of(dims);
  std::vector<std::size_t> offsets{0};
  for (std::size_t site : sites) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[site]);
    for (std::size_t digit = 0; digit < dims[site]; ++digit) {
      for (std::size_t off : offsets) next.push_back(off + digit * strides[site]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_sites(
    std::size_t num_sites, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw DomainError("partial_trace: repeated site in keep set");
  if (kept.back() >= num_sites) throw DomainError("partial_trace: site out of range");
  std::vector<std::size_t> traced;
  for (std::size_t s = 0; s < num_sites; ++s) {
    if (!std::binary_search(kept.begin(), kept.end(), s)) traced.push_back(s);
  }
  return {kept, traced};
}

std::vector<std::size_t> select(const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& sites) {
  std::vector<std::size_t> out;
  for (std::size_t s : sites) out.push_back(dims[s]);
  return out;
}

}  // namespace

Eigen::Matrix2cd pauli_matrix(PauliAxis axis) {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (axis) {
    case PauliAxis::I: m << 1, 0, 0, 1; break;
    case PauliAxis::X: m << 0, 1, 1, 0; break;
    case PauliAxis::Y: m << 0, -i, i, 0; break;
    case PauliAxis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

std::size_t total_dimension(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

PureState::PureState(std::vector<std::size_t> dims, CVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  if (dims_.empty()) throw DomainError("PureState: no sites");
  for (std::size_t d : dims_) {
    if (d < 1) throw DomainError("PureState: site dimension must be positive");
  }
  if (total_dimension(dims_) != dimension())
    throw DomainError("PureState: amplitude count " + std::to_string(dimension()) +
                      " does not match the product of site dimensions");
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance))
    throw DomainError("PureState: norm " + std::to_string(norm) + " differs from 1");
}

PureState PureState::normalized(std::vector<std::size_t> dims, CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("PureState: cannot normalize a zero vector");
  amplitudes /= norm;
  return PureState(std::move(dims), std::move(amplitudes));
}

PureState PureState::qubits(CVector amplitudes) {
  const auto n = static_cast<std::size_t>(amplitudes.size());
  if (n < 2 || (n & (n - 1)) != 0)
    throw DomainError("PureState: qubit state length must be a power of two >= 2");
  std::size_t count = 0;
  while ((std::size_t{1} << count) < n) ++count;
  return PureState(std::vector<std::size_t>(count, 2), std::move(amplitudes));
}

PureState PureState::basis(std::vector<std::size_t> dims, std::size_t index) {
  const std::size_t dim = total_dimension(dims);
  if (index >= dim) throw DomainError("PureState::basis: index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(dims), std::move(v));
}

bool PureState::all_qubits() const {
  return std::all_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 2; });
}

DensityMatrix::DensityMatrix(std::vector<std::size_t> dims, CMatrix entries)
    : dims_(std::move(dims)), entries_(std::move(entries)) {
  const std::size_t dim = total_dimension(dims_);
  if (entries_.rows() != entries_.cols() || static_cast<std::size_t>(entries_.rows()) != dim)
    throw DomainError("DensityMatrix: side does not match the product of site dimensions");
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance)
    throw DomainError("DensityMatrix: not Hermitian");
  const Complex tr = entries_.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) throw DomainError("DensityMatrix: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenvalueFloor)
    throw DomainError("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& state) {
  const CVector& v = state.amplitudes();
  return DensityMatrix(state.dims(), v * v.adjoint());
}

PureState tensor(const PureState& a, const PureState& b) {
  // a occupies the low (fast) sites.
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  const auto na = a.amplitudes().size();
  CVector out(na * b.amplitudes().size());
  for (Eigen::Index j = 0; j < b.amplitudes().size(); ++j) {
    out.segment(j * na, na) = b.amplitudes()(j) * a.amplitudes();
  }
  return PureState(std::move(dims), std::move(out));
}

CVector apply_site_operator(std::span<const std::size_t> dims, const CVector& amplitudes,
                            std::size_t site, const CMatrix& op) {
  if (site >= dims.size()) throw DomainError("apply_site_operator: site out of range");
  const std::size_t d = dims[site];
  if (static_cast<std::size_t>(op.rows()) != d || static_cast<std::size_t>(op.cols()) != d)
    throw DomainError("apply_site_operator: operator side does not match site dimension");
  if (static_cast<std::size_t>(amplitudes.size()) != total_dimension(dims))
    throw DomainError("apply_site_operator: vector length does not match dims");
  std::size_t stride = 1;
  for (std::size_t k = 0; k < site; ++k) stride *= dims[k];
  const std::size_t block = stride * d;
  const std::size_t n = static_cast<std::size_t>(amplitudes.size());

  CVector out = CVector::Zero(amplitudes.size());
  for (std::size_t outer = 0; outer < n; outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = outer + inner;
      for (std::size_t r = 0; r < d; ++r) {
        Complex acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          acc += op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) *
                 amplitudes(static_cast<Eigen::Index>(base + c * stride));
        }
        out(static_cast<Eigen::Index>(base + r * stride)) = acc;
      }
    }
  }
  return out;
}

PureState apply_site_operator(const PureState& state, std::size_t site, const CMatrix& op) {
  return PureState(state.dims(), apply_site_operator(state.dims(), state.amplitudes(), site, op));
}

double pauli_string_expectation(const PureState& state, std::span<const PauliTerm> ops) {
  std::vector<std::size_t> seen;
  CVector v = state.amplitudes();
  for (const auto& term : ops) {
    if (term.site >= state.num_sites()) throw DomainError("pauli_string_expectation: site out of range");
    if (state.dims()[term.site] != 2) throw DomainError("pauli_string_expectation: site is not a qubit");
    if (std::find(seen.begin(), seen.end(), term.site) != seen.end())
      throw DomainError("pauli_string_expectation: repeated site index");
    seen.push_back(term.site);
    if (term.axis != PauliAxis::I) v = apply_site_operator(state.dims(), v, term.site, pauli_matrix(term.axis));
  }
  const Complex value = state.amplitudes().dot(v);
  if (std::abs(value.imag()) > 1e-12)
    throw DomainError("pauli_string_expectation: non-real expectation value");
  return value.real();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto [kept, traced] = split_sites(rho.dims().size(), keep);
  const auto keep_off = site_offsets(rho.dims(), kept);
  const auto trace_off = site_offsets(rho.dims(), traced);
  const auto K = static_cast<Eigen::Index>(keep_off.size());
  CMatrix out = CMatrix::Zero(K, K);
  const CMatrix& m = rho.entries();
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < K; ++j) {
      Complex acc = 0.0;
      for (std::size_t r : trace_off) {
        acc += m(static_cast<Eigen::Index>(keep_off[i] + r), static_cast<Eigen::Index>(keep_off[j] + r));
      }
      out(i, j) = acc;
    }
  }
  return DensityMatrix(select(rho.dims(), kept), std::move(out));
}

DensityMatrix partial_trace(const PureState& state, std::span<const std::size_t> keep) {
  const auto [kept, traced] = split_sites(state.num_sites(), keep);
  const auto keep_off = site_offsets(state.dims(), kept);
  const auto trace_off = site_offsets(state.dims(), traced);
  // Rows: kept multi-index, columns: traced multi-index.
  CMatrix psi(static_cast<Eigen::Index>(keep_off.size()), static_cast<Eigen::Index>(trace_off.size()));
  for (std::size_t i = 0; i < keep_off.size(); ++i) {
    for (std::size_t r = 0; r < trace_off.size(); ++r) {
      psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) =
          state.amplitudes()(static_cast<Eigen::Index>(keep_off[i] + trace_off[r]));
    }
  }
  CMatrix out = psi * psi.adjoint();
  return DensityMatrix(select(state.dims(), kept), std::move(out));
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.entries().squaredNorm();
}

double idempotency_defect(const DensityMatrix& rho) {
  return rho.entries().trace().real() - purity(rho);
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dims() != b.dims()) throw DomainError("fidelity: states have different dims");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

PureState permute_sites(const PureState& state, std::span<const std::size_t> order) {
  const std::size_t n = state.num_sites();
  if (order.size() != n) throw DomainError("permute_sites: order length mismatch");
  std::vector<bool> used(n, false);
  for (std::size_t s : order) {
    if (s >= n || used[s]) throw DomainError("permute_sites: order is not a permutation");
    used[s] = true;
  }
  std::vector<std::size_t> new_dims(n);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = state.dims()[order[k]];
  const auto new_strides = strides_of(new_dims);

  CVector out(state.amplitudes().size());
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t idx = 0; idx < state.dimension(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t s = 0; s < n; ++s) {
      digits[s] = rest % state.dims()[s];
      rest /= state.dims()[s];
    }
    std::size_t target = 0;
    for (std::size_t k = 0; k < n; ++k) target += digits[order[k]] * new_strides[k];
    out(static_cast<Eigen::Index>(target)) = state.amplitudes()(static_cast<Eigen::Index>(idx));
  }
  return PureState(std::move(new_dims), std::move(out));
}

}  // namespace cooploss

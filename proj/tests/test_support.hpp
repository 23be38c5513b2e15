#pragma once

#include "cooploss/collective_operator.hpp"
#include "cooploss/qubit_core.hpp"

#include <random>
#include <unsupported/Eigen/KroneckerProduct>

// Random generators and dense-matrix oracles shared by the test binaries.
// The oracles build full operators with Kronecker products and so stay
// independent of the site-by-site code paths they check.

namespace cooploss::testing {

inline CVector random_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(static_cast<Eigen::Index>(dim));
  for (auto& c : v) c = Complex(g(rng), g(rng));
  return v;
}

inline PureState random_qubit_state(std::size_t n, std::mt19937_64& rng) {
  return PureState::normalized(std::vector<std::size_t>(n, 2), random_vector(std::size_t{1} << n, rng));
}

inline PureState random_state(std::vector<std::size_t> dims, std::mt19937_64& rng) {
  return PureState::normalized(dims, random_vector(total_dimension(dims), rng));
}

/// Random full-rank density matrix G G^dag / tr.
inline CMatrix random_density(std::size_t dim, std::mt19937_64& rng) {
  CMatrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index j = 0; j < g.cols(); ++j) g.col(j) = random_vector(dim, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline CouplingTriple random_triple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

/// Kronecker embedding of a 2x2 `op` at qubit `site` of n (site 0 fastest,
/// so it is the right-most Kronecker factor).
inline CMatrix dense_site_op(const Eigen::Matrix2cd& op, std::size_t site, std::size_t n) {
  CMatrix m = CMatrix::Identity(1, 1);
  for (std::size_t k = n; k-- > 0;) {
    const CMatrix f = k == site ? CMatrix(op) : CMatrix(CMatrix::Identity(2, 2));
    m = Eigen::kroneckerProduct(m, f).eval();
  }
  return m;
}

inline CMatrix dense_A(const CouplingSpec& c) {
  const std::size_t n = c.num_qubits();
  CMatrix a = CMatrix::Zero(1 << n, 1 << n);
  for (std::size_t l = 0; l < n; ++l) {
    const auto& t = c.per_qubit()[l];
    Eigen::Matrix2cd op = t[0] * pauli_matrix(PauliAxis::X) + t[1] * pauli_matrix(PauliAxis::Y) +
                          t[2] * pauli_matrix(PauliAxis::Z);
    a += dense_site_op(op, l, n);
  }
  return a;
}

inline double dense_variance(const CMatrix& op, const CVector& v) {
  const double mean = v.dot(op * v).real();
  return v.dot(op * op * v).real() - mean * mean;
}

/// (|+1...+1> + |-1...-1>)/sqrt(2) in the computational basis.
inline PureState ghz(std::size_t n) {
  CVector v = CVector::Zero(1 << n);
  v(0) = v((1 << n) - 1) = 1.0 / std::sqrt(2.0);
  return PureState::normalized(std::vector<std::size_t>(n, 2), v);
}

/// L-fold product of (|+1> + |-1>)/sqrt(2).
inline PureState product_plus(std::size_t n) {
  CVector v = CVector::Constant(1 << n, Complex(std::pow(2.0, -0.5 * static_cast<double>(n))));
  return PureState::normalized(std::vector<std::size_t>(n, 2), v);
}

}  // namespace cooploss::testing

#include "cooploss/error.hpp"
#include "cooploss/qubit_core.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace cooploss;
using cooploss::testing::dense_site_op;
using cooploss::testing::random_density;
using cooploss::testing::random_qubit_state;
using cooploss::testing::random_state;

namespace {

PureState ket(std::initializer_list<Complex> amps) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index k = 0;
  for (const auto& a : amps) v(k++) = a;
  return PureState::qubits(v);
}

void check_vector(const CVector& got, std::initializer_list<Complex> want, double tol = 1e-12) {
  REQUIRE(static_cast<std::size_t>(got.size()) == want.size());
  Eigen::Index k = 0;
  for (const auto& w : want) {
    CHECK(std::abs(got(k) - w) <= tol);
    ++k;
  }
}

}  // namespace

TEST_CASE("basis convention") {
  CHECK(label_of_bit(0) == 1);
  CHECK(label_of_bit(1) == -1);
  CHECK(bit_of_label(1) == 0);
  CHECK(bit_of_label(-1) == 1);
}

TEST_CASE("PureState validates its invariants") {
  CHECK_THROWS_AS(PureState({2}, CVector::Ones(2)), DomainError);       // norm sqrt(2)
  CHECK_THROWS_AS(PureState({2, 2}, CVector::Unit(2, 0)), DomainError);  // wrong length
  CHECK_THROWS_AS(PureState::normalized({2}, CVector::Zero(2)), DomainError);
  CHECK_THROWS_AS(PureState::qubits(CVector::Unit(3, 0)), DomainError);
  CHECK(PureState::qubits(CVector::Unit(8, 0)).num_sites() == 3);
}

TEST_CASE("tensor") {
  const PureState plus = ket({1.0, 0.0});
  check_vector(tensor(plus, plus).amplitudes(), {1.0, 0.0, 0.0, 0.0});

  const Complex alpha(0.6, 0.0), beta(0.0, 0.8);
  const PureState mixed = ket({alpha, beta});
  // The first factor occupies site 0, which varies fastest.
  check_vector(tensor(mixed, plus).amplitudes(), {alpha, beta, 0.0, 0.0});
  check_vector(tensor(plus, mixed).amplitudes(), {alpha, 0.0, beta, 0.0});

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_state({2, 3}, rng);
    const auto b = random_state({4}, rng);
    const auto ab = tensor(a, b);
    CHECK(ab.amplitudes().norm() == doctest::Approx(a.amplitudes().norm() * b.amplitudes().norm()).epsilon(1e-14));
    CHECK(ab.dims() == std::vector<std::size_t>{2, 3, 4});
  }
}

TEST_CASE("tensor is associative") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_qubit_state(1, rng);
    const auto b = random_state({3}, rng);
    const auto c = random_qubit_state(2, rng);
    const auto left = tensor(tensor(a, b), c);
    const auto right = tensor(a, tensor(b, c));
    CHECK(left.dims() == right.dims());
    CHECK((left.amplitudes() - right.amplitudes()).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("apply_site_operator") {
  const PureState plus = ket({1.0, 0.0});
  check_vector(apply_site_operator(plus, 0, pauli_matrix(PauliAxis::Z)).amplitudes(), {1.0, 0.0});
  check_vector(apply_site_operator(plus, 0, pauli_matrix(PauliAxis::X)).amplitudes(), {0.0, 1.0});
  // 2x2 product by hand: [[0,-i],[i,0]] (1,0)^T = (0, i)^T
  check_vector(apply_site_operator(plus, 0, pauli_matrix(PauliAxis::Y)).amplitudes(), {0.0, Complex(0, 1)});

  SUBCASE("matches the dense Kronecker embedding") {
    std::mt19937_64 rng(13);
    for (std::size_t site = 0; site < 4; ++site) {
      const auto s = random_qubit_state(4, rng);
      const Eigen::Matrix2cd op = Eigen::Matrix2cd::Random();
      const CVector fast = apply_site_operator(s.dims(), s.amplitudes(), site, op);
      const CVector dense = dense_site_op(op, site, 4) * s.amplitudes();
      CHECK((fast - dense).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
  SUBCASE("qudit sites") {
    const PureState s = PureState::basis({2, 3}, 0 + 2 * 2);  // qubit bit 0, mode level 2
    CMatrix shift = CMatrix::Zero(3, 3);
    shift(2, 1) = 1.0;
    shift(0, 2) = 1.0;
    shift(1, 0) = 1.0;
    const PureState moved = apply_site_operator(s, 1, shift);  // level 2 -> 0
    CHECK(std::abs(moved.amplitudes()(0) - 1.0) < 1e-15);
  }
  CHECK_THROWS_AS(apply_site_operator(plus, 0, CMatrix::Identity(3, 3)), DomainError);
  CHECK_THROWS_AS(apply_site_operator(plus, 1, pauli_matrix(PauliAxis::X)), DomainError);
}

TEST_CASE("pauli_string_expectation") {
  const PureState plus = ket({1.0, 0.0});
  const PauliTerm z0[] = {{0, PauliAxis::Z}};
  const PauliTerm x0[] = {{0, PauliAxis::X}};
  CHECK(pauli_string_expectation(plus, z0) == doctest::Approx(1.0));
  CHECK(pauli_string_expectation(plus, x0) == doctest::Approx(0.0));

  const double r = 1.0 / std::sqrt(2.0);
  const PureState bell = ket({r, 0.0, 0.0, r});
  const PauliTerm zz[] = {{0, PauliAxis::Z}, {1, PauliAxis::Z}};
  const CMatrix zz_dense = testing::dense_site_op(pauli_matrix(PauliAxis::Z), 0, 2) *
                           testing::dense_site_op(pauli_matrix(PauliAxis::Z), 1, 2);
  const double oracle = bell.amplitudes().dot(zz_dense * bell.amplitudes()).real();
  CHECK(oracle == doctest::Approx(1.0));
  CHECK(pauli_string_expectation(bell, zz) == doctest::Approx(oracle).epsilon(1e-12));

  const PauliTerm repeated[] = {{0, PauliAxis::Z}, {0, PauliAxis::X}};
  CHECK_THROWS_AS(pauli_string_expectation(bell, repeated), DomainError);
}

TEST_CASE("pauli strings agree with dense matrices on up to 4 qubits") {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> axis_pick(0, 3);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto s = random_qubit_state(n, rng);
      std::vector<PauliTerm> ops;
      CMatrix dense = CMatrix::Identity(1 << n, 1 << n);
      for (std::size_t site = 0; site < n; ++site) {
        const auto axis = static_cast<PauliAxis>(axis_pick(rng));
        ops.push_back({site, axis});
        dense = dense * dense_site_op(pauli_matrix(axis), site, n);
      }
      const double want = s.amplitudes().dot(dense * s.amplitudes()).real();
      CHECK(std::abs(pauli_string_expectation(s, ops) - want) <= 1e-12);
    }
  }
}

TEST_CASE("DensityMatrix validates its invariants") {
  CMatrix m(2, 2);
  m << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(DensityMatrix({2}, m), DomainError);  // not Hermitian
  m << 0.6, 0.0, 0.0, 0.6;
  CHECK_THROWS_AS(DensityMatrix({2}, m), DomainError);  // trace
  m << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(DensityMatrix({2}, m), DomainError);  // negative eigenvalue
}

TEST_CASE("partial_trace") {
  std::mt19937_64 rng(15);
  SUBCASE("product state") {
    const auto a = random_qubit_state(1, rng);
    const auto b = random_state({3}, rng);
    const std::size_t keep0[] = {0};
    const auto reduced = partial_trace(DensityMatrix::from_pure(tensor(a, b)), keep0);
    const CMatrix want = a.amplitudes() * a.amplitudes().adjoint();
    CHECK((reduced.entries() - want).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("Bell state gives I/2") {
    const double r = 1.0 / std::sqrt(2.0);
    const PureState bell = ket({r, 0.0, 0.0, r});
    const std::size_t keep0[] = {0};
    const auto reduced = partial_trace(DensityMatrix::from_pure(bell), keep0);
    CHECK((reduced.entries() - 0.5 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("trace preserved for random states") {
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<std::size_t> dims{2, 3, 2};
      const DensityMatrix rho(dims, random_density(12, rng));
      const std::size_t keep[] = {2, 0};
      const auto reduced = partial_trace(rho, keep);
      CHECK(reduced.dims() == std::vector<std::size_t>{2, 2});
      CHECK(std::abs(reduced.entries().trace() - 1.0) <= 1e-12);
    }
  }
  SUBCASE("linear") {
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix r1 = random_density(8, rng), r2 = random_density(8, rng);
      const double alpha = 0.3, beta = 0.7;
      const std::vector<std::size_t> dims{2, 2, 2};
      const std::size_t keep[] = {1};
      const CMatrix mixed = partial_trace(DensityMatrix(dims, alpha * r1 + beta * r2), keep).entries();
      const CMatrix parts = alpha * partial_trace(DensityMatrix(dims, r1), keep).entries() +
                            beta * partial_trace(DensityMatrix(dims, r2), keep).entries();
      CHECK((mixed - parts).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("pure-state overload matches the density-matrix route") {
    const auto s = random_state({2, 3, 2}, rng);
    const std::size_t keep[] = {0, 2};
    const auto a = partial_trace(s, keep);
    const auto b = partial_trace(DensityMatrix::from_pure(s), keep);
    CHECK((a.entries() - b.entries()).cwiseAbs().maxCoeff() <= 1e-14);
  }
  const auto s = random_qubit_state(2, rng);
  CHECK_THROWS_AS(partial_trace(s, std::span<const std::size_t>{}), DomainError);
  const std::size_t dup[] = {0, 0};
  CHECK_THROWS_AS(partial_trace(s, dup), DomainError);
}

TEST_CASE("idempotency_defect") {
  std::mt19937_64 rng(16);
  CHECK(std::abs(idempotency_defect(DensityMatrix::from_pure(random_qubit_state(3, rng)))) <= 1e-12);
  CHECK(idempotency_defect(DensityMatrix({2}, 0.5 * CMatrix::Identity(2, 2))) == doctest::Approx(0.5));
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  // 1 - (9/16 + 1/16)
  CHECK(idempotency_defect(DensityMatrix({2}, d)) == doctest::Approx(0.375).epsilon(1e-15));

  SUBCASE("bounded by 1 - 1/dim") {
    for (std::size_t dim : {2, 4, 6}) {
      for (int trial = 0; trial < 30; ++trial) {
        const DensityMatrix rho({dim}, random_density(dim, rng));
        const double delta = idempotency_defect(rho);
        CHECK(delta >= -1e-12);
        CHECK(delta <= 1.0 - 1.0 / static_cast<double>(dim) + 1e-12);
      }
    }
    const DensityMatrix maximally_mixed({4}, 0.25 * CMatrix::Identity(4, 4));
    CHECK(idempotency_defect(maximally_mixed) == doctest::Approx(0.75));
  }
}

TEST_CASE("permute_sites and fidelity") {
  std::mt19937_64 rng(17);
  const auto a = random_qubit_state(1, rng);
  const auto b = random_state({3}, rng);
  const std::size_t swap[] = {1, 0};
  const auto swapped = permute_sites(tensor(a, b), swap);
  const auto direct = tensor(b, a);
  CHECK((swapped.amplitudes() - direct.amplitudes()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(fidelity(swapped, direct) == doctest::Approx(1.0));

  const PureState phased(direct.dims(), Complex(0.0, 1.0) * direct.amplitudes());
  CHECK(fidelity(phased, direct) == doctest::Approx(1.0));
  const std::size_t bad[] = {0, 0};
  CHECK_THROWS_AS(permute_sites(direct, bad), DomainError);
}

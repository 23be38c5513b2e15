#pragma once

#include "cooploss/collective_operator.hpp"
#include "cooploss/qubit_core.hpp"

#include <span>
#include <vector>

// Natural units throughout: hbar = k_B = 1. Every "rate" below is the
// short-time coefficient 1/tau_2^2 of t^2 in the idempotency defect.

namespace cooploss {

struct BathMode {
  double omega = 0.0;  // angular frequency, > 0
  double kappa = 0.0;  // spectral coupling kappa(omega)
};

/// Thermal harmonic bath: either a finite list of modes or samples of a
/// continuum kappa(omega) on a strictly increasing grid.
class BathSpec {
 public:
  static BathSpec discrete(std::vector<BathMode> modes, double temperature);
  static BathSpec continuum(std::vector<BathMode> grid, double temperature);

  bool is_continuum() const { return continuum_; }
  const std::vector<BathMode>& modes() const { return modes_; }
  double temperature() const { return temperature_; }

 private:
  BathSpec(std::vector<BathMode> modes, double temperature, bool continuum);

  std::vector<BathMode> modes_;
  double temperature_ = 0.0;
  bool continuum_ = false;
};

/// Coupling weights lambda[mode][qubit][axis] for the general (non-factoring)
/// case. Immutable; at least one entry is nonzero.
class PerModeCouplings {
 public:
  /// `values` has layout [mode][qubit][axis], size num_modes*num_qubits*3.
  PerModeCouplings(std::size_t num_modes, std::size_t num_qubits, std::vector<double> values);
  /// lambda[w][l][mu] = coupling.per_qubit()[l][mu] * kappas[w].
  static PerModeCouplings factored(const CouplingSpec& coupling, std::span<const double> kappas);

  std::size_t num_modes() const { return num_modes_; }
  std::size_t num_qubits() const { return num_qubits_; }
  double operator()(std::size_t mode, std::size_t qubit, std::size_t axis) const {
    return values_[(mode * num_qubits_ + qubit) * 3 + axis];
  }

 private:
  std::size_t num_modes_;
  std::size_t num_qubits_;
  std::vector<double> values_;
};

/// Bose-Einstein occupation 1/(exp(omega/T) - 1); exactly 0 at T = 0.
double mean_occupation(double omega, double temperature);

/// 4 * sum_w kappa^2 (N_w + 1/2), or the trapezoidal integral of the same
/// integrand for a continuum grid.
double omega_squared(const BathSpec& bath);

/// <(a + a^dag)^2> = 2 N_w + 1 for each discrete mode.
std::vector<double> field_second_moments(const BathSpec& bath);

/// Collective bath: Omega^2 * Var(A).
double rate_collective(const CouplingSpec& coupling, const PureState& state, const BathSpec& bath);

/// Every qubit with its own copy of the bath: Omega^2 * sum_l Var(A_l).
double rate_independent(const CouplingSpec& coupling, const PureState& state, const BathSpec& bath);

/// General per-mode couplings on a discrete bath:
///   2 * sum_{i,j,mu,nu} B[i mu, j nu] * Cov(sigma_i^mu, sigma_j^nu),
///   B[i mu, j nu] = sum_w lambda[w][i][mu] lambda[w][j][nu] <(a_w + a_w^dag)^2>.
double rate_general(const PerModeCouplings& couplings, const PureState& state, const BathSpec& bath);

/// Same formula with caller-supplied per-mode moments <(a_w + a_w^dag)^2>,
/// e.g. those of a truncated thermal state.
double rate_general_from_moments(const PerModeCouplings& couplings, const PureState& state,
                                 std::span<const double> field_moments);

}  // namespace cooploss

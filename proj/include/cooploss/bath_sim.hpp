#pragma once

#include "cooploss/collective_operator.hpp"
#include "cooploss/decoherence_rate.hpp"
#include "cooploss/qubit_core.hpp"

#include <optional>
#include <span>
#include <vector>

namespace cooploss {

/// One harmonic mode kept in the simulation, truncated at n_max quanta.
struct SimMode {
  double omega = 1.0;
  double kappa = 0.0;
  std::size_t n_max = 1;
};

/// Qubits + truncated boson modes under
///   H = omega0 sum_l sigma_l^z
///     + sum_{l,w} (lambda_wl^x sigma_l^x + lambda_wl^y sigma_l^y + lambda_wl^z sigma_l^z)(a_w + a_w^dag)
///     + sum_w omega a_w^dag a_w,
/// with lambda_wl = coupling_l * kappa_w unless `per_mode` is given.
/// Qubits occupy the low sites, modes follow in list order.
struct SimConfig {
  CouplingSpec coupling;
  PureState initial_qubit_state;
  double omega0 = 0.0;
  std::vector<SimMode> modes{};
  std::optional<PerModeCouplings> per_mode{};
  double temperature = 0.0;
  std::vector<double> times{};
  std::size_t max_dimension = 4096;
};

/// Throws DomainError on any violated precondition (dimension cap included).
void validate(const SimConfig& cfg);

std::size_t hilbert_dimension(const SimConfig& cfg);

CMatrix build_hamiltonian(const SimConfig& cfg);

/// Truncated, renormalized Boltzmann weights p_n, n = 0..n_max.
std::vector<double> thermal_populations(const SimMode& mode, double temperature);
/// Untruncated thermal probability above n_max: exp(-(n_max+1) omega / T).
double thermal_leakage(const SimMode& mode, double temperature);
/// Product of per-mode truncated thermal states; exact vacuum at T = 0.
DensityMatrix thermal_state(std::span<const SimMode> modes, double temperature);
/// <(a + a^dag)^2> in the truncated thermal state of one mode.
double truncated_field_moment(const SimMode& mode, double temperature);

/// Eigendecomposition of H plus the thermal ensemble of initial product
/// states |psi> x |n>; evaluates the evolved state at any time.
class BathEvolution {
 public:
  explicit BathEvolution(const SimConfig& cfg);

  /// Qubit reduced state at time t.
  DensityMatrix reduced_state(double t) const;
  /// Full qubit+bath density matrix at time t (small systems only).
  CMatrix full_density(double t) const;

  const Eigen::VectorXd& energies() const { return energies_; }

 private:
  std::size_t qubit_dim_;
  std::size_t bath_dim_;
  std::size_t num_qubits_;
  Eigen::VectorXd energies_;
  CMatrix eigenvectors_;
  CMatrix components_;  // eigenbasis coefficients of each |psi> x |n>
  std::vector<double> weights_;

  CMatrix evolved_components(double t) const;
};

struct SimTrace {
  std::vector<double> times;
  std::vector<double> delta;
  std::vector<double> purity;
  std::optional<double> fitted_rate;
  double closed_form_rate = 0.0;
  double exact_rate = 0.0;
  std::vector<double> leakage;  // per mode
  bool leakage_flagged = false;  // some mode leaks more than 1e-6
};

/// Least-squares fit delta ~ r t^2 through the origin over the leading run of
/// times with delta < 0.01. Needs at least 4 such points with t > 0.
std::optional<double> fit_short_time_rate(std::span<const double> times, std::span<const double> delta);

SimTrace evolve_delta(const SimConfig& cfg);

/// 1/tau_2^2 from the first and second moments of H in the initial state:
///   2 (<H^2>_{12} + <H>_{12}^2 - <<H>_1^2>_2 - <<H>_2^2>_1).
double tau2_exact(const SimConfig& cfg);

/// Closed-form rate for the configuration: the collective formula for
/// factored couplings, the general per-mode formula otherwise (untruncated
/// thermal moments in both cases).
double closed_form_rate(const SimConfig& cfg);

/// Largest change of delta(t) over the time grid when every n_max grows by
/// `increment`.
double truncation_sensitivity(const SimConfig& cfg, std::size_t increment = 5);

}  // namespace cooploss

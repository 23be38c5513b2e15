#include "cooploss/decoherence_rate.hpp"

#include "cooploss/error.hpp"

#include <cmath>
#include <string>

namespace cooploss {

namespace {

constexpr double kClampTolerance = 1e-10;

double clamp_rate(double rate, double scale, const char* who) {
  if (rate < -kClampTolerance * std::max(1.0, scale))
    throw DomainError(std::string(who) + ": negative rate beyond roundoff");
  return std::max(rate, 0.0);
}

void require_discrete(const BathSpec& bath, const char* who) {
  if (bath.is_continuum())
    throw DomainError(std::string(who) + ": needs a discrete mode list, got a continuum grid");
}

struct PauliMoments {
  Eigen::VectorXd mean;   // <sigma_i^mu>, index 3*i + mu
  Eigen::MatrixXd cov;    // symmetrized covariance
};

PauliMoments pauli_moments(const PureState& state) {
  if (!state.all_qubits()) throw DomainError("rate: state has non-qubit sites");
  const auto n = static_cast<Eigen::Index>(state.num_sites());
  CMatrix applied(state.amplitudes().size(), 3 * n);
  constexpr PauliAxis axes[3] = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index mu = 0; mu < 3; ++mu) {
      applied.col(3 * i + mu) = apply_site_operator(state.dims(), state.amplitudes(),
                                                    static_cast<std::size_t>(i), pauli_matrix(axes[mu]));
    }
  }
  PauliMoments m;
  m.mean = (applied.adjoint() * state.amplitudes()).real();
  // Re<s|sigma sigma'|s> is the symmetrized product: delta_{mu nu} on one site.
  m.cov = (applied.adjoint() * applied).real() - m.mean * m.mean.transpose();
  return m;
}

}  // namespace

BathSpec::BathSpec(std::vector<BathMode> modes, double temperature, bool continuum)
    : modes_(std::move(modes)), temperature_(temperature), continuum_(continuum) {
  if (modes_.empty()) throw DomainError("BathSpec: empty mode list");
  if (!(temperature_ >= 0.0) || !std::isfinite(temperature_))
    throw DomainError("BathSpec: temperature must be finite and >= 0");
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (!(modes_[k].omega > 0.0) || !std::isfinite(modes_[k].omega))
      throw DomainError("BathSpec: mode frequencies must be positive");
    if (!std::isfinite(modes_[k].kappa)) throw DomainError("BathSpec: non-finite kappa");
    if (continuum_ && k > 0 && !(modes_[k].omega > modes_[k - 1].omega))
      throw DomainError("BathSpec: continuum grid must be strictly increasing");
  }
  if (continuum_ && modes_.size() < 2) throw DomainError("BathSpec: continuum grid needs >= 2 points");
}

BathSpec BathSpec::discrete(std::vector<BathMode> modes, double temperature) {
  return BathSpec(std::move(modes), temperature, false);
}

BathSpec BathSpec::continuum(std::vector<BathMode> grid, double temperature) {
  return BathSpec(std::move(grid), temperature, true);
}

PerModeCouplings::PerModeCouplings(std::size_t num_modes, std::size_t num_qubits, std::vector<double> values)
    : num_modes_(num_modes), num_qubits_(num_qubits), values_(std::move(values)) {
  if (num_modes_ == 0 || num_qubits_ == 0) throw DomainError("PerModeCouplings: empty");
  if (values_.size() != num_modes_ * num_qubits_ * 3)
    throw DomainError("PerModeCouplings: expected modes*qubits*3 values");
  bool any = false;
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("PerModeCouplings: non-finite entry");
    any = any || v != 0.0;
  }
  if (!any) throw DomainError("PerModeCouplings: all couplings are zero");
}

PerModeCouplings PerModeCouplings::factored(const CouplingSpec& coupling, std::span<const double> kappas) {
  std::vector<double> values;
  values.reserve(kappas.size() * coupling.num_qubits() * 3);
  for (double kappa : kappas) {
    for (const auto& t : coupling.per_qubit()) {
      for (double w : t) values.push_back(w * kappa);
    }
  }
  return PerModeCouplings(kappas.size(), coupling.num_qubits(), std::move(values));
}

double mean_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw DomainError("mean_occupation: omega must be positive");
  if (!(temperature >= 0.0)) throw DomainError("mean_occupation: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

double omega_squared(const BathSpec& bath) {
  const double T = bath.temperature();
  auto integrand = [T](const BathMode& m) {
    return 4.0 * m.kappa * m.kappa * (mean_occupation(m.omega, T) + 0.5);
  };
  const auto& modes = bath.modes();
  double sum = 0.0;
  if (!bath.is_continuum()) {
    for (const auto& m : modes) sum += integrand(m);
    return sum;
  }
  for (std::size_t k = 1; k < modes.size(); ++k) {
    sum += 0.5 * (modes[k].omega - modes[k - 1].omega) * (integrand(modes[k]) + integrand(modes[k - 1]));
  }
  return sum;
}

std::vector<double> field_second_moments(const BathSpec& bath) {
  require_discrete(bath, "field_second_moments");
  std::vector<double> out;
  for (const auto& m : bath.modes()) out.push_back(2.0 * mean_occupation(m.omega, bath.temperature()) + 1.0);
  return out;
}

double rate_collective(const CouplingSpec& coupling, const PureState& state, const BathSpec& bath) {
  return omega_squared(bath) * variance_A(coupling, state);
}

double rate_independent(const CouplingSpec& coupling, const PureState& state, const BathSpec& bath) {
  if (coupling.num_qubits() != state.num_sites())
    throw DomainError("rate_independent: coupling and state cover different qubit counts");
  const PauliMoments m = pauli_moments(state);
  double sum = 0.0;
  double scale = 0.0;
  for (std::size_t l = 0; l < coupling.num_qubits(); ++l) {
    const auto& t = coupling.per_qubit()[l];
    const double a2 = t[0] * t[0] + t[1] * t[1] + t[2] * t[2];  // A_l^2 = a^2 I
    const auto base = static_cast<Eigen::Index>(3 * l);
    const double mean = t[0] * m.mean(base) + t[1] * m.mean(base + 1) + t[2] * m.mean(base + 2);
    sum += a2 - mean * mean;
    scale += a2;
  }
  const double omega2 = omega_squared(bath);
  return clamp_rate(omega2 * sum, omega2 * scale, "rate_independent");
}

double rate_general_from_moments(const PerModeCouplings& couplings, const PureState& state,
                                 std::span<const double> field_moments) {
  if (couplings.num_qubits() != state.num_sites())
    throw DomainError("rate_general: couplings cover a different number of qubits than the state");
  if (couplings.num_modes() != field_moments.size())
    throw DomainError("rate_general: couplings cover a different number of modes than the bath");
  const auto n = static_cast<Eigen::Index>(couplings.num_qubits());

  // Cross-mode correlators vanish for a product thermal bath.
  Eigen::MatrixXd bath_corr = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  Eigen::VectorXd lambda(3 * n);
  for (std::size_t w = 0; w < couplings.num_modes(); ++w) {
    for (Eigen::Index k = 0; k < 3 * n; ++k) lambda(k) = couplings(w, static_cast<std::size_t>(k / 3), static_cast<std::size_t>(k % 3));
    bath_corr += field_moments[w] * lambda * lambda.transpose();
  }
  const PauliMoments m = pauli_moments(state);
  const double rate = 2.0 * bath_corr.cwiseProduct(m.cov).sum();
  return clamp_rate(rate, 2.0 * bath_corr.cwiseAbs().sum(), "rate_general");
}

double rate_general(const PerModeCouplings& couplings, const PureState& state, const BathSpec& bath) {
  const auto moments = field_second_moments(bath);
  return rate_general_from_moments(couplings, state, moments);
}

}  // namespace cooploss

#include "cooploss/bath_sim.hpp"

#include "cooploss/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace cooploss {

namespace {

constexpr double kLeakageFlag = 1e-6;
constexpr double kFitWindow = 0.01;
constexpr std::size_t kMinFitPoints = 4;

std::size_t bath_dimension(std::span<const SimMode> modes) {
  std::size_t d = 1;
  for (const auto& m : modes) d *= m.n_max + 1;
  return d;
}

// lambda[w][l][mu] for the configuration, including all-zero tables.
std::vector<double> coupling_table(const SimConfig& cfg) {
  const std::size_t L = cfg.coupling.num_qubits();
  std::vector<double> table(cfg.modes.size() * L * 3, 0.0);
  for (std::size_t w = 0; w < cfg.modes.size(); ++w) {
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t mu = 0; mu < 3; ++mu) {
        table[(w * L + l) * 3 + mu] =
            cfg.per_mode ? (*cfg.per_mode)(w, l, mu) : cfg.coupling.per_qubit()[l][mu] * cfg.modes[w].kappa;
      }
    }
  }
  return table;
}

// Joint thermal weight of every bath basis state (mode 0 fastest).
std::vector<double> bath_weights(std::span<const SimMode> modes, double temperature) {
  std::vector<double> weights{1.0};
  for (const auto& m : modes) {
    const auto p = thermal_populations(m, temperature);
    std::vector<double> next;
    next.reserve(weights.size() * p.size());
    for (double pn : p) {
      for (double w : weights) next.push_back(w * pn);
    }
    weights = std::move(next);
  }
  return weights;
}

SimConfig with_extra_levels(const SimConfig& cfg, std::size_t increment) {
  SimConfig bigger = cfg;
  for (auto& m : bigger.modes) m.n_max += increment;
  bigger.max_dimension = std::max(cfg.max_dimension, hilbert_dimension(bigger));
  return bigger;
}

}  // namespace

std::size_t hilbert_dimension(const SimConfig& cfg) {
  return (std::size_t{1} << cfg.initial_qubit_state.num_sites()) * bath_dimension(cfg.modes);
}

void validate(const SimConfig& cfg) {
  const PureState& psi = cfg.initial_qubit_state;
  if (!psi.all_qubits()) throw DomainError("SimConfig: initial state must be a qubit state");
  if (cfg.coupling.num_qubits() != psi.num_sites())
    throw DomainError("SimConfig: coupling covers " + std::to_string(cfg.coupling.num_qubits()) +
                      " qubits, initial state has " + std::to_string(psi.num_sites()));
  if (!std::isfinite(cfg.omega0)) throw DomainError("SimConfig: omega0 must be finite");
  if (!(cfg.temperature >= 0.0) || !std::isfinite(cfg.temperature))
    throw DomainError("SimConfig: temperature must be finite and >= 0");
  for (const auto& m : cfg.modes) {
    if (!(m.omega > 0.0) || !std::isfinite(m.omega)) throw DomainError("SimConfig: mode omega must be positive");
    if (!std::isfinite(m.kappa)) throw DomainError("SimConfig: mode kappa must be finite");
    if (m.n_max < 1) throw DomainError("SimConfig: n_max must be >= 1");
  }
  if (cfg.per_mode) {
    if (cfg.per_mode->num_modes() != cfg.modes.size() || cfg.per_mode->num_qubits() != psi.num_sites())
      throw DomainError("SimConfig: per-mode couplings do not match modes x qubits");
  }
  if (psi.num_sites() > 20) throw DomainError("SimConfig: too many qubits");
  double bath_dim = 1.0;
  for (const auto& m : cfg.modes) bath_dim *= static_cast<double>(m.n_max + 1);
  if (std::ldexp(bath_dim, static_cast<int>(psi.num_sites())) > static_cast<double>(cfg.max_dimension))
    throw DomainError("SimConfig: Hilbert dimension exceeds the cap of " + std::to_string(cfg.max_dimension));
  for (std::size_t k = 0; k < cfg.times.size(); ++k) {
    if (!std::isfinite(cfg.times[k])) throw DomainError("SimConfig: non-finite time");
    if (k == 0 && cfg.times[k] < 0.0) throw DomainError("SimConfig: times must start at >= 0");
    if (k > 0 && !(cfg.times[k] > cfg.times[k - 1])) throw DomainError("SimConfig: times must be strictly increasing");
  }
}

CMatrix build_hamiltonian(const SimConfig& cfg) {
  validate(cfg);
  const std::size_t L = cfg.initial_qubit_state.num_sites();
  const std::size_t Q = std::size_t{1} << L;
  const std::size_t B = bath_dimension(cfg.modes);
  const std::size_t D = Q * B;
  const auto table = coupling_table(cfg);

  std::vector<std::size_t> mode_stride(cfg.modes.size());
  for (std::size_t w = 0, s = 1; w < cfg.modes.size(); ++w) {
    mode_stride[w] = s;
    s *= cfg.modes[w].n_max + 1;
  }
  std::vector<Eigen::Matrix2cd> local_ops(cfg.modes.size() * L);
  for (std::size_t w = 0; w < cfg.modes.size(); ++w) {
    for (std::size_t l = 0; l < L; ++l) {
      const double* lam = &table[(w * L + l) * 3];
      local_ops[w * L + l] = local_operator({lam[0], lam[1], lam[2]});
    }
  }

  CMatrix H = CMatrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t q = 0; q < Q; ++q) {
      const std::size_t col = q + Q * b;
      double diag = 0.0;
      for (std::size_t l = 0; l < L; ++l) diag += cfg.omega0 * label_of_bit(static_cast<int>((q >> l) & 1));
      for (std::size_t w = 0; w < cfg.modes.size(); ++w) {
        const std::size_t n = (b / mode_stride[w]) % (cfg.modes[w].n_max + 1);
        diag += cfg.modes[w].omega * static_cast<double>(n);
      }
      H(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) += diag;

      for (std::size_t w = 0; w < cfg.modes.size(); ++w) {
        const std::size_t n = (b / mode_stride[w]) % (cfg.modes[w].n_max + 1);
        for (int step : {-1, +1}) {
          if (step < 0 && n == 0) continue;
          if (step > 0 && n == cfg.modes[w].n_max) continue;
          const std::size_t n_new = step > 0 ? n + 1 : n - 1;
          const double field = std::sqrt(static_cast<double>(std::max(n, n_new)));
          const std::size_t b_new = b + n_new * mode_stride[w] - n * mode_stride[w];
          for (std::size_t l = 0; l < L; ++l) {
            const auto& op = local_ops[w * L + l];
            const std::size_t bit = (q >> l) & 1;
            for (std::size_t bit_new = 0; bit_new < 2; ++bit_new) {
              const Complex elem = op(static_cast<Eigen::Index>(bit_new), static_cast<Eigen::Index>(bit));
              if (elem == Complex(0.0)) continue;
              const std::size_t q_new = (q & ~(std::size_t{1} << l)) | (bit_new << l);
              H(static_cast<Eigen::Index>(q_new + Q * b_new), static_cast<Eigen::Index>(col)) += elem * field;
            }
          }
        }
      }
    }
  }
  return H;
}

std::vector<double> thermal_populations(const SimMode& mode, double temperature) {
  if (!(temperature >= 0.0)) throw DomainError("thermal_populations: temperature must be >= 0");
  std::vector<double> p(mode.n_max + 1, 0.0);
  if (temperature == 0.0) {
    p[0] = 1.0;
    return p;
  }
  const double ratio = std::exp(-mode.omega / temperature);
  double weight = 1.0;
  double sum = 0.0;
  for (auto& pn : p) {
    pn = weight;
    sum += weight;
    weight *= ratio;
  }
  for (auto& pn : p) pn /= sum;
  return p;
}

double thermal_leakage(const SimMode& mode, double temperature) {
  if (temperature == 0.0) return 0.0;
  return std::exp(-static_cast<double>(mode.n_max + 1) * mode.omega / temperature);
}

DensityMatrix thermal_state(std::span<const SimMode> modes, double temperature) {
  const auto weights = bath_weights(modes, temperature);
  std::vector<std::size_t> dims;
  for (const auto& m : modes) dims.push_back(m.n_max + 1);
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(weights.size()), static_cast<Eigen::Index>(weights.size()));
  for (std::size_t k = 0; k < weights.size(); ++k) rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = weights[k];
  return DensityMatrix(std::move(dims), std::move(rho));
}

double truncated_field_moment(const SimMode& mode, double temperature) {
  const auto p = thermal_populations(mode, temperature);
  double m = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) m += p[n] * static_cast<double>(2 * n + 1);
  // a a^dag annihilates the top level of the truncated space.
  return m - p.back() * static_cast<double>(mode.n_max + 1);
}

BathEvolution::BathEvolution(const SimConfig& cfg)
    : qubit_dim_(std::size_t{1} << cfg.initial_qubit_state.num_sites()),
      bath_dim_(bath_dimension(cfg.modes)),
      num_qubits_(cfg.initial_qubit_state.num_sites()) {
  const CMatrix H = build_hamiltonian(cfg);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(H);
  if (solver.info() != Eigen::Success) throw DomainError("BathEvolution: eigendecomposition failed");
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();

  const auto all_weights = bath_weights(cfg.modes, cfg.temperature);
  const auto Q = static_cast<Eigen::Index>(qubit_dim_);
  std::vector<Eigen::Index> kept;
  for (std::size_t b = 0; b < all_weights.size(); ++b) {
    if (all_weights[b] > 0.0) {
      kept.push_back(static_cast<Eigen::Index>(b));
      weights_.push_back(all_weights[b]);
    }
  }
  components_.resize(eigenvectors_.cols(), static_cast<Eigen::Index>(kept.size()));
  const CVector& psi = cfg.initial_qubit_state.amplitudes();
  for (std::size_t k = 0; k < kept.size(); ++k) {
    components_.col(static_cast<Eigen::Index>(k)) = eigenvectors_.middleRows(Q * kept[k], Q).adjoint() * psi;
  }
}

CMatrix BathEvolution::evolved_components(double t) const {
  const CVector phases = (energies_.cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return eigenvectors_ * (phases.asDiagonal() * components_);
}

DensityMatrix BathEvolution::reduced_state(double t) const {
  const CMatrix evolved = evolved_components(t);
  const auto Q = static_cast<Eigen::Index>(qubit_dim_);
  const auto B = static_cast<Eigen::Index>(bath_dim_);
  CMatrix rho = CMatrix::Zero(Q, Q);
  for (Eigen::Index k = 0; k < evolved.cols(); ++k) {
    const Eigen::Map<const CMatrix> block(evolved.col(k).data(), Q, B);
    rho.noalias() += weights_[static_cast<std::size_t>(k)] * (block * block.adjoint());
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::vector<std::size_t>(num_qubits_, 2), std::move(rho));
}

CMatrix BathEvolution::full_density(double t) const {
  const CMatrix evolved = evolved_components(t);
  CMatrix rho = CMatrix::Zero(evolved.rows(), evolved.rows());
  for (Eigen::Index k = 0; k < evolved.cols(); ++k) {
    rho.noalias() += weights_[static_cast<std::size_t>(k)] * (evolved.col(k) * evolved.col(k).adjoint());
  }
  return rho;
}

std::optional<double> fit_short_time_rate(std::span<const double> times, std::span<const double> delta) {
  if (times.size() != delta.size()) throw DomainError("fit_short_time_rate: length mismatch");
  double num = 0.0;
  double den = 0.0;
  std::size_t points = 0;
  for (std::size_t k = 0; k < times.size() && delta[k] < kFitWindow; ++k) {
    if (times[k] <= 0.0) continue;
    const double t2 = times[k] * times[k];
    num += delta[k] * t2;
    den += t2 * t2;
    ++points;
  }
  if (points < kMinFitPoints) return std::nullopt;
  return num / den;
}

SimTrace evolve_delta(const SimConfig& cfg) {
  validate(cfg);
  if (cfg.times.empty()) throw DomainError("evolve_delta: empty time list");
  const BathEvolution evolution(cfg);
  SimTrace trace;
  trace.times = cfg.times;
  for (double t : cfg.times) {
    const DensityMatrix rho = evolution.reduced_state(t);
    trace.delta.push_back(idempotency_defect(rho));
    trace.purity.push_back(purity(rho));
  }
  trace.fitted_rate = fit_short_time_rate(trace.times, trace.delta);
  trace.closed_form_rate = closed_form_rate(cfg);
  trace.exact_rate = tau2_exact(cfg);
  for (const auto& m : cfg.modes) {
    trace.leakage.push_back(thermal_leakage(m, cfg.temperature));
    trace.leakage_flagged = trace.leakage_flagged || trace.leakage.back() > kLeakageFlag;
  }
  return trace;
}

double tau2_exact(const SimConfig& cfg) {
  const CMatrix H = build_hamiltonian(cfg);
  const CVector& psi = cfg.initial_qubit_state.amplitudes();
  const auto Q = static_cast<Eigen::Index>(psi.size());
  const auto B = static_cast<Eigen::Index>(bath_dimension(cfg.modes));
  const auto p = bath_weights(cfg.modes, cfg.temperature);

  double h_sq = 0.0;           // <H^2>_{12}
  double h_mean = 0.0;         // <H>_{12}
  double bath_op_sq = 0.0;     // <<H>_1^2>_2
  CMatrix qubit_op = CMatrix::Zero(Q, Q);  // <H>_2
  for (Eigen::Index b = 0; b < B; ++b) {
    const double pb = p[static_cast<std::size_t>(b)];
    if (pb == 0.0) continue;
    const CVector hv = H.middleCols(Q * b, Q) * psi;  // H |psi, b>
    h_sq += pb * hv.squaredNorm();
    for (Eigen::Index b2 = 0; b2 < B; ++b2) {
      const Complex g = psi.dot(hv.segment(Q * b2, Q));  // <psi,b2|H|psi,b>
      bath_op_sq += pb * std::norm(g);
      if (b2 == b) h_mean += pb * g.real();
    }
    qubit_op += pb * H.block(Q * b, Q * b, Q, Q);
  }
  const double qubit_op_sq = (qubit_op * psi).squaredNorm();  // <<H>_2^2>_1
  const double rate = 2.0 * (h_sq + h_mean * h_mean - bath_op_sq - qubit_op_sq);
  if (rate < -1e-10 * std::max(1.0, h_sq)) throw DomainError("tau2_exact: negative rate beyond roundoff");
  return std::max(rate, 0.0);
}

double closed_form_rate(const SimConfig& cfg) {
  validate(cfg);
  if (cfg.modes.empty()) return 0.0;
  std::vector<BathMode> modes;
  for (const auto& m : cfg.modes) modes.push_back({m.omega, m.kappa});
  const BathSpec bath = BathSpec::discrete(std::move(modes), cfg.temperature);
  if (cfg.per_mode) return rate_general(*cfg.per_mode, cfg.initial_qubit_state, bath);
  return rate_collective(cfg.coupling, cfg.initial_qubit_state, bath);
}

double truncation_sensitivity(const SimConfig& cfg, std::size_t increment) {
  validate(cfg);
  if (cfg.times.empty()) throw DomainError("truncation_sensitivity: empty time list");
  const BathEvolution base(cfg);
  const BathEvolution bigger(with_extra_levels(cfg, increment));
  double worst = 0.0;
  for (double t : cfg.times) {
    worst = std::max(worst, std::abs(idempotency_defect(base.reduced_state(t)) -
                                     idempotency_defect(bigger.reduced_state(t))));
  }
  return worst;
}

}  // namespace cooploss

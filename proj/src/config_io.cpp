#include "cooploss/config_io.hpp"

#include "cooploss/error.hpp"

#include <cstdio>

namespace cooploss::io {

namespace {

const Json& member(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const char* what) {
  if (!j.is_number_unsigned()) throw ParseError(std::string(what) + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
  return j;
}

CouplingTriple triple(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("coupling: expected a triple [x, y, z]");
  return {number(j[0], "coupling"), number(j[1], "coupling"), number(j[2], "coupling")};
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

PureState parse_state(const Json& j) {
  array(j, "state");
  if (j.size() % 2 != 0) throw ParseError("state: interleaved re/im list must have even length");
  CVector amps(static_cast<Eigen::Index>(j.size() / 2));
  for (std::size_t k = 0; k < j.size() / 2; ++k) {
    amps(static_cast<Eigen::Index>(k)) = Complex(number(j[2 * k], "state"), number(j[2 * k + 1], "state"));
  }
  return PureState::qubits(std::move(amps));
}

Json state_to_json(const PureState& state) {
  Json out = Json::array();
  for (const Complex& c : state.amplitudes()) {
    out.push_back(c.real());
    out.push_back(c.imag());
  }
  return out;
}

CouplingSpec parse_coupling(const Json& j, std::size_t num_qubits) {
  array(j, "coupling");
  if (!j.empty() && j[0].is_number()) return CouplingSpec::uniform(triple(j), num_qubits);
  std::vector<CouplingTriple> per_qubit;
  for (const auto& t : j) per_qubit.push_back(triple(t));
  if (per_qubit.size() != num_qubits)
    throw DomainError("coupling: " + std::to_string(per_qubit.size()) + " triples for " +
                      std::to_string(num_qubits) + " qubits");
  return CouplingSpec(std::move(per_qubit));
}

BathSpec parse_bath(const Json& j) {
  const double T = number(member(j, "temperature"), "temperature");
  std::vector<BathMode> modes;
  if (j.contains("continuum")) {
    for (const auto& p : array(j["continuum"], "continuum")) {
      if (!p.is_array() || p.size() != 2) throw ParseError("continuum: expected [omega, kappa] pairs");
      modes.push_back({number(p[0], "omega"), number(p[1], "kappa")});
    }
    return BathSpec::continuum(std::move(modes), T);
  }
  for (const auto& m : array(member(j, "modes"), "modes")) {
    // kappa is unused by per-mode (general) couplings
    const double kappa = m.contains("kappa") ? number(m["kappa"], "kappa") : 1.0;
    modes.push_back({number(member(m, "omega"), "omega"), kappa});
  }
  return BathSpec::discrete(std::move(modes), T);
}

PerModeCouplings parse_per_mode(const Json& j, std::size_t num_modes, std::size_t num_qubits) {
  array(j, "per_mode_coupling");
  if (j.size() != num_modes) throw DomainError("per_mode_coupling: one entry per mode required");
  std::vector<double> values;
  for (const auto& mode : j) {
    if (!mode.is_array() || mode.size() != num_qubits)
      throw DomainError("per_mode_coupling: one triple per qubit required");
    for (const auto& t : mode) {
      const auto tr = triple(t);
      values.insert(values.end(), tr.begin(), tr.end());
    }
  }
  return PerModeCouplings(num_modes, num_qubits, std::move(values));
}

SimConfig parse_sim_config(const Json& j) {
  PureState psi = parse_state(member(j, "initial_state"));
  const std::size_t L = psi.num_sites();
  CouplingSpec coupling = parse_coupling(member(j, "coupling"), L);
  std::vector<SimMode> modes;
  for (const auto& m : array(member(j, "modes"), "modes")) {
    modes.push_back({number(member(m, "omega"), "omega"), number(member(m, "kappa"), "kappa"),
                     count(member(m, "n_max"), "n_max")});
  }
  std::vector<double> times;
  for (const auto& t : array(member(j, "times"), "times")) times.push_back(number(t, "times"));

  SimConfig cfg{.coupling = std::move(coupling), .initial_qubit_state = std::move(psi)};
  cfg.omega0 = number(member(j, "omega0"), "omega0");
  cfg.temperature = number(member(j, "temperature"), "temperature");
  cfg.modes = std::move(modes);
  cfg.times = std::move(times);
  if (j.contains("per_mode_coupling")) cfg.per_mode = parse_per_mode(j["per_mode_coupling"], cfg.modes.size(), L);
  if (j.contains("max_dimension")) cfg.max_dimension = count(j["max_dimension"], "max_dimension");
  validate(cfg);
  return cfg;
}

std::string trace_csv(const SimTrace& trace) {
  std::string out = "t,delta,purity\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    out += format_real(trace.times[k]) + ',' + format_real(trace.delta[k]) + ',' + format_real(trace.purity[k]) + '\n';
  }
  return out;
}

Json trace_summary(const SimTrace& trace) {
  Json out;
  out["fitted_rate"] = trace.fitted_rate ? Json(*trace.fitted_rate) : Json(nullptr);
  out["closed_form_rate"] = trace.closed_form_rate;
  out["exact_rate"] = trace.exact_rate;
  out["leakage"] = trace.leakage;
  out["leakage_flagged"] = trace.leakage_flagged;
  out["schema"] = 1;
  return out;
}

}  // namespace cooploss::io

#pragma once

#include "cooploss/bath_sim.hpp"
#include "cooploss/collective_operator.hpp"
#include "cooploss/decoherence_rate.hpp"
#include "cooploss/qubit_core.hpp"

#include <json.hpp>

#include <string>

// JSON schemas shared by the CLI subcommands. All parse failures (syntax,
// missing keys, wrong types) throw ParseError; invariant violations of the
// decoded values throw DomainError.
//
//   state            [re0, im0, re1, im1, ...]   qubit amplitudes, site 0 fastest
//   coupling         [x, y, z]                   same triple on every qubit
//                  | [[x, y, z], ...]            one triple per qubit
//   bath             {"temperature": T, "modes": [{"omega": w, "kappa": k}, ...]}
//                  | {"temperature": T, "continuum": [[w, k], ...]}
//   per_mode_coupling  [[[x, y, z] per qubit] per mode]
//   simulate config  {"omega0", "coupling", "modes": [{"omega", "kappa", "n_max"}],
//                     "temperature", "times", "initial_state",
//                     optional "per_mode_coupling", "max_dimension"}

namespace cooploss::io {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text);

PureState parse_state(const Json& j);
Json state_to_json(const PureState& state);

CouplingSpec parse_coupling(const Json& j, std::size_t num_qubits);
BathSpec parse_bath(const Json& j);
PerModeCouplings parse_per_mode(const Json& j, std::size_t num_modes, std::size_t num_qubits);
SimConfig parse_sim_config(const Json& j);

/// `t,delta,purity` with a header row, `\n` line endings, 17 significant digits.
std::string trace_csv(const SimTrace& trace);
Json trace_summary(const SimTrace& trace);

}  // namespace cooploss::io

#include "cooploss/cli.hpp"

#include "cooploss/bath_sim.hpp"
#include "cooploss/coherence_codec.hpp"
#include "cooploss/collective_operator.hpp"
#include "cooploss/config_io.hpp"
#include "cooploss/decoherence_rate.hpp"
#include "cooploss/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cooploss::cli {

namespace {

using io::Json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + path + "'");
  file << text;
  if (!file) throw IoError("failed writing '" + path + "'");
}

void emit(const Json& j, const std::string& path, std::ostream& out) { write_text(path, j.dump() + "\n", out); }

void error_line(std::ostream& err, const char* kind, const std::string& message) {
  Json e;
  e["error"] = kind;
  e["message"] = message;
  err << e.dump() << "\n";
}


Json run_rate(const std::string& kind, const Json& cfg) {
  const PureState psi = io::parse_state(cfg.at("state"));
  const BathSpec bath = io::parse_bath(cfg.at("bath"));
  Json out;
  out["kind"] = kind;
  if (kind == "general") {
    if (bath.is_continuum()) throw DomainError("rate general: needs a discrete mode list");
    const auto pm = io::parse_per_mode(cfg.at("per_mode_coupling"), bath.modes().size(), psi.num_sites());
    out["rate"] = rate_general(pm, psi, bath);
  } else {
    const CouplingSpec coupling = io::parse_coupling(cfg.at("coupling"), psi.num_sites());
    out["rate"] = kind == "collective" ? rate_collective(coupling, psi, bath)
                                       : rate_independent(coupling, psi, bath);
    out["omega_squared"] = omega_squared(bath);
  }
  out["schema"] = 1;
  return out;
}

Json run_spectrum(std::size_t L) {
  const EigenspaceTable table = eigenspace_dims(L);
  Json out;
  out["0"] = table.entries.at(0);
  for (int m = 2; m <= static_cast<int>(table.num_qubits); m += 2) {
    out[std::to_string(m)] = table.entries.at(m);
    out[std::to_string(-m)] = table.entries.at(-m);
  }
  out["total"] = table.total();
  out["num_qubits"] = table.num_qubits;
  out["schema"] = 1;
  return out;
}

Json run_efficiency(std::size_t L) {
  const EfficiencyReport r = efficiency_max(L);
  Json out;
  out["eta"] = r.eta;
  out["asymptote"] = r.asymptote;
  out["L"] = r.L;
  out["cost_qubits"] = {{"pi_L_over_2", r.cost_pi_L_over_2}, {"pi_over_2L", r.cost_pi_over_2L}};
  out["schema"] = 1;
  return out;
}

Json coupling_json(const CouplingSpec& c) {
  const auto& t = c.common_triple();
  return Json::array({t[0], t[1], t[2]});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cooperative decoherence rates, coherence-preserving codec and qubit+bath simulation", "cooploss"};
  app.require_subcommand(1);

  std::string config_path, out_path, circuit_path, csv_path, rate_kind;
  std::size_t L = 0;

  auto* rate = app.add_subcommand("rate", "Short-time decoherence rate 1/tau_2^2");
  rate->add_option("kind", rate_kind, "collective | independent | general")
      ->required()
      ->check(CLI::IsMember({"collective", "independent", "general"}));
  rate->add_option("--config", config_path, "JSON with state, bath and coupling")->required();
  rate->add_option("--out", out_path, "output JSON (default stdout)");

  auto* spectrum = app.add_subcommand("spectrum", "Sector dimensions of A on 2L qubits");
  spectrum->add_option("--L", L, "logical qubit count")->required();
  spectrum->add_option("--out", out_path, "output JSON (default stdout)");

  auto* enc = app.add_subcommand("encode", "Encode an L-qubit state into 2L qubits");
  enc->add_option("--config", config_path, "JSON with state and coupling")->required();
  enc->add_option("--out", out_path, "output JSON (default stdout)");
  enc->add_option("--circuit", circuit_path, "also write the encoding circuit");

  auto* dec = app.add_subcommand("decode", "Decode a 2L-qubit codeword");
  dec->add_option("--config", config_path, "JSON with state and coupling")->required();
  dec->add_option("--out", out_path, "output JSON (default stdout)");

  auto* eff = app.add_subcommand("efficiency", "Maximum encoding efficiency");
  eff->add_option("--L", L, "logical qubit count")->required();
  eff->add_option("--out", out_path, "output JSON (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Exact qubits + truncated bath evolution");
  sim->add_option("--config", config_path, "simulation JSON")->required();
  sim->add_option("--csv", csv_path, "trace CSV (t,delta,purity)")->required();
  sim->add_option("--out", out_path, "summary JSON (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*spectrum) {
      emit(run_spectrum(L), out_path, out);
    } else if (*eff) {
      emit(run_efficiency(L), out_path, out);
    } else {
      const Json cfg = io::parse_json(read_file(config_path));
      if (*rate) {
        emit(run_rate(rate_kind, cfg), out_path, out);
      } else if (*enc) {
        const PureState psi = io::parse_state(cfg.at("state"));
        const CouplingSpec coupling = io::parse_coupling(cfg.at("coupling"), psi.num_sites());
        const PureState encoded = encode(psi, coupling);
        const Circuit circuit = codec_circuit(psi.num_sites(), local_eigensystem(coupling.common_triple()));
        Json result;
        result["coupling"] = coupling_json(coupling);
        result["num_qubits"] = encoded.num_sites();
        result["cnot_count"] = circuit.cnot_count();
        result["state"] = io::state_to_json(encoded);
        result["schema"] = 1;
        if (!circuit_path.empty()) write_text(circuit_path, serialize_circuit(circuit), out);
        emit(result, out_path, out);
      } else if (*dec) {
        const PureState psi = io::parse_state(cfg.at("state"));
        const CouplingSpec coupling = io::parse_coupling(cfg.at("coupling"), psi.num_sites());
        const PureState decoded = decode(psi, coupling);
        Json result;
        result["coupling"] = coupling_json(coupling);
        result["num_qubits"] = decoded.num_sites();
        result["state"] = io::state_to_json(decoded);
        result["schema"] = 1;
        emit(result, out_path, out);
      } else if (*sim) {
        const SimTrace trace = evolve_delta(io::parse_sim_config(cfg));
        write_text(csv_path, io::trace_csv(trace), out);
        emit(io::trace_summary(trace), out_path, out);
      }
    }
  } catch (const ParseError& e) {
    error_line(err, "parse", e.what());
    return 1;
  } catch (const nlohmann::json::exception& e) {
    error_line(err, "parse", e.what());
    return 1;
  } catch (const DomainError& e) {
    error_line(err, "domain", e.what());
    return 1;
  } catch (const IoError& e) {
    error_line(err, "io", e.what());
    return 1;
  }
  return 0;
}

}  // namespace cooploss::cli

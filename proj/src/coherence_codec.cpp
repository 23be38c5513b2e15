#include "cooploss/coherence_codec.hpp"

#include "cooploss/error.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>

namespace cooploss {

namespace {

constexpr double kUnitaryTolerance = 1e-12;
constexpr double kCodewordTolerance = 1e-10;

bool is_identity(const Eigen::Matrix2cd& m) {
  return (m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= 1e-15;
}

// Flip the target bit wherever the control bit is 0.
CVector apply_pm_cnot_bits(const CVector& v, std::size_t control, std::size_t target) {
  CVector out = v;
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t tmask = std::size_t{1} << target;
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(v.size()); ++idx) {
    if ((idx & cmask) == 0) out(static_cast<Eigen::Index>(idx ^ tmask)) = v(static_cast<Eigen::Index>(idx));
  }
  return out;
}

void check_pair(std::size_t n, std::size_t control, std::size_t target) {
  if (control == target) throw DomainError("PMCNOT: control equals target");
  if (control >= n || target >= n) throw DomainError("PMCNOT: qubit index out of range");
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Interleaved position of every site of (data..., ancillas...).
std::vector<std::size_t> interleave_order(std::size_t L) {
  std::vector<std::size_t> order(2 * L);  // new site k <- old site order[k]
  for (std::size_t l = 0; l < L; ++l) {
    order[CodecLayout::data(l)] = l;
    order[CodecLayout::ancilla(l)] = L + l;
  }
  return order;
}

std::vector<std::size_t> deinterleave_order(std::size_t L) {
  std::vector<std::size_t> order(2 * L);
  for (std::size_t l = 0; l < L; ++l) {
    order[l] = CodecLayout::data(l);
    order[L + l] = CodecLayout::ancilla(l);
  }
  return order;
}

}  // namespace

Circuit::Circuit(std::size_t num_qubits, std::vector<Gate> gates) : num_qubits_(num_qubits) {
  if (num_qubits_ == 0) throw DomainError("Circuit: no qubits");
  if (num_qubits_ > 30) throw DomainError("Circuit: too many qubits for a dense state");
  for (auto& g : gates) append(std::move(g));
}

std::size_t Circuit::cnot_count() const {
  std::size_t n = 0;
  for (const auto& g : gates_) n += std::holds_alternative<PmCnot>(g) ? 1 : 0;
  return n;
}

void Circuit::append(Gate gate) {
  if (const auto* c = std::get_if<PmCnot>(&gate)) {
    check_pair(num_qubits_, c->control, c->target);
  } else {
    const auto& r = std::get<LocalRotation>(gate);
    if (r.site >= num_qubits_) throw DomainError("ROT: site out of range");
    const Eigen::Matrix2cd prod = r.unitary.adjoint() * r.unitary;
    if ((prod - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > kUnitaryTolerance)
      throw DomainError("ROT: matrix is not unitary");
  }
  gates_.push_back(std::move(gate));
}

PureState Circuit::apply(const PureState& state) const {
  if (!state.all_qubits() || state.num_sites() != num_qubits_)
    throw DomainError("Circuit::apply: state does not match the circuit's qubit count");
  CVector v = state.amplitudes();
  for (const auto& g : gates_) {
    if (const auto* c = std::get_if<PmCnot>(&g)) {
      v = apply_pm_cnot_bits(v, c->control, c->target);
    } else {
      const auto& r = std::get<LocalRotation>(g);
      v = apply_site_operator(state.dims(), v, r.site, r.unitary);
    }
  }
  return PureState::normalized(state.dims(), std::move(v));
}

std::string serialize_circuit(const Circuit& circuit) {
  std::ostringstream out;
  out << "QUBITS " << circuit.num_qubits() << '\n';
  for (const auto& g : circuit.gates()) {
    if (const auto* c = std::get_if<PmCnot>(&g)) {
      out << "PMCNOT " << c->control << ' ' << c->target << '\n';
      continue;
    }
    const auto& r = std::get<LocalRotation>(g);
    out << "ROT " << r.site;
    for (Eigen::Index i = 0; i < 2; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) {
        out << ' ' << format_real(r.unitary(i, j).real()) << ' ' << format_real(r.unitary(i, j).imag());
      }
    }
    out << '\n';
  }
  return out.str();
}

Circuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::optional<Circuit> circuit;
  auto fail = [&](const std::string& why) {
    throw ParseError("circuit line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;  // blank line
    if (!circuit) {
      std::size_t n = 0;
      if (keyword != "QUBITS" || !(fields >> n)) fail("expected header 'QUBITS <n>'");
      try {
        circuit.emplace(n);
      } catch (const DomainError& e) {
        fail(e.what());
      }
    } else if (keyword == "PMCNOT") {
      std::size_t c = 0, t = 0;
      if (!(fields >> c >> t)) fail("expected 'PMCNOT <control> <target>'");
      try {
        circuit->append(PmCnot{c, t});
      } catch (const DomainError& e) {
        fail(e.what());
      }
    } else if (keyword == "ROT") {
      std::size_t site = 0;
      double v[8];
      if (!(fields >> site)) fail("expected 'ROT <site> <8 reals>'");
      for (double& x : v) {
        if (!(fields >> x)) fail("expected 'ROT <site> <8 reals>'");
      }
      Eigen::Matrix2cd u;
      u << Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]), Complex(v[6], v[7]);
      try {
        circuit->append(LocalRotation{site, u});
      } catch (const DomainError& e) {
        fail(e.what());
      }
    } else {
      fail("unknown gate '" + keyword + "'");
    }
    std::string extra;
    if (fields >> extra) fail("trailing token '" + extra + "'");
  }
  if (!circuit) throw ParseError("circuit: missing 'QUBITS <n>' header");
  return *std::move(circuit);
}

PureState pm_cnot(const PureState& state, std::size_t control, std::size_t target,
                  const LocalEigensystem& basis) {
  if (!state.all_qubits()) throw DomainError("pm_cnot: state has non-qubit sites");
  check_pair(state.num_sites(), control, target);
  const Eigen::Matrix2cd w = basis.basis_change();
  CVector v = state.amplitudes();
  v = apply_site_operator(state.dims(), v, control, w.adjoint());
  v = apply_site_operator(state.dims(), v, target, w.adjoint());
  v = apply_pm_cnot_bits(v, control, target);
  v = apply_site_operator(state.dims(), v, control, w);
  v = apply_site_operator(state.dims(), v, target, w);
  return PureState::normalized(state.dims(), std::move(v));
}

PureState prepare_ancillas(std::size_t L, const LocalEigensystem& basis) {
  if (L < 1) throw DomainError("prepare_ancillas: L must be >= 1");
  const PureState one({2}, CVector(basis.plus_vec));
  PureState out = one;
  for (std::size_t l = 1; l < L; ++l) out = tensor(out, one);
  return out;
}

Circuit codec_circuit(std::size_t L, const LocalEigensystem& basis) {
  Circuit circuit(2 * L);
  const Eigen::Matrix2cd w = basis.basis_change();
  const bool rotate = !is_identity(w);
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t d = CodecLayout::data(l);
    const std::size_t a = CodecLayout::ancilla(l);
    if (rotate) {
      circuit.append(LocalRotation{d, w.adjoint()});
      circuit.append(LocalRotation{a, w.adjoint()});
    }
    circuit.append(PmCnot{d, a});
    if (rotate) {
      circuit.append(LocalRotation{d, w});
      circuit.append(LocalRotation{a, w});
    }
  }
  return circuit;
}

PureState encode(const PureState& state, const CouplingSpec& coupling) {
  if (!state.all_qubits()) throw DomainError("encode: state has non-qubit sites");
  const LocalEigensystem basis = local_eigensystem(coupling.common_triple());
  const std::size_t L = state.num_sites();
  const PureState joined = tensor(state, prepare_ancillas(L, basis));
  const auto order = interleave_order(L);
  return codec_circuit(L, basis).apply(permute_sites(joined, order));
}

PureState decode(const PureState& encoded, const CouplingSpec& coupling) {
  if (!encoded.all_qubits() || encoded.num_sites() % 2 != 0)
    throw DomainError("decode: expected an even number of qubits");
  const LocalEigensystem basis = local_eigensystem(coupling.common_triple());
  const std::size_t L = encoded.num_sites() / 2;
  const PureState undone = codec_circuit(L, basis).apply(encoded);
  const auto order = deinterleave_order(L);
  const PureState split = permute_sites(undone, order);  // data sites first

  // Contract the ancilla block with <+1|...<+1|.
  const CVector anc = prepare_ancillas(L, basis).amplitudes();
  const auto data_dim = static_cast<Eigen::Index>(std::size_t{1} << L);
  const Eigen::Map<const CMatrix> blocks(split.amplitudes().data(), data_dim, anc.size());
  const CVector data = blocks * anc.conjugate();
  const double residual = 1.0 - data.squaredNorm();
  if (residual > kCodewordTolerance)
    throw NotACodewordError("decode: ancillas not restored to |+1> (residual weight " +
                            std::to_string(residual) + ")");
  return PureState::normalized(std::vector<std::size_t>(L, 2), data);
}

double log2_central_binomial(std::size_t L) {
  if (L < 1) throw DomainError("log2_central_binomial: L must be >= 1");
  if (L <= 33) {
    __extension__ typedef unsigned __int128 wide;
    wide c = 1;
    for (std::uint64_t i = 1; i <= L; ++i) c = c * (L + i) / i;
    return std::log2(static_cast<double>(c));
  }
  const double n = static_cast<double>(L);
  return (std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0)) / std::numbers::ln2;
}

EfficiencyReport efficiency_max(std::size_t L) {
  if (L < 1) throw DomainError("efficiency_max: L must be >= 1");
  const double n = static_cast<double>(L);
  EfficiencyReport r;
  r.L = L;
  r.eta = log2_central_binomial(L) / (2.0 * n);
  r.asymptote = 1.0 - std::log2(std::numbers::pi * n) / (4.0 * n);
  r.cost_pi_L_over_2 = n + 0.5 * std::log2(std::numbers::pi * n / 2.0);
  r.cost_pi_over_2L = n + 0.5 * std::log2(std::numbers::pi / (2.0 * n));
  return r;
}

}  // namespace cooploss

#include "fredkin_lab/circuits.hpp"

#include <algorithm>
#include <numbers>
#include <set>

#include "fredkin_lab/errors.hpp"

namespace fredkin_lab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOneThird = 1.0 / 3.0;

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

void add_port(Circuit& c, const std::string& p) {
  if (!contains(c.ports, p)) c.ports.push_back(p);
}

void measure_block(Circuit& c, const std::string& label, const std::string& port, BlockAccept accept) {
  c.detectors.push_back({label, port, DetectorKind::BlockD});
  c.steps.emplace_back(MeasureStep{label});
  c.herald.blocks.push_back({label, accept});
}

void correct_if(Circuit& c, std::vector<std::string> trigger, const std::string& port, std::string group,
                bool enabled = true) {
  c.steps.emplace_back(FeedforwardStep{FeedforwardRule{std::move(trigger), port, Pauli::Z, std::move(group)}, enabled});
}

// Teleports the photon on `in` onto `out` via an EPR pair (`anc`, `out`).
// The HWP(0) on the input cancels the i*i phase the PBS puts on the |VV>
// coincidence, so the correction fires on odd parity of the two blocks.
void append_teleport_qnd(Circuit& c, const std::string& in, const std::string& anc, const std::string& out,
                         bool feedforward) {
  add_port(c, anc);
  add_port(c, out);
  c.sources.push_back({anc, out});
  c.steps.emplace_back(half_wave_plate(in, 0.0, "qnd_comp"));
  c.steps.emplace_back(polarizing_beam_splitter(in, anc, "qnd_pbs"));
  measure_block(c, "D_qnd_in", in, BlockAccept::ParityAny);
  measure_block(c, "D_qnd_anc", anc, BlockAccept::ParityAny);
  correct_if(c, {"D_qnd_in", "D_qnd_anc"}, out, "qnd", feedforward);
  if (!feedforward) c.herald.even_parity.push_back({"D_qnd_in", "D_qnd_anc"});
}

// EPR-assisted CZ: a parity check copies the control onto ancilla `b`, then a
// diagonal-basis parity check between `b` and the target writes the phase.
// With the target rail empty the gate reduces to identity on the control.
void append_heralded_cz(Circuit& c, const std::string& control, const std::string& target, const std::string& a,
                        const std::string& b, const std::string& tag) {
  add_port(c, a);
  add_port(c, b);
  c.sources.push_back({a, b});
  c.steps.emplace_back(half_wave_plate(control, 0.0, tag + "_comp_c"));
  c.steps.emplace_back(polarizing_beam_splitter(control, a, tag + "_pbs_c"));
  measure_block(c, "D_" + tag + "_a", a, BlockAccept::ParityAny);
  correct_if(c, {"D_" + tag + "_a"}, control, tag);
  c.steps.emplace_back(half_wave_plate(b, kPi / 8.0, tag + "_hwp"));
  c.steps.emplace_back(half_wave_plate(target, 0.0, tag + "_comp_t"));
  c.steps.emplace_back(polarizing_beam_splitter(b, target, tag + "_pbs_t"));
  measure_block(c, "D_" + tag + "_b", b, BlockAccept::ParityAny);
  correct_if(c, {"D_" + tag + "_b"}, target, tag);
}

// a|H>c + b|V>c -> a|H>c|V>aux + b|V>c|H>aux using the pair (enc, aux).
void append_parity_encoder(Circuit& c, const std::string& control, const std::string& enc, const std::string& aux) {
  add_port(c, enc);
  add_port(c, aux);
  c.sources.push_back({enc, aux});
  c.steps.emplace_back(half_wave_plate(control, 0.0, "enc_comp"));
  c.steps.emplace_back(polarizing_beam_splitter(control, enc, "enc_pbs"));
  measure_block(c, "D_parity", enc, BlockAccept::ParityAny);
  correct_if(c, {"D_parity"}, control, "encoder");
  c.steps.emplace_back(half_wave_plate(aux, kPi / 4.0, "enc_hwp"));
}

void check_open_unit(double t, const char* name) {
  if (!(t > 0.0 && t < 1.0)) throw ValidationError(std::string(name) + " = " + std::to_string(t) + " outside (0,1)");
}

}  // namespace

std::string to_string(GateVariant v) { return v == GateVariant::Heralded ? "heralded" : "coincidence"; }

GateVariant parse_variant(const std::string& s) {
  if (s == "heralded") return GateVariant::Heralded;
  if (s == "coincidence") return GateVariant::Coincidence;
  throw ConfigError("unknown variant '" + s + "'");
}

RegisterPtr Circuit::full_register() const { return make_register(std::span<const std::string>(ports)); }

std::vector<Element> Circuit::elements() const {
  std::vector<Element> out;
  for (const auto& s : steps) {
    if (const auto* e = std::get_if<Element>(&s)) out.push_back(*e);
  }
  return out;
}

std::vector<FeedforwardRule> Circuit::feedforward() const {
  std::vector<FeedforwardRule> out;
  for (const auto& s : steps) {
    if (const auto* f = std::get_if<FeedforwardStep>(&s)) out.push_back(f->rule);
  }
  return out;
}

void validate(const Circuit& circuit) {
  std::set<std::string> ports(circuit.ports.begin(), circuit.ports.end());
  if (ports.size() != circuit.ports.size()) throw ConfigError("duplicate port in circuit " + circuit.name);
  auto need = [&](const std::string& p, const std::string& what) {
    if (!ports.count(p)) throw PlacementError(what + " references unknown port " + p);
  };
  for (const auto& s : circuit.sources) {
    need(s.port_a, "source");
    need(s.port_b, "source");
    if (s.port_a == s.port_b) throw CompositionError("EPR source on a single port " + s.port_a);
  }
  for (const auto& p : circuit.inputs) need(p, "input");
  for (const auto& p : circuit.outputs) need(p, "output");
  if (circuit.inputs.size() != circuit.outputs.size()) throw ConfigError("inputs and outputs differ in count");

  std::set<std::string> labels;
  for (const auto& d : circuit.detectors) {
    need(d.port, "detector " + d.label);
    if (!labels.insert(d.label).second) throw ConfigError("duplicate detector label " + d.label);
    if (contains(circuit.outputs, d.port)) throw ConfigError("detector " + d.label + " sits on output " + d.port);
  }
  for (const auto& s : circuit.steps) {
    if (const auto* e = std::get_if<Element>(&s)) {
      validate(*e);
      for (const auto& p : e->ports) need(p, "element " + kind_name(e->kind));
    } else if (const auto* m = std::get_if<MeasureStep>(&s)) {
      if (!labels.count(m->detector)) throw ConfigError("measure step on unknown detector " + m->detector);
    } else if (const auto* f = std::get_if<FeedforwardStep>(&s)) {
      need(f->rule.port, "feedforward");
      for (const auto& t : f->rule.trigger) {
        if (!labels.count(t)) throw ConfigError("feedforward trigger on unknown detector " + t);
      }
    }
  }
  for (const auto& p : circuit.herald.outputs_single_photon) need(p, "herald output");
  validate_rule(circuit.herald, circuit.detectors);
}

FockState basis_input(const Circuit& circuit, std::size_t index) {
  std::vector<Complex> amps(std::size_t{1} << circuit.inputs.size());
  if (index >= amps.size()) throw DimensionError("basis index out of range");
  amps[index] = 1.0;
  return logical_input(circuit, amps);
}

FockState logical_input(const Circuit& circuit, std::span<const Complex> amplitudes) {
  return encode_qubits(circuit.inputs, amplitudes);
}

FockState prepare_input(const Circuit& circuit, const FockState& logical) {
  FockState state = logical;
  for (const auto& s : circuit.sources) state = tensor(state, make_epr_pair(s.port_a, s.port_b));
  return embed(state, circuit.full_register());
}

std::vector<HeraldBranch> simulate(const Circuit& circuit, const FockState& logical, EnumerationMode mode) {
  return run_program(prepare_input(circuit, logical), circuit.steps, circuit.detectors, circuit.herald, mode);
}

Circuit build_teleport_qnd(bool feedforward) {
  Circuit c;
  c.name = "teleport_qnd";
  c.ports = {"tap"};
  append_teleport_qnd(c, "tap", "epr_t_a", "epr_t_b", feedforward);
  c.inputs = {"tap"};
  c.outputs = {"epr_t_b"};
  return c;
}

Circuit build_heralded_cz() {
  Circuit c;
  c.name = "heralded_cz";
  c.ports = {"c", "t"};
  append_heralded_cz(c, "c", "t", "cz_a", "cz_b", "cz");
  c.inputs = {"c", "t"};
  c.outputs = {"c", "t"};
  return c;
}

Circuit build_parity_check_encoder() {
  Circuit c;
  c.name = "parity_check_encoder";
  c.ports = {"c"};
  append_parity_encoder(c, "c", "enc_a", "aux");
  c.inputs = {"c"};
  c.outputs = {"c", "aux"};
  c.herald.outputs_single_photon = {"c", "aux"};
  return c;
}

Circuit build_ppbs_cz_chain() {
  Circuit c;
  c.name = "ppbs_cz_chain";
  c.ports = {"c", "t", "dump_c", "dump_t"};
  c.steps.emplace_back(partial_polarizing_beam_splitter("c", "t", 1.0, kOneThird, "PPBS"));
  c.steps.emplace_back(partial_polarizing_beam_splitter("c", "dump_c", kOneThird, 1.0, "PPBS'_c"));
  c.steps.emplace_back(partial_polarizing_beam_splitter("t", "dump_t", kOneThird, 1.0, "PPBS'_t"));
  c.inputs = {"c", "t"};
  c.outputs = {"c", "t"};
  c.herald.outputs_single_photon = {"c", "t"};
  return c;
}

Circuit build_heralded_fredkin(double T2, double T3, bool qnd_feedforward) {
  check_open_unit(T2, "T2");
  check_open_unit(T3, "T3");
  Circuit c;
  c.name = "heralded_fredkin";
  c.ports = {"c", "mz_upper", "mz_lower", "tap"};
  c.inputs = {"c", "mz_upper", "mz_lower"};

  c.steps.emplace_back(beam_splitter("mz_upper", "mz_lower", 0.5, "BS1"));
  // One photon per arm only in the antisymmetric sector; this phase aligns it
  // with the bunched sector, which picks up i*i*i along BS1/BS2/BS3 reflections.
  c.steps.emplace_back(phase_shifter("mz_lower", kPi, "arm_phase"));
  c.steps.emplace_back(beam_splitter("mz_upper", "tap", T2, "BS2"));
  append_teleport_qnd(c, "tap", "epr_t_a", "epr_t_b", qnd_feedforward);

  append_heralded_cz(c, "c", "mz_lower", "cz1_a", "cz1_b", "cz1");
  c.steps.emplace_back(half_wave_plate("mz_lower", kPi / 4.0, "HWP3"));
  append_heralded_cz(c, "c", "mz_lower", "cz2_a", "cz2_b", "cz2");
  c.steps.emplace_back(half_wave_plate("mz_lower", kPi / 4.0, "HWP4"));

  c.steps.emplace_back(beam_splitter("mz_upper", "mz_lower", T3, "BS3"));
  c.detectors.push_back({"D_prime", "mz_upper", DetectorKind::Bare});
  c.steps.emplace_back(MeasureStep{"D_prime"});
  c.herald.vacuum.push_back("D_prime");

  c.outputs = {"c", "epr_t_b", "mz_lower"};
  return c;
}

Circuit build_coincidence_fredkin(double T2, double T3) {
  check_open_unit(T2, "T2");
  check_open_unit(T3, "T3");
  Circuit c;
  c.name = "coincidence_fredkin";
  c.ports = {"c", "mz_upper", "mz_lower", "tap", "dump_c", "dump_aux"};
  c.inputs = {"c", "mz_upper", "mz_lower"};

  append_parity_encoder(c, "c", "enc_a", "aux");

  c.steps.emplace_back(beam_splitter("mz_upper", "mz_lower", 0.5, "BS1"));
  c.steps.emplace_back(phase_shifter("mz_lower", kPi, "arm_phase"));
  c.steps.emplace_back(beam_splitter("mz_upper", "tap", T2, "BS2"));

  // Control-target CZ (phase on |VV>), then auxiliary-target CZ (phase on
  // |HH>). The target's PPBS' doubles as the coupling element of the second
  // CZ, so every photon sees exactly one 1/3 attenuation.
  c.steps.emplace_back(partial_polarizing_beam_splitter("c", "mz_lower", 1.0, kOneThird, "PPBS"));
  c.steps.emplace_back(partial_polarizing_beam_splitter("c", "dump_c", kOneThird, 1.0, "PPBS'_c"));
  c.steps.emplace_back(partial_polarizing_beam_splitter("aux", "mz_lower", kOneThird, 1.0, "PPBS'"));
  c.steps.emplace_back(partial_polarizing_beam_splitter("aux", "dump_aux", 1.0, kOneThird, "PPBS_aux"));

  // Quantum erasing of the auxiliary photon.
  measure_block(c, "D_erase", "aux", BlockAccept::ParityAny);
  correct_if(c, {"D_erase"}, "c", "erase");

  c.steps.emplace_back(beam_splitter("mz_upper", "mz_lower", T3, "BS3"));

  c.outputs = {"c", "tap", "mz_lower"};
  c.herald.outputs_single_photon = c.outputs;
  return c;
}

Circuit build_fredkin(GateVariant variant, double T2, double T3, bool qnd_feedforward) {
  return variant == GateVariant::Heralded ? build_heralded_fredkin(T2, T3, qnd_feedforward)
                                          : build_coincidence_fredkin(T2, T3);
}

}  // namespace fredkin_lab

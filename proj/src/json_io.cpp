#include "fredkin_lab/json_io.hpp"

#include "fredkin_lab/errors.hpp"

namespace fredkin_lab {

namespace {

Polarization parse_pol(const std::string& s) {
  if (s == "H") return Polarization::H;
  if (s == "V") return Polarization::V;
  throw ConfigError("polarization must be \"H\" or \"V\", got \"" + s + "\"");
}

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

std::string pauli_name(Pauli p) {
  switch (p) {
    case Pauli::I:
      return "I";
    case Pauli::Z:
      return "Z";
    case Pauli::X:
      return "X";
  }
  return "I";
}

Pauli parse_pauli(const std::string& s) {
  if (s == "I") return Pauli::I;
  if (s == "Z") return Pauli::Z;
  if (s == "X") return Pauli::X;
  throw ConfigError("unknown Pauli \"" + s + "\"");
}

}  // namespace

Json to_json(const FockState& state) {
  Json j;
  j["modes"] = Json::array();
  for (const auto& m : state.modes().modes()) {
    j["modes"].push_back({{"spatial", m.spatial}, {"pol", std::string(1, to_char(m.pol))}});
  }
  j["terms"] = Json::array();
  for (const auto& [occ, amp] : state.terms()) {
    Json occ_j = Json::array();
    for (auto n : occ) occ_j.push_back(static_cast<int>(n));
    j["terms"].push_back({{"occ", occ_j}, {"re", amp.real()}, {"im", amp.imag()}});
  }
  return j;
}

FockState fock_state_from_json(const Json& j) {
  std::vector<ModeId> modes;
  for (const auto& m : get<Json>(j, "modes")) {
    modes.push_back({get<std::string>(m, "spatial"), parse_pol(get<std::string>(m, "pol"))});
  }
  auto reg = make_register(ModeRegister(std::move(modes)));
  FockState::TermMap terms;
  for (const auto& t : get<Json>(j, "terms")) {
    Occupation occ;
    for (int n : get<std::vector<int>>(t, "occ")) {
      if (n < 0 || n > kMaxPhotonsPerMode) throw ConfigError("occupation out of range");
      occ.push_back(static_cast<std::uint8_t>(n));
    }
    terms[occ] += Complex(get<double>(t, "re"), get<double>(t, "im"));
  }
  return FockState(reg, std::move(terms));
}

Json to_json(const Element& e) {
  Json j;
  j["kind"] = kind_name(e.kind);
  j["ports"] = e.ports;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, BeamSplitter>) j["T"] = k.transmittance;
        if constexpr (std::is_same_v<K, PartialPolarizingBeamSplitter>) {
          j["T_H"] = k.t_h;
          j["T_V"] = k.t_v;
        }
        if constexpr (std::is_same_v<K, HalfWavePlate>) j["theta"] = k.theta;
        if constexpr (std::is_same_v<K, PhaseShifter>) j["phi"] = k.phi;
      },
      e.kind);
  if (!e.label.empty()) j["label"] = e.label;
  return j;
}

Element element_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  Element e;
  e.ports = get<std::vector<std::string>>(j, "ports");
  e.label = get_or<std::string>(j, "label", "");
  if (kind == "bs") {
    e.kind = BeamSplitter{get<double>(j, "T")};
  } else if (kind == "pbs") {
    e.kind = PolarizingBeamSplitter{};
  } else if (kind == "ppbs") {
    e.kind = PartialPolarizingBeamSplitter{get<double>(j, "T_H"), get<double>(j, "T_V")};
  } else if (kind == "hwp") {
    e.kind = HalfWavePlate{get<double>(j, "theta")};
  } else if (kind == "ps") {
    e.kind = PhaseShifter{get<double>(j, "phi")};
  } else if (kind == "mirror") {
    e.kind = Mirror{};
  } else {
    throw ConfigError("unknown element kind \"" + kind + "\"");
  }
  try {
    validate(e);
  } catch (const ValidationError& err) {
    throw ConfigError(err.what());
  }
  return e;
}

Json to_json(const HeraldRule& rule) {
  Json j;
  j["blocks"] = Json::array();
  for (const auto& b : rule.blocks) {
    j["blocks"].push_back({{"label", b.label}, {"accept", b.accept == BlockAccept::Single ? "single" : "parity_any"}});
  }
  j["vacuum"] = rule.vacuum;
  j["outputs_single_photon"] = rule.outputs_single_photon;
  if (!rule.even_parity.empty()) j["even_parity"] = rule.even_parity;
  return j;
}

HeraldRule herald_rule_from_json(const Json& j) {
  HeraldRule r;
  for (const auto& b : get_or<Json>(j, "blocks", Json::array())) {
    const auto accept = get<std::string>(b, "accept");
    if (accept != "single" && accept != "parity_any") throw ConfigError("unknown accept \"" + accept + "\"");
    r.blocks.push_back({get<std::string>(b, "label"), accept == "single" ? BlockAccept::Single : BlockAccept::ParityAny});
  }
  r.vacuum = get_or<std::vector<std::string>>(j, "vacuum", {});
  r.outputs_single_photon = get_or<std::vector<std::string>>(j, "outputs_single_photon", {});
  r.even_parity = get_or<std::vector<std::vector<std::string>>>(j, "even_parity", {});
  return r;
}

Json to_json(const Circuit& c) {
  Json j;
  j["name"] = c.name;
  j["ports"] = c.ports;
  j["sources"] = Json::array();
  for (const auto& s : c.sources) j["sources"].push_back({{"epr", {s.port_a, s.port_b}}});
  j["inputs"] = c.inputs;
  j["outputs"] = c.outputs;
  j["detectors"] = Json::array();
  for (const auto& d : c.detectors) {
    j["detectors"].push_back(
        {{"label", d.label}, {"port", d.port}, {"kind", d.kind == DetectorKind::BlockD ? "block" : "bare"}});
  }
  j["steps"] = Json::array();
  for (const auto& s : c.steps) {
    if (const auto* e = std::get_if<Element>(&s)) {
      j["steps"].push_back(to_json(*e));
    } else if (const auto* m = std::get_if<MeasureStep>(&s)) {
      j["steps"].push_back({{"measure", m->detector}});
    } else if (const auto* f = std::get_if<FeedforwardStep>(&s)) {
      j["steps"].push_back({{"feedforward",
                             {{"trigger", f->rule.trigger},
                              {"port", f->rule.port},
                              {"pauli", pauli_name(f->rule.action)},
                              {"group", f->rule.group}}},
                            {"enabled", f->enabled}});
    }
  }
  j["herald"] = to_json(c.herald);
  return j;
}

Circuit circuit_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("circuit config must be a JSON object");
  if (j.contains("variant")) {
    const auto variant = parse_variant(get<std::string>(j, "variant"));
    const auto opt = optimize_T3(variant).closed_form;
    const double T2 = get_or<double>(j, "T2", opt.T2);
    const double T3 = get_or<double>(j, "T3", opt.T3);
    try {
      return build_fredkin(variant, T2, T3, get_or<bool>(j, "feedforward", true));
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
  }

  Circuit c;
  c.name = get_or<std::string>(j, "name", "custom");
  c.ports = get<std::vector<std::string>>(j, "ports");
  for (const auto& s : get_or<Json>(j, "sources", Json::array())) {
    const auto pair = get<std::vector<std::string>>(s, "epr");
    if (pair.size() != 2) throw ConfigError("epr source needs two ports");
    c.sources.push_back({pair[0], pair[1]});
  }
  c.inputs = get<std::vector<std::string>>(j, "inputs");
  c.outputs = get<std::vector<std::string>>(j, "outputs");
  for (const auto& d : get_or<Json>(j, "detectors", Json::array())) {
    const auto kind = get_or<std::string>(d, "kind", "block");
    if (kind != "block" && kind != "bare") throw ConfigError("detector kind must be block or bare");
    c.detectors.push_back(
        {get<std::string>(d, "label"), get<std::string>(d, "port"), kind == "block" ? DetectorKind::BlockD : DetectorKind::Bare});
  }
  for (const auto& s : get<Json>(j, "steps")) {
    if (s.contains("measure")) {
      c.steps.emplace_back(MeasureStep{get<std::string>(s, "measure")});
    } else if (s.contains("feedforward")) {
      const auto& f = s.at("feedforward");
      FeedforwardRule rule{get<std::vector<std::string>>(f, "trigger"), get<std::string>(f, "port"),
                           parse_pauli(get_or<std::string>(f, "pauli", "Z")), get_or<std::string>(f, "group", "")};
      c.steps.emplace_back(FeedforwardStep{std::move(rule), get_or<bool>(s, "enabled", true)});
    } else {
      c.steps.emplace_back(element_from_json(s));
    }
  }
  if (j.contains("herald")) c.herald = herald_rule_from_json(j.at("herald"));
  try {
    validate(c);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return c;
}

Json to_json(const HeraldBranch& b) {
  Json j;
  Json outcomes = Json::object();
  for (const auto& [label, o] : b.outcomes) outcomes[label] = o.symbol();
  j["outcomes"] = outcomes;
  j["probability"] = b.probability;
  j["corrections"] = Json::array();
  for (const auto& c : b.corrections) j["corrections"].push_back({{"port", c.port}, {"pauli", pauli_name(c.pauli)}});
  j["state"] = to_json(b.residual);
  return j;
}

Json to_json(const FeasibilityReport& r) {
  return {{"p_t", r.p_t},
          {"p_c", r.p_c},
          {"correct_rate", r.correct_rate},
          {"false_rate", r.false_rate},
          {"signal_to_noise", r.signal_to_noise},
          {"suppressed", r.suppressed}};
}

Json to_json(const ReferenceConstants& c) {
  return {{"heralded_p_max", c.heralded_p_max},
          {"heralded_advantage_vs_ggr", c.heralded_advantage_vs_ggr},
          {"ggr_heralded_estimate", c.ggr_heralded_estimate},
          {"coincidence_p_max", c.coincidence_p_max},
          {"ggr_coincidence", c.ggr_coincidence},
          {"coincidence_ratio", c.coincidence_ratio},
          {"heralded_ancilla_photons", c.heralded_ancilla_photons},
          {"ggr_ancilla_photons", c.ggr_ancilla_photons},
          {"heralded_photon_budget", c.heralded_photon_budget},
          {"coincidence_photon_budget", c.coincidence_photon_budget}};
}

Json to_json(const Optimum& o) {
  auto point = [](const OperatingPoint& p) { return Json{{"T3", p.T3}, {"T2", p.T2}, {"probability", p.probability}}; };
  return {{"closed_form", point(o.closed_form)}, {"numeric", point(o.numeric)}, {"iterations", o.iterations}};
}

}  // namespace fredkin_lab

#include "fredkin_lab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "fredkin_lab/analysis.hpp"
#include "fredkin_lab/errors.hpp"
#include "fredkin_lab/json_io.hpp"
#include "fredkin_lab/permanent_oracle.hpp"

namespace fredkin_lab::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string variant = "heralded";
  std::optional<double> T2;
  std::optional<double> T3;
  std::string input = "all";
  std::size_t grid = 11;
  std::string out_path;
  std::string dump_path;
  std::string circuit_path;
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
  std::string feedforward = "on";
  std::size_t cases = 200;
  std::size_t circuits = 20;
  double p_t = 0.0;
  double p_c = 0.0;
  double min_ratio = FeasibilityThresholds{}.min_ratio;
  double max_p_c = FeasibilityThresholds{}.max_p_c;
};

std::string fmt(double x, int digits = 17) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: \"" + s + "\"");
  }
  if (used != s.size()) throw ConfigError("not a number: \"" + s + "\"");
  return v;
}

// "0.5", "-0.5i", "0.5+0.5i", "1j"
Complex parse_complex(std::string s) {
  std::erase_if(s, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (s.empty()) throw ConfigError("empty amplitude");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (split == std::string::npos) return {0.0, imag(s)};
  return {parse_real(s.substr(0, split)), imag(s.substr(split))};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

struct InputChoice {
  bool all = true;
  std::vector<Complex> amplitudes;  // 2^n logical amplitudes
  std::string label;
};

// "all" | basis index | "a,b;a,b;..." per qubit | 2^n comma-separated amplitudes
InputChoice parse_input(const std::string& text, std::size_t qubits) {
  InputChoice choice;
  if (text == "all") return choice;
  choice.all = false;
  choice.label = text;
  const std::size_t dim = std::size_t{1} << qubits;
  if (text.find_first_not_of("0123456789") == std::string::npos) {
    const auto index = std::stoull(text);
    if (index >= dim) throw ConfigError("basis index out of range: " + text);
    choice.amplitudes.assign(dim, Complex{});
    choice.amplitudes[index] = 1.0;
    return choice;
  }
  if (text.find(';') != std::string::npos) {
    const auto qubit_parts = split(text, ';');
    if (qubit_parts.size() != qubits) {
      throw ConfigError("expected " + std::to_string(qubits) + " qubits separated by ';'");
    }
    choice.amplitudes.assign(1, Complex{1.0});
    for (const auto& q : qubit_parts) {
      const auto ab = split(q, ',');
      if (ab.size() != 2) throw ConfigError("each qubit needs \"alpha,beta\"");
      const Complex a = parse_complex(ab[0]), b = parse_complex(ab[1]);
      std::vector<Complex> next;
      for (const auto& x : choice.amplitudes) {
        next.push_back(x * a);
        next.push_back(x * b);
      }
      choice.amplitudes = std::move(next);
    }
  } else {
    for (const auto& p : split(text, ',')) choice.amplitudes.push_back(parse_complex(p));
    if (choice.amplitudes.size() != dim) throw ConfigError("expected " + std::to_string(dim) + " amplitudes");
  }
  double n = 0.0;
  for (const auto& a : choice.amplitudes) n += std::norm(a);
  if (std::abs(n - 1.0) > 1e-6) throw ConfigError("input amplitudes are not normalized (norm^2 = " + fmt(n, 10) + ")");
  for (auto& a : choice.amplitudes) a /= std::sqrt(n);
  return choice;
}

struct Resolved {
  Circuit circuit;
  std::optional<GateVariant> variant;  // empty for custom circuits
  double T2 = 0.0;
  double T3 = 0.0;
  bool feedforward = true;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Resolved resolve(const RunConfig& cfg) {
  Resolved r;
  r.feedforward = cfg.feedforward == "on";
  Json choice;
  if (!cfg.circuit_path.empty()) {
    choice = read_json_file(cfg.circuit_path);
    if (!choice.is_object()) throw ConfigError("circuit file must hold a JSON object");
    if (!choice.contains("variant")) {
      r.circuit = circuit_from_json(choice);
      return r;
    }
  } else {
    choice["variant"] = cfg.variant;
  }
  const auto variant = parse_variant(choice["variant"].get<std::string>());
  r.variant = variant;
  const auto opt = optimize_T3(variant).closed_form;
  std::optional<double> T2 = cfg.T2, T3 = cfg.T3;
  if (!T2 && choice.contains("T2")) T2 = choice["T2"].get<double>();
  if (!T3 && choice.contains("T3")) T3 = choice["T3"].get<double>();
  if (choice.contains("feedforward")) r.feedforward = choice["feedforward"].get<bool>();
  r.T3 = T3.value_or(opt.T3);
  // Only T3 given: follow the balanced curve.
  r.T2 = T2 ? *T2 : (T3 ? balance_T2(r.T3, variant) : opt.T2);
  r.circuit = build_fredkin(variant, r.T2, r.T3, r.feedforward);
  return r;
}

void emit(const Json& j, const RunConfig& cfg, std::ostream& out) {
  const auto text = j.dump(2) + "\n";
  out << text;
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path);
    if (!f) throw ConfigError("cannot write " + cfg.out_path);
    f << text;
  }
}

std::string basis_label(std::size_t index, std::size_t qubits) {
  std::string s;
  for (std::size_t q = 0; q < qubits; ++q) s += ((index >> (qubits - 1 - q)) & 1) ? 'V' : 'H';
  return s;
}

Json complex_list(std::span<const Complex> v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back({x.real(), x.imag()});
  return a;
}

// Fraction of the accepted output that lies along ideal * input.
double output_fidelity(const Circuit& c, const std::vector<HeraldBranch>& branches, std::span<const Complex> input) {
  std::vector<Complex> target(input.size());
  const Matrix ideal = ideal_fredkin();
  for (std::size_t i = 0; i < input.size(); ++i) {
    for (std::size_t j = 0; j < input.size(); ++j) {
      target[i] += ideal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * input[j];
    }
  }
  double overlap = 0.0, total = 0.0;
  for (const auto& b : branches) {
    const auto out = extract_qubits(b.residual, c.outputs);
    Complex ov{};
    for (std::size_t i = 0; i < out.size(); ++i) {
      ov += std::conj(target[i]) * out[i];
      total += std::norm(out[i]);
    }
    overlap += std::norm(ov);
  }
  return total > 0.0 ? overlap / total : 0.0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double tol = cfg.tolerance.value_or(1e-9);
  const auto r = resolve(cfg);
  const auto& c = r.circuit;
  if (c.qubit_count() != 3) throw ConfigError("verify needs a three-qubit gate");

  const auto map = conditional_map(c);
  const double fidelity = process_fidelity(map, ideal_fredkin());
  std::vector<double> random_probs;
  for (const auto& amps : random_pure_states(8, 20, cfg.seed)) random_probs.push_back(success_probability(c, amps));
  const auto sectors = sector_probabilities(c);

  double lo = map.column_probabilities.front(), hi = lo;
  for (double p : map.column_probabilities) lo = std::min(lo, p), hi = std::max(hi, p);
  for (double p : random_probs) lo = std::min(lo, p), hi = std::max(hi, p);

  Json report;
  report["variant"] = r.variant ? to_string(*r.variant) : c.name;
  if (r.variant) {
    report["T2"] = r.T2;
    report["T3"] = r.T3;
  }
  report["feedforward"] = r.feedforward;
  report["success_probability"] = map.success_probability;
  report["per_input_probabilities"] = map.column_probabilities;
  report["random_input_probabilities"] = random_probs;
  report["seed"] = cfg.seed;
  report["p_plus_simulated"] = sectors.p_plus;
  report["p_minus_simulated"] = sectors.p_minus;
  report["process_fidelity"] = fidelity;
  report["map_unitarity_error"] = map.unitarity_error();
  report["branches"] = map.branches.size();
  report["photon_budget"] = c.photon_budget();

  bool ok = true;
  std::vector<std::string> problems;
  if (fidelity < 1.0 - tol) {
    ok = false;
    problems.push_back("process fidelity " + fmt(fidelity, 12) + " < 1 - " + fmt(tol, 3));
  }
  if (std::abs(sectors.p_plus - sectors.p_minus) > tol) {
    ok = false;
    problems.push_back("P+ != P-: symmetric targets succeed with " + fmt(sectors.p_plus, 12) +
                       ", singlet targets with " + fmt(sectors.p_minus, 12) + " (transmittances not balanced)");
  }
  if (hi - lo > tol) {
    ok = false;
    problems.push_back("success probability depends on the input (spread " + fmt(hi - lo, 3) + ")");
  }
  if (r.variant) {
    // Without teleportation feedforward only even-parity records survive.
    const double factor = (*r.variant == GateVariant::Heralded && !r.feedforward) ? 0.5 : 1.0;
    const double fp = factor * p_plus(*r.variant, r.T2, r.T3);
    const double fm = factor * p_minus(*r.variant, r.T2, r.T3);
    report["p_plus_formula"] = fp;
    report["p_minus_formula"] = fm;
    if (std::abs(fp - sectors.p_plus) > tol || std::abs(fm - sectors.p_minus) > tol) {
      ok = false;
      problems.push_back("simulation disagrees with the closed form");
    }
  }

  if (!cfg.input.empty() && cfg.input != "all") {
    const auto choice = parse_input(cfg.input, c.qubit_count());
    const auto branches = simulate(c, logical_input(c, choice.amplitudes));
    report["input"] = {{"label", choice.label},
                       {"amplitudes", complex_list(choice.amplitudes)},
                       {"success_probability", total_probability(branches)},
                       {"output_fidelity", output_fidelity(c, branches, choice.amplitudes)}};
  }
  if (!cfg.dump_path.empty()) {
    Json dump = Json::array();
    auto add = [&](std::span<const Complex> amps, const std::string& label) {
      const auto logical = logical_input(c, amps);
      Json entry{{"input", label}, {"input_state", to_json(logical)}, {"branches", Json::array()}};
      for (const auto& b : simulate(c, logical)) entry["branches"].push_back(to_json(b));
      dump.push_back(entry);
    };
    const auto choice = parse_input(cfg.input, c.qubit_count());
    if (choice.all) {
      for (std::size_t i = 0; i < 8; ++i) {
        std::vector<Complex> e(8);
        e[i] = 1.0;
        add(e, basis_label(i, 3));
      }
    } else {
      add(choice.amplitudes, choice.label);
    }
    std::ofstream f(cfg.dump_path);
    if (!f) throw ConfigError("cannot write " + cfg.dump_path);
    f << dump.dump(2) << "\n";
  }

  report["constants"] = to_json(reference_constants());
  report["verified"] = ok;
  emit(report, cfg, out);
  for (const auto& p : problems) err << "verify: " << p << "\n";
  return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto variant = parse_variant(cfg.variant);
  if (cfg.grid < 2) throw ConfigError("--grid needs at least 2 points");
  const auto rows = sweep(variant, cfg.grid);
  std::ostringstream csv;
  csv << "T3,T2,P_formula,P_simulated,fidelity\n";
  const SweepRow* peak = nullptr;
  for (const auto& row : rows) {
    csv << fmt(row.T3) << ',' << fmt(row.T2) << ',' << fmt(row.p_formula) << ',' << fmt(row.p_simulated) << ','
        << fmt(row.fidelity) << '\n';
    if (row.feasible && (!peak || row.p_simulated > peak->p_simulated)) peak = &row;
  }
  if (cfg.out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(cfg.out_path);
    if (!f) throw ConfigError("cannot write " + cfg.out_path);
    f << csv.str();
  }
  if (peak) err << "sweep: peak P = " << fmt(peak->p_simulated, 10) << " at T3 = " << fmt(peak->T3, 10) << "\n";
  return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const double tol = cfg.tolerance.value_or(1e-9);
  const auto variant = parse_variant(cfg.variant);
  const auto o = optimize_T3(variant);
  const double dx = std::abs(o.numeric.T3 - o.closed_form.T3);
  const double dp = std::abs(o.numeric.probability - o.closed_form.probability);
  Json j{{"variant", to_string(variant)}};
  j.update(to_json(o));
  j["argument_difference"] = dx;
  j["value_difference"] = dp;
  emit(j, cfg, out);
  return dx <= tol && dp <= tol ? kExitOk : kExitVerificationFailed;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double tol = cfg.tolerance.value_or(1e-10);
  const auto r = oracle_check(cfg.seed, cfg.cases, cfg.circuits);
  Json j{{"seed", cfg.seed},
         {"element_cases", r.element_cases},
         {"circuit_cases", r.circuit_cases},
         {"max_element_error", r.max_element_error},
         {"max_circuit_error", r.max_circuit_error},
         {"max_completeness_error", r.max_completeness_error},
         {"isa", std::string(kernels::to_string(kernels::detected_isa()))}};
  const bool ok = r.max_element_error <= tol && r.max_circuit_error <= tol && r.max_completeness_error <= tol;
  j["passed"] = ok;
  emit(j, cfg, out);
  if (!ok) err << "oracle-check: disagreement above " << fmt(tol, 3) << "\n";
  return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_feasibility(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto r = spdc_feasibility(cfg.p_t, cfg.p_c, {cfg.min_ratio, cfg.max_p_c});
  emit(to_json(r), cfg, out);
  return kExitOk;
}

int cmd_truth_table(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto r = resolve(cfg);
  const auto& c = r.circuit;
  const auto map = conditional_map(c);
  const Matrix m = map.normalized();
  const std::size_t q = c.qubit_count();

  // Fix the global phase on the largest entry of the map.
  Eigen::Index pr = 0, pc = 0;
  m.cwiseAbs().maxCoeff(&pr, &pc);
  const Complex phase = std::abs(m(pr, pc)) > 0.0 ? std::conj(m(pr, pc)) / std::abs(m(pr, pc)) : Complex{1.0};

  Json rows = Json::array();
  std::ostringstream text;
  for (std::size_t j = 0; j < map.dim(); ++j) {
    std::string ket;
    Json terms = Json::array();
    for (std::size_t i = 0; i < map.dim(); ++i) {
      const Complex a = phase * m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::abs(a) < 1e-9) continue;
      terms.push_back({{"output", basis_label(i, q)}, {"re", a.real()}, {"im", a.imag()}});
      std::string coeff;
      if (std::abs(a - Complex{1.0}) > 1e-9) coeff = "(" + fmt(a.real(), 6) + (a.imag() < 0 ? "" : "+") + fmt(a.imag(), 6) + "i)";
      ket += (ket.empty() ? "" : " + ") + coeff + "|" + basis_label(i, q) + ">";
    }
    if (ket.empty()) ket = "0";
    rows.push_back({{"input", basis_label(j, q)}, {"output", terms}, {"probability", map.column_probabilities[j]}});
    text << "|" << basis_label(j, q) << "> -> " << ket << "   P = " << fmt(map.column_probabilities[j], 12) << "\n";
  }
  out << text.str();
  if (!cfg.out_path.empty()) {
    Json j{{"variant", r.variant ? to_string(*r.variant) : c.name}};
    if (r.variant) {
      j["T2"] = r.T2;
      j["T3"] = r.T3;
    }
    j["rows"] = rows;
    std::ofstream f(cfg.out_path);
    if (!f) throw ConfigError("cannot write " + cfg.out_path);
    f << j.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Linear-optical Fredkin gate simulator", "fredkin_lab"};
  app.require_subcommand(1);

  auto gate_options = [&](CLI::App* sub) {
    sub->add_option("--variant", cfg.variant, "heralded | coincidence")
        ->check(CLI::IsMember({"heralded", "coincidence"}));
    sub->add_option("--T2", cfg.T2, "BS2 transmittance (default: optimum, or balanced for --T3)");
    sub->add_option("--T3", cfg.T3, "BS3 transmittance (default: optimum)");
    sub->add_option("--circuit", cfg.circuit_path, "circuit JSON (built-in or explicit form)");
    sub->add_option("--feedforward", cfg.feedforward, "teleportation feedforward on|off")
        ->check(CLI::IsMember({"on", "off"}));
  };

  auto* verify = app.add_subcommand("verify", "check the conditional process against the ideal Fredkin gate");
  gate_options(verify);
  verify->add_option("--input", cfg.input, "all | basis index | a,b;a,b;a,b | 8 amplitudes");
  verify->add_option("--seed", cfg.seed, "seed for the random superposition inputs");
  verify->add_option("--tolerance", cfg.tolerance, "absolute tolerance (default 1e-9)");
  verify->add_option("--out", cfg.out_path, "also write the report here");
  verify->add_option("--dump-state", cfg.dump_path, "write accepted output states as JSON");

  auto* sweep_cmd = app.add_subcommand("sweep", "success probability along the balanced T3 curve (CSV)");
  sweep_cmd->add_option("--variant", cfg.variant)->check(CLI::IsMember({"heralded", "coincidence"}));
  sweep_cmd->add_option("--grid", cfg.grid, "number of T3 points (default 11)");
  sweep_cmd->add_option("--out", cfg.out_path, "CSV path (default stdout)");

  auto* optimize = app.add_subcommand("optimize", "closed-form and golden-section optimum");
  optimize->add_option("--variant", cfg.variant)->check(CLI::IsMember({"heralded", "coincidence"}));
  optimize->add_option("--tolerance", cfg.tolerance, "agreement tolerance (default 1e-9)");
  optimize->add_option("--out", cfg.out_path);

  auto* oracle = app.add_subcommand("oracle-check", "randomized sparse-vs-permanent cross-check");
  oracle->add_option("--seed", cfg.seed);
  oracle->add_option("--cases", cfg.cases, "single-element cases (default 200)");
  oracle->add_option("--circuits", cfg.circuits, "composed-circuit cases (default 20)");
  oracle->add_option("--tolerance", cfg.tolerance, "default 1e-10");
  oracle->add_option("--out", cfg.out_path);

  auto* feas = app.add_subcommand("feasibility", "multi-pair emission estimate");
  feas->add_option("--pt", cfg.p_t, "pair probability of the target sources")->required();
  feas->add_option("--pc", cfg.p_c, "pair probability of the control source")->required();
  feas->add_option("--min-ratio", cfg.min_ratio, "required p_c / p_t");
  feas->add_option("--max-pc", cfg.max_p_c, "upper bound on p_c");
  feas->add_option("--out", cfg.out_path);

  auto* truth = app.add_subcommand("truth-table", "conditional output for each basis input");
  gate_options(truth);
  truth->add_option("--out", cfg.out_path, "also write JSON here");

  std::vector<const char*> argv{"fredkin_lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfigError;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out, err);
    if (optimize->parsed()) return cmd_optimize(cfg, out, err);
    if (oracle->parsed()) return cmd_oracle_check(cfg, out, err);
    if (feas->parsed()) return cmd_feasibility(cfg, out, err);
    if (truth->parsed()) return cmd_truth_table(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const PlacementError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  return kExitConfigError;
}

}  // namespace fredkin_lab::cli

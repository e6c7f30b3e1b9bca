#include "fredkin_lab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fredkin_lab/errors.hpp"

namespace fredkin_lab {

std::string Outcome::symbol() const {
  if (bare) return std::to_string(total());
  if (single()) return plus == 1 ? "+" : "-";
  return "(" + std::to_string(plus) + "," + std::to_string(minus) + ")";
}

bool FeedforwardRule::fires(const std::map<std::string, Outcome>& outcomes) const {
  int minus = 0;
  for (const auto& label : trigger) {
    auto it = outcomes.find(label);
    if (it == outcomes.end()) throw ConfigError("feedforward trigger " + label + " has not been measured");
    minus += it->second.minus;
  }
  return minus % 2 == 1;
}

std::string HeraldBranch::key() const {
  std::string k;
  for (const auto& [label, o] : outcomes) {
    if (!k.empty()) k += ';';
    k += label + "=" + o.symbol();
  }
  return k;
}

Projection project_pattern(const FockState& state, const DetectionPattern& pattern) {
  const auto& reg = state.modes();
  std::vector<std::size_t> idx;
  std::vector<int> want;
  for (const auto& [mode, n] : pattern.counts) {
    auto i = reg.find(mode);
    if (!i) throw PlacementError("pattern mode " + mode.spatial + ":" + to_char(mode.pol) + " not in register");
    idx.push_back(*i);
    want.push_back(n);
  }
  std::vector<bool> dropped(reg.size(), false);
  for (auto i : idx) dropped[i] = true;

  auto residual_reg = make_register(reg.without(idx));
  FockState::TermMap kept;
  double p = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    bool match = true;
    for (std::size_t k = 0; k < idx.size() && match; ++k) match = occ[idx[k]] == want[k];
    if (!match) continue;
    Occupation rest;
    rest.reserve(occ.size() - idx.size());
    for (std::size_t m = 0; m < occ.size(); ++m) {
      if (!dropped[m]) rest.push_back(occ[m]);
    }
    kept[rest] += amp;
    p += std::norm(amp);
  }
  return {FockState(residual_reg, std::move(kept)), p};
}

namespace {

// Splits `state` by the (H, V) photon counts on `port` without any rotation.
std::vector<std::pair<Outcome, Projection>> split_port(const FockState& state, const std::string& port) {
  const auto& reg = state.modes();
  const auto h = reg.index(port, Polarization::H);
  const auto v = reg.index(port, Polarization::V);
  std::map<std::pair<int, int>, bool> seen;
  for (const auto& [occ, amp] : state.terms()) seen[{occ[h], occ[v]}] = true;

  std::vector<std::pair<Outcome, Projection>> out;
  for (const auto& [counts, _] : seen) {
    DetectionPattern pat;
    pat.counts[{port, Polarization::H}] = counts.first;
    pat.counts[{port, Polarization::V}] = counts.second;
    out.emplace_back(Outcome{counts.first, counts.second, false}, project_pattern(state, pat));
  }
  return out;
}

std::vector<std::pair<Outcome, Projection>> measure(const FockState& state, const DetectorSpec& det) {
  if (det.kind == DetectorKind::BlockD) {
    auto rotated = apply(state, half_wave_plate(det.port, std::numbers::pi / 8.0));
    return split_port(rotated, det.port);
  }
  auto parts = split_port(state, det.port);
  for (auto& [o, _] : parts) o.bare = true;
  return parts;
}

const DetectorSpec& find_detector(std::span<const DetectorSpec> detectors, const std::string& label) {
  auto it = std::find_if(detectors.begin(), detectors.end(), [&](const auto& d) { return d.label == label; });
  if (it == detectors.end()) throw ConfigError("unknown detector " + label);
  return *it;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Herald-mode acceptance of a single detector record.
bool accepted(const HeraldRule& rule, const std::string& label, const Outcome& o) {
  for (const auto& b : rule.blocks) {
    if (b.label == label) return o.single();
  }
  if (contains(rule.vacuum, label)) return o.total() == 0;
  return true;
}

FockState project_single_photon_outputs(const FockState& state, const std::vector<std::string>& ports) {
  const auto& reg = state.modes();
  std::vector<std::pair<std::size_t, std::size_t>> hv;
  for (const auto& p : ports) hv.emplace_back(reg.index(p, Polarization::H), reg.index(p, Polarization::V));
  FockState::TermMap kept;
  for (const auto& [occ, amp] : state.terms()) {
    const bool ok = std::all_of(hv.begin(), hv.end(), [&](auto m) { return occ[m.first] + occ[m.second] == 1; });
    if (ok) kept.emplace(occ, amp);
  }
  return FockState(state.register_ptr(), std::move(kept));
}

}  // namespace

std::vector<HeraldBranch> block_D_outcomes(const FockState& state, const std::string& port) {
  DetectorSpec det{"D", port, DetectorKind::BlockD};
  std::vector<HeraldBranch> out;
  for (auto& [o, proj] : measure(state, det)) {
    HeraldBranch b;
    b.outcomes.emplace("D", o);
    b.probability = proj.probability;
    b.residual = std::move(proj.residual);
    out.push_back(std::move(b));
  }
  return out;
}

FockState apply_correction(const FockState& state, const std::string& port, Pauli pauli) {
  if (pauli == Pauli::I) return state;
  const auto& reg = state.modes();
  const auto h = reg.index(port, Polarization::H);
  const auto v = reg.index(port, Polarization::V);
  FockState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    if (pauli == Pauli::Z) {
      out.emplace(occ, occ[v] % 2 ? -amp : amp);
    } else {
      Occupation o = occ;
      std::swap(o[h], o[v]);
      out.emplace(std::move(o), amp);
    }
  }
  return FockState(state.register_ptr(), std::move(out));
}

void validate_rule(const HeraldRule& rule, std::span<const DetectorSpec> detectors) {
  for (const auto& b : rule.blocks) find_detector(detectors, b.label);
  for (const auto& v : rule.vacuum) find_detector(detectors, v);
  for (const auto& group : rule.even_parity) {
    for (const auto& l : group) find_detector(detectors, l);
  }
}

std::vector<HeraldBranch> run_program(const FockState& initial, std::span<const Step> steps,
                                      std::span<const DetectorSpec> detectors, const HeraldRule& rule,
                                      EnumerationMode mode) {
  const bool herald = mode == EnumerationMode::Herald;
  if (herald) validate_rule(rule, detectors);

  std::vector<HeraldBranch> live(1);
  live[0].residual = initial;
  live[0].probability = initial.norm2();

  for (const auto& step : steps) {
    if (const auto* e = std::get_if<Element>(&step)) {
      for (auto& b : live) b.residual = apply(b.residual, *e);
    } else if (const auto* m = std::get_if<MeasureStep>(&step)) {
      const auto& det = find_detector(detectors, m->detector);
      std::vector<HeraldBranch> next;
      for (auto& b : live) {
        for (auto& [o, proj] : measure(b.residual, det)) {
          if (herald && !accepted(rule, det.label, o)) continue;
          if (proj.residual.empty()) continue;
          HeraldBranch nb;
          nb.outcomes = b.outcomes;
          nb.outcomes.emplace(det.label, o);
          nb.corrections = b.corrections;
          nb.residual = std::move(proj.residual);
          nb.probability = proj.probability;
          next.push_back(std::move(nb));
        }
      }
      live = std::move(next);
    } else if (const auto* f = std::get_if<FeedforwardStep>(&step)) {
      if (!f->enabled) continue;
      for (auto& b : live) {
        if (f->rule.fires(b.outcomes)) {
          b.residual = apply_correction(b.residual, f->rule.port, f->rule.action);
          b.corrections.push_back({f->rule.port, f->rule.action});
        }
      }
    }
  }

  if (!herald) return live;

  std::vector<HeraldBranch> out;
  for (auto& b : live) {
    bool even = true;
    for (const auto& group : rule.even_parity) {
      int minus = 0;
      for (const auto& l : group) minus += b.outcomes.at(l).minus;
      even = even && minus % 2 == 0;
    }
    if (!even) continue;
    if (!rule.outputs_single_photon.empty()) {
      b.residual = project_single_photon_outputs(b.residual, rule.outputs_single_photon);
    }
    b.probability = b.residual.norm2();
    if (!b.residual.empty()) out.push_back(std::move(b));
  }
  return out;
}

std::vector<HeraldBranch> enumerate_herald(const FockState& state, std::span<const DetectorSpec> detectors,
                                           const HeraldRule& rule, std::span<const FeedforwardRule> feedforward) {
  std::vector<Step> steps;
  for (const auto& d : detectors) steps.emplace_back(MeasureStep{d.label});
  for (const auto& f : feedforward) steps.emplace_back(FeedforwardStep{f, true});
  return run_program(state, steps, detectors, rule, EnumerationMode::Herald);
}

double total_probability(std::span<const HeraldBranch> branches) {
  double s = 0.0;
  for (const auto& b : branches) s += b.probability;
  return s;
}

}  // namespace fredkin_lab

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fredkin_lab/measurement.hpp"
#include "fredkin_lab/permanent_oracle.hpp"

namespace fredkin_lab {

namespace {

std::vector<std::string> port_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

Element random_element(std::mt19937_64& rng, const std::vector<std::string>& ports) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, ports.size() - 1);
  const auto a = pick(rng);
  auto b = pick(rng);
  while (b == a) b = pick(rng);
  const double angle = 2.0 * std::numbers::pi * unit(rng);
  switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
    case 0:
      return beam_splitter(ports[a], ports[b], unit(rng));
    case 1:
      return polarizing_beam_splitter(ports[a], ports[b]);
    case 2:
      return partial_polarizing_beam_splitter(ports[a], ports[b], unit(rng), unit(rng));
    case 3:
      return half_wave_plate(ports[a], angle);
    case 4:
      return phase_shifter(ports[a], angle);
    default:
      return mirror(ports[a]);
  }
}

FockState random_state(std::mt19937_64& rng, const RegisterPtr& reg) {
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<std::size_t> mode(0, reg->size() - 1);
  const int terms = std::uniform_int_distribution<int>(1, 4)(rng);
  FockState::TermMap map;
  for (int k = 0; k < terms; ++k) {
    Occupation occ(reg->size(), 0);
    const int n = std::uniform_int_distribution<int>(1, kOracleMaxPhotons)(rng);
    for (int p = 0; p < n; ++p) ++occ[mode(rng)];
    map[occ] += Complex(gauss(rng), gauss(rng));
  }
  return FockState(reg, std::move(map)).normalized();
}

}  // namespace

OracleCheckReport oracle_check(std::uint64_t seed, std::size_t element_cases, std::size_t circuit_cases) {
  std::mt19937_64 rng(seed);
  OracleCheckReport r;
  auto register_of = [&] {
    auto ports = port_names(std::uniform_int_distribution<std::size_t>(2, kOracleMaxModes / 2)(rng));
    return std::make_pair(ports, make_register(std::span<const std::string>(ports)));
  };

  for (std::size_t i = 0; i < element_cases; ++i) {
    auto [ports, reg] = register_of();
    const auto e = random_element(rng, ports);
    const auto state = random_state(rng, reg);
    const auto fast = apply(state, e);
    const auto slow = oracle_evolve(lower(e, *reg), state);
    r.max_element_error = std::max(r.max_element_error, max_abs_difference(fast, slow));
    ++r.element_cases;
  }

  for (std::size_t i = 0; i < circuit_cases; ++i) {
    auto [ports, reg] = register_of();
    std::vector<Element> chain;
    const int length = std::uniform_int_distribution<int>(3, 8)(rng);
    for (int k = 0; k < length; ++k) chain.push_back(random_element(rng, ports));
    const auto state = random_state(rng, reg);
    auto fast = state;
    for (const auto& e : chain) fast = apply(fast, e);
    const auto slow = oracle_evolve(compose_circuit_unitary(chain, *reg), state);
    r.max_circuit_error = std::max(r.max_circuit_error, max_abs_difference(fast, slow));

    // Measure every port but one with a random detector type, keeping all records.
    std::vector<Step> steps(chain.begin(), chain.end());
    std::vector<DetectorSpec> detectors;
    for (std::size_t p = 0; p + 1 < ports.size(); ++p) {
      const auto kind = (rng() & 1) ? DetectorKind::BlockD : DetectorKind::Bare;
      detectors.push_back({"D" + std::to_string(p), ports[p], kind});
      steps.emplace_back(MeasureStep{detectors.back().label});
    }
    const auto branches = run_program(state, steps, detectors, HeraldRule{}, EnumerationMode::Exhaustive);
    r.max_completeness_error =
        std::max(r.max_completeness_error, std::abs(total_probability(branches) - state.norm2()));
    ++r.circuit_cases;
  }
  return r;
}

}  // namespace fredkin_lab

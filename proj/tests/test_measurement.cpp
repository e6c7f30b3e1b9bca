#include <doctest.h>

#include <numbers>
#include <random>

#include "fredkin_lab/circuits.hpp"
#include "fredkin_lab/errors.hpp"
#include "fredkin_lab/measurement.hpp"
#include "support.hpp"

using namespace fredkin_lab;
using test_support::kRoot2;
using test_support::state;

namespace {

double prob_of(const std::vector<HeraldBranch>& branches, const std::string& symbol) {
  double p = 0.0;
  for (const auto& b : branches) {
    if (b.outcomes.begin()->second.symbol() == symbol) p += b.probability;
  }
  return p;
}

}  // namespace

TEST_CASE("project_pattern") {
  auto reg = make_register({"d", "r"});
  SUBCASE("vacuum pattern on an empty mode keeps everything") {
    auto s = state(reg, {{{0, 0, 1, 0}, 0.6}, {{0, 0, 0, 1}, 0.8}});
    DetectionPattern p{{{{"d", Polarization::H}, 0}}};
    auto proj = project_pattern(s, p);
    CHECK(std::abs(proj.probability - 1.0) < 1e-15);
    CHECK(proj.residual.mode_count() == 3);
  }
  SUBCASE("single photon detected") {
    auto s = make_basis_state(make_register(ModeRegister({{"d", Polarization::H}})), {1});
    DetectionPattern p{{{{"d", Polarization::H}, 1}}};
    auto proj = project_pattern(s, p);
    CHECK(std::abs(proj.probability - 1.0) < 1e-15);
    CHECK(proj.residual.mode_count() == 0);
  }
  SUBCASE("HOM output has no coincidence") {
    auto hom = apply(make_basis_state(reg, {1, 0, 1, 0}), beam_splitter("d", "r", 0.5));
    DetectionPattern p{{{{"d", Polarization::H}, 1}, {{"r", Polarization::H}, 1}}};
    CHECK(project_pattern(hom, p).probability < 1e-30);
  }
  CHECK_THROWS_AS(project_pattern(make_basis_state(reg, {0, 0, 0, 0}), DetectionPattern{{{{"x", Polarization::H}, 0}}}),
                  PlacementError);
}

TEST_CASE("block D measures in the diagonal basis") {
  SUBCASE("|+> always clicks +") {
    auto s = encode_qubit("p", 1.0 / kRoot2, 1.0 / kRoot2);
    auto br = block_D_outcomes(s, "p");
    CHECK(std::abs(prob_of(br, "+") - 1.0) < 1e-15);
    CHECK(prob_of(br, "-") < 1e-30);
  }
  SUBCASE("|H> splits evenly") {
    auto br = block_D_outcomes(encode_qubit("p", 1.0, 0.0), "p");
    CHECK(std::abs(prob_of(br, "+") - 0.5) < 1e-15);
    CHECK(std::abs(prob_of(br, "-") - 0.5) < 1e-15);
  }
  SUBCASE("two H photons: counts (2,0), (1,1), (0,2)") {
    // HWP(22.5): a_H^dag -> (a_+ + a_-)/sqrt2, so (a_H^dag)^2/sqrt2 = (a_+^2 + 2 a_+ a_- + a_-^2)/(2 sqrt2).
    auto reg = make_register({"p"});
    auto br = block_D_outcomes(make_basis_state(reg, {2, 0}), "p");
    CHECK(std::abs(prob_of(br, "(2,0)") - 0.25) < 1e-15);
    CHECK(std::abs(prob_of(br, "(1,1)") - 0.5) < 1e-15);
    CHECK(std::abs(prob_of(br, "(0,2)") - 0.25) < 1e-15);
  }
  SUBCASE("vacuum and the residual register") {
    auto s = tensor(FockState::vacuum(make_register({"p"})), encode_qubit("q", 1.0, 0.0));
    auto br = block_D_outcomes(s, "p");
    REQUIRE(br.size() == 1);
    CHECK(br[0].outcomes.at("D").symbol() == "(0,0)");
    CHECK(br[0].residual.modes() == ModeRegister::from_ports({"q"}));
  }
}

TEST_CASE("bare detectors print the total count") {
  Outcome o{1, 1, true};
  CHECK(o.symbol() == "2");
  CHECK(Outcome{0, 1, false}.symbol() == "-");
}

TEST_CASE("apply_correction") {
  auto v = encode_qubit("p", 0.0, 1.0);
  CHECK(std::abs(apply_correction(v, "p", Pauli::Z).amplitude({0, 1}) + 1.0) < 1e-15);
  auto s = encode_qubit("p", 0.6, Complex(0.0, 0.8));
  auto zz = apply_correction(apply_correction(s, "p", Pauli::Z), "p", Pauli::Z);
  CHECK(max_abs_difference(zz, s) == 0.0);
  auto h = encode_qubit("p", 1.0, 0.0);
  CHECK(apply_correction(h, "p", Pauli::X).amplitude({0, 1}) == Complex{1.0});
  CHECK(max_abs_difference(apply_correction(s, "p", Pauli::I), s) == 0.0);
}

TEST_CASE("feedforward fires on odd minus parity") {
  FeedforwardRule r{{"a", "b"}, "t", Pauli::Z, ""};
  std::map<std::string, Outcome> o{{"a", {0, 1}}, {"b", {1, 0}}};
  CHECK(r.fires(o));
  o["b"] = {0, 1};
  CHECK_FALSE(r.fires(o));
  CHECK_THROWS_AS(r.fires({{"a", {0, 1}}}), ConfigError);
}

TEST_CASE("exhaustive enumeration is complete") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  auto reg = make_register({"a", "b", "c"});
  for (int trial = 0; trial < 30; ++trial) {
    FockState::TermMap t;
    for (int k = 0; k < 6; ++k) {
      Occupation occ(6, 0);
      for (int p = 0; p < 3; ++p) ++occ[rng() % 6];
      t[occ] += Complex(g(rng), g(rng));
    }
    FockState s(reg, t);
    std::vector<Step> steps{beam_splitter("a", "b", 0.3), polarizing_beam_splitter("b", "c"), MeasureStep{"A"},
                            MeasureStep{"B"}};
    std::vector<DetectorSpec> det{{"A", "a", DetectorKind::BlockD},
                                  {"B", "b", trial % 2 ? DetectorKind::Bare : DetectorKind::BlockD}};
    auto br = run_program(s, steps, det, {}, EnumerationMode::Exhaustive);
    CHECK(std::abs(total_probability(br) - s.norm2()) < 1e-10);
  }
}

TEST_CASE("adding herald constraints never raises the success probability") {
  auto s = embed(tensor(make_epr_pair("a", "b"), encode_qubit("c", 0.6, 0.8)), make_register({"a", "b", "c"}));
  std::vector<Step> steps{beam_splitter("a", "c", 0.5), beam_splitter("b", "c", 0.4), MeasureStep{"A"},
                          MeasureStep{"B"}};
  std::vector<DetectorSpec> det{{"A", "a", DetectorKind::BlockD}, {"B", "b", DetectorKind::BlockD}};
  HeraldRule r0;
  HeraldRule r1{{{"A", BlockAccept::Single}}, {}, {}, {}};
  HeraldRule r2{{{"A", BlockAccept::Single}, {"B", BlockAccept::Single}}, {}, {}, {}};
  HeraldRule r3 = r2;
  r3.outputs_single_photon = {"c"};
  HeraldRule r4 = r3;
  r4.even_parity = {{"A", "B"}};
  double last = 2.0;
  for (const auto& r : {r0, r1, r2, r3, r4}) {
    const double p = total_probability(run_program(s, steps, det, r, EnumerationMode::Herald));
    CHECK(p <= last + 1e-15);
    last = p;
  }
  CHECK(last > 0.0);
}

TEST_CASE("a vacuum requirement rejects a detector that always sees a photon") {
  auto s = encode_qubit("a", 1.0, 0.0);
  std::vector<DetectorSpec> det{{"Dv", "a", DetectorKind::Bare}};
  HeraldRule r{{}, {"Dv"}, {}, {}};
  CHECK(enumerate_herald(s, det, r).empty());
}

TEST_CASE("herald rules must name declared detectors") {
  std::vector<DetectorSpec> det{{"A", "a", DetectorKind::BlockD}};
  CHECK_THROWS_AS(validate_rule(HeraldRule{{{"B", BlockAccept::Single}}, {}, {}, {}}, det), ConfigError);
  CHECK_NOTHROW(validate_rule(HeraldRule{{{"A", BlockAccept::ParityAny}}, {}, {}, {}}, det));
}

TEST_CASE("teleportation check: every accepted record returns the input qubit") {
  const auto c = build_teleport_qnd();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Complex a(g(rng), g(rng)), b(g(rng), g(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    const std::vector<Complex> in{a, b};
    const auto branches = simulate(c, logical_input(c, in));
    CHECK(branches.size() == 4);
    double total = 0.0;
    for (const auto& br : branches) {
      auto out = extract_qubits(br.residual, c.outputs);
      const Complex ov = std::conj(a) * out[0] + std::conj(b) * out[1];
      CHECK(std::abs(std::norm(ov) / br.probability - 1.0) < 1e-10);
      total += br.probability;
    }
    CHECK(std::abs(total - 0.5) < 1e-10);
  }
}

TEST_CASE("branch keys are deterministic") {
  HeraldBranch b;
  b.outcomes["D2"] = {0, 1};
  b.outcomes["D1"] = {1, 0};
  CHECK(b.key() == "D1=+;D2=-");
}

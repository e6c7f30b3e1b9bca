#include <doctest.h>

#include <numbers>
#include <random>

#include "fredkin_lab/analysis.hpp"
#include "fredkin_lab/circuits.hpp"
#include "fredkin_lab/errors.hpp"
#include "fredkin_lab/json_io.hpp"
#include "fredkin_lab/permanent_oracle.hpp"
#include "support.hpp"

using namespace fredkin_lab;
using test_support::kRoot2;
using test_support::max_abs;

namespace {

const double kT3h = 1.0 - 1.0 / std::numbers::sqrt2;
const double kT2h = std::numbers::sqrt2 - 1.0;

std::vector<Complex> basis(std::size_t dim, std::size_t k) {
  std::vector<Complex> v(dim);
  v[k] = 1.0;
  return v;
}

std::vector<Complex> random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Complex a(g(rng), g(rng)), b(g(rng), g(rng));
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

// Sum over accepted records of |<target|out_b>|^2, divided by the total weight.
double fidelity_to(const Circuit& c, const std::vector<HeraldBranch>& branches, const std::vector<Complex>& target) {
  double overlap = 0.0, total = 0.0;
  for (const auto& b : branches) {
    auto out = extract_qubits(b.residual, c.outputs);
    Complex ov{};
    for (std::size_t i = 0; i < out.size(); ++i) {
      ov += std::conj(target[i]) * out[i];
      total += std::norm(out[i]);
    }
    overlap += std::norm(ov);
  }
  return overlap / total;
}

Matrix cz_matrix() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

}  // namespace

TEST_CASE("teleportation presence check") {
  const auto c = build_teleport_qnd();
  SUBCASE("|+> and |H> come back with probability 1/2") {
    for (const auto& in : {std::vector<Complex>{1.0 / kRoot2, 1.0 / kRoot2}, std::vector<Complex>{1.0, 0.0}}) {
      auto br = simulate(c, logical_input(c, in));
      CHECK(std::abs(total_probability(br) - 0.5) < 1e-10);
      CHECK(std::abs(fidelity_to(c, br, in) - 1.0) < 1e-10);
    }
  }
  SUBCASE("no photon, no double click") {
    auto vac = FockState::vacuum(make_register({"tap"}));
    auto br = run_program(prepare_input(c, vac), c.steps, c.detectors, c.herald, EnumerationMode::Herald);
    CHECK(total_probability(br) < 1e-30);
  }
  SUBCASE("without feedforward only even parity survives, at half the rate") {
    const auto off = build_teleport_qnd(false);
    auto br = simulate(off, logical_input(off, std::vector<Complex>{0.6, 0.8}));
    CHECK(std::abs(total_probability(br) - 0.25) < 1e-10);
    CHECK(std::abs(fidelity_to(off, br, {0.6, 0.8}) - 1.0) < 1e-10);
  }
}

TEST_CASE("heralded CZ") {
  const auto c = build_heralded_cz();
  SUBCASE("truth table at 1/4") {
    const auto m = conditional_map(c);
    for (double p : m.column_probabilities) CHECK(std::abs(p - 0.25) < 1e-10);
    CHECK(std::abs(process_fidelity(m, cz_matrix()) - 1.0) < 1e-10);
    const Matrix n = m.normalized();
    const Complex phase = n(0, 0);
    CHECK(std::abs(n(3, 3) + phase) < 1e-10);
    CHECK(std::abs(n(1, 1) - phase) < 1e-10);
  }
  SUBCASE("with the target rail empty it is the identity on the control") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5; ++trial) {
      const auto q = random_qubit(rng);
      auto logical = encode_qubit("c", q[0], q[1]);
      auto br = run_program(prepare_input(c, logical), c.steps, c.detectors, c.herald, EnumerationMode::Herald);
      CHECK(std::abs(total_probability(br) - 0.25) < 1e-10);
      for (const auto& b : br) {
        const std::vector<std::string> port{"c"};
        auto out = extract_qubits(b.residual, port);
        const Complex ov = std::conj(q[0]) * out[0] + std::conj(q[1]) * out[1];
        CHECK(std::abs(std::norm(ov) / b.probability - 1.0) < 1e-10);
      }
    }
  }
}

TEST_CASE("parity-check encoder") {
  const auto c = build_parity_check_encoder();
  SUBCASE("|H> -> |H>c|V>aux") {
    auto br = simulate(c, logical_input(c, std::vector<Complex>{1.0, 0.0}));
    CHECK(std::abs(total_probability(br) - 0.5) < 1e-10);
    CHECK(std::abs(fidelity_to(c, br, {0.0, 1.0, 0.0, 0.0}) - 1.0) < 1e-10);
  }
  SUBCASE("|+> -> (|HV> + |VH>)/sqrt2") {
    auto br = simulate(c, logical_input(c, std::vector<Complex>{1.0 / kRoot2, 1.0 / kRoot2}));
    CHECK(std::abs(total_probability(br) - 0.5) < 1e-10);
    CHECK(std::abs(fidelity_to(c, br, {0.0, 1.0 / kRoot2, 1.0 / kRoot2, 0.0}) - 1.0) < 1e-10);
  }
  SUBCASE("random inputs") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
      const auto q = random_qubit(rng);
      auto br = simulate(c, logical_input(c, q));
      CHECK(std::abs(total_probability(br) - 0.5) < 1e-10);
      CHECK(std::abs(fidelity_to(c, br, {0.0, q[0], q[1], 0.0}) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("PPBS chain") {
  const auto c = build_ppbs_cz_chain();
  SUBCASE("a lone control photon sees a 1/3 grey filter") {
    std::mt19937_64 rng(4);
    HeraldRule control_only;
    control_only.outputs_single_photon = {"c"};
    for (int trial = 0; trial < 5; ++trial) {
      const auto q = random_qubit(rng);
      auto br = run_program(prepare_input(c, encode_qubit("c", q[0], q[1])), c.steps, c.detectors, control_only,
                            EnumerationMode::Herald);
      REQUIRE(br.size() == 1);
      CHECK(std::abs(br[0].probability - 1.0 / 3.0) < 1e-10);
      const std::vector<std::string> port{"c"};
      auto out = extract_qubits(br[0].residual, port);
      CHECK(std::abs(std::norm(std::conj(q[0]) * out[0] + std::conj(q[1]) * out[1]) * 3.0 - 1.0) < 1e-10);
    }
  }
  SUBCASE("CZ with success 1/9, cross-checked against permanents") {
    const auto m = conditional_map(c);
    for (double p : m.column_probabilities) CHECK(std::abs(p - 1.0 / 9.0) < 1e-10);
    CHECK(std::abs(process_fidelity(m, cz_matrix()) - 1.0) < 1e-10);

    auto reg = c.full_register();
    const auto u = compose_circuit_unitary(c.elements(), *reg);
    auto occ = [&](Polarization pc, Polarization pt) {
      Occupation o(reg->size(), 0);
      o[reg->index("c", pc)] = 1;
      o[reg->index("t", pt)] = 1;
      return o;
    };
    const Complex hh = transition_amplitude({u, occ(Polarization::H, Polarization::H), occ(Polarization::H, Polarization::H)});
    const Complex vv = transition_amplitude({u, occ(Polarization::V, Polarization::V), occ(Polarization::V, Polarization::V)});
    CHECK(std::abs(vv + hh) < 1e-12);
    CHECK(std::abs(std::norm(hh) - 1.0 / 9.0) < 1e-12);
    const Matrix n = m.normalized();
    CHECK(std::abs(n(3, 3) / n(0, 0) - vv / hh) < 1e-10);
  }
}

TEST_CASE("photon budget") {
  const auto h = build_heralded_fredkin(kT2h, kT3h);
  const auto c = build_coincidence_fredkin(1.0 / 3.0, 0.5);
  CHECK(h.photon_budget() == 9);
  CHECK(c.photon_budget() == 5);
  CHECK(total_photons(prepare_input(h, basis_input(h, 5)).terms().begin()->first) == 9);
  CHECK(total_photons(prepare_input(c, basis_input(c, 5)).terms().begin()->first) == 5);
}

TEST_CASE("builders are deterministic") {
  CHECK(to_json(build_heralded_fredkin(0.3, 0.2)) == to_json(build_heralded_fredkin(0.3, 0.2)));
  CHECK(to_json(build_coincidence_fredkin(0.3, 0.2)) == to_json(build_coincidence_fredkin(0.3, 0.2)));
}

TEST_CASE("transmittances must lie strictly inside (0, 1)") {
  CHECK_THROWS_AS(build_heralded_fredkin(0.0, 0.3), ValidationError);
  CHECK_THROWS_AS(build_heralded_fredkin(0.3, 1.0), ValidationError);
  CHECK_THROWS_AS(build_coincidence_fredkin(-0.1, 0.3), ValidationError);
  CHECK_THROWS_AS(parse_variant("fast"), ConfigError);
}

TEST_CASE("heralded Fredkin at the optimum") {
  const auto c = build_heralded_fredkin(kT2h, kT3h);
  const auto m = conditional_map(c);
  const double p_max = (3.0 - 2.0 * std::numbers::sqrt2) / 32.0;

  SUBCASE("64 accepted detector records") { CHECK(m.branches.size() == 64); }

  SUBCASE("every record is the Fredkin gate with one global phase") {
    const Matrix f = ideal_fredkin();
    for (const auto& b : m.branches) {
      const Complex lambda = (f.adjoint() * b.kraus).trace() / 8.0;
      CHECK(max_abs(b.kraus - lambda * f) < 1e-12);
    }
    const Matrix n = m.normalized();
    const Complex phase = n(0, 0);
    CHECK(max_abs(n - phase * f) < 1e-9);
  }

  SUBCASE("probability per basis input") {
    for (double p : m.column_probabilities) CHECK(std::abs(p - p_max) < 1e-12);
  }

  SUBCASE("singlet picks up -1 only with control V") {
    const double s = 1.0 / kRoot2;
    std::vector<Complex> in(8);
    in[QubitVector3::index(1, 0, 1)] = s;
    in[QubitVector3::index(1, 1, 0)] = -s;
    auto br = simulate(c, logical_input(c, in));
    std::vector<Complex> neg(in.begin(), in.end());
    for (auto& x : neg) x = -x;
    CHECK(std::abs(fidelity_to(c, br, neg) - 1.0) < 1e-10);
    const auto ph = singlet_phase(c);
    CHECK(std::abs(std::abs(ph.control_flip) - std::numbers::pi) < 1e-10);
    CHECK(std::abs(ph.singlet_vs_symmetric) < 1e-10);
  }

  SUBCASE("symmetric targets pass unchanged for either control") {
    std::mt19937_64 rng(12);
    for (int ctrl = 0; ctrl < 2; ++ctrl) {
      const auto q = random_qubit(rng);
      std::vector<Complex> in(8);
      // control basis state, targets alpha|HH> + beta|VV>
      in[QubitVector3::index(ctrl, 0, 0)] = q[0];
      in[QubitVector3::index(ctrl, 1, 1)] = q[1];
      auto br = simulate(c, logical_input(c, in));
      CHECK(std::abs(fidelity_to(c, br, in) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("heralded Fredkin off balance is not unitary") {
  const auto m = conditional_map(build_heralded_fredkin(0.5, 0.5));
  CHECK(m.unitarity_error() > 1e-3);
  CHECK(m.probability_spread() > 1e-4);
}

TEST_CASE("coincidence Fredkin") {
  const auto c = build_coincidence_fredkin(1.0 / 3.0, 0.5);
  SUBCASE("1/162 and the Fredkin process") {
    const auto m = conditional_map(c);
    for (double p : m.column_probabilities) CHECK(std::abs(p - 1.0 / 162.0) < 1e-12);
    CHECK(process_fidelity(m, ideal_fredkin()) > 1.0 - 1e-12);
  }
  SUBCASE("symmetric targets: (1/18) T2 R2 R3") {
    const double s = 1.0 / kRoot2;
    std::vector<Complex> in(8);
    in[QubitVector3::index(0, 0, 0)] = s;
    in[QubitVector3::index(0, 1, 1)] = s;
    const double expected = (1.0 / 18.0) * (1.0 / 3.0) * (2.0 / 3.0) * 0.5;
    CHECK(std::abs(success_probability(c, in) - expected) < 1e-12);
  }
  SUBCASE("erasing outcome '-' without its correction leaves sigma_Z on the control") {
    auto raw = c;
    for (auto& s : raw.steps) {
      if (auto* f = std::get_if<FeedforwardStep>(&s); f && f->rule.group == "erase") f->enabled = false;
    }
    Matrix zc = Matrix::Identity(8, 8);
    for (int k = 4; k < 8; ++k) zc(k, k) = -1.0;
    const Matrix f = ideal_fredkin();
    const auto m = conditional_map(raw);
    int flipped = 0, clean = 0;
    for (const auto& b : m.branches) {
      const bool minus = b.key.find("D_erase=-") != std::string::npos;
      const Matrix target = minus ? Matrix(zc * f) : f;
      const Complex lambda = (target.adjoint() * b.kraus).trace() / 8.0;
      CHECK(max_abs(b.kraus - lambda * target) < 1e-12);
      (minus ? flipped : clean)++;
    }
    CHECK(flipped > 0);
    CHECK(clean > 0);
  }
}

TEST_CASE("circuit validation") {
  auto c = build_heralded_cz();
  CHECK_NOTHROW(validate(c));
  auto bad = c;
  bad.outputs.push_back("nowhere");
  CHECK_THROWS(validate(bad));
  auto bad_det = c;
  bad_det.detectors.push_back({"D_x", "ghost", DetectorKind::BlockD});
  CHECK_THROWS(validate(bad_det));
}

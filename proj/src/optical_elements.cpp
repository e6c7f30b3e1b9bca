#include "fredkin_lab/optical_elements.hpp"

#include <cmath>
#include <map>

#include "fredkin_lab/errors.hpp"

namespace fredkin_lab {

namespace {

constexpr Complex kI{0.0, 1.0};

double factorial(int n) {
  static const auto table = [] {
    std::array<double, 64> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table.at(static_cast<std::size_t>(n));
}

void check_transmittance(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ValidationError(std::string(what) + " transmittance " + std::to_string(t) + " outside [0,1]");
  }
}

Matrix beam_splitter_block(double t) {
  Matrix m(2, 2);
  const double st = std::sqrt(t);
  const double sr = std::sqrt(1.0 - t);
  m << st, kI * sr, kI * sr, st;
  return m;
}

// Local block over (aH, aV, bH, bV) from per-polarization 2x2 port blocks.
LocalUnitary two_port(const ModeRegister& reg, const std::string& a, const std::string& b, const Matrix& h_block,
                      const Matrix& v_block) {
  LocalUnitary out;
  out.modes = {reg.index(a, Polarization::H), reg.index(a, Polarization::V), reg.index(b, Polarization::H),
               reg.index(b, Polarization::V)};
  out.block = Matrix::Zero(4, 4);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.block(2 * r, 2 * c) = h_block(r, c);
      out.block(2 * r + 1, 2 * c + 1) = v_block(r, c);
    }
  }
  return out;
}

struct Lowering {
  const ModeRegister& reg;
  const Element& e;

  LocalUnitary operator()(const BeamSplitter& bs) const {
    auto blk = beam_splitter_block(bs.transmittance);
    return two_port(reg, e.ports[0], e.ports[1], blk, blk);
  }
  LocalUnitary operator()(const PolarizingBeamSplitter&) const {
    return two_port(reg, e.ports[0], e.ports[1], beam_splitter_block(1.0), beam_splitter_block(0.0));
  }
  LocalUnitary operator()(const PartialPolarizingBeamSplitter& p) const {
    return two_port(reg, e.ports[0], e.ports[1], beam_splitter_block(p.t_h), beam_splitter_block(p.t_v));
  }
  LocalUnitary operator()(const HalfWavePlate& w) const {
    LocalUnitary out;
    out.modes = {reg.index(e.ports[0], Polarization::H), reg.index(e.ports[0], Polarization::V)};
    const double c = std::cos(2.0 * w.theta);
    const double s = std::sin(2.0 * w.theta);
    out.block.resize(2, 2);
    out.block << c, s, s, -c;
    return out;
  }
  LocalUnitary operator()(const PhaseShifter& p) const { return phase(std::polar(1.0, p.phi)); }
  LocalUnitary operator()(const Mirror&) const { return phase(kI); }

  LocalUnitary phase(Complex f) const {
    LocalUnitary out;
    out.modes = {reg.index(e.ports[0], Polarization::H), reg.index(e.ports[0], Polarization::V)};
    out.block = Matrix::Identity(2, 2) * f;
    return out;
  }
};

}  // namespace

Element beam_splitter(std::string a, std::string b, double transmittance, std::string label) {
  return {BeamSplitter{transmittance}, {std::move(a), std::move(b)}, std::move(label)};
}
Element polarizing_beam_splitter(std::string a, std::string b, std::string label) {
  return {PolarizingBeamSplitter{}, {std::move(a), std::move(b)}, std::move(label)};
}
Element partial_polarizing_beam_splitter(std::string a, std::string b, double t_h, double t_v, std::string label) {
  return {PartialPolarizingBeamSplitter{t_h, t_v}, {std::move(a), std::move(b)}, std::move(label)};
}
Element half_wave_plate(std::string port, double theta, std::string label) {
  return {HalfWavePlate{theta}, {std::move(port)}, std::move(label)};
}
Element phase_shifter(std::string port, double phi, std::string label) {
  return {PhaseShifter{phi}, {std::move(port)}, std::move(label)};
}
Element mirror(std::string port, std::string label) { return {Mirror{}, {std::move(port)}, std::move(label)}; }

std::string kind_name(const ElementKind& kind) {
  static constexpr const char* names[] = {"bs", "pbs", "ppbs", "hwp", "ps", "mirror"};
  return names[kind.index()];
}

std::size_t port_arity(const ElementKind& kind) {
  return std::holds_alternative<BeamSplitter>(kind) || std::holds_alternative<PolarizingBeamSplitter>(kind) ||
                 std::holds_alternative<PartialPolarizingBeamSplitter>(kind)
             ? 2
             : 1;
}

void validate(const Element& element) {
  if (element.ports.size() != port_arity(element.kind)) {
    throw ValidationError(kind_name(element.kind) + " needs " + std::to_string(port_arity(element.kind)) +
                          " port(s), got " + std::to_string(element.ports.size()));
  }
  if (element.ports.size() == 2 && element.ports[0] == element.ports[1]) {
    throw ValidationError(kind_name(element.kind) + " placed twice on port " + element.ports[0]);
  }
  if (const auto* bs = std::get_if<BeamSplitter>(&element.kind)) check_transmittance(bs->transmittance, "bs");
  if (const auto* p = std::get_if<PartialPolarizingBeamSplitter>(&element.kind)) {
    check_transmittance(p->t_h, "ppbs T_H");
    check_transmittance(p->t_v, "ppbs T_V");
  }
}

double ModeUnitary::unitarity_error() const {
  const Matrix d = matrix.adjoint() * matrix - Matrix::Identity(matrix.rows(), matrix.cols());
  return d.cwiseAbs().maxCoeff();
}

ModeUnitary ModeUnitary::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return {Matrix::Identity(n, n)};
}

LocalUnitary lower_local(const Element& element, const ModeRegister& reg) {
  validate(element);
  for (const auto& p : element.ports) {
    if (!reg.has_port(p)) throw PlacementError("element " + kind_name(element.kind) + " on unknown port " + p);
  }
  return std::visit(Lowering{reg, element}, element.kind);
}

ModeUnitary lower(const Element& element, const ModeRegister& reg) {
  const auto local = lower_local(element, reg);
  auto u = ModeUnitary::identity(reg.size());
  for (std::size_t r = 0; r < local.modes.size(); ++r) {
    for (std::size_t c = 0; c < local.modes.size(); ++c) {
      u.matrix(static_cast<Eigen::Index>(local.modes[r]), static_cast<Eigen::Index>(local.modes[c])) =
          local.block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return u;
}

ModeUnitary compose_circuit_unitary(const std::vector<Element>& elements, const ModeRegister& reg) {
  auto u = ModeUnitary::identity(reg.size());
  for (const auto& e : elements) u.matrix = lower(e, reg).matrix * u.matrix;
  return u;
}

FockState apply(const FockState& state, const LocalUnitary& local) {
  const std::size_t s = local.modes.size();
  if (static_cast<std::size_t>(local.block.rows()) != s || static_cast<std::size_t>(local.block.cols()) != s) {
    throw DimensionError("local block size does not match its mode list");
  }
  for (auto m : local.modes) {
    if (m >= state.mode_count()) throw DimensionError("local unitary mode outside the register");
  }

  using Local = std::vector<std::uint8_t>;
  FockState::TermMap out;
  std::map<Local, Complex> poly;
  std::map<Local, Complex> next;
  std::vector<std::size_t> photons;

  for (const auto& [occ, amp] : state.terms()) {
    photons.clear();
    double in_norm = 1.0;
    for (std::size_t k = 0; k < s; ++k) {
      const int n = occ[local.modes[k]];
      in_norm *= factorial(n);
      photons.insert(photons.end(), static_cast<std::size_t>(n), k);
    }
    if (photons.empty()) {
      out[occ] += amp;
      continue;
    }
    // Expand prod_k (sum_j U_jk a^dag_j)^{n_k} one creation operator at a time.
    poly.clear();
    poly.emplace(Local(s, 0), amp / std::sqrt(in_norm));
    for (auto k : photons) {
      next.clear();
      for (const auto& [lo, c] : poly) {
        for (std::size_t j = 0; j < s; ++j) {
          const Complex u = local.block(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
          if (u == Complex{}) continue;
          Local l = lo;
          ++l[j];
          next[l] += c * u;
        }
      }
      poly.swap(next);
    }
    for (const auto& [lo, c] : poly) {
      double out_norm = 1.0;
      Occupation o = occ;
      for (std::size_t j = 0; j < s; ++j) {
        out_norm *= factorial(lo[j]);
        o[local.modes[j]] = lo[j];
      }
      out[o] += c * std::sqrt(out_norm);
    }
  }
  return FockState(state.register_ptr(), std::move(out));
}

FockState apply(const FockState& state, const ModeUnitary& u) {
  const auto m = state.mode_count();
  if (u.dim() != m || static_cast<std::size_t>(u.matrix.cols()) != m) {
    throw DimensionError("unitary dim " + std::to_string(u.dim()) + " != mode count " + std::to_string(m));
  }
  // Restrict to the modes the unitary actually moves.
  LocalUnitary local;
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    bool moved = false;
    for (std::size_t j = 0; j < m && !moved; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const Complex expect = i == j ? Complex{1.0} : Complex{};
      moved = u.matrix(ii, jj) != expect || u.matrix(jj, ii) != expect;
    }
    if (moved) local.modes.push_back(i);
  }
  const auto s = static_cast<Eigen::Index>(local.modes.size());
  local.block.resize(s, s);
  for (Eigen::Index r = 0; r < s; ++r) {
    for (Eigen::Index c = 0; c < s; ++c) {
      local.block(r, c) = u.matrix(static_cast<Eigen::Index>(local.modes[static_cast<std::size_t>(r)]),
                                   static_cast<Eigen::Index>(local.modes[static_cast<std::size_t>(c)]));
    }
  }
  return apply(state, local);
}

FockState apply(const FockState& state, const Element& element) {
  return apply(state, lower_local(element, state.modes()));
}

}  // namespace fredkin_lab

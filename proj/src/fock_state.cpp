#include "fredkin_lab/fock_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fredkin_lab/errors.hpp"

namespace fredkin_lab {

char to_char(Polarization p) { return p == Polarization::H ? 'H' : 'V'; }

ModeRegister::ModeRegister(std::vector<ModeId> modes) : modes_(std::move(modes)) {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (!lookup_.emplace(modes_[i], i).second) {
      throw CompositionError("duplicate mode " + modes_[i].spatial + ":" + to_char(modes_[i].pol));
    }
  }
}

ModeRegister ModeRegister::from_ports(std::span<const std::string> ports) {
  std::vector<ModeId> modes;
  modes.reserve(2 * ports.size());
  for (const auto& p : ports) {
    modes.push_back({p, Polarization::H});
    modes.push_back({p, Polarization::V});
  }
  return ModeRegister(std::move(modes));
}

ModeRegister ModeRegister::from_ports(std::initializer_list<std::string> ports) {
  std::vector<std::string> v(ports);
  return from_ports(std::span<const std::string>(v));
}

std::optional<std::size_t> ModeRegister::find(const ModeId& id) const {
  auto it = lookup_.find(id);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ModeRegister::find(const std::string& spatial, Polarization pol) const {
  return find(ModeId{spatial, pol});
}

std::size_t ModeRegister::index(const std::string& spatial, Polarization pol) const {
  auto i = find(spatial, pol);
  if (!i) throw PlacementError("unknown mode " + spatial + ":" + to_char(pol));
  return *i;
}

bool ModeRegister::has_port(const std::string& spatial) const {
  return find(spatial, Polarization::H) || find(spatial, Polarization::V);
}

std::vector<std::string> ModeRegister::ports() const {
  std::vector<std::string> out;
  for (const auto& m : modes_) {
    if (out.empty() || out.back() != m.spatial) {
      if (std::find(out.begin(), out.end(), m.spatial) == out.end()) out.push_back(m.spatial);
    }
  }
  return out;
}

ModeRegister ModeRegister::without(std::span<const std::size_t> dropped) const {
  std::vector<bool> drop(modes_.size(), false);
  for (auto i : dropped) {
    if (i >= modes_.size()) throw DimensionError("mode index out of range");
    drop[i] = true;
  }
  std::vector<ModeId> kept;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (!drop[i]) kept.push_back(modes_[i]);
  }
  return ModeRegister(std::move(kept));
}

RegisterPtr make_register(ModeRegister reg) { return std::make_shared<const ModeRegister>(std::move(reg)); }

RegisterPtr make_register(std::initializer_list<std::string> ports) {
  return make_register(ModeRegister::from_ports(ports));
}

RegisterPtr make_register(std::span<const std::string> ports) {
  return make_register(ModeRegister::from_ports(ports));
}

int total_photons(const Occupation& occ) {
  return std::accumulate(occ.begin(), occ.end(), 0, [](int s, std::uint8_t n) { return s + n; });
}

FockState::FockState(RegisterPtr reg, TermMap terms) : register_(std::move(reg)) {
  if (!register_) throw DimensionError("FockState requires a register");
  const auto m = register_->size();
  for (auto& [occ, amp] : terms) {
    if (occ.size() != m) {
      throw DimensionError("occupation length " + std::to_string(occ.size()) + " != mode count " +
                           std::to_string(m));
    }
    for (auto n : occ) {
      if (n > kMaxPhotonsPerMode) throw ValidationError("more than 9 photons in one mode");
    }
    if (std::abs(amp) >= kPruneThreshold) terms_.emplace(occ, amp);
  }
}

FockState FockState::vacuum(RegisterPtr reg) {
  Occupation occ(reg->size(), 0);
  return FockState(std::move(reg), {{occ, Complex{1.0}}});
}

double FockState::norm2() const {
  double s = 0.0;
  for (const auto& [occ, amp] : terms_) s += std::norm(amp);
  return s;
}

Complex FockState::amplitude(const Occupation& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? Complex{} : it->second;
}

FockState FockState::scaled(Complex factor) const {
  TermMap out;
  for (const auto& [occ, amp] : terms_) out.emplace(occ, amp * factor);
  return FockState(register_, std::move(out));
}

FockState FockState::plus(const FockState& other) const {
  if (!(modes() == other.modes())) throw DimensionError("plus: registers differ");
  TermMap out = terms_;
  for (const auto& [occ, amp] : other.terms_) out[occ] += amp;
  return FockState(register_, std::move(out));
}

FockState FockState::normalized() const {
  const double n = norm2();
  if (n == 0.0) return *this;
  return scaled(1.0 / std::sqrt(n));
}

FockState make_basis_state(RegisterPtr reg, const Occupation& occ) {
  if (occ.size() != reg->size()) throw DimensionError("basis occupation length mismatch");
  return FockState(std::move(reg), {{occ, Complex{1.0}}});
}

FockState tensor(const FockState& a, const FockState& b) {
  std::vector<ModeId> modes = a.modes().modes();
  for (const auto& m : b.modes().modes()) {
    if (a.modes().find(m)) throw CompositionError("tensor: overlapping mode " + m.spatial);
    modes.push_back(m);
  }
  auto reg = make_register(ModeRegister(std::move(modes)));
  FockState::TermMap out;
  for (const auto& [oa, xa] : a.terms()) {
    for (const auto& [ob, xb] : b.terms()) {
      Occupation occ = oa;
      occ.insert(occ.end(), ob.begin(), ob.end());
      out.emplace(std::move(occ), xa * xb);
    }
  }
  return FockState(reg, std::move(out));
}

Complex inner(const FockState& a, const FockState& b) {
  if (!(a.modes() == b.modes())) throw DimensionError("inner: registers differ");
  Complex s{};
  // Both maps are sorted; walk them in lockstep.
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      s += std::conj(ia->second) * ib->second;
      ++ia;
      ++ib;
    }
  }
  return s;
}

double max_abs_difference(const FockState& a, const FockState& b) {
  if (!(a.modes() == b.modes())) throw DimensionError("max_abs_difference: registers differ");
  double worst = 0.0;
  for (const auto& [occ, amp] : a.terms()) worst = std::max(worst, std::abs(amp - b.amplitude(occ)));
  for (const auto& [occ, amp] : b.terms()) {
    if (!a.terms().count(occ)) worst = std::max(worst, std::abs(amp));
  }
  return worst;
}

FockState embed(const FockState& state, RegisterPtr target) {
  const auto& src = state.modes();
  std::vector<std::size_t> where(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto j = target->find(src[i]);
    if (!j) throw CompositionError("embed: target register lacks mode " + src[i].spatial);
    where[i] = *j;
  }
  FockState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    Occupation big(target->size(), 0);
    for (std::size_t i = 0; i < occ.size(); ++i) big[where[i]] = occ[i];
    out.emplace(std::move(big), amp);
  }
  return FockState(std::move(target), std::move(out));
}

namespace {

FockState two_photon_pair(const std::string& a, const std::string& b, Complex hh, Complex hv, Complex vh,
                          Complex vv) {
  if (a == b) throw CompositionError("Bell pair needs two distinct ports");
  auto reg = make_register({a, b});
  // Mode order: aH aV bH bV.
  FockState::TermMap t;
  t[{1, 0, 1, 0}] = hh;
  t[{1, 0, 0, 1}] = hv;
  t[{0, 1, 1, 0}] = vh;
  t[{0, 1, 0, 1}] = vv;
  return FockState(reg, std::move(t));
}

}  // namespace

FockState make_epr_pair(const std::string& port_a, const std::string& port_b) {
  const double s = 1.0 / std::sqrt(2.0);
  return two_photon_pair(port_a, port_b, s, 0.0, 0.0, s);
}

FockState make_singlet(const std::string& port_a, const std::string& port_b) {
  const double s = 1.0 / std::sqrt(2.0);
  return two_photon_pair(port_a, port_b, 0.0, s, -s, 0.0);
}

FockState encode_qubit(const std::string& port, Complex alpha, Complex beta, bool auto_normalize) {
  const double n = std::norm(alpha) + std::norm(beta);
  if (auto_normalize) {
    if (n == 0.0) throw ValidationError("encode_qubit: zero amplitudes");
    alpha /= std::sqrt(n);
    beta /= std::sqrt(n);
  } else if (std::abs(n - 1.0) > 1e-9) {
    throw ValidationError("encode_qubit: |alpha|^2+|beta|^2 = " + std::to_string(n));
  }
  auto reg = make_register({port});
  return FockState(reg, {{{1, 0}, alpha}, {{0, 1}, beta}});
}

FockState encode_qubits(std::span<const std::string> ports, std::span<const Complex> amplitudes) {
  const std::size_t n = ports.size();
  if (amplitudes.size() != (std::size_t{1} << n)) throw DimensionError("encode_qubits: need 2^n amplitudes");
  auto reg = make_register(ports);
  FockState::TermMap t;
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    Occupation occ(2 * n, 0);
    for (std::size_t q = 0; q < n; ++q) {
      const bool v = (k >> (n - 1 - q)) & 1U;
      occ[2 * q + (v ? 1 : 0)] = 1;
    }
    t.emplace(std::move(occ), amplitudes[k]);
  }
  return FockState(reg, std::move(t));
}

double QubitVector3::norm2() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

std::vector<Complex> extract_qubits(const FockState& state, std::span<const std::string> ports) {
  const auto& reg = state.modes();
  const std::size_t n = ports.size();
  std::vector<std::size_t> h(n), v(n);
  std::vector<bool> is_output(reg.size(), false);
  for (std::size_t q = 0; q < n; ++q) {
    h[q] = reg.index(ports[q], Polarization::H);
    v[q] = reg.index(ports[q], Polarization::V);
    is_output[h[q]] = is_output[v[q]] = true;
  }
  std::vector<Complex> out(std::size_t{1} << n);
  for (const auto& [occ, amp] : state.terms()) {
    std::size_t idx = 0;
    bool inside = true;
    for (std::size_t q = 0; q < n && inside; ++q) {
      if (occ[h[q]] + occ[v[q]] != 1) inside = false;
      idx = (idx << 1) | (occ[v[q]] ? 1U : 0U);
    }
    if (!inside) continue;
    for (std::size_t m = 0; m < occ.size(); ++m) {
      if (!is_output[m] && occ[m] != 0) {
        throw LeakageError("photon in non-output mode " + reg[m].spatial + ":" + to_char(reg[m].pol));
      }
    }
    out[idx] += amp;
  }
  return out;
}

QubitVector3 extract_qubit_vector(const FockState& state, const std::array<std::string, 3>& ports) {
  auto v = extract_qubits(state, ports);
  QubitVector3 q;
  std::copy(v.begin(), v.end(), q.amplitudes.begin());
  return q;
}

}  // namespace fredkin_lab

#include "fredkin_lab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <random>
#include <thread>

#include "fredkin_lab/errors.hpp"

namespace fredkin_lab {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

template <typename R>
void check_unit(R t, const char* name) {
  if (!(t >= R(0) && t <= R(1))) {
    throw DomainError(std::string(name) + " = " + std::to_string(static_cast<double>(t)) + " outside [0,1]");
  }
}

// Closed forms, generic so the optimiser can run them in extended precision.
template <typename R>
R p_minus_t(GateVariant v, R T2, R T3) {
  check_unit(T2, "T2");
  check_unit(T3, "T3");
  // R2 * QND(1/2) * CZ(1/4) * CZ(1/4) * T3, or R2 * T3 / 54 in the coincidence basis.
  return v == GateVariant::Heralded ? (R(1) - T2) * T3 / R(32) : (R(1) - T2) * T3 / R(54);
}

template <typename R>
R p_plus_t(GateVariant v, R T2, R T3) {
  check_unit(T2, "T2");
  check_unit(T3, "T3");
  const R core = T2 * (R(1) - T2) * (R(1) - T3);
  return v == GateVariant::Heralded ? core / R(32) : core / R(18);
}

template <typename R>
R balance_t(R T3, GateVariant v) {
  const R hi = v == GateVariant::Heralded ? R(0.5) : R(0.75);
  if (!(T3 >= R(0) && T3 <= hi)) {
    throw DomainError("T3 = " + std::to_string(static_cast<double>(T3)) + " has no balanced T2 in [0,1] for the " +
                      to_string(v) + " gate");
  }
  return v == GateVariant::Heralded ? T3 / (R(1) - T3) : T3 / (R(3) * (R(1) - T3));
}

Matrix kraus_zero(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return Matrix::Zero(n, n);
}

std::vector<Complex> ket(std::initializer_list<std::pair<std::size_t, Complex>> entries, std::size_t dim) {
  std::vector<Complex> v(dim);
  for (const auto& [i, a] : entries) v[i] = a;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

Matrix ideal_fredkin() {
  Matrix f = Matrix::Identity(8, 8);
  f(5, 5) = f(6, 6) = 0.0;
  f(5, 6) = f(6, 5) = 1.0;
  return f;
}

Matrix swap_gate() {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = s(3, 3) = 1.0;
  s(1, 2) = s(2, 1) = 1.0;
  return s;
}

SymmetryProjectors symmetry_projectors() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  SymmetryProjectors p;
  p.pi_minus = psi * psi.adjoint();
  p.pi_plus = Matrix::Identity(4, 4) - p.pi_minus;
  return p;
}

SwapCheck swap_decomposition_check() {
  const auto p = symmetry_projectors();
  const Matrix id = Matrix::Identity(4, 4);
  const double swap_err = (swap_gate() - (p.pi_plus - p.pi_minus)).cwiseAbs().maxCoeff();
  const double idem = std::max((p.pi_minus * p.pi_minus - p.pi_minus).cwiseAbs().maxCoeff(),
                               (p.pi_plus * p.pi_plus - p.pi_plus).cwiseAbs().maxCoeff());
  const double orth = (p.pi_plus * p.pi_minus).cwiseAbs().maxCoeff();
  const double complete = (p.pi_plus + p.pi_minus - id).cwiseAbs().maxCoeff();
  SwapCheck c;
  c.max_error = std::max({swap_err, idem, orth, complete});
  c.ok = c.max_error <= 1e-15;
  c.detail = "swap=" + std::to_string(swap_err) + " idempotent=" + std::to_string(idem) +
             " orthogonal=" + std::to_string(orth) + " complete=" + std::to_string(complete);
  return c;
}

// ---------------------------------------------------------------------------

Matrix ConditionalMap::normalized() const {
  const double f2 = matrix.squaredNorm();
  if (f2 == 0.0) return matrix;
  return matrix * std::sqrt(static_cast<double>(dim()) / f2);
}

double ConditionalMap::unitarity_error() const {
  const Matrix m = normalized();
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

double ConditionalMap::probability_spread() const {
  if (column_probabilities.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(column_probabilities.begin(), column_probabilities.end());
  return *hi - *lo;
}

ConditionalMap conditional_map(const Circuit& circuit) {
  const std::size_t d = std::size_t{1} << circuit.qubit_count();
  std::map<std::string, Matrix> kraus;
  ConditionalMap out;
  out.column_probabilities.assign(d, 0.0);

  for (std::size_t j = 0; j < d; ++j) {
    for (const auto& b : simulate(circuit, basis_input(circuit, j))) {
      auto col = extract_qubits(b.residual, circuit.outputs);
      auto [it, fresh] = kraus.try_emplace(b.key(), kraus_zero(d));
      for (std::size_t i = 0; i < d; ++i) {
        it->second(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
      }
      out.column_probabilities[j] += b.probability;
    }
  }

  double total_f2 = 0.0;
  const Matrix* strongest = nullptr;
  for (auto& [key, k] : kraus) {
    out.branches.push_back({key, k});
    total_f2 += k.squaredNorm();
    if (!strongest || k.squaredNorm() > strongest->squaredNorm()) strongest = &k;
  }
  out.matrix = kraus_zero(d);
  if (strongest) {
    for (const auto& b : out.branches) {
      const Complex ov = (strongest->adjoint() * b.kraus).trace();
      const Complex align = std::abs(ov) > 0.0 ? std::conj(ov) / std::abs(ov) : Complex{1.0};
      out.matrix += align * b.kraus;
    }
    const double f2 = out.matrix.squaredNorm();
    if (f2 > 0.0) out.matrix *= std::sqrt(total_f2 / f2);
  }
  double s = 0.0;
  for (double p : out.column_probabilities) s += p;
  out.success_probability = s / static_cast<double>(d);
  return out;
}

double process_fidelity(const ConditionalMap& map, const Matrix& ideal) {
  if (ideal.rows() != static_cast<Eigen::Index>(map.dim())) throw DimensionError("fidelity: dimension mismatch");
  const double d = static_cast<double>(map.dim());
  double num = 0.0;
  for (const auto& b : map.branches) num += std::norm((ideal.adjoint() * b.kraus).trace());
  double p_sum = 0.0;
  for (double p : map.column_probabilities) p_sum += p;
  if (p_sum <= 0.0) throw ValidationError("fidelity of a map that never succeeds");
  return num / (d * p_sum);
}

double process_fidelity(const Matrix& map, const Matrix& ideal) {
  if (map.rows() != ideal.rows() || map.cols() != ideal.cols()) throw DimensionError("fidelity: dimension mismatch");
  const double f2 = map.squaredNorm();
  if (f2 <= 0.0) throw ValidationError("fidelity of a zero map");
  const double d = static_cast<double>(map.rows());
  return std::norm((ideal.adjoint() * map).trace()) / (d * f2);
}

double success_probability(const Circuit& circuit, std::span<const Complex> logical_amplitudes) {
  return total_probability(simulate(circuit, logical_input(circuit, logical_amplitudes)));
}

std::vector<std::vector<Complex>> random_pure_states(std::size_t dim, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<Complex>> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Complex> v(dim);
    double n = 0.0;
    for (auto& a : v) {
      a = Complex(g(rng), g(rng));
      n += std::norm(a);
    }
    for (auto& a : v) a /= std::sqrt(n);
    out.push_back(std::move(v));
  }
  return out;
}

SectorProbabilities sector_probabilities(const Circuit& fredkin) {
  if (fredkin.qubit_count() != 3) throw ConfigError("sector probabilities need a three-qubit gate");
  const double s = 1.0 / std::sqrt(2.0);
  // Control H: indices 0..3 are |t1 t2> = HH, HV, VH, VV.
  const auto phi_plus = ket({{0, s}, {3, s}}, 8);
  const auto psi_minus = ket({{1, s}, {2, -s}}, 8);
  return {success_probability(fredkin, phi_plus), success_probability(fredkin, psi_minus)};
}

SingletPhase singlet_phase(const Circuit& fredkin) {
  if (fredkin.qubit_count() != 3) throw ConfigError("singlet phase needs a three-qubit gate");
  const double s = 1.0 / std::sqrt(2.0);
  const auto h_singlet = ket({{1, s}, {2, -s}}, 8);
  const auto v_singlet = ket({{5, s}, {6, -s}}, 8);
  const auto h_symmetric = ket({{0, s}, {3, s}}, 8);

  auto overlaps = [&](const std::vector<Complex>& in) {
    std::map<std::string, Complex> by_key;
    for (const auto& b : simulate(fredkin, logical_input(fredkin, in))) {
      const auto out = extract_qubits(b.residual, fredkin.outputs);
      Complex ov{};
      for (std::size_t i = 0; i < 8; ++i) ov += std::conj(in[i]) * out[i];
      by_key[b.key()] = ov;
    }
    return by_key;
  };
  const auto oh = overlaps(h_singlet);
  const auto ov = overlaps(v_singlet);
  const auto os = overlaps(h_symmetric);

  SingletPhase r;
  bool first = true;
  double strongest = -1.0;
  std::vector<std::pair<double, double>> per_branch;
  for (const auto& [key, a_h] : oh) {
    auto iv = ov.find(key);
    auto is = os.find(key);
    if (iv == ov.end() || is == os.end() || std::abs(a_h) == 0.0) continue;
    const double flip = wrap_angle(std::arg(iv->second / a_h));
    const double sym = wrap_angle(std::arg(a_h / is->second));
    per_branch.emplace_back(flip, sym);
    if (first || std::abs(a_h) > strongest) {
      strongest = std::abs(a_h);
      r.control_flip = flip;
      r.singlet_vs_symmetric = sym;
      first = false;
    }
  }
  if (per_branch.empty()) throw ValidationError("singlet phase: no record accepted all three inputs");
  for (const auto& [flip, sym] : per_branch) {
    r.max_branch_deviation = std::max({r.max_branch_deviation, std::abs(wrap_angle(flip - r.control_flip)),
                                       std::abs(wrap_angle(sym - r.singlet_vs_symmetric))});
  }
  return r;
}

// ---------------------------------------------------------------------------

double p_minus_heralded(double T2, double T3) { return p_minus_t(GateVariant::Heralded, T2, T3); }
double p_plus_heralded(double T2, double T3) { return p_plus_t(GateVariant::Heralded, T2, T3); }
double p_minus_coinc(double T2, double T3) { return p_minus_t(GateVariant::Coincidence, T2, T3); }
double p_plus_coinc(double T2, double T3) { return p_plus_t(GateVariant::Coincidence, T2, T3); }
double p_minus(GateVariant v, double T2, double T3) { return p_minus_t(v, T2, T3); }
double p_plus(GateVariant v, double T2, double T3) { return p_plus_t(v, T2, T3); }

double balance_T2(double T3, GateVariant variant) { return balance_t(T3, variant); }

double max_balanced_T3(GateVariant variant) { return variant == GateVariant::Heralded ? 0.5 : 0.75; }

double balanced_success_probability(double T3, GateVariant variant) {
  return p_minus(variant, balance_T2(T3, variant), T3);
}

GoldenResult golden_section_maximize(const std::function<long double(long double)>& f, long double lo,
                                     long double hi, long double tol) {
  const long double inv_phi = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  long double a = lo, b = hi;
  long double x1 = b - inv_phi * (b - a);
  long double x2 = a + inv_phi * (b - a);
  long double f1 = f(x1), f2 = f(x2);
  int it = 0;
  while (b - a > tol && it < 500) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
    ++it;
  }
  GoldenResult r;
  r.x = (a + b) / 2.0L;
  r.value = f(r.x);
  r.iterations = it;
  return r;
}

Optimum optimize_T3(GateVariant variant) {
  Optimum o;
  if (variant == GateVariant::Heralded) {
    o.closed_form.T3 = 1.0 - 1.0 / std::numbers::sqrt2;
    o.closed_form.T2 = std::numbers::sqrt2 - 1.0;
    o.closed_form.probability = (3.0 - 2.0 * std::numbers::sqrt2) / 32.0;
  } else {
    o.closed_form.T3 = 0.5;
    o.closed_form.T2 = 1.0 / 3.0;
    o.closed_form.probability = 1.0 / 162.0;
  }
  const long double hi = max_balanced_T3(variant);
  auto objective = [variant](long double t3) { return p_minus_t(variant, balance_t(t3, variant), t3); };
  const auto g = golden_section_maximize(objective, 0.0L, hi);
  o.numeric.T3 = static_cast<double>(g.x);
  o.numeric.T2 = static_cast<double>(balance_t(g.x, variant));
  o.numeric.probability = static_cast<double>(g.value);
  o.iterations = g.iterations;
  return o;
}

// ---------------------------------------------------------------------------

FeasibilityReport spdc_feasibility(double p_t, double p_c, FeasibilityThresholds thresholds) {
  if (!(p_t > 0.0 && p_t < 1.0)) throw ValidationError("p_t must lie in (0,1)");
  if (!(p_c > 0.0 && p_c < 1.0)) throw ValidationError("p_c must lie in (0,1)");
  FeasibilityReport r;
  r.p_t = p_t;
  r.p_c = p_c;
  r.correct_rate = p_t * p_c;
  r.false_rate = p_t * p_t;
  r.signal_to_noise = r.correct_rate / r.false_rate;
  r.suppressed = p_c / p_t >= thresholds.min_ratio && p_c <= thresholds.max_p_c;
  return r;
}

ReferenceConstants reference_constants() {
  ReferenceConstants c;
  c.heralded_p_max = (3.0 - 2.0 * std::numbers::sqrt2) / 32.0;
  c.ggr_heralded_estimate = c.heralded_p_max / c.heralded_advantage_vs_ggr;
  c.coincidence_p_max = 1.0 / 162.0;
  c.coincidence_ratio = c.coincidence_p_max / c.ggr_coincidence;
  return c;
}

// ---------------------------------------------------------------------------

std::size_t default_thread_count() {
  std::size_t n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("FREDKIN_LAB_THREADS")) {
    const long v = std::strtol(cap, nullptr, 10);
    if (v > 0) n = std::min(n, static_cast<std::size_t>(v));
  }
  return n;
}

std::vector<SweepRow> sweep(GateVariant variant, std::size_t points, std::size_t threads) {
  if (points < 2) throw ConfigError("sweep needs at least 2 grid points");
  const double hi = max_balanced_T3(variant);
  std::vector<SweepRow> rows(points);
  for (std::size_t i = 0; i < points; ++i) {
    auto& r = rows[i];
    r.T3 = hi * static_cast<double>(i) / static_cast<double>(points - 1);
    r.T2 = balance_T2(r.T3, variant);
    r.p_formula = p_minus(variant, r.T2, r.T3);
    r.feasible = r.T2 > 0.0 && r.T2 < 1.0 && r.T3 > 0.0 && r.T3 < 1.0;
    if (!r.feasible) r.p_simulated = r.fidelity = std::nan("");
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points; i = next++) {
      auto& r = rows[i];
      if (!r.feasible) continue;
      const auto map = conditional_map(build_fredkin(variant, r.T2, r.T3));
      r.p_simulated = map.success_probability;
      r.fidelity = process_fidelity(map, ideal_fredkin());
    }
  };
  const std::size_t n = std::min(points, threads == 0 ? default_thread_count() : threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace fredkin_lab

#include "fredkin_lab/permanent_oracle.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "fredkin_lab/errors.hpp"

namespace fredkin_lab {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// All occupations of `modes` modes holding exactly `photons` photons.
void shell(std::size_t modes, int photons, Occupation& cur, std::size_t pos, std::vector<Occupation>& out) {
  if (modes == 0) {
    if (photons == 0) out.push_back(cur);
    return;
  }
  if (pos + 1 == modes) {
    cur[pos] = static_cast<std::uint8_t>(photons);
    out.push_back(cur);
    return;
  }
  for (int n = photons; n >= 0; --n) {
    cur[pos] = static_cast<std::uint8_t>(n);
    shell(modes, photons - n, cur, pos + 1, out);
  }
}

}  // namespace

Complex permanent(const Matrix& m, kernels::Isa isa) {
  if (m.rows() != m.cols()) throw DimensionError("permanent of a non-square matrix");
  const auto n = static_cast<std::size_t>(m.rows());
  if (n > kMaxPermanentSize) throw CapacityError("permanent limited to N <= 20");
  std::vector<double> re(n * n), im(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      const Complex x = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      re[c * n + r] = x.real();
      im[c * n + r] = x.imag();
    }
  }
  return kernels::ryser(re.data(), im.data(), n, isa);
}

Complex permanent(const Matrix& m) { return permanent(m, kernels::detected_isa()); }

Complex transition_amplitude(const ScatteringProblem& p) {
  const auto dim = p.unitary.dim();
  if (p.input.size() != dim || p.output.size() != dim) throw DimensionError("occupation length != unitary dim");
  const int n = total_photons(p.input);
  if (n != total_photons(p.output)) return {};

  std::vector<Eigen::Index> rows, cols;
  double norm = 1.0;
  for (std::size_t k = 0; k < dim; ++k) {
    cols.insert(cols.end(), p.input[k], static_cast<Eigen::Index>(k));
    rows.insert(rows.end(), p.output[k], static_cast<Eigen::Index>(k));
    norm *= factorial(p.input[k]) * factorial(p.output[k]);
  }
  Matrix sub(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) sub(r, c) = p.unitary.matrix(rows[r], cols[c]);
  }
  return permanent(sub) / std::sqrt(norm);
}

FockState oracle_evolve(const ModeUnitary& u, const FockState& input) {
  const auto m = input.mode_count();
  if (u.dim() != m) throw DimensionError("oracle_evolve: unitary dim != mode count");
  if (m > kOracleMaxModes) throw CapacityError("oracle_evolve limited to 8 modes");

  std::map<int, std::vector<Occupation>> shells;
  for (const auto& [occ, amp] : input.terms()) {
    const int n = total_photons(occ);
    if (n > kOracleMaxPhotons) throw CapacityError("oracle_evolve limited to 4 photons");
    if (!shells.count(n)) {
      Occupation cur(m, 0);
      shell(m, n, cur, 0, shells[n]);
    }
  }
  FockState::TermMap out;
  for (const auto& [occ, amp] : input.terms()) {
    for (const auto& target : shells[total_photons(occ)]) {
      out[target] += amp * transition_amplitude({u, occ, target});
    }
  }
  return FockState(input.register_ptr(), std::move(out));
}

}  // namespace fredkin_lab

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "fredkin_lab/fock_state.hpp"
#include "fredkin_lab/optical_elements.hpp"

namespace test_support {

using fredkin_lab::Complex;
using fredkin_lab::Matrix;

inline const double kRoot2 = std::sqrt(2.0);

// QR of a complex Gaussian matrix with the R-diagonal phases folded back in.
inline Matrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix z(n, n);
  for (Eigen::Index r = 0; r < z.rows(); ++r)
    for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < z.cols(); ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

inline Matrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline fredkin_lab::FockState state(const fredkin_lab::RegisterPtr& reg,
                                    std::initializer_list<std::pair<fredkin_lab::Occupation, Complex>> terms) {
  fredkin_lab::FockState::TermMap t;
  for (const auto& [occ, amp] : terms) t[occ] += amp;
  return fredkin_lab::FockState(reg, std::move(t));
}

}  // namespace test_support

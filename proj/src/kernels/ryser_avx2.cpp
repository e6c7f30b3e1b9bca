#include <immintrin.h>

#include <bit>
#include <cstdint>
#include <vector>

#include "fredkin_lab/kernels/permanent_kernels.hpp"

namespace fredkin_lab::kernels {

namespace {

// Lane-wise complex multiply of split planes: (ar + i ai) * (br + i bi).
inline void cmul(__m256d& ar, __m256d& ai, __m256d br, __m256d bi) {
  const __m256d r = _mm256_fmsub_pd(ar, br, _mm256_mul_pd(ai, bi));
  const __m256d i = _mm256_fmadd_pd(ar, bi, _mm256_mul_pd(ai, br));
  ar = r;
  ai = i;
}

}  // namespace

// Rows are processed four at a time; padded rows hold a constant row sum of 1
// so they drop out of the product.
std::complex<double> ryser_avx2(const double* re, const double* im, std::size_t n) {
  if (n == 0) return {1.0, 0.0};
  const std::size_t blocks = (n + 3) / 4;
  const std::size_t padded = blocks * 4;

  std::vector<double> col_re(padded * n, 0.0), col_im(padded * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      col_re[c * padded + r] = re[c * n + r];
      col_im[c * padded + r] = im[c * n + r];
    }
  }
  std::vector<double> sum_re(padded, 0.0), sum_im(padded, 0.0);
  for (std::size_t r = n; r < padded; ++r) sum_re[r] = 1.0;

  double total_re = 0.0, total_im = 0.0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  alignas(32) double lr[4], li[4];
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const auto col = static_cast<std::size_t>(std::countr_zero(k));
    gray ^= std::uint64_t{1} << col;
    const __m256d s = _mm256_set1_pd((gray >> col) & 1U ? 1.0 : -1.0);
    const double* cr = col_re.data() + col * padded;
    const double* ci = col_im.data() + col * padded;

    __m256d p_re = _mm256_set1_pd(1.0);
    __m256d p_im = _mm256_setzero_pd();
    for (std::size_t b = 0; b < padded; b += 4) {
      __m256d sr = _mm256_fmadd_pd(s, _mm256_loadu_pd(cr + b), _mm256_loadu_pd(sum_re.data() + b));
      __m256d si = _mm256_fmadd_pd(s, _mm256_loadu_pd(ci + b), _mm256_loadu_pd(sum_im.data() + b));
      _mm256_storeu_pd(sum_re.data() + b, sr);
      _mm256_storeu_pd(sum_im.data() + b, si);
      cmul(p_re, p_im, sr, si);
    }
    _mm256_store_pd(lr, p_re);
    _mm256_store_pd(li, p_im);
    double pr = lr[0], pi = li[0];
    for (int l = 1; l < 4; ++l) {
      const double t = pr * lr[l] - pi * li[l];
      pi = pr * li[l] + pi * lr[l];
      pr = t;
    }
    if (std::popcount(gray) % 2 == 1) {
      total_re -= pr;
      total_im -= pi;
    } else {
      total_re += pr;
      total_im += pi;
    }
  }
  if (n % 2 == 1) return {-total_re, -total_im};
  return {total_re, total_im};
}

}  // namespace fredkin_lab::kernels

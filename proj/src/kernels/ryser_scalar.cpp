#include <bit>
#include <cstdint>
#include <vector>

#include "fredkin_lab/kernels/permanent_kernels.hpp"

namespace fredkin_lab::kernels {

// per(A) = (-1)^n sum_{S} (-1)^{|S|} prod_r sum_{c in S} a_rc, walking the
// subsets S in Gray-code order so each step adds or removes one column.
std::complex<double> ryser_scalar(const double* re, const double* im, std::size_t n) {
  if (n == 0) return {1.0, 0.0};
  std::vector<double> sum_re(n, 0.0), sum_im(n, 0.0);
  double total_re = 0.0, total_im = 0.0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const auto col = static_cast<std::size_t>(std::countr_zero(k));
    gray ^= std::uint64_t{1} << col;
    const double s = (gray >> col) & 1U ? 1.0 : -1.0;
    const double* cr = re + col * n;
    const double* ci = im + col * n;
    double p_re = 1.0, p_im = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      sum_re[r] += s * cr[r];
      sum_im[r] += s * ci[r];
      const double t = p_re * sum_re[r] - p_im * sum_im[r];
      p_im = p_re * sum_im[r] + p_im * sum_re[r];
      p_re = t;
    }
    if (std::popcount(gray) % 2 == 1) {
      total_re -= p_re;
      total_im -= p_im;
    } else {
      total_re += p_re;
      total_im += p_im;
    }
  }
  if (n % 2 == 1) return {-total_re, -total_im};
  return {total_re, total_im};
}

}  // namespace fredkin_lab::kernels

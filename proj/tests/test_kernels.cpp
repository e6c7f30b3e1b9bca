#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "fredkin_lab/kernels/permanent_kernels.hpp"

using namespace fredkin_lab::kernels;

namespace {

struct Planes {
  std::vector<double> re, im;
};

Planes random_planes(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Planes p{std::vector<double>(n * n), std::vector<double>(n * n)};
  for (std::size_t k = 0; k < n * n; ++k) {
    p.re[k] = g(rng);
    p.im[k] = g(rng);
  }
  return p;
}

}  // namespace

TEST_CASE("dispatch") {
  CHECK(isa_available(Isa::Scalar));
  const char* forced = std::getenv("FREDKIN_LAB_ISA");
  if (forced && std::string(forced) == "scalar") CHECK(detected_isa() == Isa::Scalar);
  CHECK(isa_available(detected_isa()));
  CHECK(to_string(Isa::Scalar) == "scalar");
  CHECK(to_string(Isa::Avx2) == "avx2");
}

TEST_CASE("scalar kernel on known matrices") {
  const double re[] = {1, 3, 2, 4};  // column-major [[1,2],[3,4]]
  const double im[] = {0, 0, 0, 0};
  CHECK(std::abs(ryser_scalar(re, im, 2) - std::complex<double>(10.0)) < 1e-14);
  CHECK(ryser_scalar(nullptr, nullptr, 0) == std::complex<double>(1.0));
}

TEST_CASE("every available variant agrees with the scalar reference") {
  std::mt19937_64 rng(99);
  for (std::size_t n = 1; n <= 14; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto p = random_planes(n, rng);
      const auto ref = ryser_scalar(p.re.data(), p.im.data(), n);
      // Ryser cancels heavily on random inputs; bound by the size of the summed terms.
      double scale = 1.0;
      for (std::size_t r = 0; r < n; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < n; ++c) row += std::hypot(p.re[c * n + r], p.im[c * n + r]);
        scale *= row;
      }
      for (Isa isa : {Isa::Scalar, Isa::Avx2}) {
        const auto got = ryser(p.re.data(), p.im.data(), n, isa);
        CHECK(std::abs(got - ref) <= 1e-12 * scale);
      }
#ifdef FREDKIN_LAB_HAVE_AVX2
      if (isa_available(Isa::Avx2)) {
        CHECK(std::abs(ryser_avx2(p.re.data(), p.im.data(), n) - ref) <= 1e-12 * scale);
      }
#endif
      CHECK(std::abs(ryser(p.re.data(), p.im.data(), n) - ref) <= 1e-12 * scale);
    }
  }
}

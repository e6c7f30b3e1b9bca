#include <cstdlib>
#include <string>

#include "fredkin_lab/kernels/permanent_kernels.hpp"

namespace fredkin_lab::kernels {

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(FREDKIN_LAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  static const Isa isa = [] {
    if (const char* forced = std::getenv("FREDKIN_LAB_ISA"); forced && std::string(forced) == "scalar") {
      return Isa::Scalar;
    }
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

std::complex<double> ryser(const double* re, const double* im, std::size_t n, Isa isa) {
#ifdef FREDKIN_LAB_HAVE_AVX2
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return ryser_avx2(re, im, n);
#else
  (void)isa;
#endif
  return ryser_scalar(re, im, n);
}

std::complex<double> ryser(const double* re, const double* im, std::size_t n) {
  return ryser(re, im, n, detected_isa());
}

}  // namespace fredkin_lab::kernels

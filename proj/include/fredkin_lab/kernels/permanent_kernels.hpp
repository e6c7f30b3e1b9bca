#pragma once

// Ryser permanent kernels. The matrix is passed as split real/imaginary
// column-major planes: entry (r, c) lives at re[c * n + r], im[c * n + r].
//
// Every variant walks subsets in the same Gray-code order; the vector variants
// only change the order of floating-point operations inside one subset term,
// so results agree with the scalar reference to rounding.

#include <complex>
#include <cstddef>
#include <string_view>

namespace fredkin_lab::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// True if this build contains the variant and the CPU can run it.
bool isa_available(Isa isa);

/// Best available variant. FREDKIN_LAB_ISA=scalar forces the reference path.
Isa detected_isa();

std::complex<double> ryser_scalar(const double* re, const double* im, std::size_t n);

#ifdef FREDKIN_LAB_HAVE_AVX2
std::complex<double> ryser_avx2(const double* re, const double* im, std::size_t n);
#endif

/// Dispatches on `isa`; falls back to scalar when it is unavailable.
std::complex<double> ryser(const double* re, const double* im, std::size_t n, Isa isa);
std::complex<double> ryser(const double* re, const double* im, std::size_t n);

}  // namespace fredkin_lab::kernels

#pragma once

#include <cstdint>

#include "fredkin_lab/fock_state.hpp"
#include "fredkin_lab/kernels/permanent_kernels.hpp"
#include "fredkin_lab/optical_elements.hpp"

namespace fredkin_lab {

// Brute-force scattering amplitudes, independent of the sparse substitution
// engine in optical_elements. Used only to validate it.

inline constexpr std::size_t kMaxPermanentSize = 20;
inline constexpr int kOracleMaxPhotons = 4;
inline constexpr std::size_t kOracleMaxModes = 8;

/// Ryser permanent of a square matrix (N <= 20).
Complex permanent(const Matrix& m);
Complex permanent(const Matrix& m, kernels::Isa isa);

struct ScatteringProblem {
  ModeUnitary unitary;
  Occupation input;
  Occupation output;
};

/// <output| U |input> = per(U_sub) / sqrt(prod n_i! prod m_j!), with U_sub
/// taking column k n_k times and row j m_j times. Zero if photon numbers differ.
Complex transition_amplitude(const ScatteringProblem& p);

/// Full output state by enumerating every occupation in the input's photon
/// shell. Throws CapacityError above 4 photons or 8 modes.
FockState oracle_evolve(const ModeUnitary& u, const FockState& input);

struct OracleCheckReport {
  std::size_t element_cases = 0;
  std::size_t circuit_cases = 0;
  double max_element_error = 0.0;       // single random element vs oracle
  double max_circuit_error = 0.0;       // random element chain vs oracle on the composed unitary
  double max_completeness_error = 0.0;  // |sum of exhaustive branch probabilities - norm^2|
};

/// Seeded randomized cross-check of the sparse engine against the oracle on
/// registers of 2-4 ports (<= 8 modes) holding 1-4 photons.
OracleCheckReport oracle_check(std::uint64_t seed, std::size_t element_cases = 200, std::size_t circuit_cases = 20);

}  // namespace fredkin_lab

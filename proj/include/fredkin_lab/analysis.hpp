#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fredkin_lab/circuits.hpp"
#include "fredkin_lab/optical_elements.hpp"

namespace fredkin_lab {

// ---------------------------------------------------------------------------
// Ideal gates and the SWAP / symmetric-subspace identity

/// 8x8 controlled-SWAP on (c, t1, t2), index c*4 + t1*2 + t2, H = 0.
Matrix ideal_fredkin();
/// 4x4 SWAP on (t1, t2).
Matrix swap_gate();

struct SymmetryProjectors {
  Matrix pi_minus;  // |Psi-><Psi-|
  Matrix pi_plus;   // I - pi_minus
};
SymmetryProjectors symmetry_projectors();

struct SwapCheck {
  bool ok = false;
  double max_error = 0.0;
  std::string detail;
};
/// SWAP == pi_plus - pi_minus entrywise within 1e-15, plus the projector
/// identities (idempotent, orthogonal, complete).
SwapCheck swap_decomposition_check();

// ---------------------------------------------------------------------------
// Conditional process

/// Unnormalized operator of one detector record, column j = output for basis input j.
struct BranchKraus {
  std::string key;
  Matrix kraus;
};

struct ConditionalMap {
  /// Branch operators phase-aligned to the strongest branch and summed, then
  /// rescaled so that tr(M^dag M) = sum_b tr(K_b^dag K_b).
  Matrix matrix;
  std::vector<BranchKraus> branches;
  std::vector<double> column_probabilities;  // herald success per basis input
  double success_probability = 0.0;          // mean over basis inputs

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  /// matrix scaled to tr(M^dag M) = d.
  Matrix normalized() const;
  /// max |M^dag M - I| of the normalized matrix.
  double unitarity_error() const;
  /// max - min of column_probabilities.
  double probability_spread() const;
};

/// Simulates every computational basis input and assembles one operator per
/// detector record. Throws LeakageError if an accepted record leaves photons
/// outside the output rails.
ConditionalMap conditional_map(const Circuit& circuit);

/// sum_b |tr(U^dag K_b)|^2 / (d * sum_j P_j): 1 iff every branch is proportional
/// to `ideal` and nothing leaks out of the logical subspace.
double process_fidelity(const ConditionalMap& map, const Matrix& ideal);
/// |tr(U^dag M)|^2 / d^2 after scaling M to tr(M^dag M) = d.
double process_fidelity(const Matrix& map, const Matrix& ideal);

/// Herald success probability for an arbitrary logical input.
double success_probability(const Circuit& circuit, std::span<const Complex> logical_amplitudes);

/// Seeded Haar-like random pure states of dimension `dim`.
std::vector<std::vector<Complex>> random_pure_states(std::size_t dim, std::size_t count, std::uint64_t seed);

/// Success probabilities for control |H> with targets in |Phi+> (symmetric)
/// and |Psi-> (antisymmetric).
struct SectorProbabilities {
  double p_plus = 0.0;
  double p_minus = 0.0;
};
SectorProbabilities sector_probabilities(const Circuit& fredkin);

/// Phases picked up by the target singlet: per accepted record, the output
/// overlap with |c>|Psi-> for c = H and V, compared with the symmetric
/// reference |H>|Phi+>. Ideal: control_flip = pi, singlet_vs_symmetric = 0.
struct SingletPhase {
  double control_flip = 0.0;          // arg(<V,Psi-|out_V>) - arg(<H,Psi-|out_H>), in (-pi, pi]
  double singlet_vs_symmetric = 0.0;  // arg(<H,Psi-|out>) - arg(<H,Phi+|out>)
  double max_branch_deviation = 0.0;  // worst spread of the above across records
};
SingletPhase singlet_phase(const Circuit& fredkin);

// ---------------------------------------------------------------------------
// Closed-form success probabilities and transmittance optimisation

double p_minus_heralded(double T2, double T3);
double p_plus_heralded(double T2, double T3);
double p_minus_coinc(double T2, double T3);
double p_plus_coinc(double T2, double T3);
double p_minus(GateVariant v, double T2, double T3);
double p_plus(GateVariant v, double T2, double T3);

/// BS2 transmittance that equalises the symmetric and antisymmetric sectors.
/// Rejects T3 for which it would leave [0, 1].
double balance_T2(double T3, GateVariant variant);
/// Upper end of the feasible T3 interval: 1/2 heralded, 3/4 coincidence.
double max_balanced_T3(GateVariant variant);
/// Success probability on the balanced curve.
double balanced_success_probability(double T3, GateVariant variant);

struct OperatingPoint {
  double T3 = 0.0;
  double T2 = 0.0;
  double probability = 0.0;
};

struct Optimum {
  OperatingPoint closed_form;
  OperatingPoint numeric;
  int iterations = 0;
};
Optimum optimize_T3(GateVariant variant);

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
struct GoldenResult {
  long double x = 0;
  long double value = 0;
  int iterations = 0;
};
GoldenResult golden_section_maximize(const std::function<long double(long double)>& f, long double lo,
                                     long double hi, long double tol = 1e-13L);

// ---------------------------------------------------------------------------
// Multi-pair emission and reference numbers

struct FeasibilityThresholds {
  double min_ratio = 10.0;  // p_c / p_t
  double max_p_c = 0.1;
};

struct FeasibilityReport {
  double p_t = 0.0;
  double p_c = 0.0;
  double correct_rate = 0.0;  // p_t * p_c
  double false_rate = 0.0;    // p_t^2
  double signal_to_noise = 0.0;
  bool suppressed = false;
};
FeasibilityReport spdc_feasibility(double p_t, double p_c, FeasibilityThresholds thresholds = {});

struct ReferenceConstants {
  double heralded_p_max = 0.0;
  double heralded_advantage_vs_ggr = 5.5;
  double ggr_heralded_estimate = 0.0;  // heralded_p_max / 5.5
  double coincidence_p_max = 0.0;
  double ggr_coincidence = 1.0 / 192.0;
  double coincidence_ratio = 0.0;      // (1/162) / (1/192)
  int heralded_ancilla_photons = 6;
  int ggr_ancilla_photons = 8;
  int heralded_photon_budget = 9;
  int coincidence_photon_budget = 5;
};
ReferenceConstants reference_constants();

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
  double T3 = 0.0;
  double T2 = 0.0;
  double p_formula = 0.0;
  double p_simulated = 0.0;
  double fidelity = 0.0;
  bool feasible = true;
};

/// `points` evenly spaced T3 values on [0, max_balanced_T3]. Grid points the
/// builders cannot realise (T2 or T3 at 0 or 1) are flagged, not fatal.
/// `threads` = 0 uses the default worker count.
std::vector<SweepRow> sweep(GateVariant variant, std::size_t points, std::size_t threads = 0);

/// min(hardware threads, FREDKIN_LAB_THREADS if set).
std::size_t default_thread_count();

}  // namespace fredkin_lab

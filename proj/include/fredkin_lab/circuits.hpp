#pragma once

#include <span>
#include <string>
#include <vector>

#include "fredkin_lab/fock_state.hpp"
#include "fredkin_lab/measurement.hpp"
#include "fredkin_lab/optical_elements.hpp"

namespace fredkin_lab {

enum class GateVariant { Heralded, Coincidence };

std::string to_string(GateVariant v);
/// Accepts "heralded" or "coincidence"; throws ConfigError otherwise.
GateVariant parse_variant(const std::string& s);

/// Source of one |Phi+> pair.
struct EprSource {
  std::string port_a;
  std::string port_b;
};

/// A linear-optical program: ports are spatial rails that elements act on in
/// place, so a logical photon keeps its rail name from input to output.
struct Circuit {
  std::string name;
  std::vector<std::string> ports;
  std::vector<EprSource> sources;
  std::vector<std::string> inputs;   // logical qubit rails, most significant first
  std::vector<std::string> outputs;  // same order as inputs
  std::vector<Step> steps;
  std::vector<DetectorSpec> detectors;
  HeraldRule herald;

  /// Logical photons plus ancilla photons.
  int photon_budget() const { return static_cast<int>(inputs.size() + 2 * sources.size()); }
  std::size_t qubit_count() const { return outputs.size(); }
  RegisterPtr full_register() const;
  std::vector<Element> elements() const;
  std::vector<FeedforwardRule> feedforward() const;
};

/// Throws ConfigError / PlacementError when a port, detector, or output is
/// inconsistent.
void validate(const Circuit& circuit);

/// Logical input for basis index `index` (first input most significant, H = 0).
FockState basis_input(const Circuit& circuit, std::size_t index);
/// Arbitrary (possibly entangled) logical input; 2^n amplitudes.
FockState logical_input(const Circuit& circuit, std::span<const Complex> amplitudes);

/// Tensors the EPR sources onto `logical` and embeds in the full register.
FockState prepare_input(const Circuit& circuit, const FockState& logical);

std::vector<HeraldBranch> simulate(const Circuit& circuit, const FockState& logical,
                                   EnumerationMode mode = EnumerationMode::Herald);

// Sub-circuits. Each is a standalone, simulable Circuit.

/// Teleportation presence check: input on rail "tap", output on "epr_t_b".
Circuit build_teleport_qnd(bool feedforward = true);
/// EPR-assisted CZ on rails "c" (control) and "t" (target), success 1/4.
Circuit build_heralded_cz();
/// Copies the control onto an auxiliary photon: a|H>c + b|V>c -> a|HV> + b|VH>.
Circuit build_parity_check_encoder();
/// PPBS-based CZ on rails "c" and "t" with grey-filter attenuators.
Circuit build_ppbs_cz_chain();

/// Full gates. `T2`, `T3` must lie in (0, 1).
Circuit build_heralded_fredkin(double T2, double T3, bool qnd_feedforward = true);
Circuit build_coincidence_fredkin(double T2, double T3);
Circuit build_fredkin(GateVariant variant, double T2, double T3, bool qnd_feedforward = true);

}  // namespace fredkin_lab

#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fredkin_lab/fock_state.hpp"
#include "fredkin_lab/optical_elements.hpp"

namespace fredkin_lab {

enum class Pauli { I, Z, X };

/// Required photon count per detected mode (zeros included).
struct DetectionPattern {
  std::map<ModeId, int> counts;
};

/// Photon counts registered by a detector. For a block D, `plus` is the
/// transmitted detector behind HWP(22.5 deg) + PBS and `minus` the reflected
/// one. For a bare detector the two fields are the H and V contributions and
/// only their total is observable.
struct Outcome {
  int plus = 0;
  int minus = 0;
  bool bare = false;

  int total() const { return plus + minus; }
  bool single() const { return total() == 1; }
  /// "+", "-", or raw counts such as "(2,0)"; bare detectors print the total.
  std::string symbol() const;
  auto operator<=>(const Outcome&) const = default;
};

enum class DetectorKind { BlockD, Bare };

struct DetectorSpec {
  std::string label;
  std::string port;
  DetectorKind kind = DetectorKind::BlockD;
};

struct Correction {
  std::string port;
  Pauli pauli = Pauli::I;
};

/// Applies `action` to `port` when the number of "-" outcomes among the
/// trigger blocks is odd.
struct FeedforwardRule {
  std::vector<std::string> trigger;
  std::string port;
  Pauli action = Pauli::Z;
  std::string group;  // lets a whole class of rules be disabled together

  bool fires(const std::map<std::string, Outcome>& outcomes) const;
};

enum class BlockAccept {
  Single,     // exactly one photon, either outcome; outcome not used by feedforward
  ParityAny,  // exactly one photon, either outcome; outcome feeds a parity-triggered correction
};

struct BlockRequirement {
  std::string label;
  BlockAccept accept = BlockAccept::Single;
};

/// Which detector records count as success.
struct HeraldRule {
  std::vector<BlockRequirement> blocks;
  std::vector<std::string> vacuum;                     // detector labels that must see nothing
  std::vector<std::string> outputs_single_photon;      // ports post-selected on one photon each
  std::vector<std::vector<std::string>> even_parity;   // block groups whose "-" count must be even
};

struct HeraldBranch {
  std::map<std::string, Outcome> outcomes;
  double probability = 0.0;  // squared norm of `residual`, which is not renormalized
  FockState residual;
  std::vector<Correction> corrections;

  /// Deterministic text key, e.g. "D1=+;D2=-".
  std::string key() const;
};

struct MeasureStep {
  std::string detector;
};

struct FeedforwardStep {
  FeedforwardRule rule;
  bool enabled = true;
};

using Step = std::variant<Element, MeasureStep, FeedforwardStep>;

enum class EnumerationMode {
  Herald,      // prune with the herald rule while walking
  Exhaustive,  // keep every outcome, ignore the rule
};

/// Keeps terms matching the pattern exactly and drops the detected modes from
/// the register. Probability is the kept squared norm.
struct Projection {
  FockState residual;
  double probability = 0.0;
};
Projection project_pattern(const FockState& state, const DetectionPattern& pattern);

/// Every photon-count split of block D on `port`, including zero- and
/// multi-photon records. The port's modes are removed from each residual.
std::vector<HeraldBranch> block_D_outcomes(const FockState& state, const std::string& port);

FockState apply_correction(const FockState& state, const std::string& port, Pauli pauli);

/// Walks `steps` from `initial`, splitting into one branch per detector
/// record. Elements and corrections act on every live branch. In Herald mode
/// the rule prunes as soon as a detector fires, and at the end output ports
/// are projected and parity groups enforced.
std::vector<HeraldBranch> run_program(const FockState& initial, std::span<const Step> steps,
                                      std::span<const DetectorSpec> detectors, const HeraldRule& rule,
                                      EnumerationMode mode);

/// End-of-line detection: measures every detector in order, then applies the
/// feedforward rules, keeping only branches accepted by the rule.
std::vector<HeraldBranch> enumerate_herald(const FockState& state, std::span<const DetectorSpec> detectors,
                                           const HeraldRule& rule,
                                           std::span<const FeedforwardRule> feedforward = {});

double total_probability(std::span<const HeraldBranch> branches);

/// Throws ConfigError if the rule names a detector that is not declared.
void validate_rule(const HeraldRule& rule, std::span<const DetectorSpec> detectors);

}  // namespace fredkin_lab

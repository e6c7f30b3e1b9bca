#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fredkin_lab/fock_state.hpp"

namespace fredkin_lab {

using Matrix = Eigen::MatrixXcd;

// Element kinds. Conventions (per polarization, port order as placed):
//   beam splitter block  [[sqrt T, i sqrt R], [i sqrt R, sqrt T]]
//   PBS                  H passes, V swaps ports with phase i
//   HWP(theta)           Jones [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
//   phase shifter        e^{i phi} on both polarizations
//   mirror               phase i
struct BeamSplitter {
  double transmittance = 0.5;
};
struct PolarizingBeamSplitter {};
struct PartialPolarizingBeamSplitter {
  double t_h = 1.0;
  double t_v = 1.0;
};
struct HalfWavePlate {
  double theta = 0.0;
};
struct PhaseShifter {
  double phi = 0.0;
};
struct Mirror {};

using ElementKind = std::variant<BeamSplitter, PolarizingBeamSplitter, PartialPolarizingBeamSplitter,
                                 HalfWavePlate, PhaseShifter, Mirror>;

/// A passive element placed on one or two spatial ports.
struct Element {
  ElementKind kind;
  std::vector<std::string> ports;
  std::string label;  // free-form, e.g. "BS2"
};

Element beam_splitter(std::string a, std::string b, double transmittance, std::string label = {});
Element polarizing_beam_splitter(std::string a, std::string b, std::string label = {});
Element partial_polarizing_beam_splitter(std::string a, std::string b, double t_h, double t_v,
                                         std::string label = {});
Element half_wave_plate(std::string port, double theta, std::string label = {});
Element phase_shifter(std::string port, double phi, std::string label = {});
Element mirror(std::string port, std::string label = {});

/// Short kind tag used by the JSON schema: bs, pbs, ppbs, hwp, ps, mirror.
std::string kind_name(const ElementKind& kind);
/// Number of spatial ports the kind couples.
std::size_t port_arity(const ElementKind& kind);

/// Throws ValidationError on bad transmittances or wrong port count.
void validate(const Element& element);

/// Element restricted to the modes it touches: `block` maps the listed
/// register indices among themselves and is identity elsewhere.
struct LocalUnitary {
  std::vector<std::size_t> modes;
  Matrix block;
};

/// M x M unitary on a register; a^dag_k -> sum_j u(j, k) a^dag_j.
struct ModeUnitary {
  Matrix matrix;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  /// max |U^dag U - I| entry.
  double unitarity_error() const;
  static ModeUnitary identity(std::size_t dim);
};

LocalUnitary lower_local(const Element& element, const ModeRegister& reg);
ModeUnitary lower(const Element& element, const ModeRegister& reg);

/// Product of lowered unitaries in application order (first element acts first).
ModeUnitary compose_circuit_unitary(const std::vector<Element>& elements, const ModeRegister& reg);

/// Bosonic substitution on the modes of `local` only.
FockState apply(const FockState& state, const LocalUnitary& local);
FockState apply(const FockState& state, const ModeUnitary& u);
FockState apply(const FockState& state, const Element& element);

}  // namespace fredkin_lab

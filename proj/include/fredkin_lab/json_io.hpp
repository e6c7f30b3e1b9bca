#pragma once

#include <json.hpp>

#include "fredkin_lab/analysis.hpp"
#include "fredkin_lab/circuits.hpp"
#include "fredkin_lab/fock_state.hpp"
#include "fredkin_lab/measurement.hpp"
#include "fredkin_lab/optical_elements.hpp"

namespace fredkin_lab {

using Json = nlohmann::ordered_json;

// FockState: { "modes": [{"spatial", "pol"}], "terms": [{"occ", "re", "im"}] }
Json to_json(const FockState& state);
FockState fock_state_from_json(const Json& j);

// Element: { "kind": "bs"|"pbs"|"ppbs"|"hwp"|"ps"|"mirror", "ports": [...],
//            "T"?, "T_H"?, "T_V"?, "theta"?, "phi"?, "label"? }
Json to_json(const Element& element);
Element element_from_json(const Json& j);

// Herald rule: { "blocks": [{"label", "accept": "single"|"parity_any"}],
//                "vacuum": [...], "outputs_single_photon": [...],
//                "even_parity": [[...]] }
Json to_json(const HeraldRule& rule);
HeraldRule herald_rule_from_json(const Json& j);

/// Explicit element-list form of a circuit.
Json to_json(const Circuit& circuit);

/// Accepts either the built-in form { "variant", "T2"?, "T3"?, "feedforward"? }
/// (missing transmittances default to the optimum) or the explicit form.
/// Throws ConfigError on malformed input.
Circuit circuit_from_json(const Json& j);

Json to_json(const HeraldBranch& branch);
Json to_json(const FeasibilityReport& r);
Json to_json(const ReferenceConstants& c);
Json to_json(const Optimum& o);

}  // namespace fredkin_lab

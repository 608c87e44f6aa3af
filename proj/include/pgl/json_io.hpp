#ifndef PGL_JSON_IO_HPP
#define PGL_JSON_IO_HPP

#include <string>

#include "pgl/circuit.hpp"

namespace pgl {

/// Versioned circuit document ({"schema_version":1, registry, placements,
/// detections, feed_forwards, outputs}). Emission is canonical (sorted keys,
/// fixed indentation) so parse -> emit is byte-stable.
std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

/// Normalized branch state as a JSON object {ket: [re, im], ...} with kets
/// rendered as "|H>_1|V>_4"-style strings.
std::string state_to_json(const FockState& state);

}  // namespace pgl

#endif

#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "pswitch/general_circuit.h"
#include "pswitch/sp_circuit.h"

namespace pswitch {

using AnyCircuit = std::variant<SpCircuit, GeneralCircuit>;

/// expr := fraction | "(" "s" expr expr+ ")" | "(" "p" expr expr+ ")"
/// Comments run from '#' to end of line.
SpCircuit parse_sp_circuit(std::string_view text);

/// "terminals A B" followed by one "u v a/b" line per edge.
GeneralCircuit parse_general_circuit(std::string_view text);

/// Dispatches on the first token: "terminals" selects the general format.
AnyCircuit parse_circuit(std::string_view text);

std::string to_dot(const SpCircuit &circuit);
std::string to_dot(const GeneralCircuit &circuit);

}  // namespace pswitch

#pragma once

#include <string>

#include <json.hpp>

#include "bo/birkhoff.hpp"
#include "bo/hardy.hpp"

namespace bo {

using json = nlohmann::json;

// {"s", "N", "real", "coeffs": [{"n", "re", "im"}]}
json potential_to_json(const Potential& u);
Potential potential_from_json(const json& j);

// {"s", "N_b", "real", "plus": [...], "minus": [...], "diagnostics": {...}};
// minus entries carry negative n.
json birkhoff_to_json(const BirkhoffState& z, const TransformDiagnostics* diag = nullptr);
BirkhoffState birkhoff_from_json(const json& j);

// Parses text; malformed input raises InvalidInput with the byte position.
json parse_json(const std::string& text);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bo

#pragma once

#include <string>

#include <json.hpp>

#include "qsym/depth.hpp"
#include "qsym/network.hpp"
#include "qsym/state.hpp"

namespace qsym {

using json = nlohmann::json;

// {"layout": [{"name", "arity", "bound"}, ...],
//  "terms": [{"basis": [[...], ...], "re": x, "im": y}, ...]}
// Terms are written in canonical (sorted) order, so equal states serialize
// to identical bytes.
json state_to_json(const SparseState& state);
// Throws ValidationError on malformed input.
SparseState state_from_json(const json& j);

json depth_to_json(const DepthReport& d);
json network_to_json(const SortingNetwork& net);
json list_to_json(const IntList& l);

// Parses "1,2,2", "1 2 2" or "122" (single digits) into a list.
IntList parse_list(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace qsym

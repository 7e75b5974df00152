#pragma once

#include <json.hpp>

#include "nasinit/search_space.hpp"

namespace nasinit {

/// {"adjacency": [[0,1],[0,0]], "ops": ["conv3x3", ...]}
nlohmann::json arch_to_json(const CellArchitecture& arch);

/// Accepts ops with or without the leading "input"/trailing "output" labels.
/// Throws StructuralError on shape or label problems.
CellArchitecture arch_from_json(const nlohmann::json& j);

} // namespace nasinit

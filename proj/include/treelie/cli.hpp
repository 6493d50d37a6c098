#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace treelie {

/// args excludes the program name. Returns 0 on success, 1 on invalid input,
/// 2 when a size guard refuses the computation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Single-line JSON with ", " and ": " separators; floats with 17 significant digits.
std::string dump_json(const nlohmann::ordered_json& j);

/// 17 significant digits.
std::string format_double(double v);

}  // namespace treelie

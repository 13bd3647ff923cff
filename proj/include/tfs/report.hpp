#pragma once

#include <string>

#include <json.hpp>

#include "tfs/model_selection.hpp"
#include "tfs/selection.hpp"
#include "tfs/tmfg.hpp"

namespace tfs {

// Keys sorted, two-space indent, doubles printed with 17 significant digits
// (non-finite doubles become null). Arrays of scalars stay on one line.
std::string canonical_json(const nlohmann::json& value);

std::string format_double(double v);

nlohmann::json tool_info();
nlohmann::json to_json(const SelectionConfig& config);
SelectionConfig selection_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TmfgGraph& g);
nlohmann::json to_json(const TTestResult& r);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace tfs

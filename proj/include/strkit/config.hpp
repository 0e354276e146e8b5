#pragma once

#include <filesystem>
#include <string>

#include "strkit/metrics.hpp"
#include "strkit/pipeline.hpp"

namespace strkit {

/// Every tunable of the toolkit in one bundle; the JSON config file mirrors
/// this struct one-to-one (sections "refine", "slic", "merge", "select",
/// "metrics").
struct ToolConfig {
  MrfConfig mrf;
  MetricConfig metrics;
};

ToolConfig load_tool_config(const std::filesystem::path& path);
std::string tool_config_to_json(const ToolConfig& cfg);

}  // namespace strkit

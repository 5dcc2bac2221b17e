#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gapprobe {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct RunManifest {
  std::string command;
  std::map<std::string, nlohmann::json> parameters;
  std::uint64_t seed = 0;
  std::string toolkit_version = kToolkitVersion;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;

  // sorted keys at every level, two-space indent, trailing newline
  std::string serialize() const;
  static RunManifest parse(const std::string& text);
};

// UTC, ISO 8601 with seconds
std::string utc_timestamp();

}  // namespace gapprobe

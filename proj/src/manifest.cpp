#include "gapprobe/manifest.hpp"

#include <chrono>
#include <ctime>

namespace gapprobe {

std::string RunManifest::serialize() const {
  // nlohmann::json objects are std::map backed, so keys come out sorted
  nlohmann::json doc;
  doc["command"] = command;
  doc["parameters"] = nlohmann::json::object();
  for (const auto& [k, v] : parameters) doc["parameters"][k] = v;
  doc["seed"] = seed;
  doc["toolkit_version"] = toolkit_version;
  doc["started"] = started;
  doc["finished"] = finished;
  doc["outputs"] = outputs;
  return doc.dump(2) + "\n";
}

RunManifest RunManifest::parse(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  RunManifest m;
  m.command = doc.at("command").get<std::string>();
  for (const auto& item : doc.at("parameters").items()) m.parameters[item.key()] = item.value();
  m.seed = doc.at("seed").get<std::uint64_t>();
  m.toolkit_version = doc.at("toolkit_version").get<std::string>();
  m.started = doc.at("started").get<std::string>();
  m.finished = doc.at("finished").get<std::string>();
  m.outputs = doc.at("outputs").get<std::vector<std::string>>();
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace gapprobe

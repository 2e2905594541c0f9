#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcki/app/config.hpp"

namespace dcki::app {

struct TrialRecord {
  std::string method;
  std::uint64_t seed = 0;
  std::vector<double> per_party;
  double mean = 0.0;
  double fit_ms = 0.0;
  double transform_ms = 0.0;

  bool operator==(const TrialRecord&) const = default;
};

struct Environment {
  std::string version;
  int numeric_threads = 1;
  int jobs = 1;
  bool bench = false;
  std::uint64_t seed_offset = 0;

  bool operator==(const Environment&) const = default;
};

/// Everything needed to reproduce and audit one command invocation.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string config_hash;
  std::vector<TrialRecord> trials;
  Environment environment;
  std::string started_at;  // UTC, ISO 8601
  std::string finished_at;

  bool operator==(const RunManifest&) const = default;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

std::string utc_timestamp();

}  // namespace dcki::app

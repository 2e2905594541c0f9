#include "dcki/app/manifest.hpp"

#include <chrono>
#include <ctime>

namespace dcki::app {

using nlohmann::json;

json to_json(const RunManifest& m) {
  json trials = json::array();
  for (const auto& t : m.trials) {
    trials.push_back({{"method", t.method},
                      {"seed", t.seed},
                      {"per_party", t.per_party},
                      {"mean", t.mean},
                      {"fit_ms", t.fit_ms},
                      {"transform_ms", t.transform_ms}});
  }
  return {{"command", m.command},
          {"config", m.config},
          {"config_hash", m.config_hash},
          {"trials", trials},
          {"environment",
           {{"version", m.environment.version},
            {"numeric_threads", m.environment.numeric_threads},
            {"jobs", m.environment.jobs},
            {"bench", m.environment.bench},
            {"seed_offset", m.environment.seed_offset}}},
          {"started_at", m.started_at},
          {"finished_at", m.finished_at}};
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.config_hash = j.at("config_hash").get<std::string>();
    for (const auto& t : j.at("trials")) {
      TrialRecord r;
      r.method = t.at("method").get<std::string>();
      r.seed = t.at("seed").get<std::uint64_t>();
      r.per_party = t.at("per_party").get<std::vector<double>>();
      r.mean = t.at("mean").get<double>();
      r.fit_ms = t.at("fit_ms").get<double>();
      r.transform_ms = t.at("transform_ms").get<double>();
      m.trials.push_back(std::move(r));
    }
    const json& e = j.at("environment");
    m.environment.version = e.at("version").get<std::string>();
    m.environment.numeric_threads = e.at("numeric_threads").get<int>();
    m.environment.jobs = e.at("jobs").get<int>();
    m.environment.bench = e.at("bench").get<bool>();
    m.environment.seed_offset = e.at("seed_offset").get<std::uint64_t>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("malformed manifest: ") + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace dcki::app

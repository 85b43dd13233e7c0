#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>

#include "gjn/network.hpp"

namespace gjn {

inline constexpr int kConfigSchemaVersion = 1;

/// Run configuration (version 1):
///
///   { "schema_version": 1, "command": "quasipotential",
///     "spec": "mm1.json" | { inline network spec },
///     "params": { command-specific },
///     "out": "out/mm1", "seed": 1, "reps": 100, "threads": 1 }
///
/// A relative spec path resolves against the config file's directory.
/// Unknown keys are rejected at every level.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  std::string command;
  nlohmann::json spec;  // string path or inline object
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::string out = "out";
  std::uint64_t seed = 1;
  int reps = 100;
  int threads = 1;
  std::filesystem::path base_dir;  // not serialised
};

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::string> command;
  std::optional<std::string> spec;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> threads;
};

/// GJN_SEED, GJN_REPS, GJN_THREADS, GJN_OUT. `getenv` is injectable for tests.
Overrides env_overrides(const std::function<const char*(const char*)>& getenv_fn);

/// Applies overrides in order; later wins (config < env < flag).
void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Throws InvalidInput on an unusable resolved config.
void check_run_config(const RunConfig& cfg);

Network resolve_network(const RunConfig& cfg);

/// The resolved config with the spec inlined; parse_run_config accepts it.
nlohmann::ordered_json manifest_json(const RunConfig& cfg, const Network& net);

}  // namespace gjn

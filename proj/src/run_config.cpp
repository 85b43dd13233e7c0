#include "gjn/run_config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "gjn/errors.hpp"
#include "gjn/network_io.hpp"

namespace gjn {

namespace {

const std::set<std::string> kCommands = {"validate", "rate", "fluid", "quasipotential", "simulate", "verify"};

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    if (!s.empty() && s[0] == '-') throw InvalidInput("");
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw InvalidInput("");
    return v;
  } catch (...) {
    throw InvalidInput(std::string(what) + ": expected a nonnegative integer, got '" + s + "'");
  }
}

int parse_int(const std::string& s, const char* what) {
  const auto v = parse_u64(s, what);
  if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) throw InvalidInput(std::string(what) + ": out of range");
  return static_cast<int>(v);
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config: top level must be an object");
  static const std::set<std::string> allowed = {"schema_version", "command", "spec", "params",
                                                "out",            "seed",    "reps", "threads"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw InvalidInput("config: unknown field '" + it.key() + "'");

  RunConfig c;
  c.base_dir = base_dir;
  auto field = [&](const char* name) -> const nlohmann::json* {
    auto it = j.find(name);
    return it == j.end() ? nullptr : &*it;
  };
  if (auto f = field("schema_version")) {
    if (!f->is_number_integer() || f->get<int>() != kConfigSchemaVersion)
      throw InvalidInput("config: field 'schema_version' must be " + std::to_string(kConfigSchemaVersion));
  } else {
    throw InvalidInput("config: missing field 'schema_version'");
  }
  if (auto f = field("command")) {
    if (!f->is_string()) throw InvalidInput("config: field 'command' must be a string");
    c.command = f->get<std::string>();
  }
  if (auto f = field("spec")) {
    if (!f->is_string() && !f->is_object()) throw InvalidInput("config: field 'spec' must be a path or an object");
    c.spec = *f;
  }
  if (auto f = field("params")) {
    if (!f->is_object()) throw InvalidInput("config: field 'params' must be an object");
    c.params = nlohmann::ordered_json::parse(f->dump());
  }
  if (auto f = field("out")) {
    if (!f->is_string()) throw InvalidInput("config: field 'out' must be a string");
    c.out = f->get<std::string>();
  }
  if (auto f = field("seed")) {
    if (!f->is_number_unsigned()) throw InvalidInput("config: field 'seed' must be a nonnegative integer");
    c.seed = f->get<std::uint64_t>();
  }
  if (auto f = field("reps")) {
    if (!f->is_number_integer()) throw InvalidInput("config: field 'reps' must be an integer");
    c.reps = f->get<int>();
  }
  if (auto f = field("threads")) {
    if (!f->is_number_integer()) throw InvalidInput("config: field 'threads' must be an integer");
    c.threads = f->get<int>();
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  return parse_run_config(ss.str(), dir);
}

Overrides env_overrides(const std::function<const char*(const char*)>& getenv_fn) {
  Overrides o;
  if (const char* v = getenv_fn("GJN_SEED")) o.seed = parse_u64(v, "GJN_SEED");
  if (const char* v = getenv_fn("GJN_REPS")) o.reps = parse_int(v, "GJN_REPS");
  if (const char* v = getenv_fn("GJN_THREADS")) o.threads = parse_int(v, "GJN_THREADS");
  if (const char* v = getenv_fn("GJN_OUT")) o.out = v;
  return o;
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.command) cfg.command = *o.command;
  if (o.spec) {
    cfg.spec = *o.spec;
    cfg.base_dir = ".";
  }
  if (o.out) cfg.out = *o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.reps) cfg.reps = *o.reps;
  if (o.threads) cfg.threads = *o.threads;
}

void check_run_config(const RunConfig& cfg) {
  if (!kCommands.count(cfg.command)) throw InvalidInput("config: field 'command' must be one of validate, rate, fluid, quasipotential, simulate, verify");
  if (cfg.spec.is_null()) throw InvalidInput("config: missing field 'spec'");
  if (cfg.out.empty()) throw InvalidInput("config: field 'out' is empty");
  if (cfg.reps < 1) throw InvalidInput("config: field 'reps' must be >= 1");
  if (cfg.threads < 1) throw InvalidInput("config: field 'threads' must be >= 1");
}

Network resolve_network(const RunConfig& cfg) {
  if (cfg.spec.is_object()) {
    try {
      return network_from_json(cfg.spec);
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string("config: field 'spec': ") + e.what());
    }
  }
  if (!cfg.spec.is_string()) throw InvalidInput("config: missing field 'spec'");
  std::filesystem::path p = cfg.spec.get<std::string>();
  if (p.is_relative()) p = cfg.base_dir / p;
  return load_network(p);
}

nlohmann::ordered_json manifest_json(const RunConfig& cfg, const Network& net) {
  nlohmann::ordered_json j;
  j["schema_version"] = cfg.schema_version;
  j["command"] = cfg.command;
  j["spec"] = network_to_json(net);
  j["params"] = cfg.params;
  j["out"] = cfg.out;
  j["seed"] = cfg.seed;
  j["reps"] = cfg.reps;
  j["threads"] = cfg.threads;
  return j;
}

}  // namespace gjn

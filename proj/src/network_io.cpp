#include "gjn/network_io.hpp"

#include <fstream>
#include <set>

#include "gjn/errors.hpp"

namespace gjn {

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw InvalidInput(where + ": unknown field '" + key + "'");
  }
}

double number(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InvalidInput(where + ": missing numeric field '" + key + "'");
  }
  return j.at(key).get<double>();
}

std::vector<double> numbers(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InvalidInput(where + ": missing array field '" + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw InvalidInput(where + ": non-numeric entry in '" + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Distribution distribution_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"family", "params"}, "distribution");
  if (!j.contains("family") || !j.at("family").is_string()) {
    throw InvalidInput("distribution: missing 'family'");
  }
  const Family fam = family_from_string(j.at("family").get<std::string>());
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  const std::string where = "distribution '" + to_string(fam) + "' params";
  switch (fam) {
    case Family::None:
      reject_unknown(params, {}, where);
      return Distribution::none();
    case Family::Exponential:
      reject_unknown(params, {"rate"}, where);
      return Distribution::exponential(number(params, "rate", where));
    case Family::Erlang: {
      reject_unknown(params, {"shape", "rate"}, where);
      const double shape = number(params, "shape", where);
      if (shape != std::floor(shape)) throw InvalidInput(where + ": erlang shape must be integral");
      return Distribution::erlang(static_cast<int>(shape), number(params, "rate", where));
    }
    case Family::Gamma:
      reject_unknown(params, {"shape", "rate"}, where);
      return Distribution::gamma(number(params, "shape", where), number(params, "rate", where));
    case Family::Deterministic:
      reject_unknown(params, {"value"}, where);
      return Distribution::deterministic(number(params, "value", where));
    case Family::HyperExponential:
      reject_unknown(params, {"weights", "rates"}, where);
      return Distribution::hyper_exponential(numbers(params, "weights", where),
                                             numbers(params, "rates", where));
  }
  throw InvalidInput("distribution: unsupported family");
}

nlohmann::ordered_json distribution_to_json(const Distribution& d) {
  nlohmann::ordered_json j;
  j["family"] = to_string(d.family());
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  const auto& v = d.params();
  switch (d.family()) {
    case Family::None: break;
    case Family::Exponential: p["rate"] = v[0]; break;
    case Family::Erlang:
    case Family::Gamma:
      p["shape"] = v[0];
      p["rate"] = v[1];
      break;
    case Family::Deterministic: p["value"] = v[0]; break;
    case Family::HyperExponential:
      p["weights"] = d.weights();
      p["rates"] = v;
      break;
  }
  j["params"] = p;
  return j;
}

Network network_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"schema_version", "K", "P", "arrivals", "services"}, "network spec");
  if (!j.contains("schema_version")) throw InvalidInput("network spec: missing 'schema_version'");
  if (j.at("schema_version") != kSpecSchemaVersion) {
    throw InvalidInput("network spec: unsupported schema_version");
  }
  if (!j.contains("K") || !j.at("K").is_number_integer()) {
    throw InvalidInput("network spec: missing integer 'K'");
  }
  const int K = j.at("K").get<int>();
  if (K < 1) throw InvalidInput("network spec: K must be >= 1");
  const std::vector<double> flat = numbers(j, "P", "network spec");
  if (flat.size() != static_cast<std::size_t>(K) * static_cast<std::size_t>(K)) {
    throw InvalidInput("network spec: P must hold K*K entries (row-major)");
  }
  Mat P(K, K);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < K; ++l) P(k, l) = flat[static_cast<std::size_t>(k * K + l)];
  }
  auto dists = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
      throw InvalidInput(std::string("network spec: missing array '") + key + "'");
    }
    std::vector<Distribution> out;
    for (const auto& d : j.at(key)) out.push_back(distribution_from_json(d));
    return out;
  };
  return make_network(K, P, dists("arrivals"), dists("services"));
}

nlohmann::ordered_json network_to_json(const Network& net) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSpecSchemaVersion;
  j["K"] = net.K;
  std::vector<double> flat;
  for (int k = 0; k < net.K; ++k) {
    for (int l = 0; l < net.K; ++l) flat.push_back(net.P(k, l));
  }
  j["P"] = flat;
  j["arrivals"] = nlohmann::ordered_json::array();
  j["services"] = nlohmann::ordered_json::array();
  for (const auto& d : net.arrivals) j["arrivals"].push_back(distribution_to_json(d));
  for (const auto& d : net.services) j["services"].push_back(distribution_to_json(d));
  return j;
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open network spec '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("network spec '" + path.string() + "': " + e.what());
  }
  return network_from_json(j);
}

}  // namespace gjn

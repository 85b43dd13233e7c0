#pragma once

#include <filesystem>
#include <json.hpp>

#include "gjn/network.hpp"

namespace gjn {

inline constexpr int kSpecSchemaVersion = 1;

/// Network spec schema (version 1):
///
///   { "schema_version": 1, "K": 2, "P": [p11, p12, p21, p22],
///     "arrivals": [ {"family": "exponential", "params": {"rate": 1}},
///                   {"family": "none"} ],
///     "services": [ ... ] }
///
/// Families and parameters: exponential{rate}, erlang{shape, rate},
/// gamma{shape, rate}, deterministic{value},
/// hyperexponential{weights: [...], rates: [...]}, none{} (arrivals only).
/// Unknown keys are rejected.
Network network_from_json(const nlohmann::json& j);
nlohmann::ordered_json network_to_json(const Network& net);
Network load_network(const std::filesystem::path& path);

Distribution distribution_from_json(const nlohmann::json& j);
nlohmann::ordered_json distribution_to_json(const Distribution& d);

}  // namespace gjn

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gjn {

/// Stream seed for `label` under `master`:
///   splitmix64(master ^ splitmix64(fnv1a64(label)))
/// Any implementation with the same generator family reproduces the streams.
std::uint64_t derive_seed(std::uint64_t master, const std::string& label);

/// Seeds for distinct labels; throws InvalidInput on duplicates.
std::vector<std::uint64_t> derive_seeds(std::uint64_t master, const std::vector<std::string>& labels);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(const std::string& s);

/// Label for one primitive stream of the simulator.
std::string stream_label(int replication, int station, const char* role);

/// mt19937_64 seeded from a derived 64-bit stream seed.
std::mt19937_64 make_stream(std::uint64_t seed);

}  // namespace gjn

#include "gjn/seeds.hpp"

#include <unordered_set>

#include "gjn/errors.hpp"

namespace gjn {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& label) {
  return splitmix64(master ^ splitmix64(fnv1a64(label)));
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master, const std::vector<std::string>& labels) {
  std::unordered_set<std::string> seen;
  std::vector<std::uint64_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw InvalidInput("derive_seeds: duplicate label '" + l + "'");
    out.push_back(derive_seed(master, l));
  }
  return out;
}

std::string stream_label(int replication, int station, const char* role) {
  return "rep:" + std::to_string(replication) + "/station:" + std::to_string(station) + "/" + role;
}

std::mt19937_64 make_stream(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace gjn

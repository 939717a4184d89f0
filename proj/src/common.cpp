#include "cones/common.hpp"

#include <cstdio>

namespace cones {

namespace {
double g_prune_floor = 1e-15;
}

double prune_floor() { return g_prune_floor; }
void set_prune_floor(double floor) { g_prune_floor = floor; }

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xa0761d6478bd642fULL * (stream + 1));
  // Decorrelate nearby seeds/streams before feeding the engine.
  std::uint64_t mixed = splitmix64(s);
  gen_.seed(mixed ^ splitmix64(s));
}

int RngStream::below(int n) {
  if (n <= 0) throw contract_error("RngStream::below needs n > 0");
  return static_cast<int>(gen_() % static_cast<std::uint64_t>(n));
}

double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_reduce(xs, 0.0, [](double a, double b) { return a + b; });
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

}  // namespace cones

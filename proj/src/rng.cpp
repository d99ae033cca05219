#include "mibbo/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mibbo {
namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// SplitMix64 step; used both to expand seeds and to hash (master, index).
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) {
  // xoshiro256++ must not start from the all-zero state; SplitMix64 expansion
  // of any seed avoids it.
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_double_open() {
  // Centre each 53-bit lattice cell: result lies in [2^-54, 1 - 2^-54].
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be positive");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

bool RngStream::next_sign_bit() { return (next_u64() & 1ULL) != 0; }

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t sm = master_seed;
  std::uint64_t a = splitmix64(sm);
  sm ^= index * 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64(sm);
  return a ^ rotl(b, 32) ^ index;
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  return RngStream(derive_seed(master_seed, index));
}

std::vector<double> standard_normal_vector(RngStream& rng, int n) {
  if (n < 1) throw std::invalid_argument("standard_normal_vector: n must be positive");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; i += 2) {
    const double u1 = rng.next_double_open();
    const double u2 = rng.next_double_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    out[static_cast<std::size_t>(i)] = r * std::cos(theta);
    if (i + 1 < n) out[static_cast<std::size_t>(i + 1)] = r * std::sin(theta);
  }
  return out;
}

long geometric_sample(RngStream& rng, double p) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("geometric_sample: p must be in (0, 1]");
  if (p == 1.0) return 0;
  const double u = rng.next_double_open();
  return static_cast<long>(std::log(u) / std::log1p(-p));
}

}  // namespace mibbo

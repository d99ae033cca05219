#pragma once

#include <cstdint>
#include <vector>

namespace mibbo {

// Counter-seeded xoshiro256++ stream.  Streams derived from the same master
// seed but different indices are statistically independent, which is what the
// per-trial parallelism in the harness relies on.  The integer sequence is
// identical on every platform; transformed draws (normal, geometric) are
// additionally deterministic up to the libm implementations of log/cos/sin.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_double();

  // Uniform on (0, 1); never returns an endpoint, so log() is always finite.
  double next_double_open();

  // Uniform integer in [0, n), n >= 1.  Multiply-shift reduction; the bias is
  // below 2^-64 per draw and the result depends only on the integer stream.
  std::uint64_t next_below(std::uint64_t n);

  bool next_sign_bit();

 private:
  std::uint64_t s_[4];
};

// Derives the seed for sub-stream `index` of `master_seed`.  Implemented as a
// SplitMix64 hash of the pair, so neighbouring indices give unrelated states.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t index);

// n i.i.d. standard normals via Box-Muller.  Draws are consumed in pairs; for
// odd n the spare half of the last pair is discarded, so a vector of length n
// always consumes 2*ceil(n/2) uniforms.
std::vector<double> standard_normal_vector(RngStream& rng, int n);

// Geometric distribution on {0, 1, 2, ...} with success probability p in
// (0, 1]: floor(log(U) / log(1 - p)) by inversion.
long geometric_sample(RngStream& rng, double p);

// Fisher-Yates shuffle driven by next_below.
template <typename T>
void shuffle(RngStream& rng, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t k = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[k]);
  }
}

}  // namespace mibbo

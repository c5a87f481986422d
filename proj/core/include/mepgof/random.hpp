// Copyright 2026 The mepgof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Counter-based random streams.
//
// Every stochastic operation in the library draws from a Philox4x32-10
// stream keyed by a 64-bit root seed. The stream id occupies the upper half
// of the 128-bit counter, so stream k is available without generating
// streams 0..k-1, and any replication can run on any thread in any order.

#ifndef MEPGOF_RANDOM_HPP_
#define MEPGOF_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <limits>

namespace mepgof {

// Documented default root seed used when none is given.
inline constexpr std::uint64_t kDefaultRootSeed = 20190722ULL;

// Stream ids at or above this value are reserved for limit-law sampling so
// they never collide with per-replication streams.
inline constexpr std::uint64_t kLimitLawStreamBase = 1ULL << 62;
// Reserved block for auxiliary draws (e.g. long-run empirical laws).
inline constexpr std::uint64_t kAuxiliaryStreamBase = 1ULL << 61;

struct SeedSpec {
  std::uint64_t root_seed = kDefaultRootSeed;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

// Philox4x32 with 10 rounds (Salmon et al., Random123). Produces 64-bit
// words; each 128-bit block yields two words. Satisfies
// UniformRandomBitGenerator.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit PhiloxStream(SeedSpec seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform on the open interval (0, 1), 53 bits of resolution. Consumes
  // exactly one word.
  double uniform();

  // Words consumed so far.
  std::uint64_t position() const { return position_; }
  const SeedSpec& seed() const { return seed_; }

  // The raw bijection, exposed for known-answer tests.
  static Block philox10(Block counter, Key key);

 private:
  SeedSpec seed_;
  Key key_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
};

// Derives the generator for a seed. Same SeedSpec, same sequence.
inline PhiloxStream derive_stream(SeedSpec seed) { return PhiloxStream(seed); }

// Acklam's rational approximation to the standard normal quantile.
// Relative error below 1.2e-9 on (0, 1).
double normal_quantile_fast(double p);

// Standard normal quantile to full double precision: the fast
// approximation followed by one Halley step.
double normal_quantile(double p);

// N(0,1) draw by inversion of a single uniform, so every draw consumes
// exactly one word.
double standard_normal(PhiloxStream& gen);

}  // namespace mepgof

#endif  // MEPGOF_RANDOM_HPP_

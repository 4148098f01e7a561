#pragma once

// Counter-based randomness for the simulator. Every draw is a pure function
// of (master seed, replication, stream, slot), so runs sharing a seed see
// identical per-slot values regardless of policy, thread count, or how many
// draws other code consumed. This is what makes common-random-number
// comparisons across policies and the primary-queue trajectory invariance
// exact rather than approximate.
//
// Stream split: master -> replication key -> per-stream seed, each step a
// SplitMix64 finalizer; the slot-t value of a stream is the canonical
// SplitMix64 output at counter t.

#include <cstdint>
#include <string_view>

namespace coopra::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// The five per-slot substreams. The primary->secondary and secondary->
// destination links share one stream: the former is only drawn in
// primary-busy slots, the latter only in primary-idle slots.
enum class Stream : std::uint64_t {
  pu_arrival = 1,
  su_arrival = 2,
  pd_link = 3,
  ps_sd_link = 4,
  queue_select = 5,
};

constexpr std::uint64_t substream_seed(std::uint64_t master,
                                       std::uint64_t replication, Stream s) {
  const std::uint64_t rep_key = mix64(master + kGamma * (replication + 1));
  return mix64(rep_key ^ (kGamma * static_cast<std::uint64_t>(s)));
}

// Uniform in [0, 1), 53 mantissa bits.
constexpr double uniform_at(std::uint64_t substream, std::uint64_t slot) {
  return static_cast<double>(mix64(substream + kGamma * (slot + 1)) >> 11) *
         0x1.0p-53;
}

inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = kFnvOffset) {
  for (char c : bytes) {
    h = (h ^ static_cast<unsigned char>(c)) * kFnvPrime;
  }
  return h;
}

// Deterministic seed for a named sub-experiment (sweep rows, check batteries).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                    std::uint64_t index) {
  return mix64(mix64(master ^ fnv1a64(label)) + kGamma * (index + 1));
}

}  // namespace coopra::rng

#pragma once
#include <cstdint>
#include <string>
#include <string_view>

namespace spo {

// 64-bit FNV-1a. Fixed constants so token ids, seed derivation and file
// digests are identical on every platform.
inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = kFnvOffsetBasis;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= kFnvPrime;
  }
  return h;
}

// Deterministic sub-seed derivation: hash of "<base>|<tag>". Used to give
// the encoder, prompt bank, label space, synthetic corpus and k-shot
// sampler independent streams from one master seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
  std::string key = std::to_string(base);
  key.push_back('|');
  key.append(tag);
  return fnv1a64(key);
}

// Per-run seed for sweep grid points: hash of "<base>|<axis token>|<run index>".
inline std::uint64_t sweep_run_seed(std::uint64_t base, std::string_view axis_value,
                                    std::size_t run_index) {
  std::string key = std::to_string(base);
  key.push_back('|');
  key.append(axis_value);
  key.push_back('|');
  key.append(std::to_string(run_index));
  return fnv1a64(key);
}

}  // namespace spo

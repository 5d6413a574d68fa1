#pragma once

// Reproducible randomness. Engine: std::mt19937_64 (fully specified by the
// C++ standard). Streams are derived with std::seed_seq (also fully
// specified) from {seed low 32 bits, seed high 32 bits, CRC-32 of a stream
// key, salt}. Bounded integers use rejection sampling, so results do not
// depend on the standard library's distribution implementations.

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/crc.hpp>

namespace oieval {

inline std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::string_view key, std::uint32_t salt = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), crc32(key), salt};
  return std::mt19937_64(seq);
}

/// Uniform integer in [0, bound), bound > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // 2^64 mod bound; draws below it would bias the low residues.
  const std::uint64_t threshold = (std::uint64_t{0} - bound) % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw < threshold);
  return draw % bound;
}

/// Fisher-Yates.
template <typename T>
void shuffle_in_place(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace oieval

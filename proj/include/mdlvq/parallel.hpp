#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mdlvq {

/// Selects the serial reference loop or the OpenMP loop of a kernel. Both
/// produce bit-identical results: work is split into fixed chunks that are
/// seeded independently and merged in chunk order.
enum class Execution { Serial, Parallel };

inline constexpr std::size_t kChunkSize = 1u << 14;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Engine for chunk `chunk` of stream `stream` under a user seed.
inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ splitmix64(stream)) + chunk));
}

inline std::size_t chunk_count(std::size_t n) { return (n + kChunkSize - 1) / kChunkSize; }

template <typename F>
void for_each_index(std::size_t n, Execution exec, F&& body) {
  if (exec == Execution::Parallel) {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

int hardware_threads();

}  // namespace mdlvq

#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace nwidth {

// Generator for one item of a seeded sweep. Each item gets its own stream, so the
// result for item i never depends on how items are scheduled across threads.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(m);
  for (int i = 0; i < m; ++i) x(i) = normal(rng);
  return x;
}

}  // namespace nwidth

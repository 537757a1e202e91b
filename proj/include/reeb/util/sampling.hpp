#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace reeb::util {

/// Radical inverse of i in the given prime base (Halton coordinate).
double radical_inverse(std::uint64_t i, unsigned base);

/// Counter-based generator: value depends only on (seed, stream, counter).
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}
  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const; ///< in [0, 1)
  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Uniform point on S³ from three numbers in [0,1).
Eigen::Vector4d sphere3_from_unit_cube(double u1, double u2, double u3);

/// Halton point number i on S³ (bases 2, 3, 5), optionally scrambled by a seeded shift.
Eigen::Vector4d halton_sphere3(std::uint64_t i, std::uint64_t seed = 0);

} // namespace reeb::util

#include "reeb/util/sampling.hpp"

#include <cmath>
#include <numbers>

namespace reeb::util {

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * double(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

namespace {
std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
} // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix(splitmix(splitmix(seed_) ^ stream_) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return double(bits(counter) >> 11) * 0x1.0p-53;
}

Eigen::Vector4d sphere3_from_unit_cube(double u1, double u2, double u3) {
  const double tau = 2 * std::numbers::pi;
  const double r1 = std::sqrt(1 - u1), r2 = std::sqrt(u1);
  return {r1 * std::sin(tau * u2), r1 * std::cos(tau * u2), r2 * std::sin(tau * u3),
          r2 * std::cos(tau * u3)};
}

Eigen::Vector4d halton_sphere3(std::uint64_t i, std::uint64_t seed) {
  double u[3] = {radical_inverse(i + 1, 2), radical_inverse(i + 1, 3), radical_inverse(i + 1, 5)};
  if (seed != 0) {
    CounterRng rng(seed, 0x48414c54ULL);
    for (int k = 0; k < 3; ++k) u[k] = std::fmod(u[k] + rng.uniform(std::uint64_t(k)), 1.0);
  }
  return sphere3_from_unit_cube(u[0], u[1], u[2]);
}

} // namespace reeb::util

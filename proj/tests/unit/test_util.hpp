#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "volterra/geometry.hpp"

namespace testutil {

using volterra::cplx;
using volterra::CVec;

inline constexpr double kPi = std::numbers::pi;

/// Uniformly distributed points of the disc of radius rmax.
inline std::vector<CVec> randomDiscPoints(std::size_t count, double rmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<CVec> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    pts.emplace_back(std::polar(rmax * std::sqrt(U(rng)), 2.0 * kPi * U(rng)));
  }
  return pts;
}

inline std::vector<cplx> randomCoefficients(int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (auto& v : c) v = {N(rng), N(rng)};
  return c;
}

/// Beta function via lgamma.
inline double beta(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

/// Composite Simpson rule on [a, b] with 2m panels.
template <class F>
double simpson(F&& f, double a, double b, int m = 2000) {
  const double h = (b - a) / (2 * m);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace testutil

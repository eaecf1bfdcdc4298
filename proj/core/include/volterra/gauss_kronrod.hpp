#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <type_traits>
#include <vector>

namespace volterra {

template <class T>
struct IntegralEstimate {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[static_cast<std::size_t>(j)];
    const T sum = f(c - dx) + f(c + dx);
    kronrod += sum * kKronrodWeights[static_cast<std::size_t>(j)];
    if (j % 2 == 1) gauss += sum * kGaussWeights[static_cast<std::size_t>(j / 2)];
  }
  return {a, b, kronrod * h, magnitude((kronrod - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive 7/15-point Gauss–Kronrod quadrature on [a, b]. The
/// panel with the largest error estimate is bisected until the summed error
/// falls below max(absTol, relTol * |value|) or maxPanels is reached.
/// Works for real or complex valued integrands.
template <class F>
auto integrateAdaptive(F&& f, double a, double b, double absTol, double relTol,
                       int maxPanels = 4000, int initialPanels = 1)
    -> IntegralEstimate<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  std::priority_queue<detail::Panel<T>> panels;
  IntegralEstimate<T> out;
  T total{};
  double totalError = 0.0;
  const int first = std::max(1, initialPanels);
  for (int k = 0; k < first; ++k) {
    const double lo = a + (b - a) * k / first;
    const double hi = (k + 1 == first) ? b : a + (b - a) * (k + 1) / first;
    auto p = detail::kronrod15<T>(f, lo, hi);
    total += p.value;
    totalError += p.error;
    panels.push(p);
  }
  out.evaluations = 15 * first;
  int count = first;
  while (totalError > std::max(absTol, relTol * detail::magnitude(total)) && count < maxPanels) {
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      panels.push(worst);
      break;
    }
    auto left = detail::kronrod15<T>(f, worst.a, mid);
    auto right = detail::kronrod15<T>(f, mid, worst.b);
    out.evaluations += 30;
    ++count;
    panels.push(left);
    panels.push(right);
    total += left.value + right.value - worst.value;
    totalError += left.error + right.error - worst.error;
    if (count % 64 == 0) {
      // Periodic resummation keeps incremental rounding from drifting.
      auto copy = panels;
      total = T{};
      totalError = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        totalError += copy.top().error;
        copy.pop();
      }
    }
  }
  out.value = total;
  out.error = totalError;
  out.converged = totalError <= std::max(absTol, relTol * detail::magnitude(total));
  return out;
}

}  // namespace volterra

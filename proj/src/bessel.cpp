#include "synthwalk/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "synthwalk/errors.hpp"

namespace synthwalk {
namespace {

constexpr double kSeriesLimit = 2.0;
constexpr double kRescaleAbove = 1e250;

void require_finite(double x) {
  if (!std::isfinite(x)) throw ConfigError("bessel_j: argument must be finite");
}

// sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!), x >= 0.
double series(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  if (term == 0.0) return 0.0;
  const double h2 = half * half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Unnormalized J_0..J_max_order from backward recurrence, x > 0.
std::vector<double> miller(double x, int max_order) {
  const double scale = std::max(static_cast<double>(max_order), x);
  int start = static_cast<int>(scale + 30.0 + std::sqrt(60.0 * scale));
  start += start % 2;

  std::vector<double> j(static_cast<std::size_t>(max_order) + 1, 0.0);
  double next = 0.0;  // J_{k+1}
  double cur = 1e-30; // J_k
  double even_sum = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k >= 1; --k) {
    const double prev = k * two_over_x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > kRescaleAbove) {
      cur /= kRescaleAbove;
      next /= kRescaleAbove;
      even_sum /= kRescaleAbove;
      for (auto& v : j) v /= kRescaleAbove;
    }
    const int order = k - 1;
    if (order <= max_order) j[static_cast<std::size_t>(order)] = cur;
    if (order > 0 && order % 2 == 0) even_sum += cur;
  }
  const double norm = cur + 2.0 * even_sum;  // cur holds J_0
  for (auto& v : j) v /= norm;
  return j;
}

}  // namespace

std::vector<double> bessel_j_sequence(double x, int max_order) {
  require_finite(x);
  if (max_order < 0) throw ConfigError("bessel_j_sequence: max_order must be >= 0");
  const double ax = std::abs(x);
  std::vector<double> j;
  if (ax == 0.0) {
    j.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
    j[0] = 1.0;
    return j;
  }
  if (ax <= kSeriesLimit) {
    j.resize(static_cast<std::size_t>(max_order) + 1);
    for (int n = 0; n <= max_order; ++n) j[static_cast<std::size_t>(n)] = series(n, ax);
  } else {
    j = miller(ax, max_order);
  }
  if (x < 0.0) {
    for (std::size_t n = 1; n < j.size(); n += 2) j[n] = -j[n];
  }
  return j;
}

double bessel_j(int order, double x) {
  require_finite(x);
  const int n = std::abs(order);
  double value;
  const double ax = std::abs(x);
  if (ax == 0.0) {
    value = n == 0 ? 1.0 : 0.0;
  } else if (ax <= kSeriesLimit) {
    value = series(n, ax);
  } else {
    value = miller(ax, n).back();
  }
  // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).
  const bool flip = (order < 0 && n % 2 == 1) != (x < 0.0 && n % 2 == 1);
  return flip ? -value : value;
}

}  // namespace synthwalk

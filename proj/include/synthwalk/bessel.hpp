#pragma once

#include <vector>

namespace synthwalk {

// Bessel function of the first kind J_l(x) for integer order.
//
// Ascending power series for x <= 2, Miller backward recurrence normalized by
// J_0 + 2 sum_k J_2k = 1 otherwise. Absolute error below 1e-13 for
// |l| <= 80, |x| <= 40. Throws ConfigError for non-finite x.
double bessel_j(int order, double x);

// J_0(x), ..., J_max_order(x) from a single recurrence sweep.
std::vector<double> bessel_j_sequence(double x, int max_order);

}  // namespace synthwalk

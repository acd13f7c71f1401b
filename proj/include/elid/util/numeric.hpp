#pragma once

#include <cstddef>
#include <vector>

namespace elid {

/// Deterministic pairwise (fixed binary tree) summation.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

/// Least-squares slope of log(err) against log(h).
double observed_order(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace elid

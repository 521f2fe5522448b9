#pragma once

#include <vector>

namespace spw {

// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int n);  // cached per n

// Rule mapped to [a, b].
GaussRule gauss_on(int n, double a, double b);

// Composite rule: per-segment Gauss of order n on consecutive breakpoints.
// Exact for piecewise polynomials with joints at the breakpoints, which is
// what the linearly interpolated profile tables need.
GaussRule gauss_segments(int n, const std::vector<double>& breaks);

}  // namespace spw

#pragma once

#include <vector>

#include "sparsewave/types.hpp"

namespace spw {

// Bound for x_{n+1} = a_n x_n + b_n with a, b, x0 >= 0:
// (x0 + sum b_j) * max{1, suffix products of a}.
double affine_iteration_bound(const std::vector<double>& a, const std::vector<double>& b, double x0);

// sup_{x>0} x^j e^{-eps x} = (j/e)^j eps^{-j}, attained at x = j/eps.
double poly_exp_max(double j, double eps);

struct ProductAsymptotics {
    std::vector<cplx> iterates;     // x_0 .. x_N
    std::vector<double> envelope;   // bound on |x_n| for each n
};

// Exact iterates of x_{n+1} = x_n (1 + q_n) + d_n together with the envelope
//   exp(C ||q||_2^2) |exp(sum_{j<n} q_j)| (|x0| + omega sum_{j<n} exp(-alpha j + ||q||_2 sqrt(j+1))).
// C = 1 is sufficient whenever every |q_n| <= 1/2, via |(1+z)e^{-z}| <= e^{|z|^2}.
ProductAsymptotics product_asymptotics(const std::vector<cplx>& q, const std::vector<cplx>& d,
                                       cplx x0, double alpha, double omega, double C = 1.0);

}  // namespace spw

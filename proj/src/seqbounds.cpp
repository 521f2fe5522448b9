#include "sparsewave/seqbounds.hpp"

#include <algorithm>
#include <cmath>

namespace spw {

double affine_iteration_bound(const std::vector<double>& a, const std::vector<double>& b, double x0) {
    if (x0 < 0.0) throw InvalidInput("affine_iteration_bound: x0 must be nonnegative");
    for (double v : a)
        if (v < 0.0) throw InvalidInput("affine_iteration_bound: a must be nonnegative");
    double bsum = 0.0;
    for (double v : b) {
        if (v < 0.0) throw InvalidInput("affine_iteration_bound: b must be nonnegative");
        bsum += v;
    }
    double max_suffix = 1.0;
    double suffix = 1.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        suffix *= *it;
        max_suffix = std::max(max_suffix, suffix);
    }
    return (x0 + bsum) * max_suffix;
}

double poly_exp_max(double j, double eps) {
    if (!(j > 0.0) || !(eps > 0.0)) throw InvalidInput("poly_exp_max: j and eps must be positive");
    return std::exp(j * (std::log(j) - 1.0 - std::log(eps)));
}

ProductAsymptotics product_asymptotics(const std::vector<cplx>& q, const std::vector<cplx>& d,
                                       cplx x0, double alpha, double omega, double C) {
    if (!(alpha > 0.0)) throw InvalidInput("product_asymptotics: alpha must be positive");
    std::size_t N = std::min(q.size(), d.size());

    double q_l2_sq = 0.0;
    for (std::size_t j = 0; j < N; ++j) q_l2_sq += std::norm(q[j]);
    double q_l2 = std::sqrt(q_l2_sq);

    ProductAsymptotics out;
    out.iterates.push_back(x0);
    out.envelope.push_back(std::exp(C * q_l2_sq) * std::abs(x0));

    cplx x = x0;
    cplx qsum = 0.0;
    double dsum = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        x = x * (1.0 + q[j]) + d[j];
        qsum += q[j];
        dsum += std::exp(-alpha * static_cast<double>(j) + q_l2 * std::sqrt(static_cast<double>(j) + 1.0));
        out.iterates.push_back(x);
        out.envelope.push_back(std::exp(C * q_l2_sq) * std::abs(std::exp(qsum)) *
                               (std::abs(x0) + omega * dsum));
    }
    return out;
}

}  // namespace spw

#pragma once

#include <vector>

#include "sparsewave/greens.hpp"
#include "sparsewave/logtower.hpp"
#include "sparsewave/potential.hpp"
#include "sparsewave/types.hpp"

namespace spw {

struct RadialSolution {
    int m = 0;
    cplx k;
    std::vector<double> r;        // ascending sample radii (accepted integrator steps)
    std::vector<cplx> u, uprime;
    bool outgoing = true;         // matched to e^{ikr} beyond the potential support
};

// Integrates -u'' + [m(m+1)/r^2 + V(r) - k^2] u = 0 inward from r_max down to
// r_min, seeded with the outgoing Riccati-Hankel data times e^{-ik r_max} so
// the tail stays representable at complex k. Requires a symmetric potential,
// r_max at least 10 beyond the last shell, m <= 64. A step-size collapse near
// the origin reports the smallest radius reached.
RadialSolution solve_radial(const SparsePotential& pot, int m, cplx k, double r_max,
                            double r_min = 0.5);

// Far-field coefficient A with u ~ A e^{ik|x|}/|x| for radial data, from the
// m = 0 channel by variation of parameters: A = e^{-ik r_max} P / W where P
// integrates the regular solution against the source and W is the Wronskian
// with the outgoing solution. Entirely independent of the angular machinery.
cplx radial_amplitude_oracle(const SourceSpec& f, const SparsePotential& pot, cplx k);

// Factor in the gap lower bound for Q = |f|^2 + E^{-1}|f'|^2 across a
// potential-free interval:
//   exp[ -(1/sqrt(E)) m(m+1) (r - r_inner) / (r r_inner) ].
double prufer_decay_factor(int m, double E, double r_inner, double r);

// Q(r) >= prufer_gap_bound given the channel data at r_inner; V = 0 on
// [r_inner, r] and E > 0 assumed.
double prufer_gap_bound(int m, double E, double r_inner, double r, double f_val, double f_deriv);

// Channel decomposition of a putative eigenfunction at a probe radius:
// per-channel mass and the tail sums p_m used by the cutoff split.
struct ChannelData {
    double E = 0;
    double probe_radius = 0;
    int cutoff = 0;                  // channel index k_n of the split
    std::vector<double> mass;        // mass[m], summed over orders
    std::vector<double> tail;        // p_m = sum_{j >= m} mass[j]
    bool tails_consistent(double tol = 1e-12) const;  // p_m nonincreasing, p_0 = total
};

ChannelData make_channel_data(double E, double probe_radius, int cutoff,
                              std::vector<double> mass);

// Mass kept below the cutoff when the tails obey p_m <= C R^2 / m:
// total - C R^2 / cutoff. Positive once cutoff > C R^2 / total.
double tail_split_lower_bound(double total_mass, double C, double R, int cutoff);

// Radii schedule R_0 = e^{log_R0}, R_{n+1} = exp(exp(R_n^beta)).
struct GapSchedule {
    double log_R0 = 120.0;
    double beta = 1.4;
    int count = 5;
};

struct AbsenceConstants {
    double C1 = 1.0;  // low-channel mass prefactor
    double C2 = 1.0;  // additive slack in the same bound
};

// One gap [r_n, R_{n+1}] of the contradiction chain, all logs as towers since
// the radii are doubly exponential.
struct GapGrowthCertificate {
    int n = 0;
    double E = 0;
    LogTower gap_inner;               // probe radius r_n = R_n + 2
    LogTower gap_outer;               // R_{n+1}
    LogTower k_cutoff;                // channel cutoff k_n
    SignedLogTower log_growth_factor; // ln of the decay factor across the gap (<= 0)
    SignedLogTower log_min_gap;       // ln of the gap length that forces the contradiction
    SignedLogTower margin;            // ln(available gap) - ln(required gap)
    bool contradiction = false;       // margin > 0
};

struct AbsenceVerdict {
    double E = 0;
    double gamma = 0;
    std::vector<GapGrowthCertificate> certificates;
    bool contradiction_all = false;
    bool margins_increasing = false;
};

// Replays the chain: cutoff k_n minimal with R_n^2/k_n < R_n e^{-gamma Phi_n},
// Phi_n = R_n^{4/3} ln R_n; low-channel mass at least (C1 R_n - C2) R_n
// e^{-gamma Phi_n}; growth across the gap bounded below through the decay
// factor at channel k_n. The verdict records whether every tested gap yields
// more mass than any fixed constant, with margins increasing in n.
AbsenceVerdict eigenvalue_absence_check(double E, double gamma, const GapSchedule& schedule,
                                        const AbsenceConstants& constants = {});

}  // namespace spw

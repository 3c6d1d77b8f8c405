#ifndef ESTSAT_MOMENT_HPP
#define ESTSAT_MOMENT_HPP

#include <cstdint>

namespace estsat {

// Parameter bundle of the core first-moment computation. Counts follow the
// variable roles: s controlled self-constrained variables, t non-starred
// variables outside that set (u of them starrable, v of those invertible),
// n - s - t starred variables. p is the per-clause inclusion probability
// and rho the star seed.
struct MomentParams {
    std::int64_t n = 0;
    std::int64_t s = 0;
    std::int64_t t = 0;
    std::int64_t u = 0;
    std::int64_t v = 0;
    double p = 0.0;
    double rho = 0.0;

    void validate() const; // 0 <= v <= u <= t <= n - s, p in [0,1], s >= 0
};

// ln C(n, k) through lgamma; -inf outside the triangle.
double lchoose(double n, double k);

// Clause categories with their slot counts (the Size column of the clause
// table). Counts are returned as doubles since they reach ~n^3.
struct ClauseCensus {
    double type1_forbidden_sc_triples;      // C(s,3)
    double type1_forbidden_sc_pair_outside; // 2(n-s) C(s,2)
    double type2_alo_per_sc;                // C(s,2), one family per self-constrained var
    double type3_forbidden_positive;        // C(t,3) + s C(t,2)
    double type3_forbidden_star_pair;       // 2(n-s-t)(C(t,2) + st)
    double type3_forbidden_starrable_neg;   // u (C(t,2) + st)
    double type3_forbidden_invertible;      // 2(n-s-t) v (s+t)
    double type3_alo_per_ns;                // C(t,2) + st, one family per non-starrable var
    double type3_alo_per_sni;               // 2(n-s-t)(s+t), one family per starrable non-invertible var

    double forbidden_exponent() const; // exponent of (1-p) inside Q
};

ClauseCensus clause_census(const MomentParams& params);

// Q = (1-p)^{forbidden} (1-(1-p)^{C(t,2)+st})^{t-u} (1-(1-p)^{2(n-s-t)(s+t)})^{u-v}.
double q_factor(const MomentParams& params);     // direct space, in [0,1]
double log_q_factor(const MomentParams& params); // natural log, -inf for Q = 0

// Natural log of the closed-form first moment of cores with n - s - t
// starred variables; u and v are already summed out. Returns -inf when the
// moment vanishes (for instance rho = 0 with t < n - s).
double log_ez_t(std::int64_t n, std::int64_t s, std::int64_t t, double rho, double p);
double log_ez_t(const MomentParams& params);

// Asymptotic scaling: s = floor(a n), t = b n, and the clause probability
// p = 3 alpha (1-d) / (n^2 (4 - a^2 (3-a))). The parameter d comes from
// the external cover model and is always passed explicitly.
double p_of(double n, double alpha, double a, double d_param);

struct AsymptoticParams {
    double alpha = 0.0;
    double a = 0.0;
    double b = 0.0;
    double rho = 0.0;
    double d_param = 0.0;

    void validate() const; // a in (0,1), b in [0,1-a], alpha > 0, rho in [0,1]
};

// h = lim (ln E Z_t) / n, with the x^x = 1 convention at the b = 0 and
// b = 1 - a boundaries.
double exponent_h(const AsymptoticParams& ap);

// rho(a) = 0.3758 a + 0.7067 (exceeds 1 beyond a ~ 0.7804; callers that
// feed it into a seed must reject such values).
double rho_of_a(double a);

struct McResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of E Z_t: clause slots of every family are sampled
// independently with probability p, variable roles are read off the
// sampled slots, and the configuration weight is accumulated. Trials run
// in fixed-size blocks seeded by (seed, block), so the estimate does not
// depend on the thread count.
McResult moment_mc(std::int64_t n, std::int64_t s, std::int64_t t, double rho, double p,
                   std::uint64_t trials, std::uint64_t seed);
McResult moment_mc_serial(std::int64_t n, std::int64_t s, std::int64_t t, double rho,
                          double p, std::uint64_t trials, std::uint64_t seed);

} // namespace estsat

#endif

#include "estsat/moment.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "estsat/errors.hpp"
#include "estsat/rng.hpp"

namespace estsat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double choose2(double x) { return x * (x - 1.0) / 2.0; }
double choose3(double x) { return x * (x - 1.0) * (x - 2.0) / 6.0; }

// m * ln(1-p) with the 0 * inf corner pinned to 0 (an empty clause family
// contributes no factor even at p = 1).
double log_qpow(double p, double m) {
    return m == 0.0 ? 0.0 : m * std::log1p(-p);
}

// ln(1 - (1-p)^m) for m >= 0, -inf when the argument vanishes.
double log_one_minus_qpow(double p, double m) {
    if (m <= 0.0) return kNegInf;
    const double l = log_qpow(p, m); // ln((1-p)^m) <= 0
    if (l == 0.0) return kNegInf;    // p = 0: 1 - 1 = 0
    return std::log(-std::expm1(l));
}

} // namespace

void MomentParams::validate() const {
    if (s < 0 || t < 0 || u < 0 || v < 0) throw PreconditionError("counts must be nonnegative");
    if (v > u || u > t || t > n - s)
        throw PreconditionError("counts must satisfy 0 <= v <= u <= t <= n - s");
    if (p < 0.0 || p > 1.0) throw PreconditionError("p must lie in [0, 1]");
    if (rho < 0.0 || rho > 1.0) throw PreconditionError("rho must lie in [0, 1]");
}

double lchoose(double n, double k) {
    if (k < 0.0 || k > n) return kNegInf;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

ClauseCensus clause_census(const MomentParams& params) {
    params.validate();
    const double n = static_cast<double>(params.n);
    const double s = static_cast<double>(params.s);
    const double t = static_cast<double>(params.t);
    const double u = static_cast<double>(params.u);
    const double v = static_cast<double>(params.v);

    ClauseCensus census;
    census.type1_forbidden_sc_triples = choose3(s);
    census.type1_forbidden_sc_pair_outside = 2.0 * (n - s) * choose2(s);
    census.type2_alo_per_sc = choose2(s);
    census.type3_forbidden_positive = choose3(t) + s * choose2(t);
    census.type3_forbidden_star_pair = 2.0 * (n - s - t) * (choose2(t) + s * t);
    census.type3_forbidden_starrable_neg = u * (choose2(t) + s * t);
    census.type3_forbidden_invertible = 2.0 * (n - s - t) * v * (s + t);
    census.type3_alo_per_ns = choose2(t) + s * t;
    census.type3_alo_per_sni = 2.0 * (n - s - t) * (s + t);
    return census;
}

double ClauseCensus::forbidden_exponent() const {
    return type3_forbidden_positive + type3_forbidden_star_pair +
           type3_forbidden_starrable_neg + type3_forbidden_invertible;
}

double log_q_factor(const MomentParams& params) {
    const ClauseCensus census = clause_census(params);
    const double t_u = static_cast<double>(params.t - params.u);
    const double u_v = static_cast<double>(params.u - params.v);

    double log_q = log_qpow(params.p, census.forbidden_exponent());
    if (t_u > 0.0) {
        const double l = log_one_minus_qpow(params.p, census.type3_alo_per_ns);
        if (l == kNegInf) return kNegInf;
        log_q += t_u * l;
    }
    if (u_v > 0.0) {
        const double l = log_one_minus_qpow(params.p, census.type3_alo_per_sni);
        if (l == kNegInf) return kNegInf;
        log_q += u_v * l;
    }
    return log_q;
}

double q_factor(const MomentParams& params) {
    const double log_q = log_q_factor(params);
    return log_q == kNegInf ? 0.0 : std::exp(log_q);
}

double log_ez_t(std::int64_t n, std::int64_t s, std::int64_t t, double rho, double p) {
    MomentParams params{n, s, t, 0, 0, p, rho};
    params.validate();
    const double nd = static_cast<double>(n);
    const double sd = static_cast<double>(s);
    const double td = static_cast<double>(t);

    double log_m = 0.0;
    const double star_count = nd - sd - td;
    if (star_count > 0.0) {
        if (rho == 0.0) return kNegInf;
        log_m += star_count * std::log(rho);
    }
    log_m += lchoose(nd - sd, td);
    log_m += td * std::log(2.0);
    log_m += log_qpow(p, choose3(td) + sd * choose2(td) +
                         2.0 * star_count * (choose2(td) + sd * td));
    if (t > 0) {
        // 1 - (1-p)^{C(t,2)+st} (rho + (1-rho)/2 (1-p)^{2(n-s-t)(s+t)})
        const double q1 = std::exp(log_qpow(p, choose2(td) + sd * td));
        const double q2 = std::exp(log_qpow(p, 2.0 * star_count * (sd + td)));
        const double inner = 1.0 - q1 * (rho + 0.5 * (1.0 - rho) * q2);
        if (inner <= 0.0) return kNegInf;
        log_m += td * std::log(inner);
    }
    return log_m;
}

double log_ez_t(const MomentParams& params) {
    return log_ez_t(params.n, params.s, params.t, params.rho, params.p);
}

double p_of(double n, double alpha, double a, double d_param) {
    return 3.0 * alpha * (1.0 - d_param) / (n * n * (4.0 - a * a * (3.0 - a)));
}

void AsymptoticParams::validate() const {
    if (!(a > 0.0 && a < 1.0)) throw PreconditionError("a must lie in (0, 1)");
    if (b < 0.0 || b > 1.0 - a) throw PreconditionError("b must lie in [0, 1 - a]");
    if (alpha <= 0.0) throw PreconditionError("alpha must be positive");
    if (rho < 0.0 || rho > 1.0) throw PreconditionError("rho must lie in [0, 1]");
}

namespace {

double xlogx(double x) { return x <= 0.0 ? 0.0 : x * std::log(x); }

} // namespace

double exponent_h(const AsymptoticParams& ap) {
    ap.validate();
    const double a = ap.a;
    const double b = ap.b;
    const double rho = ap.rho;
    const double denom = 4.0 - a * a * (3.0 - a);
    const double c = ap.alpha * (1.0 - ap.d_param);

    // Entropy-like block ln((1-a)^{1-a} 2^b rho^{1-a-b} / (b^b (1-a-b)^{1-a-b})).
    double h = xlogx(1.0 - a) + b * std::log(2.0) - xlogx(b) - xlogx(1.0 - a - b);
    const double star_fraction = 1.0 - a - b;
    if (star_fraction > 0.0) {
        if (rho == 0.0) return kNegInf;
        h += star_fraction * std::log(rho);
    }

    h -= c * b * (b * (6.0 - 5.0 * b - 3.0 * a) + 12.0 * (1.0 - a - b) * a) / (2.0 * denom);

    if (b > 0.0) {
        const double big_a = 3.0 * c * b * (b + 2.0 * a) / (2.0 * denom);
        const double big_b = 6.0 * c * (1.0 - a - b) * (a + b) / denom;
        const double inner = 1.0 - std::exp(-big_a) * (rho + 0.5 * (1.0 - rho) * std::exp(-big_b));
        if (inner <= 0.0) return kNegInf;
        h += b * std::log(inner);
    }
    return h;
}

double rho_of_a(double a) {
    if (a < 0.0 || a > 1.0) throw PreconditionError("a must lie in [0, 1]");
    return 0.3758 * a + 0.7067;
}

namespace {

// One simulated configuration: sample every clause family, derive the
// variable roles, return the configuration weight (0 when a globally
// forbidden clause appeared).
double mc_trial(std::int64_t s, std::int64_t t, double rho, double p,
                const ClauseCensus& census, Rng& rng) {
    auto family_hit = [&](double slots) {
        const auto count = static_cast<std::uint64_t>(slots);
        for (std::uint64_t i = 0; i < count; ++i)
            if (bernoulli(rng, p)) return true;
        return false;
    };
    (void)s;
    if (family_hit(census.type3_forbidden_positive)) return 0.0;
    if (family_hit(census.type3_forbidden_star_pair)) return 0.0;
    double weight = 1.0;
    for (std::int64_t k = 0; k < t; ++k) {
        if (family_hit(census.type3_alo_per_ns)) continue; // non-starrable, weight 1
        if (family_hit(census.type3_alo_per_sni))
            weight *= 1.0 - rho; // starrable but not invertible
        else
            weight *= 0.5 * (1.0 - rho); // invertible
    }
    return weight;
}

template <bool Parallel>
McResult mc_impl(std::int64_t n, std::int64_t s, std::int64_t t, double rho, double p,
                 std::uint64_t trials, std::uint64_t seed) {
    MomentParams params{n, s, t, 0, 0, p, rho};
    params.validate();
    const ClauseCensus census = clause_census(params);

    constexpr std::uint64_t kBlock = 1024;
    const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
    std::vector<double> sum(blocks, 0.0), sum_sq(blocks, 0.0);

#pragma omp parallel for schedule(dynamic, 1) if (Parallel)
    for (std::int64_t blk = 0; blk < static_cast<std::int64_t>(blocks); ++blk) {
        Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(blk + 1));
        const std::uint64_t lo = static_cast<std::uint64_t>(blk) * kBlock;
        const std::uint64_t hi = lo + kBlock < trials ? lo + kBlock : trials;
        double local = 0.0, local_sq = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double x = mc_trial(s, t, rho, p, census, rng);
            local += x;
            local_sq += x * x;
        }
        sum[static_cast<std::size_t>(blk)] = local;
        sum_sq[static_cast<std::size_t>(blk)] = local_sq;
    }

    double total = 0.0, total_sq = 0.0;
    for (std::uint64_t blk = 0; blk < blocks; ++blk) {
        total += sum[blk];
        total_sq += sum_sq[blk];
    }
    const double mean = total / static_cast<double>(trials);
    const double var =
        (total_sq / static_cast<double>(trials) - mean * mean) / static_cast<double>(trials);

    // Scale by the configuration count rho^{n-s-t} C(n-s, t) 2^t.
    double log_scale = static_cast<double>(t) * std::log(2.0) +
                       lchoose(static_cast<double>(n - s), static_cast<double>(t));
    const double star_count = static_cast<double>(n - s - t);
    double scale;
    if (star_count > 0.0 && rho == 0.0)
        scale = 0.0;
    else
        scale = std::exp(log_scale + star_count * (rho > 0.0 ? std::log(rho) : 0.0));

    McResult result;
    result.estimate = scale * mean;
    result.std_error = scale * std::sqrt(var > 0.0 ? var : 0.0);
    result.trials = trials;
    result.seed = seed;
    return result;
}

} // namespace

McResult moment_mc(std::int64_t n, std::int64_t s, std::int64_t t, double rho, double p,
                   std::uint64_t trials, std::uint64_t seed) {
    return mc_impl<true>(n, s, t, rho, p, trials, seed);
}

McResult moment_mc_serial(std::int64_t n, std::int64_t s, std::int64_t t, double rho,
                          double p, std::uint64_t trials, std::uint64_t seed) {
    return mc_impl<false>(n, s, t, rho, p, trials, seed);
}

} // namespace estsat

#ifndef ESTSAT_STARSAT_HPP
#define ESTSAT_STARSAT_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include "estsat/network.hpp"
#include "estsat/weighting.hpp"

namespace estsat {

// Domain of the three-valued model: 0, 1 and * (star). Star valuations
// reuse Valuation with value indices {0, 1, 2}.
inline constexpr Value kStar = 2;
inline const std::vector<std::string> kStarDomain = {"0", "1", "*"};

struct CnfFormula {
    int variable_count = 0;
    std::vector<std::vector<int>> clauses; // DIMACS literals, no trailing 0

    void validate() const;
};

CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs_file(const std::string& path);

// Valid valuation: every clause has a true literal or at least two
// literals on starred variables.
bool is_valid(const CnfFormula& f, const Valuation& v);

// A_F(sigma, x) computed locally: the values a for which sigma with x set
// to a stays valid. sigma itself must be valid.
std::vector<Value> star_allowed(const CnfFormula& f, Valuation& v, int x);

// All valid valuations in lexicographic order of (0, 1, *); OpenMP filter
// with a serial reference. Throws CapacityError past the 3^n cap.
std::vector<Valuation> valid_valuations(const CnfFormula& f, std::uint64_t cap = kDefaultCap);
std::vector<Valuation> valid_valuations_serial(const CnfFormula& f,
                                               std::uint64_t cap = kDefaultCap);

SolutionNetwork star_network(const CnfFormula& f, std::uint64_t cap = kDefaultCap);

struct StarWeights {
    enum class Mode { Maneva, Improved };
    Mode mode = Mode::Improved;
    std::vector<std::array<double, 3>> seed; // (s0, s1, s*) per variable

    // rho-parameterized seeds: s* = rho, s0 = s1 = (1 - rho) / 2.
    static StarWeights from_rho(int variable_count, double rho,
                                Mode mode = Mode::Improved);
    void validate(double eps = kDefaultEps) const;

    double s(int x, Value a) const {
        return seed[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)];
    }
};

// The weight generator of a clique value set. Maneva: s* on star, s0 on a
// boolean value whose clique admits *, s0 + s* otherwise. Improved: the
// seed on star, the seed plus all out-of-clique seed mass on booleans.
double star_generator(const StarWeights& w, int x, Value a, std::span<const Value> delta);

// w_F(sigma, x) through the local clique.
double star_weight(const CnfFormula& f, const StarWeights& w, Valuation& sigma, int x);

// Decomposer of the improved weights: the seed where sigma(x) = a or where
// sigma(x) is boolean and a falls outside the clique; zero elsewhere.
double star_decomposer(const CnfFormula& f, const StarWeights& w, Valuation& sigma, int x,
                       Value a);
double star_transfer(const CnfFormula& f, const StarWeights& w, const Valuation& sigma,
                     const Valuation& v);
double star_unladen(const StarWeights& w, const Valuation& v);

// gamma(F): total weight of all valid valuations. OpenMP sweep with a
// serial reference.
double gamma(const CnfFormula& f, const StarWeights& w, std::uint64_t cap = kDefaultCap);
double gamma_serial(const CnfFormula& f, const StarWeights& w,
                    std::uint64_t cap = kDefaultCap);

// Starring process: while some non-starred variable admits * in its
// clique, star it (variables scanned in ascending index each pass). The
// input must be a boolean solution; the fixed point is returned.
Valuation core_of(const CnfFormula& f, const Valuation& boolean_solution);

// Cover predicate: v is valid and every non-starred variable is
// non-starrable.
bool is_cover(const CnfFormula& f, const Valuation& v);

bool is_core_nontrivial(const Valuation& v); // some variable non-starred
int non_starred_count(const Valuation& v);

bool is_boolean_solution(const CnfFormula& f, const Valuation& v);
std::vector<Valuation> boolean_solutions(const CnfFormula& f,
                                         std::uint64_t cap = kDefaultCap);

// Seed table file: one `<x> <s0> <s1> <sstar>` line per variable.
StarWeights parse_star_weights(std::istream& in, int variable_count,
                               StarWeights::Mode mode);
StarWeights parse_star_weights_file(const std::string& path, int variable_count,
                                    StarWeights::Mode mode);

} // namespace estsat

#endif

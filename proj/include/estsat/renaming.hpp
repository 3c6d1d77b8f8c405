#ifndef ESTSAT_RENAMING_HPP
#define ESTSAT_RENAMING_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "estsat/ordering.hpp"

namespace estsat {

// A family of per-variable domain permutations; perm[x][a] is the image of
// value a at variable x.
struct Renaming {
    std::vector<std::vector<Value>> perm;

    void validate(int variable_count, int domain_size) const;
    static Renaming identity(int variable_count, int domain_size);
    // The transposition renaming swapping v1(x) and v2(x) at each variable.
    static Renaming swapping(const Valuation& v1, const Valuation& v2, int domain_size);
};

CspInstance apply_renaming(const Renaming& r, const CspInstance& inst);
Valuation apply_renaming(const Renaming& r, const Valuation& v);

// Canonical serialization of an instance (sorted relations, sorted
// constraints) used to deduplicate orbit members.
std::string canonical_key(const CspInstance& inst);

// Smallest superset closed under every renaming, deduplicated by canonical
// form. Throws CapacityError past the cap.
std::vector<CspInstance> renaming_closure(const std::vector<CspInstance>& family,
                                          std::size_t cap = 1 << 20);

bool is_closed_under_renaming(const std::vector<CspInstance>& family);

struct SetEqualityReport {
    double gamma_total = 0.0;   // sum over the family of W_F(S(F))
    double minimal_total = 0.0; // sum over the family of |M_<(F)|
    double difference = 0.0;
    bool partition_ok = false;    // the classes C(tau, F) partition the couples
    bool class_weights_ok = false; // every class weighs 1 within eps
    double worst_class_deviation = 0.0;
    std::size_t class_count = 0;
    std::size_t couple_count = 0;
    bool equal(double eps) const;
};

// Checks sum_F |M_<(F)| = gamma(family) for an instance-independent
// weighting system (its generator depends only on (x, a, Delta)) and an
// instance-independent orientation, including the partition of the
// (solution, instance) couples into renaming classes and the unit weight
// of every class. PreconditionError when the family is not closed or the
// seed is not unitary.
SetEqualityReport verify_set_equality(const std::vector<CspInstance>& family,
                                      const WeightingSystem& sys,
                                      const Orientation& orientation,
                                      double eps = kDefaultEps,
                                      std::uint64_t cap = kDefaultCap);

// Renamings file: `perm <x> <image of 0> <image of 1> ...`.
Renaming parse_renaming(std::istream& in, int variable_count, int domain_size);
Renaming parse_renaming_file(const std::string& path, int variable_count, int domain_size);

} // namespace estsat

#endif

#ifndef ESTSAT_CSP_HPP
#define ESTSAT_CSP_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace estsat {

// Values and variables are 0-based indices into the shared domain and the
// variable list. A valuation assigns one domain value to every variable.
using Value = int;
using Valuation = std::vector<Value>;

// Default exhaustion cap: instances with more than 2^24 candidate
// valuations are refused unless the caller raises the cap.
inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 24;

struct Constraint {
    std::vector<int> scope;                  // variable indices, length k
    std::vector<std::vector<Value>> allowed; // sorted, unique value tuples of arity k

    bool allows(const std::vector<Value>& tuple) const;
};

struct CspInstance {
    int variable_count = 0;
    std::vector<std::string> domain; // d distinct value symbols
    std::vector<Constraint> constraints;

    int domain_size() const { return static_cast<int>(domain.size()); }

    // Checks the structural invariants (valid scopes, tuple arities and
    // values); throws ParseError on violation.
    void validate() const;

    bool is_solution(const Valuation& v) const;
};

// Placeholder symbols a, b, c, ... (v27, v28, ... past the alphabet).
std::vector<std::string> default_domain(int d);

// True iff the projection of v on c.scope lies in c.allowed. Throws Error
// when a scope index is out of range for v.
bool satisfies(const Valuation& v, const Constraint& c);

// Number of valuations d^n, or nullopt on overflow.
std::uint64_t valuation_count(int variable_count, int domain_size);

// Decode a flat index into a valuation; variable 0 is the most significant
// digit, so ascending indices enumerate valuations lexicographically.
Valuation valuation_at(std::uint64_t index, int variable_count, int domain_size);
std::uint64_t valuation_index(const Valuation& v, int domain_size);

// Exhaustive backtracking enumeration in lexicographic order of domain
// indices. Throws CapacityError when d^n exceeds the cap.
std::vector<Valuation> enumerate_solutions(const CspInstance& inst,
                                           std::uint64_t cap = kDefaultCap);

// Line-based text format:
//   # comment
//   csp <n> <d>
//   <k> <scope indices> ; <tuple> | <tuple> | ...
// A line starting with '!' lists forbidden tuples instead; the complement
// within D^k is stored.
CspInstance parse_csp(std::istream& in);
CspInstance parse_csp_file(const std::string& path);
std::string format_valuation(const CspInstance& inst, const Valuation& v);

} // namespace estsat

#endif

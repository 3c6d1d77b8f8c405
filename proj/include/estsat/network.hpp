#ifndef ESTSAT_NETWORK_HPP
#define ESTSAT_NETWORK_HPP

#include <string>
#include <vector>

#include "estsat/csp.hpp"

namespace estsat {

// The solutions network: per variable x, x-adjacency partitions the
// solutions into cliques; two distinct solutions share an edge iff they
// differ on exactly one variable. Immutable after construction.
struct SolutionNetwork {
    int variable_count = 0;
    int domain_size = 0;
    std::vector<std::string> domain;

    std::vector<Valuation> solutions; // sorted lexicographically

    // cliques[x] lists the x-adjacency classes, each a sorted vector of
    // solution indices; clique_of[x][s] locates the class of solution s.
    std::vector<std::vector<std::vector<int>>> cliques;
    std::vector<std::vector<int>> clique_of;
    // allowed[x][c] = sorted values taken on x inside cliques[x][c].
    std::vector<std::vector<std::vector<Value>>> allowed;

    std::vector<std::vector<int>> components; // sorted ids, ordered by least member
    std::vector<int> component_of;

    std::size_t size() const { return solutions.size(); }

    const std::vector<int>& clique(int sol, int x) const {
        return cliques[x][clique_of[x][sol]];
    }
    // A_F(sigma, x)
    const std::vector<Value>& allowed_values(int sol, int x) const {
        return allowed[x][clique_of[x][sol]];
    }

    // Index of a valuation among the solutions, or -1.
    int solution_index(const Valuation& v) const;
};

// Builds the network for an arbitrary solution set (no generating instance
// needed). Throws Error on duplicate solutions or inconsistent lengths.
// When domain symbols are omitted, default_domain(domain_size) is used.
SolutionNetwork build_network(std::vector<Valuation> solutions, int domain_size,
                              std::vector<std::string> domain = {});

// Recomputes the component partition from the clique edges (the builder
// already stores it; this is the standalone operation).
std::vector<std::vector<int>> connected_components(const SolutionNetwork& net);

} // namespace estsat

#endif

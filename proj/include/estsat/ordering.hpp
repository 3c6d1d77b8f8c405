#ifndef ESTSAT_ORDERING_HPP
#define ESTSAT_ORDERING_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "estsat/weighting.hpp"

namespace estsat {

// Per-variable total strict orders on the domain. order[x] lists the
// values ascending: order[x][0] is the minimum of <_x.
struct Orientation {
    std::vector<std::vector<Value>> order;

    void validate(int variable_count, int domain_size) const;
    // Position of value a in <_x (0 = minimum).
    int rank(int x, Value a) const;
    bool value_less(int x, Value a, Value b) const { return rank(x, a) < rank(x, b); }
    static Orientation identity(int variable_count, int domain_size);
};

enum class Compare { Less, Greater, Incomparable };

// Comparison of two solutions under the induced relation: x-adjacent
// distinct pairs compare by their x values, everything else is
// incomparable (the relation is strict, so sigma vs sigma too).
Compare orient(const SolutionNetwork& net, const Orientation& orientation, int sol_a,
               int sol_b);

// Explicit digraph over the solutions, for circuit tests on arbitrary edge
// orientations (not only induced ones).
struct DirectedNetwork {
    int count = 0;
    std::vector<std::vector<int>> out; // out[s] = heads of edges s -> t
};

DirectedNetwork induce_digraph(const SolutionNetwork& net, const Orientation& orientation);

// Directs each adjacency edge with a caller-supplied rule; direction(a, b,
// x) must return true iff the edge goes a -> b (that is, b precedes a).
template <class DirectionFn>
DirectedNetwork orient_edges(const SolutionNetwork& net, DirectionFn&& direction) {
    DirectedNetwork g;
    g.count = static_cast<int>(net.size());
    g.out.assign(net.size(), {});
    for (int x = 0; x < net.variable_count; ++x) {
        for (const auto& clique : net.cliques[static_cast<std::size_t>(x)]) {
            for (std::size_t i = 0; i < clique.size(); ++i) {
                for (std::size_t j = i + 1; j < clique.size(); ++j) {
                    if (direction(clique[i], clique[j], x))
                        g.out[static_cast<std::size_t>(clique[i])].push_back(clique[j]);
                    else
                        g.out[static_cast<std::size_t>(clique[j])].push_back(clique[i]);
                }
            }
        }
    }
    return g;
}

bool is_circuit_free(const DirectedNetwork& g);
std::vector<int> minimal_elements(const DirectedNetwork& g); // no outgoing edge

// Minimal elements of an induced orientation: sigma is minimal iff for
// every variable, sigma(x) is the <_x-minimum of A_F(sigma, x).
std::vector<int> minimal_elements(const SolutionNetwork& net, const Orientation& orientation);

// A partial assignment of orders to variables (the set Xi): ordered
// variables contribute the 0/1 minimum indicator, the others their w_F.
struct MixedOrders {
    std::vector<std::optional<std::vector<Value>>> order; // per variable

    static MixedOrders none(int variable_count) {
        MixedOrders xi;
        xi.order.resize(static_cast<std::size_t>(variable_count));
        return xi;
    }
    bool full() const;
};

double mixed_weight(const WeightingSystem& sys, const SolutionNetwork& net,
                    const MixedOrders& xi);

// The grouped quantities behind the greedy step, for a variable x0 not yet
// ordered in xi. zeta(a, E) collects the grouped weight of solutions whose
// x0-clique values lie inside E with sigma(x0) = a; xi_weight(E) is the
// generator-weighted total over cliques inside E. With a full domain E,
// xi_weight(D) equals mixed_weight(xi), and summing zeta along an order's
// removal sequence recovers mixed_weight with that order added.
double zeta_quantity(const WeightingSystem& sys, const SolutionNetwork& net,
                     const MixedOrders& xi, int x0, Value a, std::span<const Value> subset);
double xi_quantity(const WeightingSystem& sys, const SolutionNetwork& net,
                   const MixedOrders& xi, int x0, std::span<const Value> subset);

struct GreedyStep {
    int variable;
    double omega_before;
    double omega_after;
};

// Greedy construction of a full orientation that never increases the mixed
// weight; requires a homogeneous system with a unitary, strictly positive
// seed. Ties in the removal rule break toward the smallest value index.
Orientation greedy_order_construction(const WeightingSystem& sys, const SolutionNetwork& net,
                                      std::vector<GreedyStep>* steps = nullptr,
                                      double eps = kDefaultEps);

// Orders file: `order <x> <v0> <v1> ...` ascending, one line per variable.
Orientation parse_orders(std::istream& in, int variable_count, int domain_size);
Orientation parse_orders_file(const std::string& path, int variable_count, int domain_size);

} // namespace estsat

#endif

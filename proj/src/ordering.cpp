#include "estsat/ordering.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "estsat/errors.hpp"

namespace estsat {

void Orientation::validate(int variable_count, int domain_size) const {
    if (static_cast<int>(order.size()) != variable_count)
        throw Error("orientation must order every variable");
    for (const auto& values : order) {
        if (static_cast<int>(values.size()) != domain_size)
            throw Error("order must list every domain value exactly once");
        std::vector<bool> seen(static_cast<std::size_t>(domain_size), false);
        for (Value a : values) {
            if (a < 0 || a >= domain_size || seen[static_cast<std::size_t>(a)])
                throw Error("order must be a permutation of the domain");
            seen[static_cast<std::size_t>(a)] = true;
        }
    }
}

int Orientation::rank(int x, Value a) const {
    const auto& values = order[static_cast<std::size_t>(x)];
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == a) return static_cast<int>(i);
    throw Error("value not present in order");
}

Orientation Orientation::identity(int variable_count, int domain_size) {
    Orientation o;
    o.order.assign(static_cast<std::size_t>(variable_count), {});
    for (auto& values : o.order)
        for (Value a = 0; a < domain_size; ++a) values.push_back(a);
    return o;
}

Compare orient(const SolutionNetwork& net, const Orientation& orientation, int sol_a,
               int sol_b) {
    if (sol_a == sol_b) return Compare::Incomparable;
    const Valuation& a = net.solutions[static_cast<std::size_t>(sol_a)];
    const Valuation& b = net.solutions[static_cast<std::size_t>(sol_b)];
    int diff_var = -1;
    for (int x = 0; x < net.variable_count; ++x) {
        if (a[static_cast<std::size_t>(x)] != b[static_cast<std::size_t>(x)]) {
            if (diff_var >= 0) return Compare::Incomparable; // differ on two variables
            diff_var = x;
        }
    }
    return orientation.value_less(diff_var, a[static_cast<std::size_t>(diff_var)],
                                  b[static_cast<std::size_t>(diff_var)])
               ? Compare::Less
               : Compare::Greater;
}

DirectedNetwork induce_digraph(const SolutionNetwork& net, const Orientation& orientation) {
    // Edge tau -> sigma iff sigma < tau on the adjacency variable.
    return orient_edges(net, [&](int s, int t, int x) {
        const Value vs = net.solutions[static_cast<std::size_t>(s)][static_cast<std::size_t>(x)];
        const Value vt = net.solutions[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
        return orientation.value_less(x, vt, vs); // s -> t when t is smaller
    });
}

bool is_circuit_free(const DirectedNetwork& g) {
    // Iterative three-color DFS.
    enum : unsigned char { White, Grey, Black };
    std::vector<unsigned char> color(static_cast<std::size_t>(g.count), White);
    std::vector<std::pair<int, std::size_t>> stack;
    for (int root = 0; root < g.count; ++root) {
        if (color[static_cast<std::size_t>(root)] != White) continue;
        stack.push_back({root, 0});
        color[static_cast<std::size_t>(root)] = Grey;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < g.out[static_cast<std::size_t>(node)].size()) {
                const int head = g.out[static_cast<std::size_t>(node)][next++];
                if (color[static_cast<std::size_t>(head)] == Grey) return false;
                if (color[static_cast<std::size_t>(head)] == White) {
                    color[static_cast<std::size_t>(head)] = Grey;
                    stack.push_back({head, 0});
                }
            } else {
                color[static_cast<std::size_t>(node)] = Black;
                stack.pop_back();
            }
        }
    }
    return true;
}

std::vector<int> minimal_elements(const DirectedNetwork& g) {
    std::vector<int> out;
    for (int s = 0; s < g.count; ++s)
        if (g.out[static_cast<std::size_t>(s)].empty()) out.push_back(s);
    return out;
}

std::vector<int> minimal_elements(const SolutionNetwork& net,
                                  const Orientation& orientation) {
    std::vector<int> out;
    for (int s = 0; s < static_cast<int>(net.size()); ++s) {
        bool minimal = true;
        for (int x = 0; x < net.variable_count && minimal; ++x) {
            const Value sx =
                net.solutions[static_cast<std::size_t>(s)][static_cast<std::size_t>(x)];
            for (Value a : net.allowed_values(s, x)) {
                if (orientation.value_less(x, a, sx)) {
                    minimal = false;
                    break;
                }
            }
        }
        if (minimal) out.push_back(s);
    }
    return out;
}

bool MixedOrders::full() const {
    for (const auto& o : order)
        if (!o.has_value()) return false;
    return true;
}

namespace {

// 1 iff a is the minimum of the clique values under the given order.
double minimum_indicator(const std::vector<Value>& order_values, Value a,
                         const std::vector<Value>& clique_values) {
    for (Value v : order_values) {
        for (Value c : clique_values)
            if (c == v) return v == a ? 1.0 : 0.0;
    }
    throw Error("clique values missing from order");
}

} // namespace

double mixed_weight(const WeightingSystem& sys, const SolutionNetwork& net,
                    const MixedOrders& xi) {
    double total = 0.0;
    for (int s = 0; s < static_cast<int>(net.size()); ++s) {
        double prod = 1.0;
        for (int x = 0; x < net.variable_count && prod != 0.0; ++x) {
            const Value sx =
                net.solutions[static_cast<std::size_t>(s)][static_cast<std::size_t>(x)];
            const auto& maybe_order = xi.order[static_cast<std::size_t>(x)];
            if (maybe_order.has_value())
                prod *= minimum_indicator(*maybe_order, sx, net.allowed_values(s, x));
            else
                prod *= sys.generator(x, sx, net.allowed_values(s, x));
        }
        total += prod;
    }
    return total;
}

namespace {

// Grouped weights Z_{F,Xi,x0}(a, Delta): solutions are keyed by their x0
// value and clique value set (as a bitmask), accumulating the product of
// the other variables' factors.
using ZTable = std::map<std::pair<Value, unsigned>, double>;

ZTable z_table(const WeightingSystem& sys, const SolutionNetwork& net, const MixedOrders& xi,
               int x0) {
    ZTable z;
    for (int s = 0; s < static_cast<int>(net.size()); ++s) {
        double prod = 1.0;
        for (int x = 0; x < net.variable_count; ++x) {
            if (x == x0) continue;
            const Value sx =
                net.solutions[static_cast<std::size_t>(s)][static_cast<std::size_t>(x)];
            const auto& maybe_order = xi.order[static_cast<std::size_t>(x)];
            if (maybe_order.has_value())
                prod *= minimum_indicator(*maybe_order, sx, net.allowed_values(s, x));
            else
                prod *= sys.generator(x, sx, net.allowed_values(s, x));
        }
        unsigned mask = 0;
        for (Value a : net.allowed_values(s, x0)) mask |= 1u << a;
        const Value sx0 =
            net.solutions[static_cast<std::size_t>(s)][static_cast<std::size_t>(x0)];
        z[{sx0, mask}] += prod;
    }
    return z;
}

// zeta(a, E) = sum of Z(a, Delta) over Delta inside E containing a.
double zeta(const ZTable& z, Value a, unsigned e_mask) {
    double total = 0.0;
    for (const auto& [key, value] : z) {
        const auto& [val, mask] = key;
        if (val == a && (mask & ~e_mask) == 0 && (mask >> a & 1u)) total += value;
    }
    return total;
}

// xi(E) = sum over Delta inside E of sum_{a in Delta} omega(x0,a,Delta) Z(a,Delta).
double xi_of_mask(const WeightingSystem& sys, const SolutionNetwork& net, int x0,
                  const ZTable& z, unsigned e_mask) {
    double total = 0.0;
    for (const auto& [key, value] : z) {
        const auto& [val, mask] = key;
        if ((mask & ~e_mask) != 0) continue;
        std::vector<Value> delta;
        for (Value b = 0; b < net.domain_size; ++b)
            if (mask >> b & 1u) delta.push_back(b);
        total += sys.generator(x0, val, delta) * value;
    }
    return total;
}

unsigned subset_mask(std::span<const Value> subset) {
    unsigned mask = 0;
    for (Value a : subset) mask |= 1u << a;
    return mask;
}

} // namespace

double zeta_quantity(const WeightingSystem& sys, const SolutionNetwork& net,
                     const MixedOrders& xi, int x0, Value a, std::span<const Value> subset) {
    return zeta(z_table(sys, net, xi, x0), a, subset_mask(subset));
}

double xi_quantity(const WeightingSystem& sys, const SolutionNetwork& net,
                   const MixedOrders& xi, int x0, std::span<const Value> subset) {
    return xi_of_mask(sys, net, x0, z_table(sys, net, xi, x0), subset_mask(subset));
}

Orientation greedy_order_construction(const WeightingSystem& sys, const SolutionNetwork& net,
                                      std::vector<GreedyStep>* steps, double eps) {
    if (!sys.is_homogeneous(eps))
        throw PreconditionError("greedy order construction requires a homogeneous system");
    if (!sys.seed_unitary(eps))
        throw PreconditionError("greedy order construction requires a unitary seed");
    for (double s : sys.seed.entries)
        if (s <= 0.0)
            throw PreconditionError("greedy order construction requires a positive seed");

    const int d = net.domain_size;
    MixedOrders xi = MixedOrders::none(net.variable_count);
    Orientation result;
    result.order.resize(static_cast<std::size_t>(net.variable_count));

    for (int x0 = 0; x0 < net.variable_count; ++x0) {
        const double before = mixed_weight(sys, net, xi);
        const ZTable z = z_table(sys, net, xi, x0);

        // Repeatedly remove from E the value minimizing
        // zeta(a, E) + xi(E \ {a}); the removal sequence is the ascending
        // order on x0.
        unsigned e_mask = (1u << d) - 1u;
        std::vector<Value> order_values;
        while (e_mask != 0) {
            Value best = -1;
            double best_score = 0.0;
            for (Value a = 0; a < d; ++a) {
                if (!(e_mask >> a & 1u)) continue;
                const double score =
                    zeta(z, a, e_mask) + xi_of_mask(sys, net, x0, z, e_mask & ~(1u << a));
                if (best < 0 || score < best_score) {
                    best = a;
                    best_score = score;
                }
            }
            order_values.push_back(best);
            e_mask &= ~(1u << best);
        }

        xi.order[static_cast<std::size_t>(x0)] = order_values;
        result.order[static_cast<std::size_t>(x0)] = std::move(order_values);
        if (steps) steps->push_back({x0, before, mixed_weight(sys, net, xi)});
    }
    return result;
}

Orientation parse_orders(std::istream& in, int variable_count, int domain_size) {
    Orientation o;
    o.order.assign(static_cast<std::size_t>(variable_count), {});
    std::vector<bool> set(static_cast<std::size_t>(variable_count), false);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind != "order")
            throw ParseError("line " + std::to_string(lineno) + ": expected 'order'");
        int x = -1;
        if (!(ls >> x) || x < 0 || x >= variable_count)
            throw ParseError("line " + std::to_string(lineno) + ": bad variable index");
        std::vector<Value> values;
        int a = -1;
        while (ls >> a) values.push_back(a);
        o.order[static_cast<std::size_t>(x)] = std::move(values);
        set[static_cast<std::size_t>(x)] = true;
    }
    for (bool s : set)
        if (!s) throw ParseError("orders file must order every variable");
    o.validate(variable_count, domain_size);
    return o;
}

Orientation parse_orders_file(const std::string& path, int variable_count, int domain_size) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_orders(in, variable_count, domain_size);
}

} // namespace estsat

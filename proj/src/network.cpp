#include "estsat/network.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "estsat/errors.hpp"

namespace estsat {

int SolutionNetwork::solution_index(const Valuation& v) const {
    auto it = std::lower_bound(solutions.begin(), solutions.end(), v);
    if (it == solutions.end() || *it != v) return -1;
    return static_cast<int>(it - solutions.begin());
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void merge(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

std::vector<std::vector<int>> extract_components(UnionFind& uf, int count) {
    std::unordered_map<int, std::vector<int>> by_root;
    for (int i = 0; i < count; ++i) by_root[uf.find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    out.reserve(by_root.size());
    for (auto& [root, members] : by_root) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

} // namespace

SolutionNetwork build_network(std::vector<Valuation> solutions, int domain_size,
                              std::vector<std::string> domain) {
    SolutionNetwork net;
    net.domain_size = domain_size;
    net.domain = domain.empty() ? default_domain(domain_size) : std::move(domain);
    if (static_cast<int>(net.domain.size()) != domain_size)
        throw Error("domain symbol list does not match domain size");

    std::sort(solutions.begin(), solutions.end());
    if (std::adjacent_find(solutions.begin(), solutions.end()) != solutions.end())
        throw Error("duplicate solutions in network input");
    net.solutions = std::move(solutions);

    if (net.solutions.empty()) return net;
    net.variable_count = static_cast<int>(net.solutions.front().size());
    for (const Valuation& v : net.solutions) {
        if (static_cast<int>(v.size()) != net.variable_count)
            throw Error("solutions of differing lengths");
        for (Value a : v)
            if (a < 0 || a >= domain_size) throw Error("solution value outside the domain");
    }

    const int n = net.variable_count;
    const int count = static_cast<int>(net.solutions.size());
    net.cliques.resize(static_cast<std::size_t>(n));
    net.clique_of.assign(static_cast<std::size_t>(n),
                         std::vector<int>(static_cast<std::size_t>(count), -1));
    net.allowed.resize(static_cast<std::size_t>(n));

    UnionFind uf(count);
    for (int x = 0; x < n; ++x) {
        // Bucket solutions by their assignment with x masked out; each
        // bucket is one x-adjacency class.
        std::unordered_map<std::string, std::vector<int>> buckets;
        for (int s = 0; s < count; ++s) {
            std::string key;
            key.reserve(static_cast<std::size_t>(n));
            for (int y = 0; y < n; ++y)
                key.push_back(y == x ? char(-1)
                                     : static_cast<char>(net.solutions[static_cast<std::size_t>(
                                           s)][static_cast<std::size_t>(y)]));
            buckets[key].push_back(s);
        }
        std::vector<std::vector<int>> classes;
        classes.reserve(buckets.size());
        for (auto& [key, members] : buckets) classes.push_back(std::move(members));
        // Bucket order is hash-dependent; order classes by least member.
        for (auto& members : classes) std::sort(members.begin(), members.end());
        std::sort(classes.begin(), classes.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });

        auto& xa = net.cliques[static_cast<std::size_t>(x)];
        auto& xv = net.allowed[static_cast<std::size_t>(x)];
        for (auto& members : classes) {
            const int id = static_cast<int>(xa.size());
            std::vector<Value> values;
            values.reserve(members.size());
            for (int s : members) {
                net.clique_of[static_cast<std::size_t>(x)][static_cast<std::size_t>(s)] = id;
                values.push_back(
                    net.solutions[static_cast<std::size_t>(s)][static_cast<std::size_t>(x)]);
                uf.merge(members.front(), s);
            }
            std::sort(values.begin(), values.end());
            xa.push_back(std::move(members));
            xv.push_back(std::move(values));
        }
    }

    net.components = extract_components(uf, count);
    net.component_of.assign(static_cast<std::size_t>(count), -1);
    for (std::size_t c = 0; c < net.components.size(); ++c)
        for (int s : net.components[c])
            net.component_of[static_cast<std::size_t>(s)] = static_cast<int>(c);
    return net;
}

std::vector<std::vector<int>> connected_components(const SolutionNetwork& net) {
    const int count = static_cast<int>(net.size());
    if (count == 0) return {};
    UnionFind uf(count);
    for (int x = 0; x < net.variable_count; ++x)
        for (const auto& clique : net.cliques[static_cast<std::size_t>(x)])
            for (int s : clique) uf.merge(clique.front(), s);
    return extract_components(uf, count);
}

} // namespace estsat

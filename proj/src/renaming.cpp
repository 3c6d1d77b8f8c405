#include "estsat/renaming.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "estsat/errors.hpp"

namespace estsat {

void Renaming::validate(int variable_count, int domain_size) const {
    if (static_cast<int>(perm.size()) != variable_count)
        throw Error("renaming must cover every variable");
    for (const auto& p : perm) {
        if (static_cast<int>(p.size()) != domain_size)
            throw Error("renaming permutation has wrong size");
        std::vector<bool> seen(static_cast<std::size_t>(domain_size), false);
        for (Value a : p) {
            if (a < 0 || a >= domain_size || seen[static_cast<std::size_t>(a)])
                throw Error("renaming entry is not a permutation");
            seen[static_cast<std::size_t>(a)] = true;
        }
    }
}

Renaming Renaming::identity(int variable_count, int domain_size) {
    Renaming r;
    r.perm.assign(static_cast<std::size_t>(variable_count), {});
    for (auto& p : r.perm)
        for (Value a = 0; a < domain_size; ++a) p.push_back(a);
    return r;
}

Renaming Renaming::swapping(const Valuation& v1, const Valuation& v2, int domain_size) {
    Renaming r = identity(static_cast<int>(v1.size()), domain_size);
    for (std::size_t x = 0; x < v1.size(); ++x) {
        std::swap(r.perm[x][static_cast<std::size_t>(v1[x])],
                  r.perm[x][static_cast<std::size_t>(v2[x])]);
    }
    return r;
}

CspInstance apply_renaming(const Renaming& r, const CspInstance& inst) {
    CspInstance out = inst;
    for (Constraint& c : out.constraints) {
        for (auto& tuple : c.allowed)
            for (std::size_t i = 0; i < tuple.size(); ++i)
                tuple[i] = r.perm[static_cast<std::size_t>(c.scope[i])]
                                 [static_cast<std::size_t>(tuple[i])];
        std::sort(c.allowed.begin(), c.allowed.end());
    }
    return out;
}

Valuation apply_renaming(const Renaming& r, const Valuation& v) {
    Valuation out(v.size());
    for (std::size_t x = 0; x < v.size(); ++x)
        out[x] = r.perm[x][static_cast<std::size_t>(v[x])];
    return out;
}

std::string canonical_key(const CspInstance& inst) {
    std::vector<std::string> parts;
    parts.reserve(inst.constraints.size());
    for (const Constraint& c : inst.constraints) {
        std::string p = "s";
        for (int x : c.scope) p += std::to_string(x) + ",";
        auto tuples = c.allowed;
        std::sort(tuples.begin(), tuples.end());
        for (const auto& t : tuples) {
            p += ";";
            for (Value a : t) p += std::to_string(a) + ",";
        }
        parts.push_back(std::move(p));
    }
    std::sort(parts.begin(), parts.end());
    std::string key = std::to_string(inst.variable_count) + "/" +
                      std::to_string(inst.domain_size()) + "/";
    for (const auto& p : parts) key += p + "|";
    return key;
}

namespace {

// All per-variable transpositions; they generate the full renaming group,
// so orbit search and closure testing only need these.
std::vector<Renaming> transposition_generators(int n, int d) {
    std::vector<Renaming> out;
    for (int x = 0; x < n; ++x) {
        for (Value a = 0; a < d; ++a) {
            for (Value b = a + 1; b < d; ++b) {
                Renaming r = Renaming::identity(n, d);
                std::swap(r.perm[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)],
                          r.perm[static_cast<std::size_t>(x)][static_cast<std::size_t>(b)]);
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

} // namespace

std::vector<CspInstance> renaming_closure(const std::vector<CspInstance>& family,
                                          std::size_t cap) {
    if (family.empty()) return {};
    const int n = family.front().variable_count;
    const int d = family.front().domain_size();
    for (const CspInstance& inst : family)
        if (inst.variable_count != n || inst.domain_size() != d)
            throw Error("family members must share variables and domain");

    const std::vector<Renaming> generators = transposition_generators(n, d);
    std::vector<CspInstance> closed;
    std::unordered_set<std::string> seen;
    std::deque<CspInstance> queue;
    for (const CspInstance& inst : family) {
        if (seen.insert(canonical_key(inst)).second) {
            closed.push_back(inst);
            queue.push_back(inst);
        }
    }
    while (!queue.empty()) {
        CspInstance inst = std::move(queue.front());
        queue.pop_front();
        for (const Renaming& r : generators) {
            CspInstance image = apply_renaming(r, inst);
            if (seen.insert(canonical_key(image)).second) {
                if (closed.size() >= cap)
                    throw CapacityError("renaming closure exceeds the cap");
                closed.push_back(image);
                queue.push_back(std::move(image));
            }
        }
    }
    // Canonical-key order keeps the closure deterministic.
    std::sort(closed.begin(), closed.end(), [](const CspInstance& a, const CspInstance& b) {
        return canonical_key(a) < canonical_key(b);
    });
    return closed;
}

bool is_closed_under_renaming(const std::vector<CspInstance>& family) {
    if (family.empty()) return true;
    const int n = family.front().variable_count;
    const int d = family.front().domain_size();
    std::unordered_set<std::string> keys;
    for (const CspInstance& inst : family) keys.insert(canonical_key(inst));
    for (const CspInstance& inst : family)
        for (const Renaming& r : transposition_generators(n, d))
            if (!keys.count(canonical_key(apply_renaming(r, inst)))) return false;
    return true;
}

bool SetEqualityReport::equal(double eps) const {
    return std::fabs(difference) <= eps && partition_ok && class_weights_ok;
}

SetEqualityReport verify_set_equality(const std::vector<CspInstance>& family,
                                      const WeightingSystem& sys,
                                      const Orientation& orientation, double eps,
                                      std::uint64_t cap) {
    SetEqualityReport report;
    if (family.empty()) {
        report.partition_ok = true;
        report.class_weights_ok = true;
        return report;
    }
    if (!is_closed_under_renaming(family))
        throw PreconditionError("family is not closed under renaming");
    if (!sys.seed_unitary())
        throw PreconditionError("set equality requires a unitary generator");

    const int d = family.front().domain_size();
    std::vector<SolutionNetwork> nets;
    nets.reserve(family.size());
    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < family.size(); ++i) {
        nets.push_back(build_network(enumerate_solutions(family[i], cap), d,
                                     family[i].domain));
        index_of[canonical_key(family[i])] = i;
    }

    for (std::size_t i = 0; i < family.size(); ++i) {
        report.gamma_total += set_weight(sys, nets[i]);
        report.minimal_total +=
            static_cast<double>(minimal_elements(nets[i], orientation).size());
        report.couple_count += nets[i].size();
    }
    report.difference = report.gamma_total - report.minimal_total;

    // Rebuild the partition of couples: for every minimal tau of every F,
    // the class ranges over sigma in prod_x A_F(tau, x), each paired with
    // the instance renamed by the (sigma, tau) transpositions.
    std::map<std::pair<std::size_t, std::uint64_t>, int> coverage;
    report.partition_ok = true;
    report.class_weights_ok = true;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const SolutionNetwork& net = nets[i];
        for (int tau : minimal_elements(net, orientation)) {
            const Valuation& tau_v = net.solutions[static_cast<std::size_t>(tau)];
            // Enumerate chi_F(tau) as mixed-radix indices over the cliques.
            std::vector<std::vector<Value>> axes;
            axes.reserve(static_cast<std::size_t>(net.variable_count));
            std::uint64_t total = 1;
            for (int x = 0; x < net.variable_count; ++x) {
                axes.push_back(net.allowed_values(tau, x));
                total *= axes.back().size();
            }
            ++report.class_count;
            double class_weight = 0.0;
            for (std::uint64_t idx = 0; idx < total; ++idx) {
                std::uint64_t rest = idx;
                Valuation sigma(static_cast<std::size_t>(net.variable_count));
                for (int x = net.variable_count - 1; x >= 0; --x) {
                    const auto& ax = axes[static_cast<std::size_t>(x)];
                    sigma[static_cast<std::size_t>(x)] = ax[rest % ax.size()];
                    rest /= ax.size();
                }
                const Renaming swap = Renaming::swapping(sigma, tau_v, d);
                const CspInstance image = apply_renaming(swap, family[i]);
                auto found = index_of.find(canonical_key(image));
                if (found == index_of.end()) {
                    report.partition_ok = false;
                    continue;
                }
                const std::size_t gi = found->second;
                const int sigma_index = nets[gi].solution_index(sigma);
                if (sigma_index < 0) {
                    report.partition_ok = false;
                    continue;
                }
                ++coverage[{gi, static_cast<std::uint64_t>(sigma_index)}];
                class_weight += solution_weight(sys, nets[gi], sigma_index);
            }
            const double deviation = std::fabs(class_weight - 1.0);
            report.worst_class_deviation = std::max(report.worst_class_deviation, deviation);
            if (deviation > eps) report.class_weights_ok = false;
        }
    }

    // Exactly-once coverage of every couple.
    std::size_t covered = 0;
    for (const auto& [key, count] : coverage) {
        if (count != 1) report.partition_ok = false;
        covered += static_cast<std::size_t>(count);
    }
    if (covered != report.couple_count || coverage.size() != report.couple_count)
        report.partition_ok = false;
    return report;
}

Renaming parse_renaming(std::istream& in, int variable_count, int domain_size) {
    Renaming r = Renaming::identity(variable_count, domain_size);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind != "perm")
            throw ParseError("line " + std::to_string(lineno) + ": expected 'perm'");
        int x = -1;
        if (!(ls >> x) || x < 0 || x >= variable_count)
            throw ParseError("line " + std::to_string(lineno) + ": bad variable index");
        std::vector<Value> image;
        int a = -1;
        while (ls >> a) image.push_back(a);
        r.perm[static_cast<std::size_t>(x)] = std::move(image);
    }
    r.validate(variable_count, domain_size);
    return r;
}

Renaming parse_renaming_file(const std::string& path, int variable_count, int domain_size) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_renaming(in, variable_count, domain_size);
}

} // namespace estsat

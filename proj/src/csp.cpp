#include "estsat/csp.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "estsat/errors.hpp"

namespace estsat {

bool Constraint::allows(const std::vector<Value>& tuple) const {
    return std::binary_search(allowed.begin(), allowed.end(), tuple);
}

std::vector<std::string> default_domain(int d) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        if (i < 26)
            out.push_back(std::string(1, static_cast<char>('a' + i)));
        else
            out.push_back("v" + std::to_string(i + 1));
    }
    return out;
}

void CspInstance::validate() const {
    const int d = domain_size();
    if (variable_count <= 0) throw ParseError("instance needs at least one variable");
    if (d <= 0) throw ParseError("instance needs a nonempty domain");
    for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
        const Constraint& c = constraints[ci];
        if (c.scope.empty())
            throw ParseError("constraint " + std::to_string(ci) + " has empty scope");
        for (int x : c.scope)
            if (x < 0 || x >= variable_count)
                throw ParseError("constraint " + std::to_string(ci) +
                                 " references variable " + std::to_string(x));
        for (const auto& tuple : c.allowed) {
            if (tuple.size() != c.scope.size())
                throw ParseError("constraint " + std::to_string(ci) +
                                 " has a tuple of wrong arity");
            for (Value a : tuple)
                if (a < 0 || a >= d)
                    throw ParseError("constraint " + std::to_string(ci) +
                                     " has a tuple value outside the domain");
        }
    }
}

bool satisfies(const Valuation& v, const Constraint& c) {
    std::vector<Value> projected;
    projected.reserve(c.scope.size());
    for (int x : c.scope) {
        if (x < 0 || static_cast<std::size_t>(x) >= v.size())
            throw Error("constraint scope index " + std::to_string(x) +
                        " out of range for valuation of length " + std::to_string(v.size()));
        projected.push_back(v[static_cast<std::size_t>(x)]);
    }
    return c.allows(projected);
}

bool CspInstance::is_solution(const Valuation& v) const {
    for (const Constraint& c : constraints)
        if (!satisfies(v, c)) return false;
    return true;
}

std::uint64_t valuation_count(int variable_count, int domain_size) {
    std::uint64_t total = 1;
    for (int i = 0; i < variable_count; ++i) {
        if (total > UINT64_MAX / static_cast<std::uint64_t>(domain_size))
            throw CapacityError("d^n overflows 64 bits");
        total *= static_cast<std::uint64_t>(domain_size);
    }
    return total;
}

Valuation valuation_at(std::uint64_t index, int variable_count, int domain_size) {
    Valuation v(static_cast<std::size_t>(variable_count));
    for (int x = variable_count - 1; x >= 0; --x) {
        v[static_cast<std::size_t>(x)] =
            static_cast<Value>(index % static_cast<std::uint64_t>(domain_size));
        index /= static_cast<std::uint64_t>(domain_size);
    }
    return v;
}

std::uint64_t valuation_index(const Valuation& v, int domain_size) {
    std::uint64_t index = 0;
    for (Value a : v) index = index * static_cast<std::uint64_t>(domain_size) +
                              static_cast<std::uint64_t>(a);
    return index;
}

namespace {

void backtrack(const CspInstance& inst,
               const std::vector<std::vector<const Constraint*>>& ready, Valuation& v,
               int depth, std::vector<Valuation>& out) {
    if (depth == inst.variable_count) {
        out.push_back(v);
        return;
    }
    for (Value a = 0; a < inst.domain_size(); ++a) {
        v[static_cast<std::size_t>(depth)] = a;
        bool ok = true;
        for (const Constraint* c : ready[static_cast<std::size_t>(depth)]) {
            if (!satisfies(v, *c)) {
                ok = false;
                break;
            }
        }
        if (ok) backtrack(inst, ready, v, depth + 1, out);
    }
}

} // namespace

std::vector<Valuation> enumerate_solutions(const CspInstance& inst, std::uint64_t cap) {
    inst.validate();
    if (valuation_count(inst.variable_count, inst.domain_size()) > cap)
        throw CapacityError("instance has more than " + std::to_string(cap) +
                            " candidate valuations; raise the cap to enumerate anyway");

    // A constraint becomes checkable once its highest scope variable is set.
    std::vector<std::vector<const Constraint*>> ready(
        static_cast<std::size_t>(inst.variable_count));
    for (const Constraint& c : inst.constraints) {
        int last = *std::max_element(c.scope.begin(), c.scope.end());
        ready[static_cast<std::size_t>(last)].push_back(&c);
    }

    std::vector<Valuation> out;
    Valuation v(static_cast<std::size_t>(inst.variable_count), 0);
    backtrack(inst, ready, v, 0, out);
    return out;
}

namespace {

std::vector<std::vector<Value>> all_tuples(int arity, int d) {
    std::vector<std::vector<Value>> out;
    std::uint64_t total = 1;
    for (int i = 0; i < arity; ++i) total *= static_cast<std::uint64_t>(d);
    out.reserve(static_cast<std::size_t>(total));
    for (std::uint64_t t = 0; t < total; ++t) out.push_back(valuation_at(t, arity, d));
    return out;
}

} // namespace

CspInstance parse_csp(std::istream& in) {
    CspInstance inst;
    bool have_header = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;

        if (!have_header) {
            if (first != "csp")
                throw ParseError("line " + std::to_string(lineno) +
                                 ": expected 'csp <n> <d>' header");
            int d = 0;
            if (!(ls >> inst.variable_count >> d) || inst.variable_count <= 0 || d <= 0)
                throw ParseError("line " + std::to_string(lineno) + ": bad csp header");
            inst.domain = default_domain(d);
            have_header = true;
            continue;
        }

        bool forbidden_mode = false;
        int k = 0;
        if (first == "!") {
            forbidden_mode = true;
            if (!(ls >> k)) throw ParseError("line " + std::to_string(lineno) + ": bad arity");
        } else {
            try {
                k = std::stoi(first);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": bad arity '" + first + "'");
            }
        }
        if (k <= 0) throw ParseError("line " + std::to_string(lineno) + ": arity must be positive");

        Constraint c;
        for (int i = 0; i < k; ++i) {
            int x = -1;
            if (!(ls >> x))
                throw ParseError("line " + std::to_string(lineno) + ": missing scope index");
            c.scope.push_back(x);
        }
        std::string sep;
        if (!(ls >> sep) || sep != ";")
            throw ParseError("line " + std::to_string(lineno) + ": expected ';' after scope");

        std::vector<std::vector<Value>> tuples;
        std::vector<Value> current;
        std::string tok;
        while (ls >> tok) {
            if (tok == "|") {
                if (!current.empty()) tuples.push_back(current);
                current.clear();
                continue;
            }
            try {
                current.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": bad value '" + tok + "'");
            }
        }
        if (!current.empty()) tuples.push_back(current);
        for (const auto& t : tuples)
            if (t.size() != static_cast<std::size_t>(k))
                throw ParseError("line " + std::to_string(lineno) +
                                 ": tuple arity does not match scope length");

        std::sort(tuples.begin(), tuples.end());
        tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());

        if (forbidden_mode) {
            std::vector<std::vector<Value>> full = all_tuples(k, inst.domain_size());
            c.allowed.reserve(full.size());
            for (auto& t : full)
                if (!std::binary_search(tuples.begin(), tuples.end(), t))
                    c.allowed.push_back(std::move(t));
        } else {
            c.allowed = std::move(tuples);
        }
        inst.constraints.push_back(std::move(c));
    }
    if (!have_header) throw ParseError("missing 'csp <n> <d>' header");
    inst.validate();
    return inst;
}

CspInstance parse_csp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_csp(in);
}

std::string format_valuation(const CspInstance& inst, const Valuation& v) {
    std::string out;
    for (Value a : v) out += inst.domain[static_cast<std::size_t>(a)];
    return out;
}

} // namespace estsat

#include "estsat/starsat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "estsat/errors.hpp"
#include "estsat/parallel.hpp"

namespace estsat {

void CnfFormula::validate() const {
    if (variable_count <= 0) throw ParseError("formula needs at least one variable");
    for (const auto& clause : clauses) {
        for (int lit : clause) {
            const int var = std::abs(lit);
            if (lit == 0 || var > variable_count)
                throw ParseError("literal " + std::to_string(lit) + " out of range");
        }
    }
}

CnfFormula parse_dimacs(std::istream& in) {
    CnfFormula f;
    bool have_header = false;
    std::size_t declared_clauses = 0;
    std::string line;
    std::vector<int> current;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            std::string fmt;
            int m = 0;
            if (!(ls >> fmt >> f.variable_count >> m) || fmt != "cnf")
                throw ParseError("bad DIMACS header");
            declared_clauses = static_cast<std::size_t>(m);
            have_header = true;
            continue;
        }
        if (!have_header) throw ParseError("clause before DIMACS header");
        ls.clear();
        ls.seekg(0);
        int lit = 0;
        while (ls >> lit) {
            if (lit == 0) {
                f.clauses.push_back(current);
                current.clear();
            } else {
                current.push_back(lit);
            }
        }
    }
    if (!current.empty()) f.clauses.push_back(current);
    if (!have_header) throw ParseError("missing DIMACS header");
    if (declared_clauses != 0 && f.clauses.size() != declared_clauses)
        throw ParseError("clause count does not match header");
    f.validate();
    return f;
}

CnfFormula parse_dimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_dimacs(in);
}

namespace {

inline bool literal_true(const Valuation& v, int lit) {
    const Value a = v[static_cast<std::size_t>(std::abs(lit) - 1)];
    return lit > 0 ? a == 1 : a == 0;
}

inline bool clause_ok(const Valuation& v, const std::vector<int>& clause) {
    int stars = 0;
    for (int lit : clause) {
        const Value a = v[static_cast<std::size_t>(std::abs(lit) - 1)];
        if (a == kStar) {
            if (++stars >= 2) return true;
        } else if (lit > 0 ? a == 1 : a == 0) {
            return true;
        }
    }
    return false;
}

} // namespace

bool is_valid(const CnfFormula& f, const Valuation& v) {
    if (static_cast<int>(v.size()) != f.variable_count)
        throw Error("valuation length does not match the formula");
    for (const auto& clause : f.clauses)
        if (!clause_ok(v, clause)) return false;
    return true;
}

std::vector<Value> star_allowed(const CnfFormula& f, Valuation& v, int x) {
    std::vector<Value> out;
    const Value saved = v[static_cast<std::size_t>(x)];
    for (Value a = 0; a <= kStar; ++a) {
        v[static_cast<std::size_t>(x)] = a;
        bool ok = true;
        // Only clauses touching x can change.
        for (const auto& clause : f.clauses) {
            bool touches = false;
            for (int lit : clause)
                if (std::abs(lit) - 1 == x) {
                    touches = true;
                    break;
                }
            if (touches && !clause_ok(v, clause)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(a);
    }
    v[static_cast<std::size_t>(x)] = saved;
    return out;
}

namespace {

template <bool Parallel>
std::vector<Valuation> valid_valuations_impl(const CnfFormula& f, std::uint64_t cap) {
    const std::uint64_t count = valuation_count(f.variable_count, 3);
    if (count > cap) throw CapacityError("3^n exceeds the cap");

    if constexpr (!Parallel) {
        std::vector<Valuation> out;
        for (std::uint64_t i = 0; i < count; ++i) {
            Valuation v = valuation_at(i, f.variable_count, 3);
            if (is_valid(f, v)) out.push_back(std::move(v));
        }
        return out;
    } else {
        const std::uint64_t chunks = (count + kSweepChunk - 1) / kSweepChunk;
        std::vector<std::vector<Valuation>> partial(chunks);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
            const std::uint64_t lo = static_cast<std::uint64_t>(c) * kSweepChunk;
            const std::uint64_t hi = lo + kSweepChunk < count ? lo + kSweepChunk : count;
            auto& local = partial[static_cast<std::size_t>(c)];
            for (std::uint64_t i = lo; i < hi; ++i) {
                Valuation v = valuation_at(i, f.variable_count, 3);
                if (is_valid(f, v)) local.push_back(std::move(v));
            }
        }
        std::vector<Valuation> out;
        for (auto& local : partial)
            for (auto& v : local) out.push_back(std::move(v));
        return out;
    }
}

} // namespace

std::vector<Valuation> valid_valuations(const CnfFormula& f, std::uint64_t cap) {
    return valid_valuations_impl<true>(f, cap);
}

std::vector<Valuation> valid_valuations_serial(const CnfFormula& f, std::uint64_t cap) {
    return valid_valuations_impl<false>(f, cap);
}

SolutionNetwork star_network(const CnfFormula& f, std::uint64_t cap) {
    return build_network(valid_valuations(f, cap), 3, kStarDomain);
}

StarWeights StarWeights::from_rho(int variable_count, double rho, Mode mode) {
    if (rho < 0.0 || rho > 1.0) throw Error("rho must lie in [0, 1]");
    StarWeights w;
    w.mode = mode;
    w.seed.assign(static_cast<std::size_t>(variable_count),
                  {(1.0 - rho) / 2.0, (1.0 - rho) / 2.0, rho});
    if (mode == Mode::Maneva) {
        // Maneva seeds are the pair (s0, s*) with s0 + s* = 1.
        for (auto& t : w.seed) t = {1.0 - rho, 0.0, rho};
    }
    return w;
}

void StarWeights::validate(double eps) const {
    for (const auto& t : seed) {
        if (t[0] < 0.0 || t[1] < 0.0 || t[2] < 0.0)
            throw Error("star seeds must be nonnegative");
        if (mode == Mode::Improved) {
            if (std::fabs(t[0] + t[1] + t[2] - 1.0) > eps)
                throw Error("improved mode requires unitary seed triples");
        } else {
            if (std::fabs(t[0] + t[2] - 1.0) > eps)
                throw Error("maneva mode requires s0 + s* = 1");
        }
    }
}

double star_generator(const StarWeights& w, int x, Value a, std::span<const Value> delta) {
    bool member = false;
    bool star_in_delta = false;
    for (Value b : delta) {
        if (b == a) member = true;
        if (b == kStar) star_in_delta = true;
    }
    if (!member) return 0.0;
    if (w.mode == StarWeights::Mode::Maneva) {
        if (a == kStar) return w.s(x, kStar);
        return star_in_delta ? w.s(x, 0) : w.s(x, 0) + w.s(x, kStar);
    }
    if (a == kStar) return w.s(x, kStar);
    double outside = 0.0;
    for (Value b = 0; b <= kStar; ++b) {
        bool in_delta = false;
        for (Value c : delta)
            if (c == b) in_delta = true;
        if (!in_delta) outside += w.s(x, b);
    }
    return w.s(x, a) + outside;
}

double star_weight(const CnfFormula& f, const StarWeights& w, Valuation& sigma, int x) {
    const std::vector<Value> delta = star_allowed(f, sigma, x);
    return star_generator(w, x, sigma[static_cast<std::size_t>(x)], delta);
}

double star_decomposer(const CnfFormula& f, const StarWeights& w, Valuation& sigma, int x,
                       Value a) {
    const Value sx = sigma[static_cast<std::size_t>(x)];
    if (sx == a) return w.s(x, a);
    if (sx == kStar) return 0.0;
    const std::vector<Value> delta = star_allowed(f, sigma, x);
    for (Value b : delta)
        if (b == a) return 0.0;
    return w.s(x, a);
}

double star_transfer(const CnfFormula& f, const StarWeights& w, const Valuation& sigma,
                     const Valuation& v) {
    Valuation scratch = sigma;
    double t = 1.0;
    for (int x = 0; x < f.variable_count && t != 0.0; ++x)
        t *= star_decomposer(f, w, scratch, x, v[static_cast<std::size_t>(x)]);
    return t;
}

double star_unladen(const StarWeights& w, const Valuation& v) {
    double u = 1.0;
    for (std::size_t x = 0; x < v.size(); ++x)
        u *= w.s(static_cast<int>(x), v[x]);
    return u;
}

namespace {

double gamma_term(const CnfFormula& f, const StarWeights& w, std::uint64_t index) {
    Valuation v = valuation_at(index, f.variable_count, 3);
    if (!is_valid(f, v)) return 0.0;
    double prod = 1.0;
    for (int x = 0; x < f.variable_count && prod != 0.0; ++x)
        prod *= star_weight(f, w, v, x);
    return prod;
}

} // namespace

double gamma(const CnfFormula& f, const StarWeights& w, std::uint64_t cap) {
    const std::uint64_t count = valuation_count(f.variable_count, 3);
    if (count > cap) throw CapacityError("3^n exceeds the cap");
    return parallel_sum(count, [&](std::uint64_t i) { return gamma_term(f, w, i); });
}

double gamma_serial(const CnfFormula& f, const StarWeights& w, std::uint64_t cap) {
    const std::uint64_t count = valuation_count(f.variable_count, 3);
    if (count > cap) throw CapacityError("3^n exceeds the cap");
    return serial_sum(count, [&](std::uint64_t i) { return gamma_term(f, w, i); });
}

bool is_boolean_solution(const CnfFormula& f, const Valuation& v) {
    for (Value a : v)
        if (a == kStar) return false;
    return is_valid(f, v);
}

Valuation core_of(const CnfFormula& f, const Valuation& boolean_solution) {
    if (!is_boolean_solution(f, boolean_solution))
        throw PreconditionError("core_of needs a boolean solution");
    Valuation v = boolean_solution;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = 0; x < f.variable_count; ++x) {
            if (v[static_cast<std::size_t>(x)] == kStar) continue;
            const Value saved = v[static_cast<std::size_t>(x)];
            v[static_cast<std::size_t>(x)] = kStar;
            if (is_valid(f, v)) {
                changed = true;
            } else {
                v[static_cast<std::size_t>(x)] = saved;
            }
        }
    }
    return v;
}

bool is_cover(const CnfFormula& f, const Valuation& v) {
    if (!is_valid(f, v)) return false;
    Valuation scratch = v;
    for (int x = 0; x < f.variable_count; ++x) {
        if (scratch[static_cast<std::size_t>(x)] == kStar) continue;
        const Value saved = scratch[static_cast<std::size_t>(x)];
        scratch[static_cast<std::size_t>(x)] = kStar;
        const bool starrable = is_valid(f, scratch);
        scratch[static_cast<std::size_t>(x)] = saved;
        if (starrable) return false;
    }
    return true;
}

bool is_core_nontrivial(const Valuation& v) {
    for (Value a : v)
        if (a != kStar) return true;
    return false;
}

int non_starred_count(const Valuation& v) {
    int count = 0;
    for (Value a : v)
        if (a != kStar) ++count;
    return count;
}

std::vector<Valuation> boolean_solutions(const CnfFormula& f, std::uint64_t cap) {
    const std::uint64_t count = valuation_count(f.variable_count, 2);
    if (count > cap) throw CapacityError("2^n exceeds the cap");
    std::vector<Valuation> out;
    for (std::uint64_t i = 0; i < count; ++i) {
        Valuation v = valuation_at(i, f.variable_count, 2);
        if (is_valid(f, v)) out.push_back(std::move(v));
    }
    return out;
}

StarWeights parse_star_weights(std::istream& in, int variable_count,
                               StarWeights::Mode mode) {
    StarWeights w;
    w.mode = mode;
    w.seed.assign(static_cast<std::size_t>(variable_count), {0.0, 0.0, 0.0});
    std::vector<bool> set(static_cast<std::size_t>(variable_count), false);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int x = -1;
        double s0 = 0.0, s1 = 0.0, sstar = 0.0;
        if (!(ls >> x)) continue;
        if (!(ls >> s0 >> s1 >> sstar) || x < 0 || x >= variable_count)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected '<x> <s0> <s1> <sstar>'");
        w.seed[static_cast<std::size_t>(x)] = {s0, s1, sstar};
        set[static_cast<std::size_t>(x)] = true;
    }
    for (bool s : set)
        if (!s) throw ParseError("star seed table must cover every variable");
    w.validate();
    return w;
}

StarWeights parse_star_weights_file(const std::string& path, int variable_count,
                                    StarWeights::Mode mode) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_star_weights(in, variable_count, mode);
}

} // namespace estsat

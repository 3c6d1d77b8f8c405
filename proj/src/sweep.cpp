#include "estsat/sweep.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "estsat/errors.hpp"
#include "estsat/parallel.hpp"

namespace estsat {

namespace {

struct Grid {
    std::vector<double> lo;
    std::vector<double> step_sizes;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 1;

    std::vector<double> point(std::uint64_t index) const {
        std::vector<double> p(lo.size());
        for (std::size_t axis = lo.size(); axis-- > 0;) {
            const std::uint64_t j = index % counts[axis];
            index /= counts[axis];
            p[axis] = lo[axis] + static_cast<double>(j) * step_sizes[axis];
        }
        return p;
    }
};

Grid make_grid(const Box& box, double step) {
    if (box.axes.empty()) throw PreconditionError("sweep box needs at least one axis");
    if (step <= 0.0) throw PreconditionError("sweep step must be positive");
    Grid g;
    for (const auto& [lo, hi] : box.axes) {
        if (hi < lo) throw PreconditionError("sweep box axis is empty");
        g.lo.push_back(lo);
        g.step_sizes.push_back(step);
        const auto count =
            static_cast<std::uint64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        g.counts.push_back(count);
        g.total *= count;
    }
    return g;
}

struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t index = UINT64_MAX; // UINT64_MAX = nothing found yet
    std::uint64_t nonfinite = 0;
};

// Grid order is lexicographic in the coordinates, so keeping the earliest
// index on ties realizes the lexicographic tie-break.
void fold(Best& into, const Best& from) {
    into.nonfinite += from.nonfinite;
    if (from.index == UINT64_MAX) return;
    if (into.index == UINT64_MAX || from.value > into.value) {
        into.value = from.value;
        into.index = from.index;
    }
}

template <bool Parallel>
Best scan(const Objective& objective, const Grid& grid) {
    const std::uint64_t chunks = (grid.total + kSweepChunk - 1) / kSweepChunk;
    std::vector<Best> partial(chunks);
#pragma omp parallel for schedule(dynamic, 1) if (Parallel)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kSweepChunk;
        const std::uint64_t hi = lo + kSweepChunk < grid.total ? lo + kSweepChunk : grid.total;
        Best best;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double value = objective(grid.point(i));
            if (!std::isfinite(value)) {
                ++best.nonfinite;
                continue;
            }
            if (best.index == UINT64_MAX || value > best.value) {
                best.value = value;
                best.index = i;
            }
        }
        partial[static_cast<std::size_t>(c)] = best;
    }
    Best best;
    for (const Best& part : partial) fold(best, part);
    return best;
}

template <bool Parallel>
SweepResult sweep_impl(const Objective& objective, const Box& box, double step,
                       double refine_step) {
    const Grid coarse = make_grid(box, step);
    Best best = scan<Parallel>(objective, coarse);
    SweepResult result;
    result.grid_step = step;
    result.refine_step = refine_step;
    result.evaluated = coarse.total;
    result.nonfinite = best.nonfinite;
    if (best.index == UINT64_MAX)
        throw Error("sweep found no finite objective value in the box");
    result.argmax = coarse.point(best.index);
    result.max_value = best.value;

    if (refine_step > 0.0 && refine_step < step) {
        Box local;
        for (std::size_t axis = 0; axis < box.axes.size(); ++axis) {
            const double lo = std::max(box.axes[axis].first, result.argmax[axis] - step);
            const double hi = std::min(box.axes[axis].second, result.argmax[axis] + step);
            local.axes.push_back({lo, hi});
        }
        const Grid fine = make_grid(local, refine_step);
        Best refined = scan<Parallel>(objective, fine);
        result.evaluated += fine.total;
        result.nonfinite += refined.nonfinite;
        if (refined.index != UINT64_MAX && refined.value >= result.max_value) {
            result.argmax = fine.point(refined.index);
            result.max_value = refined.value;
        }
        result.refined = true;
    }
    return result;
}

} // namespace

SweepResult sweep_maximize(const Objective& objective, const Box& box, double step,
                           double refine_step) {
    return sweep_impl<true>(objective, box, step, refine_step);
}

SweepResult sweep_maximize_serial(const Objective& objective, const Box& box, double step,
                                  double refine_step) {
    return sweep_impl<false>(objective, box, step, refine_step);
}

std::vector<ContourCell> contour_region(const Objective& objective, double threshold,
                                        const Box& box, double step) {
    const Grid grid = make_grid(box, step);
    const std::uint64_t chunks = (grid.total + kSweepChunk - 1) / kSweepChunk;
    std::vector<std::vector<ContourCell>> partial(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kSweepChunk;
        const std::uint64_t hi = lo + kSweepChunk < grid.total ? lo + kSweepChunk : grid.total;
        auto& local = partial[static_cast<std::size_t>(c)];
        for (std::uint64_t i = lo; i < hi; ++i) {
            std::vector<double> point = grid.point(i);
            const double value = objective(point);
            if (std::isfinite(value) && value > threshold)
                local.push_back({std::move(point), value});
        }
    }
    std::vector<ContourCell> out;
    for (auto& local : partial)
        for (auto& cell : local) out.push_back(std::move(cell));
    return out;
}

struct FPlugin::Handle {
    void* library = nullptr;
    double (*fn)(double, double, double) = nullptr;
    ~Handle() {
        if (library) dlclose(library);
    }
};

FPlugin FPlugin::load(const std::string& path) {
    auto handle = std::make_shared<Handle>();
    handle->library = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
    if (!handle->library)
        throw PluginError("cannot load f-plugin '" + path + "': " + dlerror());
    handle->fn = reinterpret_cast<double (*)(double, double, double)>(
        dlsym(handle->library, "moment_f"));
    if (!handle->fn)
        throw PluginError("f-plugin '" + path + "' does not export moment_f(alpha, a, r)");
    FPlugin plugin;
    plugin.handle_ = std::move(handle);
    return plugin;
}

double FPlugin::operator()(double alpha, double a, double r) const {
    return handle_->fn(alpha, a, r);
}

Objective missing_f_stub() {
    return [](std::span<const double>) -> double {
        throw PluginError(
            "external formula required: the cover exponent f is not part of this "
            "artifact; supply a shared object exporting moment_f(alpha, a, r) via "
            "--f-plugin");
    };
}

} // namespace estsat

#ifndef ESTSAT_SWEEP_HPP
#define ESTSAT_SWEEP_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace estsat {

// Pure objective over a point of the box; must not keep mutable state
// (grid cells are evaluated concurrently).
using Objective = std::function<double(std::span<const double>)>;

struct Box {
    std::vector<std::pair<double, double>> axes; // inclusive [lo, hi] per axis
};

struct SweepResult {
    std::vector<double> argmax;
    double max_value = 0.0;
    double grid_step = 0.0;
    double refine_step = 0.0;
    bool refined = false;
    std::uint64_t evaluated = 0;
    std::uint64_t nonfinite = 0; // cells excluded for non-finite values
};

// Grid scan at `step`, then one local rescan of the +-step box around the
// incumbent at `refine_step`. Ties break toward the lexicographically
// smallest coordinate tuple; non-finite cells are skipped and counted.
// Chunked OpenMP scan with a serial reference.
SweepResult sweep_maximize(const Objective& objective, const Box& box, double step,
                           double refine_step);
SweepResult sweep_maximize_serial(const Objective& objective, const Box& box, double step,
                                  double refine_step);

struct ContourCell {
    std::vector<double> coords;
    double value;
};

// All grid cells with objective > threshold, in grid order.
std::vector<ContourCell> contour_region(const Objective& objective, double threshold,
                                        const Box& box, double step);

// External cover-exponent plugin. The shared object must export
//     extern "C" double moment_f(double alpha, double a, double r);
// pure in its arguments. load() throws PluginError when the library or the
// symbol is missing.
class FPlugin {
  public:
    static FPlugin load(const std::string& path);
    double operator()(double alpha, double a, double r) const;

  private:
    struct Handle;
    std::shared_ptr<Handle> handle_;
};

// Placeholder used when no plugin is configured: evaluating it throws
// PluginError explaining that the external formula is required.
Objective missing_f_stub();

} // namespace estsat

#endif

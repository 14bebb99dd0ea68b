#pragma once

#include <functional>

namespace kpls {

/// Classic Nelder-Mead coefficients; tolerance is interpreted by the width
/// measure passed to nelder_mead_1d.
struct SimplexOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double tolerance = 1e-3;
    int max_evaluations = 60;
};

struct SimplexResult {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

/// One-dimensional Nelder-Mead minimization of f starting from the simplex
/// {x0, x0 + step}. Stops when width(best, worst) < tolerance or the
/// evaluation budget runs out; with a budget of 1 it returns the initial
/// point. `width` defaults to |a - b|; callers optimizing a transformed
/// variable can measure the spread in original units instead.
SimplexResult nelder_mead_1d(const std::function<double(double)>& f, double x0, double step,
                             const SimplexOptions& options,
                             const std::function<double(double, double)>& width = {});

} // namespace kpls

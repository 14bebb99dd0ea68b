#include "kpls/simplex.hpp"

#include "kpls/errors.hpp"

#include <cmath>
#include <utility>

namespace kpls {

SimplexResult nelder_mead_1d(const std::function<double(double)>& f, double x0, double step,
                             const SimplexOptions& options,
                             const std::function<double(double, double)>& width) {
    if (options.max_evaluations < 1)
        throw config_error("nelder_mead_1d: evaluation budget must be positive");
    auto spread = width ? width : [](double a, double b) { return std::abs(a - b); };

    int evals = 0;
    auto eval = [&](double x) {
        ++evals;
        return f(x);
    };

    double xb = x0, fb = eval(xb);
    if (evals >= options.max_evaluations) return {xb, fb, evals};
    double xw = x0 + step, fw = eval(xw);
    if (fw < fb) {
        std::swap(xb, xw);
        std::swap(fb, fw);
    }

    while (evals < options.max_evaluations && spread(xb, xw) >= options.tolerance) {
        // In one dimension the centroid of the non-worst vertices is the best
        // vertex itself.
        const double xr = xb + options.reflection * (xb - xw);
        const double fr = eval(xr);

        double x_new, f_new;
        if (fr < fb) {
            if (evals < options.max_evaluations) {
                const double xe = xb + options.expansion * (xr - xb);
                const double fe = eval(xe);
                if (fe < fr) {
                    x_new = xe;
                    f_new = fe;
                } else {
                    x_new = xr;
                    f_new = fr;
                }
            } else {
                x_new = xr;
                f_new = fr;
            }
        } else if (fr < fw) {
            // Outside contraction.
            if (evals >= options.max_evaluations) {
                x_new = xr;
                f_new = fr;
            } else {
                const double xc = xb + options.contraction * (xr - xb);
                const double fc = eval(xc);
                if (fc <= fr) {
                    x_new = xc;
                    f_new = fc;
                } else {
                    // Shrink toward the best vertex.
                    x_new = xb + options.shrink * (xw - xb);
                    f_new = evals < options.max_evaluations ? eval(x_new) : fw;
                }
            }
        } else {
            // Inside contraction.
            if (evals >= options.max_evaluations) break;
            const double xc = xb + options.contraction * (xw - xb);
            const double fc = eval(xc);
            if (fc < fw) {
                x_new = xc;
                f_new = fc;
            } else {
                x_new = xb + options.shrink * (xw - xb);
                f_new = evals < options.max_evaluations ? eval(x_new) : fw;
            }
        }

        xw = x_new;
        fw = f_new;
        if (fw < fb) {
            std::swap(xb, xw);
            std::swap(fb, fw);
        }
    }

    return {xb, fb, evals};
}

} // namespace kpls

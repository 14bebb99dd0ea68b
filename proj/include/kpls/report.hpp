#pragma once

#include "kpls/model_selection.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kpls {

/// Everything cmd_search writes: the configuration echo, the winning
/// hyperparameters, and the assembled held-out predictions.
struct SearchReport {
    KernelFamily family = KernelFamily::linear;
    bool centering = false;
    ScaleMode scale_mode = ScaleMode::mad_median;
    FoldScaling fold_scaling = FoldScaling::strict;
    int nu_min = 1;
    int nu_max = 20;
    std::optional<double> eta_init;
    double simplex_tolerance = 1e-3;
    int max_simplex_evals = 60;
    SearchResult result;
    std::vector<std::string> sample_ids;
    Vector actual;
};

/// Key: value lines in fixed order, then an id/actual/predicted table.
/// Field ordering and number rendering are stable, so identical inputs
/// produce identical bytes.
void write_search_report(const SearchReport& report, std::ostream& out);
void write_search_report(const SearchReport& report, const std::string& path);

/// Hyperparameters recovered from a search report, for `fit --from-report`.
struct ReportHyperparameters {
    KernelFamily family = KernelFamily::linear;
    int nu = 0;
    std::optional<double> eta;
    bool centering = false;
    ScaleMode scale_mode = ScaleMode::mad_median;
};

ReportHyperparameters read_search_report(const std::string& path);

struct PredictReport {
    std::vector<std::string> sample_ids;
    Vector predicted;
    std::optional<Vector> actual; // adds an r2 line and an actual column
};

void write_predict_report(const PredictReport& report, std::ostream& out);
void write_predict_report(const PredictReport& report, const std::string& path);

} // namespace kpls

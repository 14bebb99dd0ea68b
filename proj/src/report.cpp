#include "kpls/report.hpp"

#include "kpls/detail/numfmt.hpp"
#include "kpls/errors.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace kpls {

namespace {

std::string fmt(double value) { return detail::format_double(value); }

} // namespace

void write_search_report(const SearchReport& report, std::ostream& out) {
    const CvResult& cv = report.result.cv;
    const Index l = static_cast<Index>(report.sample_ids.size());
    if (report.actual.size() != l || cv.predictions.size() != l)
        throw data_error("search report: prediction/actual/id lengths disagree");

    out << "kpls-report-version: 1\n";
    out << "command: search\n";
    out << "kernel_family: " << to_string(report.family) << '\n';
    out << "centering: " << (report.centering ? "on" : "off") << '\n';
    out << "scaling_mode: " << to_string(report.scale_mode) << '\n';
    out << "fold_scaling: " << to_string(report.fold_scaling) << '\n';
    out << "nu_range: " << report.nu_min << ".." << report.nu_max << '\n';
    if (report.family != KernelFamily::linear) {
        out << "eta_init: " << (report.eta_init ? fmt(*report.eta_init) : "auto") << '\n';
        out << "simplex_tolerance: " << fmt(report.simplex_tolerance) << '\n';
        out << "max_simplex_evals: " << report.max_simplex_evals << '\n';
    }
    out << "best_nu: " << report.result.nu << '\n';
    if (report.result.eta) out << "best_eta: " << fmt(*report.result.eta) << '\n';
    if (cv.r2)
        out << "loo_r2: " << fmt(*cv.r2) << '\n';
    else
        out << "loo_r2: none\n";
    out << "fold_failures: " << cv.fold_failures.size() << '\n';
    for (const auto& failure : cv.fold_failures)
        out << "fold_failure: " << report.sample_ids[static_cast<size_t>(failure.sample_index)]
            << '\t' << failure.reason << '\n';
    out << "samples: " << l << '\n';
    out << "predictions:\n";
    out << "id\tactual\tpredicted\n";
    for (Index i = 0; i < l; ++i)
        out << report.sample_ids[static_cast<size_t>(i)] << '\t' << fmt(report.actual[i]) << '\t'
            << fmt(cv.predictions[i]) << '\n';
}

void write_search_report(const SearchReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write report file '" + path + "'");
    write_search_report(report, out);
    if (!out) throw data_error("failed while writing report file '" + path + "'");
}

ReportHyperparameters read_search_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open report file '" + path + "'");

    std::map<std::string, std::string> fields;
    std::string line;
    while (std::getline(in, line)) {
        if (line == "predictions:") break;
        const auto colon = line.find(": ");
        if (colon == std::string::npos) continue;
        fields[line.substr(0, colon)] = line.substr(colon + 2);
    }

    auto require = [&](const char* key) {
        auto it = fields.find(key);
        if (it == fields.end())
            throw data_error("report file '" + path + "' is missing field '" + key + "'");
        return it->second;
    };

    ReportHyperparameters params;
    params.family = kernel_family_from_string(require("kernel_family"));
    params.nu = std::stoi(require("best_nu"));
    if (auto it = fields.find("best_eta"); it != fields.end())
        params.eta = std::stod(it->second);
    if (params.family != KernelFamily::linear && !params.eta)
        throw data_error("report file '" + path + "' has no best_eta for a " +
                         std::string(to_string(params.family)) + " kernel");
    params.centering = require("centering") == "on";
    params.scale_mode = scale_mode_from_string(require("scaling_mode"));
    return params;
}

void write_predict_report(const PredictReport& report, std::ostream& out) {
    const Index l = static_cast<Index>(report.sample_ids.size());
    if (report.predicted.size() != l || (report.actual && report.actual->size() != l))
        throw data_error("predict report: prediction/id lengths disagree");

    out << "kpls-report-version: 1\n";
    out << "command: predict\n";
    out << "samples: " << l << '\n';
    if (report.actual) out << "r2: " << fmt(r_squared(*report.actual, report.predicted)) << '\n';
    out << "predictions:\n";
    if (report.actual) {
        out << "id\tactual\tpredicted\n";
        for (Index i = 0; i < l; ++i)
            out << report.sample_ids[static_cast<size_t>(i)] << '\t' << fmt((*report.actual)[i])
                << '\t' << fmt(report.predicted[i]) << '\n';
    } else {
        out << "id\tpredicted\n";
        for (Index i = 0; i < l; ++i)
            out << report.sample_ids[static_cast<size_t>(i)] << '\t' << fmt(report.predicted[i])
                << '\n';
    }
}

void write_predict_report(const PredictReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write report file '" + path + "'");
    write_predict_report(report, out);
    if (!out) throw data_error("failed while writing report file '" + path + "'");
}

} // namespace kpls

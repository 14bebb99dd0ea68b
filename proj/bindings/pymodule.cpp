#include "kpls/dataset.hpp"
#include "kpls/descriptors.hpp"
#include "kpls/errors.hpp"
#include "kpls/kpls.hpp"
#include "kpls/model_io.hpp"
#include "kpls/model_selection.hpp"
#include "kpls/synthetic.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace kpls;

namespace {

Dataset make_dataset(const Matrix& features, const std::optional<Vector>& response,
                     std::vector<std::string> sample_ids, std::vector<std::string> feature_names) {
    Dataset data;
    data.features = features;
    data.response = response;
    if (sample_ids.empty())
        for (Index i = 0; i < features.rows(); ++i)
            sample_ids.push_back("s" + std::to_string(i + 1));
    if (feature_names.empty())
        for (Index j = 0; j < features.cols(); ++j)
            feature_names.push_back("f" + std::to_string(j + 1));
    data.sample_ids = std::move(sample_ids);
    data.feature_names = std::move(feature_names);
    data.validate();
    return data;
}

std::array<bool, 8> to_bits(const std::vector<bool>& bits) {
    if (bits.size() != 8) throw config_error("class_score expects exactly 8 bits");
    std::array<bool, 8> out{};
    std::copy(bits.begin(), bits.end(), out.begin());
    return out;
}

std::array<double, 8> to_weights(const std::vector<double>& weights) {
    if (weights.size() != 8) throw config_error("class_score expects exactly 8 weights");
    std::array<double, 8> out{};
    std::copy(weights.begin(), weights.end(), out.begin());
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Kernel partial least squares regression toolkit";

    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<data_error>(m, "DataError", PyExc_ValueError);
    py::register_exception<degeneracy_error>(m, "DegeneracyError", PyExc_ArithmeticError);

    // ---- dataset ----------------------------------------------------------
    py::enum_<ScaleMode>(m, "ScaleMode")
        .value("mad_median", ScaleMode::mad_median)
        .value("mean_absolute", ScaleMode::mean_absolute);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), "features"_a, "response"_a = std::nullopt,
             "sample_ids"_a = std::vector<std::string>{},
             "feature_names"_a = std::vector<std::string>{})
        .def_readonly("features", &Dataset::features)
        .def_readonly("response", &Dataset::response)
        .def_readonly("sample_ids", &Dataset::sample_ids)
        .def_readonly("feature_names", &Dataset::feature_names)
        .def_property_readonly("sample_count", &Dataset::sample_count)
        .def_property_readonly("feature_count", &Dataset::feature_count);

    py::class_<ScalingParams>(m, "ScalingParams")
        .def_readonly("medians", &ScalingParams::medians)
        .def_readonly("deviations", &ScalingParams::deviations)
        .def_readonly("degenerate_mask", &ScalingParams::degenerate_mask);

    m.def("load_table", py::overload_cast<const std::string&, bool>(&load_table), "path"_a,
          "has_response"_a);
    m.def("write_table", &write_table, "data"_a, "path"_a);
    m.def("scale_fit", py::overload_cast<const Dataset&, ScaleMode>(&scale_fit), "data"_a,
          "mode"_a = ScaleMode::mad_median);
    m.def("scale_apply", py::overload_cast<const Dataset&, const ScalingParams&>(&scale_apply),
          "data"_a, "params"_a);

    // ---- kernels ----------------------------------------------------------
    py::enum_<KernelFamily>(m, "KernelFamily")
        .value("linear", KernelFamily::linear)
        .value("gaussian", KernelFamily::gaussian)
        .value("exponential", KernelFamily::exponential);

    py::class_<KernelSpec>(m, "KernelSpec")
        .def(py::init([](KernelFamily family, double eta) {
                 KernelSpec spec{family, eta};
                 spec.validate();
                 return spec;
             }),
             "family"_a, "eta"_a = 1.0)
        .def_readonly("family", &KernelSpec::family)
        .def_readonly("eta", &KernelSpec::eta);

    m.def("kernel_eval", &kernel_eval, "spec"_a, "x"_a, "y"_a);
    m.def(
        "kernel_matrix",
        [](const KernelSpec& spec, const Matrix& features) {
            return kernel_matrix(spec, features).values;
        },
        "spec"_a, "features"_a);
    m.def("cross_kernel_matrix", &cross_kernel_matrix, "spec"_a, "new_features"_a,
          "train_features"_a);

    // ---- model ------------------------------------------------------------
    py::class_<FitOptions>(m, "FitOptions")
        .def(py::init([](bool centering, ScaleMode scale_mode) {
                 return FitOptions{centering, scale_mode};
             }),
             "centering"_a = false, "scale_mode"_a = ScaleMode::mad_median)
        .def_readwrite("centering", &FitOptions::centering)
        .def_readwrite("scale_mode", &FitOptions::scale_mode);

    py::class_<KplsModel>(m, "KplsModel")
        .def_readonly("kernel", &KplsModel::kernel)
        .def_readonly("coefficients", &KplsModel::coefficients)
        .def_readonly("x_scores", &KplsModel::x_scores)
        .def_readonly("y_scores", &KplsModel::y_scores)
        .def_readonly("latent_count", &KplsModel::latent_count)
        .def_readonly("early_stopped", &KplsModel::early_stopped)
        .def_readonly("centering", &KplsModel::centering)
        .def_readonly("response_mean", &KplsModel::response_mean);

    py::class_<LatentFit>(m, "LatentFit")
        .def_readonly("x_scores", &LatentFit::x_scores)
        .def_readonly("y_scores", &LatentFit::y_scores)
        .def_readonly("achieved", &LatentFit::achieved)
        .def_readonly("early_stopped", &LatentFit::early_stopped);

    m.def(
        "kpls_fit",
        [](const Matrix& kernel, const Vector& response, int latent_count) {
            return detail::kpls_fit_core(kernel, response, latent_count);
        },
        "kernel"_a, "response"_a, "latent_count"_a);
    m.def("compute_beta", &compute_beta, "y_scores"_a, "x_scores"_a, "original_kernel"_a,
          "response"_a);

    m.def("fit_model", &fit_model, "data"_a, "spec"_a, "latent_count"_a,
          "options"_a = FitOptions{});
    m.def("pls_fit", &pls_fit, "data"_a, "latent_count"_a, "options"_a = FitOptions{});
    m.def("kpls_predict",
          py::overload_cast<const KplsModel&, const Eigen::Ref<const Matrix>&>(&kpls_predict),
          "model"_a, "new_features"_a);
    m.def("save_model", py::overload_cast<const KplsModel&, const std::string&>(&save_model),
          "model"_a, "path"_a);
    m.def("load_model", py::overload_cast<const std::string&>(&load_model), "path"_a);

    // ---- model selection ----------------------------------------------------
    py::enum_<FoldScaling>(m, "FoldScaling")
        .value("strict", FoldScaling::strict)
        .value("global_", FoldScaling::global);

    py::class_<CvOptions>(m, "CvOptions")
        .def(py::init([](FitOptions fit, FoldScaling fold_scaling, int threads) {
                 return CvOptions{fit, fold_scaling, threads};
             }),
             "fit"_a = FitOptions{}, "fold_scaling"_a = FoldScaling::strict, "threads"_a = 0)
        .def_readwrite("fit", &CvOptions::fit)
        .def_readwrite("fold_scaling", &CvOptions::fold_scaling)
        .def_readwrite("threads", &CvOptions::threads);

    py::class_<FoldFailure>(m, "FoldFailure")
        .def_readonly("sample_index", &FoldFailure::sample_index)
        .def_readonly("reason", &FoldFailure::reason);

    py::class_<CvResult>(m, "CvResult")
        .def_readonly("predictions", &CvResult::predictions)
        .def_readonly("r2", &CvResult::r2)
        .def_readonly("nu", &CvResult::nu)
        .def_readonly("eta", &CvResult::eta)
        .def_readonly("fold_failures", &CvResult::fold_failures);

    py::class_<SearchConfig>(m, "SearchConfig")
        .def(py::init([](int nu_min, int nu_max, std::optional<double> eta_init, double eta_min,
                         double eta_max, double simplex_tolerance, int max_simplex_evals) {
                 SearchConfig config{nu_min,  nu_max,  eta_init,          eta_min,
                                     eta_max, simplex_tolerance, max_simplex_evals};
                 config.validate();
                 return config;
             }),
             "nu_min"_a = 1, "nu_max"_a = 20, "eta_init"_a = std::nullopt, "eta_min"_a = 1e-12,
             "eta_max"_a = 1e12, "simplex_tolerance"_a = 1e-3, "max_simplex_evals"_a = 60)
        .def_readwrite("nu_min", &SearchConfig::nu_min)
        .def_readwrite("nu_max", &SearchConfig::nu_max)
        .def_readwrite("eta_init", &SearchConfig::eta_init)
        .def_readwrite("simplex_tolerance", &SearchConfig::simplex_tolerance)
        .def_readwrite("max_simplex_evals", &SearchConfig::max_simplex_evals);

    py::class_<EtaSearchResult>(m, "EtaSearchResult")
        .def_readonly("eta", &EtaSearchResult::eta)
        .def_readonly("r2", &EtaSearchResult::r2)
        .def_readonly("evaluations", &EtaSearchResult::evaluations);

    py::class_<SearchResult>(m, "SearchResult")
        .def_readonly("nu", &SearchResult::nu)
        .def_readonly("eta", &SearchResult::eta)
        .def_readonly("cv", &SearchResult::cv);

    m.def("r_squared", &r_squared, "actual"_a, "predicted"_a);
    m.def("loo_cv", &loo_cv, "data"_a, "spec"_a, "nu"_a, "options"_a = CvOptions{});
    m.def("optimize_eta",
          py::overload_cast<const Dataset&, KernelFamily, int, const SearchConfig&,
                            const CvOptions&>(&optimize_eta),
          "data"_a, "family"_a, "nu"_a, "config"_a = SearchConfig{}, "options"_a = CvOptions{});
    m.def("search_hyperparameters", &search_hyperparameters, "data"_a, "family"_a,
          "config"_a = SearchConfig{}, "options"_a = CvOptions{},
          py::call_guard<py::gil_scoped_release>());

    // ---- descriptors ---------------------------------------------------------
    py::class_<MolGraph>(m, "MolGraph")
        .def(py::init([](int atom_count, std::vector<std::pair<int, int>> bonds,
                         std::map<std::string, Vector> properties) {
                 MolGraph graph{atom_count, std::move(bonds), std::move(properties)};
                 graph.validate();
                 return graph;
             }),
             "atom_count"_a, "bonds"_a, "properties"_a = std::map<std::string, Vector>{})
        .def_readonly("atom_count", &MolGraph::atom_count)
        .def_readonly("bonds", &MolGraph::bonds)
        .def_readonly("properties", &MolGraph::properties);

    py::class_<DistanceMatrix>(m, "DistanceMatrix")
        .def_readonly("values", &DistanceMatrix::values)
        .def_readonly("connected", &DistanceMatrix::connected);

    py::class_<RadVector>(m, "RadVector")
        .def_readonly("bins", &RadVector::bins)
        .def_readonly("property_name", &RadVector::property_name);

    py::class_<SimilMatrix>(m, "SimilMatrix")
        .def_readonly("values", &SimilMatrix::values)
        .def_readonly("residue_order", &SimilMatrix::residue_order);

    m.def("topological_distances", &topological_distances, "graph"_a);
    m.def("rad_autocorrelation", &rad_autocorrelation, "graph"_a, "property_name"_a, "max_bin"_a);
    m.def("simil_expand", &simil_expand, "sequence"_a, "matrix"_a);
    m.def(
        "class_score",
        [](const std::vector<bool>& a, const std::vector<bool>& b,
           const std::vector<double>& weights) {
            return class_score(to_bits(a), to_bits(b), to_weights(weights));
        },
        "bits_a"_a, "bits_b"_a,
        "weights"_a = std::vector<double>{1, 1, 1, 1, 1, 1, 1, 1});
    m.def("load_molgraph", &load_molgraph, "path"_a);
    m.def("load_simil_matrix", &load_simil_matrix, "path"_a);
    m.def("identity_simil_matrix", &identity_simil_matrix);

    // ---- synthetic data ---------------------------------------------------------
    py::enum_<SyntheticModel>(m, "SyntheticModel")
        .value("linear", SyntheticModel::linear)
        .value("sine", SyntheticModel::sine);

    m.def(
        "gen_synthetic",
        [](Index rows, Index cols, std::uint64_t seed, SyntheticModel model, double frequency,
           double noise) {
            SyntheticSpec spec;
            spec.rows = rows;
            spec.cols = cols;
            spec.seed = seed;
            spec.model = model;
            spec.frequency = frequency;
            spec.noise = noise;
            return gen_synthetic(spec);
        },
        "rows"_a, "cols"_a, "seed"_a, "model"_a = SyntheticModel::linear, "frequency"_a = 2.0,
        "noise"_a = 0.05);

    m.attr("__version__") = "0.1.0";
}

#pragma once

#include "kpls/dataset.hpp"
#include "kpls/kernels.hpp"

namespace kpls {

/// Latent bases extracted by the KPLS iteration. x_scores (T) has orthonormal
/// columns; y_scores (U) carries the response-side vectors. achieved may be
/// smaller than requested when deflation exhausts the response early.
struct LatentFit {
    Matrix x_scores; // T, l x achieved
    Matrix y_scores; // U, l x achieved
    int achieved = 0;
    bool early_stopped = false;
};

/// One KPLS iteration per component:
///   t = K_d y_d / |K_d y_d|   (sign fixed so t.y >= 0)
///   u = y_d (y_d . t)
///   K_d <- (I - t t') K_d (I - t t'),   y_d <- y_d - t (t . y_d)
/// Throws degeneracy_error if K y vanishes before the first component;
/// stops early (early_stopped = true) if it vanishes later.
LatentFit kpls_fit(const KernelMatrix& kernel, const Eigen::Ref<const Vector>& response,
                   int latent_count);

namespace detail {
LatentFit kpls_fit_core(const Matrix& kernel, const Vector& response, int latent_count);
}

/// beta = U (T' K U)^-1 T' y with the original (pre-deflation) kernel.
/// Throws degeneracy_error when cond(T' K U) exceeds 1e12, naming the
/// component count.
Vector compute_beta(const Matrix& y_scores, const Matrix& x_scores,
                    const Eigen::Ref<const Matrix>& original_kernel,
                    const Eigen::Ref<const Vector>& response);

struct FitOptions {
    bool centering = false; // kernel + response centering, together
    ScaleMode scale_mode = ScaleMode::mad_median;
};

/// Fitted artifact. train_features holds the scaled calibration features the
/// cross-kernel is evaluated against at prediction time.
struct KplsModel {
    KernelSpec kernel;
    ScalingParams scaling;
    ScaleMode scale_mode = ScaleMode::mad_median;
    Matrix train_features;
    Matrix x_scores; // T
    Matrix y_scores; // U
    Vector coefficients; // beta
    int latent_count = 0;
    bool early_stopped = false;
    bool centering = false;
    KernelCentering kernel_centering; // meaningful iff centering
    double response_mean = 0.0;       // 0 unless centering
    std::vector<std::string> feature_names;
};

/// Full pipeline: robust scaling, kernel matrix, optional centering, KPLS
/// iteration, coefficients.
KplsModel fit_model(const Dataset& data, const KernelSpec& spec, int latent_count,
                    const FitOptions& options = {});

/// PLS is KPLS with the linear kernel; exposed by name so linear-vs-kernel
/// comparison grids read naturally.
KplsModel pls_fit(const Dataset& data, int latent_count, const FitOptions& options = {});

/// Scales new features with the stored params, builds the cross-kernel
/// against the stored training features, applies centering iff enabled at
/// fit time, and returns K_cross beta (+ response mean).
Vector kpls_predict(const KplsModel& model, const Eigen::Ref<const Matrix>& new_features);
Vector kpls_predict(const KplsModel& model, const Dataset& data);

} // namespace kpls

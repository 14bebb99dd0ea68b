#include "kpls/kpls.hpp"

#include "kpls/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace kpls {

namespace detail {

// Iterative extraction with double deflation. Each component takes the
// dominant eigenvector of (K_d y_d y_d'), which for a single response is
// K_d y_d up to normalization; both the kernel and the response are then
// deflated by the extracted score so later components stay orthogonal and
// T' K U keeps full rank.
LatentFit kpls_fit_core(const Matrix& kernel, const Vector& response, int latent_count) {
    const Index l = kernel.rows();
    if (kernel.cols() != l) throw data_error("kpls_fit: kernel matrix is not square");
    if (response.size() != l)
        throw data_error("kpls_fit: response length " + std::to_string(response.size()) +
                         " does not match kernel size " + std::to_string(l));
    if (latent_count < 1 || latent_count > l)
        throw config_error("kpls_fit: latent count " + std::to_string(latent_count) +
                           " outside [1, " + std::to_string(l) + "]");

    constexpr double vanish_tolerance = 1e-12;

    LatentFit fit;
    fit.x_scores.resize(l, latent_count);
    fit.y_scores.resize(l, latent_count);

    Matrix deflated = kernel;
    Vector residual = response;
    Vector projected(l);

    for (int k = 0; k < latent_count; ++k) {
        projected.noalias() = deflated * residual;
        const double norm = projected.norm();
        if (norm < vanish_tolerance) {
            if (k == 0)
                throw degeneracy_error(
                    "kpls_fit: deflated K y vanished at component 1 (zero or exhausted response)");
            fit.early_stopped = true;
            break;
        }
        Vector t = projected / norm;
        const double alignment = t.dot(residual);
        if (alignment < 0.0) t = -t; // sign convention: t.y >= 0

        fit.x_scores.col(k) = t;
        fit.y_scores.col(k) = residual * (residual.dot(t));
        fit.achieved = k + 1;

        // K <- (I - t t') K (I - t t'), expanded to rank-one updates.
        Vector kt = deflated * t;
        const double tkt = t.dot(kt);
        deflated.noalias() -= t * kt.transpose();
        deflated.noalias() -= kt * t.transpose();
        deflated.noalias() += (tkt)*t * t.transpose();

        residual -= t * (t.dot(residual));
    }

    fit.x_scores.conservativeResize(l, fit.achieved);
    fit.y_scores.conservativeResize(l, fit.achieved);
    return fit;
}

} // namespace detail

LatentFit kpls_fit(const KernelMatrix& kernel, const Eigen::Ref<const Vector>& response,
                   int latent_count) {
    return detail::kpls_fit_core(kernel.values, response, latent_count);
}

Vector compute_beta(const Matrix& y_scores, const Matrix& x_scores,
                    const Eigen::Ref<const Matrix>& original_kernel,
                    const Eigen::Ref<const Vector>& response) {
    const Index l = original_kernel.rows();
    const Index components = x_scores.cols();
    if (y_scores.cols() != components)
        throw data_error("compute_beta: T and U have different column counts");
    if (x_scores.rows() != l || y_scores.rows() != l || response.size() != l)
        throw data_error("compute_beta: dimension mismatch with kernel size " + std::to_string(l));
    if (components < 1) throw config_error("compute_beta: no components");

    const Matrix m = x_scores.transpose() * original_kernel * y_scores;
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sigma_max = svd.singularValues()(0);
    const double sigma_min = svd.singularValues()(components - 1);
    if (!(sigma_min > 0.0) || sigma_max / sigma_min > 1e12)
        throw degeneracy_error("compute_beta: T' K U is singular or ill-conditioned at " +
                               std::to_string(components) + " components");

    return y_scores * svd.solve(x_scores.transpose() * response);
}

KplsModel fit_model(const Dataset& data, const KernelSpec& spec, int latent_count,
                    const FitOptions& options) {
    data.validate();
    spec.validate();
    if (!data.response)
        throw data_error("fit_model: dataset has no response column");
    const Index l = data.sample_count();
    if (latent_count < 1 || latent_count > l)
        throw config_error("fit_model: latent count " + std::to_string(latent_count) +
                           " outside [1, " + std::to_string(l) + "]");

    KplsModel model;
    model.kernel = spec;
    model.scale_mode = options.scale_mode;
    model.scaling = scale_fit(data.features, options.scale_mode);
    model.train_features = scale_apply(data.features, model.scaling);
    model.centering = options.centering;
    model.feature_names = data.feature_names;

    KernelMatrix kernel = kernel_matrix(spec, model.train_features);
    Vector y = *data.response;

    Matrix fit_kernel;
    if (options.centering) {
        CenteredKernel centered = center_kernel(kernel);
        model.kernel_centering = centered.centering;
        fit_kernel = std::move(centered.kernel.values);
        model.response_mean = y.mean();
        y.array() -= model.response_mean;
    } else {
        fit_kernel = std::move(kernel.values);
    }

    LatentFit latent = detail::kpls_fit_core(fit_kernel, y, latent_count);
    model.x_scores = std::move(latent.x_scores);
    model.y_scores = std::move(latent.y_scores);
    model.latent_count = latent.achieved;
    model.early_stopped = latent.early_stopped;
    model.coefficients = compute_beta(model.y_scores, model.x_scores, fit_kernel, y);
    return model;
}

KplsModel pls_fit(const Dataset& data, int latent_count, const FitOptions& options) {
    return fit_model(data, KernelSpec{KernelFamily::linear, 1.0}, latent_count, options);
}

Vector kpls_predict(const KplsModel& model, const Eigen::Ref<const Matrix>& new_features) {
    if (new_features.cols() != model.train_features.cols())
        throw data_error("kpls_predict: input has " + std::to_string(new_features.cols()) +
                         " feature columns, model expects " +
                         std::to_string(model.train_features.cols()));

    const Matrix scaled = scale_apply(new_features, model.scaling);
    Matrix cross = cross_kernel_matrix(model.kernel, scaled, model.train_features);
    if (model.centering) cross = center_cross_kernel(cross, model.kernel_centering);

    Vector predictions = cross * model.coefficients;
    if (model.centering) predictions.array() += model.response_mean;
    return predictions;
}

Vector kpls_predict(const KplsModel& model, const Dataset& data) {
    data.validate();
    return kpls_predict(model, data.features);
}

} // namespace kpls

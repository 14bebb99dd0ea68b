#include "kpls/kernels.hpp"

#include "kpls/errors.hpp"

#include <cmath>
#include <string>

namespace kpls {

const char* to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::linear: return "linear";
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::exponential: return "exponential";
    }
    return "?";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "linear") return KernelFamily::linear;
    if (name == "gaussian") return KernelFamily::gaussian;
    if (name == "exponential") return KernelFamily::exponential;
    throw config_error("unknown kernel family '" + name +
                       "' (expected linear, gaussian or exponential)");
}

void KernelSpec::validate() const {
    if (family != KernelFamily::linear && !(eta > 0.0))
        throw config_error(std::string(to_string(family)) + " kernel requires eta > 0, got " +
                           std::to_string(eta));
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y) {
    spec.validate();
    if (x.size() != y.size())
        throw data_error("kernel_eval: vectors of length " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()));
    if (!x.allFinite() || !y.allFinite())
        throw data_error("kernel_eval: non-finite input");

    switch (spec.family) {
        case KernelFamily::linear: return x.dot(y);
        case KernelFamily::gaussian:
            return detail::gaussian_of_sqdist((x - y).squaredNorm(), spec.eta);
        case KernelFamily::exponential:
            return detail::exponential_of_dist(std::sqrt((x - y).squaredNorm()), spec.eta);
    }
    throw config_error("unreachable kernel family");
}

KernelMatrix kernel_matrix(const KernelSpec& spec, const Eigen::Ref<const Matrix>& features) {
    spec.validate();
    const Index l = features.rows();
    if (l < 1) throw config_error("kernel_matrix requires at least one sample");
    if (!features.allFinite()) throw data_error("kernel_matrix: non-finite features");

    KernelMatrix result;
    result.spec = spec;
    result.values.resize(l, l);

    // Upper triangle once, mirrored.
    for (Index i = 0; i < l; ++i) {
        for (Index j = i; j < l; ++j) {
            double value = 0.0;
            switch (spec.family) {
                case KernelFamily::linear:
                    value = features.row(i).dot(features.row(j));
                    break;
                case KernelFamily::gaussian:
                    value = detail::gaussian_of_sqdist(
                        (features.row(i) - features.row(j)).squaredNorm(), spec.eta);
                    break;
                case KernelFamily::exponential:
                    value = detail::exponential_of_dist(
                        std::sqrt((features.row(i) - features.row(j)).squaredNorm()), spec.eta);
                    break;
            }
            result.values(i, j) = value;
            result.values(j, i) = value;
        }
    }
    return result;
}

Matrix cross_kernel_matrix(const KernelSpec& spec, const Eigen::Ref<const Matrix>& new_features,
                           const Eigen::Ref<const Matrix>& train_features) {
    spec.validate();
    if (new_features.cols() != train_features.cols())
        throw data_error("cross_kernel_matrix: new samples have " +
                         std::to_string(new_features.cols()) + " features, training has " +
                         std::to_string(train_features.cols()));
    if (!new_features.allFinite() || !train_features.allFinite())
        throw data_error("cross_kernel_matrix: non-finite features");

    Matrix cross(new_features.rows(), train_features.rows());
    for (Index i = 0; i < new_features.rows(); ++i) {
        for (Index j = 0; j < train_features.rows(); ++j) {
            switch (spec.family) {
                case KernelFamily::linear:
                    cross(i, j) = new_features.row(i).dot(train_features.row(j));
                    break;
                case KernelFamily::gaussian:
                    cross(i, j) = detail::gaussian_of_sqdist(
                        (new_features.row(i) - train_features.row(j)).squaredNorm(), spec.eta);
                    break;
                case KernelFamily::exponential:
                    cross(i, j) = detail::exponential_of_dist(
                        std::sqrt((new_features.row(i) - train_features.row(j)).squaredNorm()),
                        spec.eta);
                    break;
            }
        }
    }
    return cross;
}

CenteredKernel center_kernel(const KernelMatrix& kernel) {
    const Matrix& K = kernel.values;
    const Index l = K.rows();
    if (K.rows() != K.cols()) throw data_error("center_kernel: matrix is not square");

    CenteredKernel result;
    result.centering.train_column_means = K.colwise().mean();
    result.centering.grand_mean = result.centering.train_column_means.mean();

    const Vector& means = result.centering.train_column_means;
    const double grand = result.centering.grand_mean;
    result.kernel.spec = kernel.spec;
    result.kernel.values.resize(l, l);
    for (Index i = 0; i < l; ++i)
        for (Index j = 0; j < l; ++j)
            result.kernel.values(i, j) = K(i, j) - means[i] - means[j] + grand;
    return result;
}

Matrix center_cross_kernel(const Eigen::Ref<const Matrix>& cross,
                           const KernelCentering& centering) {
    if (cross.cols() != centering.train_column_means.size())
        throw data_error("center_cross_kernel: cross block has " + std::to_string(cross.cols()) +
                         " columns, centering expects " +
                         std::to_string(centering.train_column_means.size()));
    Matrix centered(cross.rows(), cross.cols());
    for (Index i = 0; i < cross.rows(); ++i) {
        const double row_mean = cross.row(i).mean();
        for (Index j = 0; j < cross.cols(); ++j)
            centered(i, j) =
                cross(i, j) - centering.train_column_means[j] - row_mean + centering.grand_mean;
    }
    return centered;
}

} // namespace kpls

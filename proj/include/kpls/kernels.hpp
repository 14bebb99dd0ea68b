#pragma once

#include "kpls/dataset.hpp"

#include <cmath>
#include <string>

namespace kpls {

enum class KernelFamily { linear, gaussian, exponential };

const char* to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Kernel family plus width. eta is ignored by the linear kernel and must be
/// positive for the others.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double eta = 1.0;

    void validate() const;
};

/// Square kernel matrix over one sample set. Symmetric by construction;
/// gaussian/exponential diagonals are exactly 1.
struct KernelMatrix {
    Matrix values;
    KernelSpec spec;
};

namespace detail {

// Scalar maps shared by kernel_eval and every matrix path, so cached-distance
// evaluations are bit-identical to pairwise ones.
inline double gaussian_of_sqdist(double sqdist, double eta) {
    return std::exp(-sqdist / (2.0 * eta * eta));
}
inline double exponential_of_dist(double dist, double eta) {
    return std::exp(-dist / (2.0 * eta));
}

} // namespace detail

/// linear: x.y    gaussian: exp(-|x-y|^2 / 2 eta^2)    exponential: exp(-|x-y| / 2 eta)
double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y);

/// Builds the l x l kernel matrix, computing the upper triangle once and
/// mirroring it.
KernelMatrix kernel_matrix(const KernelSpec& spec, const Eigen::Ref<const Matrix>& features);

/// m x l matrix of kernel values between new samples (rows) and training
/// samples (columns).
Matrix cross_kernel_matrix(const KernelSpec& spec, const Eigen::Ref<const Matrix>& new_features,
                           const Eigen::Ref<const Matrix>& train_features);

/// Feature-space centering parameters, kept so cross-kernel blocks for unseen
/// samples can be centered consistently with the training matrix.
struct KernelCentering {
    Vector train_column_means; // (1/l) * column sums of the training K
    double grand_mean = 0.0;
};

struct CenteredKernel {
    KernelMatrix kernel;
    KernelCentering centering;
};

/// K_c = (I - 11'/l) K (I - 11'/l). Row and column means of the result are
/// zero to within roundoff.
CenteredKernel center_kernel(const KernelMatrix& kernel);

/// Applies the training centering to a cross block:
/// K_new,c[i][j] = K_new[i][j] - colmean_j - rowmean_i(K_new) + grandmean.
Matrix center_cross_kernel(const Eigen::Ref<const Matrix>& cross, const KernelCentering& centering);

} // namespace kpls

#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace kpls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Row-major sample table: one row per sample, one column per descriptor,
/// with an optional response vector.
struct Dataset {
    Matrix features;                        // l x p
    std::optional<Vector> response;         // length l when present
    std::vector<std::string> sample_ids;    // length l
    std::vector<std::string> feature_names; // length p

    Index sample_count() const { return features.rows(); }
    Index feature_count() const { return features.cols(); }

    /// Throws data_error on ragged metadata, mismatched response length,
    /// or non-finite entries.
    void validate() const;
};

/// Deviation estimator used for robust scaling. Both variants center on the
/// per-feature median; they differ in how the spread of |x - median| is
/// summarized.
enum class ScaleMode {
    mad_median,    // median of |x - median| (default)
    mean_absolute, // mean of |x - median|
};

const char* to_string(ScaleMode mode);
ScaleMode scale_mode_from_string(const std::string& name);

/// Per-feature robust location/scale estimates. degenerate_mask is true
/// exactly where the deviation is zero (constant feature).
struct ScalingParams {
    Vector medians;
    Vector deviations;
    std::vector<bool> degenerate_mask;

    Index size() const { return medians.size(); }
};

/// Median with the even-length convention: mean of the two middle order
/// statistics. Consumes its argument.
double median(std::vector<double> values);

ScalingParams scale_fit(const Eigen::Ref<const Matrix>& features,
                        ScaleMode mode = ScaleMode::mad_median);
ScalingParams scale_fit(const Dataset& data, ScaleMode mode = ScaleMode::mad_median);

/// (x - median) / deviation per column; degenerate columns map to zero.
Matrix scale_apply(const Eigen::Ref<const Matrix>& features, const ScalingParams& params);

/// Same, preserving ids/names; the response is left untouched.
Dataset scale_apply(const Dataset& data, const ScalingParams& params);

/// How load_table treats a trailing column named "response".
enum class ResponseColumn {
    absent,      // all non-id columns are features, whatever their names
    required,    // last column must be named "response"
    auto_detect, // response iff the last header field is "response"
};

/// Reads a delimited text table (comma or tab, detected from the header
/// line): first column sample id, remaining columns numeric features,
/// optional trailing "response" column. Errors name the offending
/// 1-based row (file line) and column (field).
Dataset load_table(const std::string& path, ResponseColumn mode);
Dataset load_table(const std::string& path, bool has_response);

/// Writes a Dataset in the comma-separated form load_table reads back.
/// Reals are rendered shortest-round-trip, so output is byte-stable.
void write_table(const Dataset& data, const std::string& path);

} // namespace kpls

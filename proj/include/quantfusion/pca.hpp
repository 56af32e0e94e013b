#pragma once

#include <vector>

namespace qf {

struct PCAModel {
    std::vector<double> mean;                    // length k_in
    std::vector<std::vector<double>> components; // k_out rows of length k_in
    std::vector<double> explained_variance;      // ratios, length k_out

    [[nodiscard]] std::size_t input_dim() const { return mean.size(); }
    [[nodiscard]] std::size_t output_dim() const { return components.size(); }
};

// Fits on the sample covariance of the rows. Components are unit-norm
// eigenvectors ordered by eigenvalue descending; each is oriented so its
// largest-magnitude entry is positive. Explained ratios divide by the total
// variance over all k_in axes, with negative round-off eigenvalues clamped
// to zero, so a rank-deficient input just shows trailing zero ratios.
// Requires 1 <= k_out <= row width and at least k_out + 1 rows.
PCAModel pca_fit(const std::vector<std::vector<double>>& rows, int k_out);

// Centers by the model mean and projects on the components. Throws
// DimensionError when a row width disagrees with the model.
std::vector<double> pca_transform_row(const PCAModel& model,
                                      const std::vector<double>& row);
std::vector<std::vector<double>> pca_transform(const PCAModel& model,
                                               const std::vector<std::vector<double>>& rows);

} // namespace qf

#include "quantfusion/pca.hpp"

#include "quantfusion/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace qf {

PCAModel pca_fit(const std::vector<std::vector<double>>& rows, int k_out) {
    if (rows.empty()) throw InsufficientDataError("pca: no rows");
    const auto k_in = static_cast<Eigen::Index>(rows[0].size());
    if (k_out < 1 || k_out > k_in) {
        throw DimensionError("pca: k_out must lie in [1, row width]");
    }
    if (static_cast<Eigen::Index>(rows.size()) < k_out + 1) {
        throw InsufficientDataError("pca: need at least k_out + 1 rows");
    }

    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), k_in);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != k_in) {
            throw DimensionError("pca: ragged input rows");
        }
        for (Eigen::Index j = 0; j < k_in; ++j) x(i, j) = row[static_cast<std::size_t>(j)];
    }

    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
    const Eigen::MatrixXd cov = x.transpose() * x / static_cast<double>(x.rows() - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw Error("pca: eigendecomposition failed");
    }
    // Eigen returns eigenvalues ascending; walk them from the back.
    const Eigen::VectorXd evals = solver.eigenvalues();
    const Eigen::MatrixXd evecs = solver.eigenvectors();

    double total = 0.0;
    for (Eigen::Index i = 0; i < k_in; ++i) total += std::max(evals(i), 0.0);

    PCAModel model;
    model.mean.assign(mean.data(), mean.data() + k_in);
    for (int c = 0; c < k_out; ++c) {
        Eigen::VectorXd v = evecs.col(k_in - 1 - c);
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0) v = -v;
        model.components.emplace_back(v.data(), v.data() + k_in);
        const double lambda = std::max(evals(k_in - 1 - c), 0.0);
        model.explained_variance.push_back(total > 0.0 ? lambda / total : 0.0);
    }
    return model;
}

std::vector<double> pca_transform_row(const PCAModel& model, const std::vector<double>& row) {
    if (row.size() != model.input_dim()) {
        throw DimensionError("pca: row width " + std::to_string(row.size()) +
                             " does not match model input dim " +
                             std::to_string(model.input_dim()));
    }
    std::vector<double> out(model.output_dim(), 0.0);
    for (std::size_t c = 0; c < model.output_dim(); ++c) {
        double dot = 0.0;
        for (std::size_t j = 0; j < model.input_dim(); ++j) {
            dot += model.components[c][j] * (row[j] - model.mean[j]);
        }
        out[c] = dot;
    }
    return out;
}

std::vector<std::vector<double>> pca_transform(const PCAModel& model,
                                               const std::vector<std::vector<double>>& rows) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(pca_transform_row(model, row));
    return out;
}

} // namespace qf

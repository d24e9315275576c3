#include "graphbayes/belief.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graphbayes {

namespace {

void require_non_negative(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw BeliefError(std::string(name) + " must be finite and non-negative");
    }
}

}  // namespace

GaussianBelief::GaussianBelief(int n)
    : precision_(Matrix::Zero(n, n)),
      information_(Vector::Zero(n)),
      constraint_rows_(0, n),
      constraint_values_(0) {}

GaussianBelief::GaussianBelief(Matrix precision, Vector information)
    : GaussianBelief(std::move(precision), std::move(information), Matrix(0, 0), Vector(0)) {}

GaussianBelief::GaussianBelief(Matrix precision, Vector information, Matrix constraint_rows,
                               Vector constraint_values)
    : precision_(std::move(precision)),
      information_(std::move(information)),
      constraint_rows_(std::move(constraint_rows)),
      constraint_values_(std::move(constraint_values)) {
    const auto n = information_.size();
    if (precision_.rows() != n || precision_.cols() != n) {
        throw DimensionError("belief precision does not match information vector");
    }
    if (constraint_rows_.rows() == 0) constraint_rows_.resize(0, n);
    if (constraint_rows_.cols() != n || constraint_rows_.rows() != constraint_values_.size()) {
        throw DimensionError("belief constraint shape mismatch");
    }
    if (!is_symmetric(precision_, 1e-12 * std::max(1.0, precision_.cwiseAbs().maxCoeff()))) {
        throw BeliefError("belief precision is not symmetric");
    }
}

ConstraintSet normalize_constraints(const Matrix& rows, const Vector& values) {
    const auto n = rows.cols();
    if (rows.rows() == 0) return {Matrix(0, n), Vector(0), Vector::Zero(n)};

    Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cutoff = kConstraintTolerance * std::max(1.0, sv[0]);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;

    const Matrix basis = svd.matrixV().leftCols(rank);
    const Vector coords =
        (svd.matrixU().leftCols(rank).transpose() * values).cwiseQuotient(sv.head(rank));
    Vector particular = basis * coords;

    const double residual = (rows * particular - values).norm();
    const double scale = rows.norm() * particular.norm() + values.norm() + 1.0;
    if (residual > kConstraintTolerance * scale) {
        throw InconsistentConstraintsError("exact constraints are inconsistent (residual " +
                                           std::to_string(residual) + ")");
    }
    return {basis.transpose(), coords, std::move(particular)};
}

GaussianBelief fuse_beliefs(const GaussianBelief& a, const GaussianBelief& b) {
    if (a.dimension() != b.dimension()) throw DimensionError("fusing beliefs of different dimension");
    const int n = a.dimension();
    Matrix precision = a.precision() + b.precision();
    Vector information = a.information() + b.information();
    if (a.constraint_count() + b.constraint_count() == 0) {
        return GaussianBelief(std::move(precision), std::move(information));
    }
    Matrix rows(a.constraint_count() + b.constraint_count(), n);
    rows << a.constraint_rows(), b.constraint_rows();
    Vector values(rows.rows());
    values << a.constraint_values(), b.constraint_values();
    auto reduced = normalize_constraints(rows, values);
    return GaussianBelief(std::move(precision), std::move(information), std::move(reduced.rows),
                          std::move(reduced.values));
}

SamplingOperator::SamplingOperator(int n, std::vector<NodeId> nodes) : n_(n), nodes_(std::move(nodes)) {
    if (n < 0) throw BeliefError("negative dimension");
    std::vector<bool> seen(n, false);
    for (NodeId id : nodes_) {
        if (id < 0 || id >= n) {
            throw BeliefError("sampled node " + std::to_string(id) + " out of range");
        }
        if (seen[id]) throw BeliefError("duplicate sampled node " + std::to_string(id));
        seen[id] = true;
    }
}

SamplingOperator SamplingOperator::all(int n) {
    std::vector<NodeId> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = i;
    return SamplingOperator(n, std::move(nodes));
}

bool SamplingOperator::contains(NodeId node) const {
    return std::find(nodes_.begin(), nodes_.end(), node) != nodes_.end();
}

Matrix SamplingOperator::matrix() const {
    Matrix s = Matrix::Zero(n_, size());
    for (int j = 0; j < size(); ++j) s(nodes_[j], j) = 1.0;
    return s;
}

Vector SamplingOperator::restrict(const Vector& x) const {
    if (x.size() != n_) throw DimensionError("restrict: signal length mismatch");
    Vector out(size());
    for (int j = 0; j < size(); ++j) out[j] = x[nodes_[j]];
    return out;
}

Vector SamplingOperator::lift(const Vector& samples) const {
    if (samples.size() != size()) throw DimensionError("lift: sample count mismatch");
    Vector out = Vector::Zero(n_);
    for (int j = 0; j < size(); ++j) out[nodes_[j]] = samples[j];
    return out;
}

SamplingOperator SamplingOperator::with(NodeId node) const {
    auto nodes = nodes_;
    nodes.push_back(node);
    return SamplingOperator(n_, std::move(nodes));
}

SubspaceBasis::SubspaceBasis(Matrix columns) : columns_(std::move(columns)) {
    if (columns_.cols() > columns_.rows()) throw BeliefError("subspace basis has too many columns");
    if (columns_.cols() == 0) return;
    const Matrix gram = columns_.transpose() * columns_;
    const double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-10) throw BeliefError("subspace basis columns are not orthonormal");
}

Matrix SubspaceBasis::complement() const {
    const auto n = columns_.rows();
    const auto k = columns_.cols();
    if (k == 0) return Matrix::Identity(n, n);
    Eigen::HouseholderQR<Matrix> qr(columns_);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    return q.rightCols(n - k);
}

GaussianBelief smoothness_prior(const Matrix& laplacian, double eps) {
    require_non_negative(eps, "eps");
    const auto n = laplacian.rows();
    if (laplacian.cols() != n) throw DimensionError("laplacian must be square");
    return GaussianBelief(laplacian + eps * Matrix::Identity(n, n), Vector::Zero(n));
}

SubspaceBasis bandlimit_basis(const Spectrum& spectrum, double bandlimit, double tol) {
    require_non_negative(tol, "tol");
    Eigen::Index count = 0;
    while (count < spectrum.eigenvalues.size() && spectrum.eigenvalues[count] <= bandlimit + tol) {
        ++count;
    }
    if (count == 0) throw BeliefError("bandlimit selects no eigenvectors");
    return SubspaceBasis(spectrum.basis.leftCols(count));
}

GaussianBelief subspace_prior(const SubspaceBasis& basis, double sigma2_prior, double eps) {
    require_non_negative(sigma2_prior, "sigma2_prior");
    require_non_negative(eps, "eps");
    const int n = basis.dimension();
    if (sigma2_prior > 0.0) {
        Matrix precision =
            ((1.0 + eps) * Matrix::Identity(n, n) - basis.projector()) / sigma2_prior;
        // Symmetrize away the rounding in U U^T.
        precision = 0.5 * (precision + precision.transpose()).eval();
        return GaussianBelief(std::move(precision), Vector::Zero(n));
    }
    Matrix rows = basis.complement().transpose();
    Vector values = Vector::Zero(rows.rows());
    return GaussianBelief(Matrix::Zero(n, n), Vector::Zero(n), std::move(rows), std::move(values));
}

GaussianBelief full_observation(const Vector& observed, double sigma2) {
    return partial_observation(SamplingOperator::all(static_cast<int>(observed.size())), observed,
                               sigma2);
}

GaussianBelief partial_observation(const SamplingOperator& sampling, const Vector& observed,
                                   double sigma2) {
    require_non_negative(sigma2, "sigma2");
    if (observed.size() != sampling.size()) {
        throw DimensionError("observation length does not match sampling set");
    }
    if (!observed.allFinite()) throw BeliefError("observation contains non-finite values");
    const int n = sampling.dimension();
    if (sigma2 > 0.0) {
        Matrix precision = Matrix::Zero(n, n);
        for (NodeId id : sampling.nodes()) precision(id, id) = 1.0 / sigma2;
        return GaussianBelief(std::move(precision), sampling.lift(observed) / sigma2);
    }
    return GaussianBelief(Matrix::Zero(n, n), Vector::Zero(n), sampling.matrix().transpose(),
                          observed);
}

}  // namespace graphbayes

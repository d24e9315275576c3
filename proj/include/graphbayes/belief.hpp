#pragma once

// Gaussian beliefs over graph-signal space in information form.
//
// A belief is the (possibly improper, possibly degenerate) density
//
//     p(x) ∝ exp(-1/2 x^T P x + h^T x)   restricted to { x : C x = d }.
//
// P may be singular (flat, infinite-variance directions) and the rows of C
// carry exact, zero-variance directions. Noise-free observations and exact
// subspace priors are expressed through C rather than through very large
// precisions; flat improper priors are expressed through zero precision.

#include <stdexcept>
#include <vector>

#include "graphbayes/graph_core.hpp"

namespace graphbayes {

/// Two sets of exact constraints that cannot hold simultaneously.
class InconsistentConstraintsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid belief parameters (negative variances, bad sampling sets, ...).
class BeliefError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Relative tolerance used when deciding constraint rank and consistency.
inline constexpr double kConstraintTolerance = 1e-9;

class GaussianBelief {
public:
    /// Vacuous belief on R^n: P = 0, h = 0, no constraints.
    explicit GaussianBelief(int n);
    GaussianBelief(Matrix precision, Vector information);
    /// constraint_rows is z x n; constraint_values has length z.
    GaussianBelief(Matrix precision, Vector information, Matrix constraint_rows,
                   Vector constraint_values);

    int dimension() const { return static_cast<int>(information_.size()); }
    const Matrix& precision() const { return precision_; }
    const Vector& information() const { return information_; }
    const Matrix& constraint_rows() const { return constraint_rows_; }
    const Vector& constraint_values() const { return constraint_values_; }
    int constraint_count() const { return static_cast<int>(constraint_rows_.rows()); }

private:
    Matrix precision_;
    Vector information_;
    Matrix constraint_rows_;
    Vector constraint_values_;
};

/// Independent-evidence fusion: precisions and information vectors add,
/// constraints are concatenated and reduced to an orthonormal independent
/// set. Throws InconsistentConstraintsError if no x satisfies both sets, and
/// DimensionError on mismatched dimensions.
GaussianBelief fuse_beliefs(const GaussianBelief& a, const GaussianBelief& b);

struct ConstraintSet {
    Matrix rows;    // orthonormal rows
    Vector values;
    Vector particular;  // minimum-norm solution of rows * x = values
};

/// Reduce C x = d to an equivalent system with orthonormal rows.
/// Throws InconsistentConstraintsError when the system has no solution.
ConstraintSet normalize_constraints(const Matrix& rows, const Vector& values);

/// Distinct node ids selecting columns of the identity: S = I[:, nodes].
class SamplingOperator {
public:
    SamplingOperator(int n, std::vector<NodeId> nodes);
    static SamplingOperator all(int n);

    int dimension() const { return n_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<NodeId>& nodes() const { return nodes_; }
    bool contains(NodeId node) const;

    /// n x n_s selection matrix.
    Matrix matrix() const;
    /// S^T x.
    Vector restrict(const Vector& x) const;
    /// S y.
    Vector lift(const Vector& samples) const;

    SamplingOperator with(NodeId node) const;

private:
    int n_ = 0;
    std::vector<NodeId> nodes_;
};

/// Matrix with orthonormal columns spanning a signal subspace.
class SubspaceBasis {
public:
    /// Throws BeliefError if max |U^T U - I| > 1e-10.
    explicit SubspaceBasis(Matrix columns);

    const Matrix& matrix() const { return columns_; }
    int dimension() const { return static_cast<int>(columns_.rows()); }
    int rank() const { return static_cast<int>(columns_.cols()); }
    /// U U^T.
    Matrix projector() const { return columns_ * columns_.transpose(); }
    /// Orthonormal basis of the orthogonal complement, n x (n - rank).
    Matrix complement() const;

private:
    Matrix columns_;
};

/// Prior N(0, (L + eps I)^-1); eps = 0 gives the improper Laplacian prior.
GaussianBelief smoothness_prior(const Matrix& laplacian, double eps);

/// Eigenvectors with eigenvalue <= bandlimit + tol, in ascending order.
SubspaceBasis bandlimit_basis(const Spectrum& spectrum, double bandlimit, double tol = 1e-9);

/// Subspace prior. With sigma2_prior > 0 this is the relaxed Gaussian with
/// precision ((1 + eps) I - U U^T) / sigma2_prior. With sigma2_prior = 0 it is
/// the exact limit: x is constrained to span(U) and flat inside it.
GaussianBelief subspace_prior(const SubspaceBasis& basis, double sigma2_prior, double eps);

/// Observation of every node with i.i.d. noise variance sigma2 (exact when 0).
GaussianBelief full_observation(const Vector& observed, double sigma2);

/// Observation of the sampled nodes only, lifted to R^n.
GaussianBelief partial_observation(const SamplingOperator& sampling, const Vector& observed,
                                   double sigma2);

}  // namespace graphbayes

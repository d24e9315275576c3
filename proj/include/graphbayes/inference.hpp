#pragma once

// Posterior computation for fused Gaussian beliefs.

#include <limits>
#include <string>

#include "graphbayes/belief.hpp"

namespace graphbayes {

/// Eigenvalues of the projected precision below kRankTolerance * max(1, largest)
/// are treated as zero (infinite variance).
inline constexpr double kRankTolerance = 1e-10;
/// A direction counts as touching the infinite-variance subspace when its
/// projection there has norm above this.
inline constexpr double kDirectionTolerance = 1e-8;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised when a finite covariance matrix is requested but some direction
/// has infinite variance.
class InfiniteVarianceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Posterior over R^n split into three mutually orthogonal parts:
///   cov_basis  - directions with finite, positive variance cov_values;
///   null_basis - directions with infinite variance (flat posterior);
///   zero_basis - directions fixed exactly by constraints.
/// When null_basis is nonempty the mean is the minimum-norm maximizer.
struct PosteriorSummary {
    Vector mean;
    Matrix cov_basis;
    Vector cov_values;
    Matrix null_basis;
    Matrix zero_basis;

    int dimension() const { return static_cast<int>(mean.size()); }
    bool unique_mean() const { return null_basis.cols() == 0; }
    int finite_rank() const { return static_cast<int>(cov_basis.cols()); }
    int infinite_rank() const { return static_cast<int>(null_basis.cols()); }
    int zero_rank() const { return static_cast<int>(zero_basis.cols()); }
};

PosteriorSummary fuse(const GaussianBelief& prior, const GaussianBelief& observation);
/// Posterior of an already fused belief.
PosteriorSummary summarize(const GaussianBelief& belief);

const Vector& posterior_mean(const PosteriorSummary& ps);

/// cov_basis diag(cov_values) cov_basis^T. Throws InfiniteVarianceError when
/// any direction has infinite variance.
Matrix posterior_covariance(const PosteriorSummary& ps);

/// z^T Sigma z for the normalized direction z; kInfinity when z has a
/// component along an infinite-variance direction. Throws
/// std::invalid_argument for a zero vector.
double directional_uncertainty(const PosteriorSummary& ps, const Vector& direction);

/// Directional uncertainty along each Laplacian eigenvector.
Vector spectral_uncertainty(const PosteriorSummary& ps, const Spectrum& spectrum);

/// Posterior variance of every node, kInfinity where unbounded.
Vector node_variances(const PosteriorSummary& ps);

enum class SolveMethod { closed_form, iterative };

struct IterativeOptions {
    double relative_tolerance = 1e-10;
    int max_iterations = 0;  // 0 selects 10 n + 100
};

struct MapResult {
    Vector estimate;
    /// False when the objective has a flat direction; estimate is then the
    /// minimum-norm minimizer.
    bool unique = true;
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Raised when the iterative solver hits its iteration cap.
class SolverDivergenceError : public std::runtime_error {
public:
    SolverDivergenceError(const std::string& what, int iterations, double residual)
        : std::runtime_error(what), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

/// Minimizer of the fused negative log density
///   1/2 x^T P x - h^T x   subject to C x = d.
/// closed_form uses a dense factorization in the constraint null space;
/// iterative uses projected conjugate gradients.
MapResult solve_map(const GaussianBelief& prior, const GaussianBelief& observation,
                    SolveMethod method, const IterativeOptions& options = {});

struct Reconstruction {
    Vector signal;
    /// False when S^T U was rank deficient (or not square) and the
    /// pseudo-inverse approximation was used.
    bool exact = true;
};

/// x = U (S^T U)^+ y.
Reconstruction perfect_reconstruct(const SubspaceBasis& basis, const SamplingOperator& sampling,
                                   const Vector& samples);

/// Smallest singular value of S S^T + I - U U^T exceeds tol.
bool is_perfectly_reconstructible(const SubspaceBasis& basis, const SamplingOperator& sampling,
                                  double tol = 1e-9);

}  // namespace graphbayes

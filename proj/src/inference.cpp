#include "graphbayes/inference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "graphbayes/random.hpp"

namespace graphbayes {

namespace {

// Fused belief reparameterized on the constraint set: x = particular + basis * y.
struct ReducedProblem {
    ConstraintSet constraints;
    Matrix basis;        // orthonormal basis of ker(C); empty when no constraints
    bool unconstrained;  // basis is implicitly the identity
    Matrix precision;    // basis^T P basis
    Vector rhs;          // basis^T (h - P particular)

    Vector lift(const Vector& y) const {
        return unconstrained ? Vector(constraints.particular + y)
                             : Vector(constraints.particular + basis * y);
    }
    Matrix lift_directions(const Matrix& w) const { return unconstrained ? w : Matrix(basis * w); }
};

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

ReducedProblem reduce(const GaussianBelief& belief) {
    ReducedProblem out;
    out.constraints = normalize_constraints(belief.constraint_rows(), belief.constraint_values());
    out.unconstrained = out.constraints.rows.rows() == 0;
    const Vector residual_info =
        belief.information() - belief.precision() * out.constraints.particular;
    if (out.unconstrained) {
        out.precision = belief.precision();
        out.rhs = residual_info;
    } else {
        // Rows of a normalized constraint set are orthonormal, so their
        // transpose is a valid subspace basis.
        out.basis = SubspaceBasis(out.constraints.rows.transpose()).complement();
        out.precision = symmetrized(out.basis.transpose() * belief.precision() * out.basis);
        out.rhs = out.basis.transpose() * residual_info;
    }
    return out;
}

}  // namespace

PosteriorSummary summarize(const GaussianBelief& belief) {
    const ReducedProblem problem = reduce(belief);
    const auto free_dim = problem.precision.rows();

    PosteriorSummary ps;
    ps.zero_basis = problem.constraints.rows.transpose();
    if (free_dim == 0) {
        ps.mean = problem.constraints.particular;
        ps.cov_basis = Matrix(belief.dimension(), 0);
        ps.cov_values = Vector(0);
        ps.null_basis = Matrix(belief.dimension(), 0);
        return ps;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> eig(problem.precision);
    if (eig.info() != Eigen::Success) throw std::runtime_error("posterior eigensolver failed");
    const Vector& lambda = eig.eigenvalues();
    const double threshold = kRankTolerance * std::max(1.0, lambda[free_dim - 1]);

    // Eigenvalues ascending: the flat directions come first.
    Eigen::Index flat = 0;
    while (flat < free_dim && lambda[flat] < threshold) ++flat;
    const Eigen::Index finite = free_dim - flat;

    const Matrix w_finite = eig.eigenvectors().rightCols(finite);
    const Vector values = lambda.tail(finite).cwiseInverse();
    const Vector y = w_finite * values.cwiseProduct(w_finite.transpose() * problem.rhs);

    ps.mean = problem.lift(y);
    ps.cov_basis = problem.lift_directions(w_finite);
    ps.cov_values = values;
    ps.null_basis = problem.lift_directions(eig.eigenvectors().leftCols(flat));
    return ps;
}

PosteriorSummary fuse(const GaussianBelief& prior, const GaussianBelief& observation) {
    return summarize(fuse_beliefs(prior, observation));
}

const Vector& posterior_mean(const PosteriorSummary& ps) { return ps.mean; }

Matrix posterior_covariance(const PosteriorSummary& ps) {
    if (!ps.unique_mean()) {
        throw InfiniteVarianceError("posterior has " + std::to_string(ps.infinite_rank()) +
                                    " infinite-variance directions");
    }
    return symmetrized(ps.cov_basis * ps.cov_values.asDiagonal() * ps.cov_basis.transpose());
}

double directional_uncertainty(const PosteriorSummary& ps, const Vector& direction) {
    if (direction.size() != ps.dimension()) throw DimensionError("direction length mismatch");
    const double norm = direction.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("direction must be non-zero");
    const Vector z = direction / norm;
    if (ps.infinite_rank() > 0 && (ps.null_basis.transpose() * z).norm() > kDirectionTolerance) {
        return kInfinity;
    }
    const Vector coords = ps.cov_basis.transpose() * z;
    return coords.cwiseAbs2().dot(ps.cov_values);
}

Vector spectral_uncertainty(const PosteriorSummary& ps, const Spectrum& spectrum) {
    if (spectrum.basis.rows() != ps.dimension()) throw DimensionError("spectrum dimension mismatch");
    Vector out(spectrum.basis.cols());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] = directional_uncertainty(ps, spectrum.basis.col(i));
    }
    return out;
}

Vector node_variances(const PosteriorSummary& ps) {
    const int n = ps.dimension();
    Vector out(n);
    for (int i = 0; i < n; ++i) {
        if (ps.infinite_rank() > 0 && ps.null_basis.row(i).norm() > kDirectionTolerance) {
            out[i] = kInfinity;
        } else {
            out[i] = ps.cov_basis.row(i).cwiseAbs2().dot(ps.cov_values.transpose());
        }
    }
    return out;
}

namespace {

MapResult solve_closed_form(const GaussianBelief& belief) {
    const ReducedProblem problem = reduce(belief);
    MapResult result;
    if (problem.precision.rows() == 0) {
        result.estimate = problem.constraints.particular;
        return result;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(kRankTolerance);
    cod.compute(problem.precision);
    const Vector y = cod.solve(problem.rhs);
    result.estimate = problem.lift(y);
    result.unique = cod.rank() == problem.precision.rows();
    const double rhs_norm = problem.rhs.norm();
    result.relative_residual =
        rhs_norm > 0 ? (problem.precision * y - problem.rhs).norm() / rhs_norm : 0.0;
    return result;
}

// Projected operator v -> Pi P Pi v with Pi the projector onto ker(C).
class ProjectedOperator {
public:
    ProjectedOperator(const Matrix& precision, const Matrix& constraint_rows)
        : precision_(precision), rows_(constraint_rows) {}

    Vector project(const Vector& v) const {
        if (rows_.rows() == 0) return v;
        return v - rows_.transpose() * (rows_ * v);
    }
    Vector apply(const Vector& v) const { return project(precision_ * project(v)); }

private:
    const Matrix& precision_;
    const Matrix& rows_;
};

struct CgOutcome {
    Vector solution;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    bool singular = false;  // a search direction with negligible curvature was found
};

CgOutcome conjugate_gradient(const ProjectedOperator& op, const Vector& rhs, double tol,
                             int max_iterations) {
    CgOutcome out;
    out.solution = Vector::Zero(rhs.size());
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) {
        out.converged = true;
        return out;
    }
    Vector r = rhs;
    Vector p = r;
    double rr = r.squaredNorm();
    double curvature_max = 0.0;
    for (int k = 0; k < max_iterations; ++k) {
        const Vector ap = op.apply(p);
        const double pap = p.dot(ap);
        const double pp = p.squaredNorm();
        const double rayleigh = pap / pp;
        curvature_max = std::max(curvature_max, rayleigh);
        if (!(rayleigh > kRankTolerance * std::max(1.0, curvature_max))) {
            out.singular = true;
            out.iterations = k;
            out.relative_residual = std::sqrt(rr) / rhs_norm;
            return out;
        }
        const double alpha = rr / pap;
        out.solution += alpha * p;
        r -= alpha * ap;
        // Periodic residual replacement limits drift on long runs.
        if ((k + 1) % 50 == 0) r = rhs - op.apply(out.solution);
        const double rr_next = r.squaredNorm();
        out.iterations = k + 1;
        out.relative_residual = std::sqrt(rr_next) / rhs_norm;
        if (out.relative_residual <= tol) {
            out.converged = true;
            return out;
        }
        p = r + (rr_next / rr) * p;
        rr = rr_next;
    }
    return out;
}

MapResult solve_iterative(const GaussianBelief& belief, const IterativeOptions& options) {
    const int n = belief.dimension();
    const ConstraintSet constraints =
        normalize_constraints(belief.constraint_rows(), belief.constraint_values());
    const ProjectedOperator op(belief.precision(), constraints.rows);
    const int max_iterations = options.max_iterations > 0 ? options.max_iterations : 10 * n + 100;

    const Vector rhs =
        op.project(belief.information() - belief.precision() * constraints.particular);
    const CgOutcome main = conjugate_gradient(op, rhs, options.relative_tolerance, max_iterations);
    if (!main.converged) {
        throw SolverDivergenceError("conjugate gradient did not reach the requested residual",
                                    main.iterations, main.relative_residual);
    }

    MapResult result;
    result.estimate = constraints.particular + main.solution;
    result.iterations = main.iterations;
    result.relative_residual = main.relative_residual;

    // Uniqueness probe: a generic right-hand side has a component along any
    // flat direction of the projected operator, which CG can never reduce.
    RandomStream rng(0x5eedULL);
    const Vector probe_rhs = op.project(rng.normal_vector(n));
    const CgOutcome probe =
        conjugate_gradient(op, probe_rhs, options.relative_tolerance, max_iterations);
    result.unique = probe.converged && !probe.singular;
    if (constraints.rows.rows() == n) result.unique = true;
    return result;
}

}  // namespace

MapResult solve_map(const GaussianBelief& prior, const GaussianBelief& observation,
                    SolveMethod method, const IterativeOptions& options) {
    const GaussianBelief fused = fuse_beliefs(prior, observation);
    return method == SolveMethod::closed_form ? solve_closed_form(fused)
                                              : solve_iterative(fused, options);
}

Reconstruction perfect_reconstruct(const SubspaceBasis& basis, const SamplingOperator& sampling,
                                   const Vector& samples) {
    if (basis.dimension() != sampling.dimension()) throw DimensionError("basis/sampling dimension mismatch");
    if (samples.size() != sampling.size()) throw DimensionError("sample count mismatch");
    if (sampling.size() == 0) throw std::invalid_argument("perfect_reconstruct needs at least one sample");

    const Matrix& u = basis.matrix();
    Matrix sampled_rows(sampling.size(), basis.rank());
    for (int j = 0; j < sampling.size(); ++j) sampled_rows.row(j) = u.row(sampling.nodes()[j]);

    Reconstruction out;
    if (sampled_rows.rows() == sampled_rows.cols()) {
        Eigen::FullPivLU<Matrix> lu(sampled_rows);
        lu.setThreshold(kRankTolerance);
        if (lu.isInvertible()) {
            out.signal = u * lu.solve(samples);
            return out;
        }
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(kRankTolerance);
    cod.compute(sampled_rows);
    out.signal = u * cod.solve(samples);
    out.exact = cod.rank() == basis.rank();
    return out;
}

bool is_perfectly_reconstructible(const SubspaceBasis& basis, const SamplingOperator& sampling,
                                  double tol) {
    if (basis.dimension() != sampling.dimension()) throw DimensionError("basis/sampling dimension mismatch");
    const int n = basis.dimension();
    Matrix m = Matrix::Identity(n, n) - basis.projector();
    for (NodeId id : sampling.nodes()) m(id, id) += 1.0;
    Eigen::JacobiSVD<Matrix> svd(symmetrized(m));
    const Vector& sv = svd.singularValues();
    return n == 0 || sv[sv.size() - 1] > tol;
}

}  // namespace graphbayes

#include <cmath>

#include <doctest.h>

#include "graphbayes/belief.hpp"
#include "graphbayes/random.hpp"
#include "oracles.hpp"

using namespace graphbayes;

namespace {

Matrix p2_laplacian() { return laplacian(path_graph(2)); }

}  // namespace

TEST_CASE("smoothness_prior") {
    const GaussianBelief improper = smoothness_prior(p2_laplacian(), 0.0);
    CHECK(improper.precision() == p2_laplacian());
    CHECK(improper.information() == Vector::Zero(2));
    CHECK(improper.constraint_count() == 0);

    const GaussianBelief proper = smoothness_prior(p2_laplacian(), 1e-6);
    CHECK(oracle::max_abs(proper.precision() - (p2_laplacian() + 1e-6 * oracle::identity(2))) == 0.0);

    const GaussianBelief vacuous = smoothness_prior(Matrix::Zero(3, 3), 0.0);
    CHECK(vacuous.precision() == Matrix::Zero(3, 3));

    CHECK_THROWS_AS(smoothness_prior(p2_laplacian(), -1.0), BeliefError);
}

TEST_CASE("bandlimit_basis") {
    const Spectrum p2 = spectral_decomposition(p2_laplacian());
    const SubspaceBasis ones = bandlimit_basis(p2, 0.0, 1e-9);
    REQUIRE(ones.rank() == 1);
    CHECK(ones.matrix()(0, 0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(ones.matrix()(1, 0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));

    const Spectrum p3 = spectral_decomposition(laplacian(path_graph(3)));
    const SubspaceBasis low = bandlimit_basis(p3, 1.5, 0.0);
    CHECK(low.rank() == 2);
    CHECK(oracle::max_abs(low.matrix() - p3.basis.leftCols(2)) == 0.0);

    const Spectrum g = spectral_decomposition(laplacian(grid_graph(3, 3)));
    CHECK(bandlimit_basis(g, g.eigenvalues[8], 0.0).rank() == 9);
    CHECK_THROWS_AS(bandlimit_basis(g, -1.0, 1e-9), BeliefError);
}

TEST_CASE("subspace_prior exact limit and relaxation") {
    const Spectrum p2 = spectral_decomposition(p2_laplacian());

    const GaussianBelief vacuous = subspace_prior(SubspaceBasis(oracle::identity(2)), 0.0, 0.0);
    CHECK(vacuous.constraint_count() == 0);
    CHECK(vacuous.precision() == Matrix::Zero(2, 2));

    const SubspaceBasis ones = bandlimit_basis(p2, 0.0);
    const GaussianBelief exact = subspace_prior(ones, 0.0, 0.0);
    REQUIRE(exact.constraint_count() == 1);
    CHECK(exact.precision() == Matrix::Zero(2, 2));
    // The single row is +-(1, -1)/sqrt(2): it forces x0 = x1.
    const Vector row = exact.constraint_rows().row(0);
    CHECK(std::abs(row[0]) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(row[0] == doctest::Approx(-row[1]).epsilon(1e-12));
    CHECK(exact.constraint_values()[0] == 0.0);

    // (I - U U^T) with U = (1,1)/sqrt(2) is [[1/2,-1/2],[-1/2,1/2]].
    const GaussianBelief relaxed = subspace_prior(ones, 1.0, 0.0);
    Matrix want(2, 2);
    want << 0.5, -0.5, -0.5, 0.5;
    CHECK(oracle::max_abs(relaxed.precision() - want) < 1e-15);

    CHECK_THROWS_AS(subspace_prior(ones, -1.0, 0.0), BeliefError);
    CHECK_THROWS_AS(subspace_prior(ones, 1.0, -1.0), BeliefError);
}

TEST_CASE("relaxed subspace prior quadratic forms") {
    const Spectrum s = spectral_decomposition(laplacian(grid_graph(4, 3)));
    const SubspaceBasis u = bandlimit_basis(s, 1.0);
    const Matrix perp = u.complement();
    const double sigma2 = 0.7;
    const double eps = 0.05;
    const GaussianBelief b = subspace_prior(u, sigma2, eps);
    for (int j = 0; j < u.rank(); ++j) {
        const Vector v = u.matrix().col(j);
        CHECK(v.dot(b.precision() * v) == doctest::Approx(eps / sigma2).epsilon(1e-10));
    }
    for (int j = 0; j < perp.cols(); ++j) {
        const Vector v = perp.col(j);
        CHECK(v.dot(b.precision() * v) == doctest::Approx((1 + eps) / sigma2).epsilon(1e-10));
    }
    CHECK(oracle::max_abs(u.matrix().transpose() * perp) < 1e-12);
}

TEST_CASE("full_observation") {
    Vector xbar(2);
    xbar << 1, 2;
    const GaussianBelief unit = full_observation(xbar, 1.0);
    CHECK(unit.precision() == oracle::identity(2));
    CHECK(unit.information() == xbar);

    const GaussianBelief exact = full_observation(xbar, 0.0);
    CHECK(exact.constraint_count() == 2);
    CHECK(exact.constraint_rows() == oracle::identity(2));
    CHECK(exact.constraint_values() == xbar);

    const GaussianBelief noisy = full_observation(xbar, 3.0);
    CHECK(noisy.information()[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(noisy.information()[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("partial_observation") {
    const SamplingOperator s0(2, {0});
    const GaussianBelief noisy = partial_observation(s0, Vector::Constant(1, 5.0), 1.0);
    Matrix want(2, 2);
    want << 1, 0, 0, 0;
    CHECK(noisy.precision() == want);
    CHECK(noisy.information() == Vector::Unit(2, 0) * 5.0);

    const GaussianBelief exact = partial_observation(s0, Vector::Constant(1, 5.0), 0.0);
    REQUIRE(exact.constraint_count() == 1);
    CHECK(exact.constraint_rows().row(0) == Vector::Unit(2, 0).transpose());
    CHECK(exact.constraint_values()[0] == 5.0);

    CHECK_THROWS_AS(SamplingOperator(3, {0, 0}), BeliefError);
    CHECK_THROWS_AS(SamplingOperator(3, {3}), BeliefError);
    CHECK_THROWS_AS(partial_observation(s0, Vector::Zero(2), 1.0), DimensionError);

    RandomStream rng(3);
    for (double sigma2 : {0.5, 2.0}) {
        const Vector xbar = rng.normal_vector(6);
        const GaussianBelief all = partial_observation(SamplingOperator::all(6), xbar, sigma2);
        const GaussianBelief full = full_observation(xbar, sigma2);
        CHECK(oracle::max_abs(all.precision() - full.precision()) <= 1e-12);
        CHECK(oracle::max_abs(all.information() - full.information()) <= 1e-12);
    }
}

TEST_CASE("sampling operator algebra") {
    const SamplingOperator s(4, {2, 0});
    Vector x(4);
    x << 10, 11, 12, 13;
    Vector want(2);
    want << 12, 10;
    CHECK(s.restrict(x) == want);
    CHECK(s.matrix().transpose() * x == want);
    CHECK(s.lift(want) == s.matrix() * want);
    CHECK(s.with(3).nodes() == std::vector<NodeId>{2, 0, 3});
    CHECK_THROWS_AS(s.with(2), BeliefError);
}

TEST_CASE("fusion is additive and reduces constraints") {
    RandomStream rng(11);
    const Matrix lap = laplacian(random_graph(8, 0.4, 2));
    const GaussianBelief prior = smoothness_prior(lap, 0.1);
    const Vector xbar = rng.normal_vector(8);
    const GaussianBelief obs = full_observation(xbar, 0.5);
    const GaussianBelief fused = fuse_beliefs(prior, obs);
    CHECK(oracle::max_abs(fused.precision() - (prior.precision() + obs.precision())) <= 1e-12);
    CHECK(oracle::max_abs(fused.information() - (prior.information() + obs.information())) <= 1e-12);

    // A repeated exact observation is dependent and consistent: one row survives.
    const SamplingOperator s(8, {3});
    const GaussianBelief a = partial_observation(s, Vector::Constant(1, 2.0), 0.0);
    const GaussianBelief twice = fuse_beliefs(a, a);
    REQUIRE(twice.constraint_count() == 1);
    const Vector row = twice.constraint_rows().row(0);
    CHECK(std::abs(row[3]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row[3] * twice.constraint_values()[0] == doctest::Approx(2.0).epsilon(1e-12));

    const GaussianBelief b = partial_observation(s, Vector::Constant(1, 3.0), 0.0);
    CHECK_THROWS_AS(fuse_beliefs(a, b), InconsistentConstraintsError);
    CHECK_THROWS_AS(fuse_beliefs(a, GaussianBelief(3)), DimensionError);

    // Normalized rows are orthonormal.
    Matrix rows(3, 4);
    rows << 1, 1, 0, 0, 0, 1, 1, 0, 1, 2, 1, 0;  // third row = first + second
    Vector values(3);
    values << 1, 2, 3;
    const ConstraintSet c = normalize_constraints(rows, values);
    CHECK(c.rows.rows() == 2);
    CHECK(oracle::max_abs(c.rows * c.rows.transpose() - oracle::identity(2)) < 1e-12);
    CHECK(oracle::max_abs(rows * c.particular - values) < 1e-12);
    values[2] = 4;
    CHECK_THROWS_AS(normalize_constraints(rows, values), InconsistentConstraintsError);
}

TEST_CASE("subspace basis validation and complement") {
    Matrix bad(3, 1);
    bad << 1, 1, 0;
    CHECK_THROWS_AS(SubspaceBasis{bad}, BeliefError);
    const SubspaceBasis u(bad / std::sqrt(2.0));
    const Matrix c = u.complement();
    CHECK(c.cols() == 2);
    CHECK(oracle::max_abs(c.transpose() * c - oracle::identity(2)) < 1e-12);
    CHECK(oracle::max_abs(c.transpose() * u.matrix()) < 1e-12);
}

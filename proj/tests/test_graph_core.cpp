#include <cmath>
#include <limits>

#include <doctest.h>

#include "graphbayes/graph_core.hpp"
#include "graphbayes/random.hpp"
#include "graphbayes/signal_io.hpp"
#include "oracles.hpp"

using namespace graphbayes;

TEST_CASE("load_edge_list parses paths, headers and comments") {
    const Graph p3 = load_edge_list("0 1\n1 2");
    CHECK(p3.node_count() == 3);
    CHECK(p3.edges() == std::vector<Edge>{{0, 1}, {1, 2}});

    const Graph empty = load_edge_list("# n=4\n");
    CHECK(empty.node_count() == 4);
    CHECK(empty.edge_count() == 0);

    const Graph dup = load_edge_list("# a comment\n1 0\n0 1   # trailing\n\n2\t1\n");
    CHECK(dup.edges() == std::vector<Edge>{{0, 1}, {1, 2}});

    const Graph one = load_edge_list("1 2\n2 3\n", true);
    CHECK(one == p3);
}

TEST_CASE("load_edge_list rejects bad input") {
    CHECK_THROWS_AS(load_edge_list("0 0"), GraphError);
    CHECK_THROWS_WITH_AS(load_edge_list("0 1\n1 x\n"), doctest::Contains("line 2"), GraphError);
    CHECK_THROWS_WITH_AS(load_edge_list("0 1\n2\n"), doctest::Contains("line 2"), GraphError);
    CHECK_THROWS_AS(load_edge_list("# n=2\n0 2\n"), GraphError);
    CHECK_THROWS_AS(load_edge_list("-1 2\n"), GraphError);
    CHECK_THROWS_AS(load_edge_list("0 1\n", true), GraphError);  // id 0 under 1-based input
}

TEST_CASE("laplacian of small graphs") {
    Matrix want3(3, 3);
    want3 << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    CHECK(laplacian(path_graph(3)) == want3);
    CHECK(laplacian(edgeless_graph(2)) == Matrix::Zero(2, 2));
    Matrix want2(2, 2);
    want2 << 1, -1, -1, 1;
    CHECK(laplacian(path_graph(2)) == want2);
}

TEST_CASE("spectral decomposition of P2, P3 and the zero operator") {
    // P2: det(L - t I) = (1 - t)^2 - 1 = t (t - 2).
    const Spectrum p2 = spectral_decomposition(laplacian(path_graph(2)));
    CHECK(std::abs(p2.eigenvalues[0]) < 1e-12);
    CHECK(p2.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p2.basis(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(p2.basis(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    // P3: det(L - t I) = -t (t - 1)(t - 3).
    const Spectrum p3 = spectral_decomposition(laplacian(path_graph(3)));
    CHECK(std::abs(p3.eigenvalues[0]) < 1e-12);
    CHECK(p3.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p3.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));

    const Spectrum zero = spectral_decomposition(Matrix::Zero(3, 3));
    CHECK(zero.eigenvalues == Vector::Zero(3));

    Matrix nonsym(2, 2);
    nonsym << 1, 2, 0, 1;
    CHECK_THROWS_AS(spectral_decomposition(nonsym), std::invalid_argument);
}

TEST_CASE("eigenvector sign convention: first non-negligible entry positive") {
    for (int trial = 0; trial < 5; ++trial) {
        const Spectrum s = spectral_decomposition(laplacian(random_graph(15, 0.3, 100 + trial)));
        for (int j = 0; j < s.size(); ++j) {
            for (int i = 0; i < s.size(); ++i) {
                if (std::abs(s.basis(i, j)) > 1e-12) {
                    CHECK(s.basis(i, j) > 0);
                    break;
                }
            }
        }
    }
}

TEST_CASE("gft examples") {
    const Spectrum p2 = spectral_decomposition(laplacian(path_graph(2)));
    const Vector e0 = Vector::Unit(2, 0);
    const Vector coeffs = gft(p2, e0);
    // V^T e0 is the first row of V; |entries| = 1/sqrt(2).
    CHECK(std::abs(coeffs[0]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(coeffs[1]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(coeffs[0] > 0);  // v_1 = (1,1)/sqrt(2) under the sign rule

    const Spectrum s = spectral_decomposition(laplacian(grid_graph(3, 4)));
    CHECK(gft(s, Vector::Zero(12)) == Vector::Zero(12));
    for (int i = 0; i < 12; ++i) {
        CHECK(oracle::max_abs(gft(s, s.basis.col(i)) - Vector::Unit(12, i)) < 1e-12);
    }
    CHECK_THROWS_AS(gft(s, Vector::Zero(3)), DimensionError);
    CHECK_THROWS_AS(igft(s, Vector::Zero(3)), DimensionError);
}

TEST_CASE("quadratic variation examples") {
    const Matrix l2 = laplacian(path_graph(2));
    CHECK(quadratic_variation(l2, Vector::Constant(2, 3.5)) == 0.0);
    Vector x(2);
    x << 1, -1;
    CHECK(quadratic_variation(l2, x) == doctest::Approx(4.0));  // (1 - (-1))^2

    const Matrix lg = laplacian(grid_graph(4, 3));
    const Spectrum s = spectral_decomposition(lg);
    for (int i = 0; i < s.size(); ++i) {
        CHECK(std::abs(quadratic_variation(lg, s.basis.col(i)) - s.eigenvalues[i]) < 1e-10);
    }
    CHECK_THROWS_AS(quadratic_variation(lg, Vector::Zero(2)), DimensionError);
}

TEST_CASE("Laplacian and spectrum invariants on random graphs") {
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5 + trial;
        const Graph g = random_graph(n, 0.25, 7 * trial + 1);
        const Matrix lap = laplacian(g);
        CHECK(oracle::max_abs(lap.rowwise().sum()) == 0.0);
        CHECK(is_symmetric(lap));

        const Spectrum s = spectral_decomposition(lap);
        CHECK(oracle::max_abs(s.basis.transpose() * s.basis - oracle::identity(n)) <= 1e-10);
        CHECK(std::abs(s.eigenvalues[0]) <= 1e-10);
        for (int i = 1; i < n; ++i) CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
        CHECK(oracle::max_abs(s.basis * s.eigenvalues.asDiagonal() * s.basis.transpose() - lap) <= 1e-9);

        RandomStream rng(trial);
        for (int k = 0; k < 100; ++k) {
            const Vector x = rng.normal_vector(n);
            CHECK(quadratic_variation(lap, x) >= -1e-10);
            const Vector coeffs = gft(s, x);
            CHECK(std::abs(x.squaredNorm() - coeffs.squaredNorm()) <= 1e-10 * (1 + x.squaredNorm()));
            const double spectral = s.eigenvalues.dot(coeffs.cwiseAbs2());
            CHECK(std::abs(quadratic_variation(lap, x) - spectral) <= 1e-9 * (1 + x.squaredNorm()));
            CHECK(oracle::max_abs(igft(s, coeffs) - x) <= 1e-10);
        }
    }
}

TEST_CASE("graph constructor invariants") {
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), GraphError);
    CHECK_THROWS_AS(Graph(3, {{1, 1}}), GraphError);
    const Graph g(3, {{2, 0}, {0, 2}, {1, 2}});
    CHECK(g.edges() == std::vector<Edge>{{0, 2}, {1, 2}});
    CHECK(g.has_edge(2, 0));
    CHECK_FALSE(g.has_edge(0, 1));
    CHECK(g.degrees() == std::vector<int>{1, 1, 2});
}

TEST_CASE("generators") {
    const Graph grid = grid_graph(8, 8);
    CHECK(grid.node_count() == 64);
    CHECK(grid.edge_count() == 2 * 8 * 7);
    CHECK(star_graph(5).degrees() == std::vector<int>{4, 1, 1, 1, 1});
    CHECK(random_geometric_graph(30, 0.3, 5) == random_geometric_graph(30, 0.3, 5));
    CHECK(random_geometric_graph(30, 2.0, 5).edge_count() == 30 * 29 / 2);
}

TEST_CASE("signal csv") {
    const SparseSignal s = parse_signal_csv("node,value\n0,1.5\n2,-3\n# note\n");
    CHECK(s.size() == 2);
    CHECK(s.at(0) == 1.5);
    CHECK(s.at(2) == -3.0);
    CHECK(parse_signal_csv("node,value\n1,2\n", true).at(0) == 2.0);
    CHECK_THROWS_AS(parse_signal_csv("0,1\n"), GraphError);
    CHECK_THROWS_AS(parse_signal_csv("node,value\n0,1\n0,2\n"), GraphError);
    CHECK_THROWS_AS(parse_signal_csv("node,value\n0,nan\n"), GraphError);
    CHECK_THROWS_WITH_AS(parse_signal_csv("node,value\n0,1\nx,2\n"), doctest::Contains("line 3"),
                         GraphError);
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(0.5) == "0.5");
}

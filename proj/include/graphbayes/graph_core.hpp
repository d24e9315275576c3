#pragma once

// Graph representation, Laplacian, graph Fourier transform.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace graphbayes {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Node index. Nodes are enumerated 0..n-1.
using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;

/// Raised for malformed graph input or violated graph invariants.
class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when vector/matrix dimensions do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Undirected simple graph with a fixed node enumeration.
///
/// Edges are stored normalized (first < second), sorted, and deduplicated.
/// Self-loops and out-of-range endpoints are rejected at construction.
class Graph {
public:
    Graph() = default;
    Graph(int node_count, std::vector<Edge> edges);

    int node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    std::vector<int> degrees() const;
    bool has_edge(NodeId u, NodeId v) const;

    bool operator==(const Graph&) const = default;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

/// Parse an edge list. Lines are `u v`; `#` starts a comment; a header
/// comment `# n=<N>` fixes the node count (otherwise max id + 1).
/// With one_based, ids in the text are shifted down by one.
Graph load_edge_list(std::string_view text, bool one_based = false);
Graph load_edge_list_file(const std::string& path, bool one_based = false);

/// L = D - A.
Matrix laplacian(const Graph& g);

/// Orthonormal Laplacian eigenbasis; columns of `basis` are eigenvectors,
/// `eigenvalues` ascending.
struct Spectrum {
    Matrix basis;
    Vector eigenvalues;

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Symmetric eigendecomposition with ascending eigenvalues. Each eigenvector
/// is oriented so that its first entry with magnitude above 1e-12 is positive.
/// Throws std::invalid_argument if the input is not symmetric to 1e-12 and
/// std::runtime_error if the eigensolver fails.
Spectrum spectral_decomposition(const Matrix& symmetric);

Vector gft(const Spectrum& s, const Vector& x);
Vector igft(const Spectrum& s, const Vector& coeffs);

/// x^T L x.
double quadratic_variation(const Matrix& laplacian, const Vector& x);

/// True when max |A - A^T| <= tol.
bool is_symmetric(const Matrix& a, double tol = 1e-12);

// Synthetic graphs.
Graph path_graph(int n);
Graph star_graph(int n);  // node 0 is the hub
Graph edgeless_graph(int n);
Graph grid_graph(int width, int height);
/// n points uniform in the unit square, edge when distance <= radius.
Graph random_geometric_graph(int n, double radius, std::uint64_t seed);
/// Erdos-Renyi G(n, p).
Graph random_graph(int n, double p, std::uint64_t seed);

}  // namespace graphbayes

#include "graphbayes/graph_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "graphbayes/signal_io.hpp"

namespace graphbayes {

Graph::Graph(int node_count, std::vector<Edge> edges) : n_(node_count) {
    if (node_count < 0) throw GraphError("negative node count");
    for (auto& [u, v] : edges) {
        if (u == v) throw GraphError("self-loop at node " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n_ || v >= n_) {
            throw GraphError("edge {" + std::to_string(u) + "," + std::to_string(v) +
                             "} out of range for n=" + std::to_string(n_));
        }
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(n_, 0);
    for (const auto& [u, v] : edges_) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::optional<long long> parse_int(std::string_view tok) {
    long long value = 0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

// Recognizes `n=<N>` inside a comment.
std::optional<long long> parse_header(std::string_view comment) {
    comment = trim(comment);
    if (comment.size() < 2 || comment.substr(0, 2) != "n=") return std::nullopt;
    return parse_int(trim(comment.substr(2)));
}

}  // namespace

Graph load_edge_list(std::string_view text, bool one_based) {
    std::optional<long long> declared_n;
    std::vector<Edge> edges;
    long long max_id = -1;
    const int shift = one_based ? 1 : 0;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        const auto hash = line.find('#');
        if (hash != std::string_view::npos) {
            if (auto n = parse_header(line.substr(hash + 1))) {
                if (*n < 0) throw GraphError("line " + std::to_string(line_no) + ": negative n");
                declared_n = *n;
            }
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto split = line.find_first_of(" \t");
        auto bad = [&](const std::string& why) {
            return GraphError("line " + std::to_string(line_no) + ": " + why);
        };
        if (split == std::string_view::npos) throw bad("expected two node ids");
        const auto first = parse_int(trim(line.substr(0, split)));
        const auto second = parse_int(trim(line.substr(split)));
        if (!first || !second) throw bad("expected two integer node ids");

        const long long u = *first - shift;
        const long long v = *second - shift;
        if (u < 0 || v < 0) throw bad("negative node id");
        if (u == v) throw bad("self-loop at node " + std::to_string(*first));
        if (u > std::numeric_limits<int>::max() || v > std::numeric_limits<int>::max()) {
            throw bad("node id too large");
        }
        max_id = std::max({max_id, u, v});
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }

    const long long n = declared_n ? *declared_n : max_id + 1;
    if (max_id >= n) {
        throw GraphError("node id " + std::to_string(max_id + shift) + " not below declared n=" +
                         std::to_string(n));
    }
    return Graph(static_cast<int>(n), std::move(edges));
}

Graph load_edge_list_file(const std::string& path, bool one_based) {
    return load_edge_list(read_text_file(path), one_based);
}

Matrix laplacian(const Graph& g) {
    const int n = g.node_count();
    Matrix L = Matrix::Zero(n, n);
    for (const auto& [u, v] : g.edges()) {
        L(u, v) -= 1.0;
        L(v, u) -= 1.0;
        L(u, u) += 1.0;
        L(v, v) += 1.0;
    }
    return L;
}

bool is_symmetric(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    if (a.size() == 0) return true;
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Spectrum spectral_decomposition(const Matrix& symmetric) {
    if (!is_symmetric(symmetric)) throw std::invalid_argument("matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");

    Spectrum s{solver.eigenvectors(), solver.eigenvalues()};
    for (Eigen::Index j = 0; j < s.basis.cols(); ++j) {
        for (Eigen::Index i = 0; i < s.basis.rows(); ++i) {
            const double entry = s.basis(i, j);
            if (std::abs(entry) > 1e-12) {
                if (entry < 0) s.basis.col(j) *= -1.0;
                break;
            }
        }
    }
    return s;
}

Vector gft(const Spectrum& s, const Vector& x) {
    if (x.size() != s.basis.rows()) throw DimensionError("gft: signal length mismatch");
    return s.basis.transpose() * x;
}

Vector igft(const Spectrum& s, const Vector& coeffs) {
    if (coeffs.size() != s.basis.cols()) throw DimensionError("igft: coefficient length mismatch");
    return s.basis * coeffs;
}

double quadratic_variation(const Matrix& laplacian, const Vector& x) {
    if (laplacian.rows() != x.size() || laplacian.cols() != x.size()) {
        throw DimensionError("quadratic_variation: dimension mismatch");
    }
    return x.dot(laplacian * x);
}

}  // namespace graphbayes

#include <cmath>

#include "graphbayes/graph_core.hpp"
#include "graphbayes/random.hpp"

namespace graphbayes {

Graph path_graph(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, std::move(edges));
}

Graph star_graph(int n) {
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
    return Graph(n, std::move(edges));
}

Graph edgeless_graph(int n) { return Graph(n, {}); }

Graph grid_graph(int width, int height) {
    if (width < 1 || height < 1) throw GraphError("grid dimensions must be positive");
    std::vector<Edge> edges;
    auto id = [width](int x, int y) { return y * width + x; };
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (x + 1 < width) edges.emplace_back(id(x, y), id(x + 1, y));
            if (y + 1 < height) edges.emplace_back(id(x, y), id(x, y + 1));
        }
    }
    return Graph(width * height, std::move(edges));
}

Graph random_geometric_graph(int n, double radius, std::uint64_t seed) {
    if (n < 1) throw GraphError("random geometric graph needs n >= 1");
    if (!(radius >= 0.0)) throw GraphError("radius must be non-negative");
    RandomStream rng(seed);
    std::vector<double> px(n), py(n);
    for (int i = 0; i < n; ++i) {
        px[i] = rng.uniform();
        py[i] = rng.uniform();
    }
    std::vector<Edge> edges;
    const double r2 = radius * radius;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = px[i] - px[j];
            const double dy = py[i] - py[j];
            if (dx * dx + dy * dy <= r2) edges.emplace_back(i, j);
        }
    }
    return Graph(n, std::move(edges));
}

Graph random_graph(int n, double p, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform() < p) edges.emplace_back(i, j);
        }
    }
    return Graph(n, std::move(edges));
}

}  // namespace graphbayes

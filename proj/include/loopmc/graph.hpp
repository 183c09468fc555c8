#pragma once
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace loopmc {

// Metadata kept when the graph is a periodic cube (Z/LZ)^d.
struct CubeInfo {
    int side = 0;  // L
    int dim = 0;   // d
};

// Finite simple graph. Vertices are dense indices 0..n-1; for cubes the
// coordinate order is row-major with the first axis fastest, so
// id = x_0 + L*x_1 + L^2*x_2 + ...
class Graph {
public:
    Graph(int vertex_count, std::vector<std::pair<int, int>> edges);

    // Cube in Z^d with side L and periodic boundary conditions. Edges at
    // Euclidean distance 1, deduplicated. For L = 2 the pair x, x+e coincide
    // mod 2, so opposite-direction edges collapse and the edge count is
    // d*2^(d-1) instead of the naive d*L^d.
    static Graph periodic_cubic(int side, int dim);

    // One edge per line, "i j". Vertex count is 1 + max index.
    static Graph from_edge_list(std::istream& in);

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    std::pair<int, int> edge(int e) const { return edges_[e]; }
    int edge_other(int e, int v) const {
        const auto& [a, b] = edges_[e];
        return v == a ? b : a;
    }

    std::span<const int> neighbors(int v) const;
    std::span<const int> incident_edges(int v) const;
    int degree(int v) const;

    // Two-coloring with every edge bichromatic, or nullopt if none exists.
    // Deterministic: vertex 0 (and the least vertex of every component) is
    // color 0.
    std::optional<std::vector<int>> bipartition() const;

    // BFS shortest-path length; throws ValidationError for unreachable pairs.
    int distance(int x, int y) const;

    const std::optional<CubeInfo>& cube() const { return cube_; }

    // Cube helpers (require cube()).
    std::vector<int> cube_coords(int v) const;
    int cube_vertex(std::span<const int> coords) const;
    int cube_displace(int v, std::span<const int> delta) const;

private:
    int vertex_count_;
    std::vector<std::pair<int, int>> edges_;
    // CSR-style adjacency, aligned so neighbors_[k] is across incident_edges_[k].
    std::vector<int> adj_offsets_;
    std::vector<int> neighbors_;
    std::vector<int> incident_edges_;
    std::optional<CubeInfo> cube_;

    void build_adjacency();
};

}  // namespace loopmc

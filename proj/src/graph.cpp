#include "loopmc/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <string>

#include "loopmc/errors.hpp"

namespace loopmc {

Graph::Graph(int vertex_count, std::vector<std::pair<int, int>> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
    if (vertex_count_ <= 0) throw ValidationError("graph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (auto& [a, b] : edges_) {
        if (a == b) throw ValidationError("self-loop edge rejected");
        if (a < 0 || b < 0 || a >= vertex_count_ || b >= vertex_count_)
            throw ValidationError("edge endpoint out of range");
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) throw ValidationError("duplicate edge rejected");
    }
    build_adjacency();
}

void Graph::build_adjacency() {
    adj_offsets_.assign(vertex_count_ + 1, 0);
    for (const auto& [a, b] : edges_) {
        ++adj_offsets_[a + 1];
        ++adj_offsets_[b + 1];
    }
    for (int v = 0; v < vertex_count_; ++v) adj_offsets_[v + 1] += adj_offsets_[v];
    neighbors_.resize(2 * edges_.size());
    incident_edges_.resize(2 * edges_.size());
    std::vector<int> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (int e = 0; e < edge_count(); ++e) {
        const auto& [a, b] = edges_[e];
        neighbors_[fill[a]] = b;
        incident_edges_[fill[a]++] = e;
        neighbors_[fill[b]] = a;
        incident_edges_[fill[b]++] = e;
    }
}

std::span<const int> Graph::neighbors(int v) const {
    return {neighbors_.data() + adj_offsets_[v],
            neighbors_.data() + adj_offsets_[v + 1]};
}

std::span<const int> Graph::incident_edges(int v) const {
    return {incident_edges_.data() + adj_offsets_[v],
            incident_edges_.data() + adj_offsets_[v + 1]};
}

int Graph::degree(int v) const { return adj_offsets_[v + 1] - adj_offsets_[v]; }

Graph Graph::periodic_cubic(int side, int dim) {
    if (side < 2) throw ValidationError("periodic cube needs L >= 2");
    if (dim < 1) throw ValidationError("periodic cube needs d >= 1");
    long long n = 1;
    for (int i = 0; i < dim; ++i) {
        n *= side;
        if (n > (1LL << 30)) throw ValidationError("cube too large");
    }
    const int nv = static_cast<int>(n);
    std::set<std::pair<int, int>> edge_set;
    std::vector<int> coords(dim);
    for (int v = 0; v < nv; ++v) {
        int rem = v;
        for (int i = 0; i < dim; ++i) {
            coords[i] = rem % side;
            rem /= side;
        }
        for (int axis = 0; axis < dim; ++axis) {
            int stride = 1;
            for (int i = 0; i < axis; ++i) stride *= side;
            const int up = (coords[axis] + 1) % side;
            const int w = v + (up - coords[axis]) * stride;
            if (w != v) edge_set.insert({std::min(v, w), std::max(v, w)});
        }
    }
    Graph g(nv, {edge_set.begin(), edge_set.end()});
    g.cube_ = CubeInfo{side, dim};
    return g;
}

Graph Graph::from_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    int max_v = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        int a, b;
        if (!(ss >> a)) continue;  // blank line
        if (!(ss >> b))
            throw ValidationError("edge list line " + std::to_string(line_no) +
                                  ": expected two vertex indices");
        edges.emplace_back(a, b);
        max_v = std::max({max_v, a, b});
    }
    if (edges.empty()) throw ValidationError("edge list is empty");
    return Graph(max_v + 1, std::move(edges));
}

std::optional<std::vector<int>> Graph::bipartition() const {
    std::vector<int> color(vertex_count_, -1);
    for (int start = 0; start < vertex_count_; ++start) {
        if (color[start] != -1) continue;
        color[start] = 0;
        std::deque<int> queue{start};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int w : neighbors(v)) {
                if (color[w] == -1) {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if (color[w] == color[v]) {
                    return std::nullopt;
                }
            }
        }
    }
    return color;
}

int Graph::distance(int x, int y) const {
    if (x < 0 || y < 0 || x >= vertex_count_ || y >= vertex_count_)
        throw ValidationError("vertex out of range");
    if (x == y) return 0;
    std::vector<int> dist(vertex_count_, -1);
    dist[x] = 0;
    std::deque<int> queue{x};
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int w : neighbors(v)) {
            if (dist[w] == -1) {
                dist[w] = dist[v] + 1;
                if (w == y) return dist[w];
                queue.push_back(w);
            }
        }
    }
    throw ValidationError("vertices are in different components");
}

std::vector<int> Graph::cube_coords(int v) const {
    if (!cube_) throw ValidationError("graph is not a periodic cube");
    std::vector<int> coords(cube_->dim);
    for (int i = 0; i < cube_->dim; ++i) {
        coords[i] = v % cube_->side;
        v /= cube_->side;
    }
    return coords;
}

int Graph::cube_vertex(std::span<const int> coords) const {
    if (!cube_) throw ValidationError("graph is not a periodic cube");
    int v = 0;
    int stride = 1;
    for (int i = 0; i < cube_->dim; ++i) {
        int c = coords[i] % cube_->side;
        if (c < 0) c += cube_->side;
        v += c * stride;
        stride *= cube_->side;
    }
    return v;
}

int Graph::cube_displace(int v, std::span<const int> delta) const {
    auto coords = cube_coords(v);
    for (int i = 0; i < cube_->dim; ++i) coords[i] += delta[i];
    return cube_vertex(coords);
}

}  // namespace loopmc

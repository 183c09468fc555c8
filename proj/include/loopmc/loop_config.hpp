#pragma once
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "loopmc/graph.hpp"
#include "loopmc/model.hpp"

namespace loopmc {

enum class TransitionKind : std::uint8_t { Cross = 0, DoubleBar = 1 };

struct Transition {
    int edge;
    double time;  // in [0, beta)
    TransitionKind kind;
};

// A Poisson realization: per-edge lists of marked time points, strictly
// increasing in time within each edge.
class LoopConfig {
public:
    struct EdgeList {
        std::vector<double> times;
        std::vector<TransitionKind> kinds;
        // position of each transition in the per-kind registry of the owner
        std::vector<std::uint32_t> kind_slot;
    };

    LoopConfig(ModelParams params, int edge_count);

    const ModelParams& params() const { return params_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const EdgeList& edge(int e) const { return edges_[e]; }
    std::size_t total_count() const { return total_; }
    std::size_t kind_count(TransitionKind k) const { return registry_[static_cast<int>(k)].size(); }

    bool has_time(int e, double t) const;
    // Insert keeps the per-edge list sorted; exact duplicate times on one edge
    // are the caller's responsibility to reject beforehand.
    void insert(int e, double t, TransitionKind k);
    void remove(int e, int index_in_edge);
    int index_of(int e, double t) const;  // -1 when absent

    // Uniform member of the per-kind registry; valid while the config is unchanged.
    Transition kind_entry(TransitionKind k, std::size_t i) const;

    std::vector<Transition> all_transitions() const;

    // Versioned JSON dump: beta, u, theta, graph descriptor, flat transition
    // array. Times are serialized at full precision.
    std::string to_json(const Graph& g) const;
    static LoopConfig from_json(const std::string& text, const Graph& g);

private:
    struct RegistryEntry {
        int edge;
        double time;
    };

    ModelParams params_;
    std::vector<EdgeList> edges_;
    std::vector<RegistryEntry> registry_[2];
    std::size_t total_ = 0;
};

// Independent Poisson processes per edge: crosses at intensity u, double bars
// at intensity 1-u, times uniform on [0, beta).
LoopConfig sample_poisson(const ModelParams& params, const Graph& g, std::mt19937_64& rng);

}  // namespace loopmc

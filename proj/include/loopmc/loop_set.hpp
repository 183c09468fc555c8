#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "loopmc/graph.hpp"
#include "loopmc/loop_config.hpp"

namespace loopmc {

enum class EventClass { None, Plus, Minus };

// The traced loop decomposition L(w). Strands are the maximal vertical
// segments between consecutive transitions incident to one vertex; every
// strand carries the id of its loop and the loop's vertical direction of
// traversal through it. The structure supports O(log) point lookups and
// incremental repair after single insertions/removals, with walk costs
// bounded by the smaller affected loop.
class LoopSet {
public:
    struct Node {
        double time;
        std::int32_t edge;
        TransitionKind kind;
    };
    struct Strand {
        std::int32_t loop = -1;
        std::int8_t dir = 0;  // +1 up, -1 down
    };
    struct Point {
        int vertex;
        int slot;  // strand index at that vertex
    };

    LoopSet() = default;

    // Deterministic full trace: loops are numbered by their lowest
    // (vertex, interval-start) point, each traced upward from there.
    static LoopSet trace(const Graph& g, const LoopConfig& cfg);

    double beta() const { return beta_; }
    int vertex_count() const { return static_cast<int>(nodes_.size()); }
    std::int64_t loop_count() const { return alive_loops_; }
    std::size_t transition_count() const { return transition_count_; }

    int strand_count(int v) const { return static_cast<int>(strands_[v].size()); }
    const Strand& strand(int v, int slot) const { return strands_[v][slot]; }
    const std::vector<Node>& nodes(int v) const { return nodes_[v]; }
    double strand_length(int v, int slot) const;
    double strand_start(int v, int slot) const;

    // Strand containing (v,t); *on_node set when t is exactly a transition time.
    int strand_at(int v, double t, bool* on_node = nullptr) const;
    std::int32_t loop_at(int v, double t) const;  // throws on transition point
    // Loop id and direction of the strand through (v, 0). O(1).
    const Strand& at_time_zero(int v) const;

    // Whether (x,0) and (y,t) share a loop, and with which relative direction.
    EventClass classify_event(int x, int y, double t) const;

    // Lengths of all loops, indexed by loop id (freed ids report 0).
    std::vector<double> loop_lengths() const;
    double loop_length(std::int32_t id) const;
    std::int64_t loop_strands(std::int32_t id) const { return loops_[id].strands; }
    std::int32_t max_loop_id() const { return static_cast<std::int32_t>(loops_.size()); }

    // --- incremental updates (the Markov chain keeps LoopConfig in sync) ---

    // Change in |L| caused by inserting / removing one transition, O(log n).
    // Insert requires that no transition exists at (e,t); remove that one does.
    int delta_insert(const Graph& g, int e, double t, TransitionKind kind) const;
    int delta_remove(const Graph& g, int e, double t) const;

    void commit_insert(const Graph& g, int e, double t, TransitionKind kind);
    void commit_remove(const Graph& g, int e, double t);

    // Exact conservation check: sum of strand lengths == beta * |vertices|.
    double total_length() const;

    // Structural self-check; returns an explanation on failure (tests only).
    bool consistent(const Graph& g, std::string* why = nullptr) const;

    // Same partition into loops (up to loop ids and global per-loop direction
    // flips). Requires identical transition structure.
    static bool equivalent(const LoopSet& a, const LoopSet& b, std::string* why = nullptr);

private:
    struct LoopInfo {
        std::int64_t strands = 0;
        bool alive = false;
    };
    struct Cursor {
        int v;
        int slot;
        int dir;  // direction of motion
    };

    double beta_ = 0.0;
    std::vector<std::vector<Node>> nodes_;      // per vertex, sorted by (time, edge)
    std::vector<std::vector<Strand>> strands_;  // size max(1, nodes count)
    std::vector<LoopInfo> loops_;
    std::vector<std::int32_t> free_ids_;
    std::int64_t alive_loops_ = 0;
    std::size_t transition_count_ = 0;

    std::int32_t new_loop_id();
    void release_loop(std::int32_t id);

    int find_node(int v, double t, int e) const;  // exact (time, edge) match
    int exit_node(int v, int slot, int dir) const;
    Cursor step(const Graph& g, Cursor c) const;

    // Legs of the transition at node index ni of vertex v: strand just above
    // (plus) and just below (minus).
    int slot_above(int v, int ni) const { return ni; }
    int slot_below(int v, int ni) const {
        const int k = static_cast<int>(nodes_[v].size());
        return (ni - 1 + k) % k;
    }

    // Walk forward assigning (loop,dir) := (label, walk dir), stopping after
    // the strand whose exit is the wall transition (edge,time). Returns the
    // number of strands assigned.
    std::int64_t assign_walk(const Graph& g, Cursor c, std::int32_t label,
                             int wall_edge, double wall_time);

    // One-vertex structural edits. Insert returns the new node index.
    int insert_node(int v, const Node& nd);
    void erase_node(int v, int ni);

    friend struct LoopSetTestAccess;
};

}  // namespace loopmc

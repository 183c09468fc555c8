#include "loopmc/loop_set.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "loopmc/errors.hpp"

namespace loopmc {

namespace {
bool node_less(const LoopSet::Node& a, const LoopSet::Node& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.edge < b.edge;
}
}  // namespace

double LoopSet::strand_start(int v, int slot) const {
    const auto& nd = nodes_[v];
    if (nd.empty()) return 0.0;
    return nd[slot].time;
}

double LoopSet::strand_length(int v, int slot) const {
    const auto& nd = nodes_[v];
    const int k = static_cast<int>(nd.size());
    if (k == 0) return beta_;
    if (slot < k - 1) return nd[slot + 1].time - nd[slot].time;
    return beta_ - nd[k - 1].time + nd[0].time;
}

int LoopSet::strand_at(int v, double t, bool* on_node) const {
    if (on_node) *on_node = false;
    const auto& nd = nodes_[v];
    const int k = static_cast<int>(nd.size());
    if (k == 0) return 0;
    int lo = 0, hi = k;  // first index with time > t
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (nd[mid].time <= t) lo = mid + 1; else hi = mid;
    }
    const int idx = lo - 1;
    if (idx < 0) return k - 1;  // wrapping strand
    if (nd[idx].time == t) {
        if (on_node) *on_node = true;
        return idx;
    }
    return idx;
}

std::int32_t LoopSet::loop_at(int v, double t) const {
    bool on_node = false;
    const int slot = strand_at(v, t, &on_node);
    if (on_node) throw ValidationError("query at a transition time is undefined");
    return strands_[v][slot].loop;
}

const LoopSet::Strand& LoopSet::at_time_zero(int v) const {
    const int k = static_cast<int>(nodes_[v].size());
    // time 0 lies on the wrapping strand (or the single full strand)
    return strands_[v][k == 0 ? 0 : k - 1];
}

EventClass LoopSet::classify_event(int x, int y, double t) const {
    bool on_a = false, on_b = false;
    const int sa = strand_at(x, 0.0, &on_a);
    const int sb = strand_at(y, t, &on_b);
    if (on_a || on_b) throw ValidationError("query at a transition time is undefined");
    const Strand& a = strands_[x][sa];
    const Strand& b = strands_[y][sb];
    if (a.loop != b.loop) return EventClass::None;
    return a.dir == b.dir ? EventClass::Plus : EventClass::Minus;
}

std::vector<double> LoopSet::loop_lengths() const {
    std::vector<double> len(loops_.size(), 0.0);
    for (int v = 0; v < vertex_count(); ++v)
        for (int s = 0; s < strand_count(v); ++s)
            len[strands_[v][s].loop] += strand_length(v, s);
    return len;
}

double LoopSet::loop_length(std::int32_t id) const {
    double len = 0.0;
    for (int v = 0; v < vertex_count(); ++v)
        for (int s = 0; s < strand_count(v); ++s)
            if (strands_[v][s].loop == id) len += strand_length(v, s);
    return len;
}

double LoopSet::total_length() const {
    double sum = 0.0;
    for (int v = 0; v < vertex_count(); ++v)
        for (int s = 0; s < strand_count(v); ++s) sum += strand_length(v, s);
    return sum;
}

std::int32_t LoopSet::new_loop_id() {
    if (!free_ids_.empty()) {
        const std::int32_t id = free_ids_.back();
        free_ids_.pop_back();
        loops_[id] = LoopInfo{0, true};
        ++alive_loops_;
        return id;
    }
    loops_.push_back(LoopInfo{0, true});
    ++alive_loops_;
    return static_cast<std::int32_t>(loops_.size() - 1);
}

void LoopSet::release_loop(std::int32_t id) {
    loops_[id].alive = false;
    loops_[id].strands = 0;
    free_ids_.push_back(id);
    --alive_loops_;
}

int LoopSet::find_node(int v, double t, int e) const {
    const auto& nd = nodes_[v];
    const Node probe{t, e, TransitionKind::Cross};
    auto it = std::lower_bound(nd.begin(), nd.end(), probe, node_less);
    assert(it != nd.end() && it->time == t && it->edge == e);
    return static_cast<int>(it - nd.begin());
}

int LoopSet::exit_node(int v, int slot, int dir) const {
    const int k = static_cast<int>(nodes_[v].size());
    return dir > 0 ? (slot + 1) % k : slot;
}

LoopSet::Cursor LoopSet::step(const Graph& g, Cursor c) const {
    const Node& nd = nodes_[c.v][exit_node(c.v, c.slot, c.dir)];
    const int w = g.edge_other(nd.edge, c.v);
    const int j = find_node(w, nd.time, nd.edge);
    const int ndir = nd.kind == TransitionKind::Cross ? c.dir : -c.dir;
    const int slot = ndir > 0 ? j : slot_below(w, j);
    return {w, slot, ndir};
}

LoopSet LoopSet::trace(const Graph& g, const LoopConfig& cfg) {
    LoopSet ls;
    ls.beta_ = cfg.params().beta;
    ls.nodes_.resize(g.vertex_count());
    ls.strands_.resize(g.vertex_count());
    for (int e = 0; e < cfg.edge_count(); ++e) {
        const auto& el = cfg.edge(e);
        const auto [a, b] = g.edge(e);
        for (std::size_t i = 0; i < el.times.size(); ++i) {
            const Node nd{el.times[i], e, el.kinds[i]};
            ls.nodes_[a].push_back(nd);
            ls.nodes_[b].push_back(nd);
        }
    }
    ls.transition_count_ = cfg.total_count();
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::sort(ls.nodes_[v].begin(), ls.nodes_[v].end(), node_less);
        ls.strands_[v].assign(std::max<std::size_t>(1, ls.nodes_[v].size()), Strand{});
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        for (int s = 0; s < ls.strand_count(v); ++s) {
            if (ls.strands_[v][s].loop != -1) continue;
            const std::int32_t id = ls.new_loop_id();
            if (ls.nodes_[v].empty()) {
                ls.strands_[v][s] = Strand{id, +1};
                ls.loops_[id].strands += 1;
                continue;
            }
            Cursor c{v, s, +1};
            do {
                Strand& st = ls.strands_[c.v][c.slot];
                assert(st.loop == -1);
                st.loop = id;
                st.dir = static_cast<std::int8_t>(c.dir);
                ls.loops_[id].strands += 1;
                c = ls.step(g, c);
            } while (!(c.v == v && c.slot == s));
            assert(c.dir == +1);
        }
    }
    return ls;
}

// ---------------------------------------------------------------------------
// incremental updates

int LoopSet::delta_insert(const Graph& g, int e, double t, TransitionKind kind) const {
    const auto [x, y] = g.edge(e);
    bool on_x = false, on_y = false;
    const int sx = strand_at(x, t, &on_x);
    const int sy = strand_at(y, t, &on_y);
    if (on_x || on_y) throw ValidationError("insertion collides with an existing transition");
    const Strand& a = strands_[x][sx];
    const Strand& b = strands_[y][sy];
    if (a.loop != b.loop) return -1;  // any inter-loop transition merges
    if (a.dir == b.dir) return kind == TransitionKind::Cross ? +1 : 0;
    return kind == TransitionKind::Cross ? 0 : +1;
}

int LoopSet::delta_remove(const Graph& g, int e, double t) const {
    const auto [x, y] = g.edge(e);
    const int nx = find_node(x, t, e);
    const Node& nd = nodes_[x][nx];
    const Strand& x_below = strands_[x][slot_below(x, nx)];
    const Strand& x_above = strands_[x][slot_above(x, nx)];
    const int ny = find_node(y, t, e);
    const Strand& y_below = strands_[y][slot_below(y, ny)];
    const Strand& y_above = strands_[y][slot_above(y, ny)];
    // the transition pairs the four legs into two link chains
    std::int32_t la, lb;
    if (nd.kind == TransitionKind::Cross) {
        la = x_below.loop;  // = y_above's loop
        lb = y_below.loop;  // = x_above's loop
        assert(la == y_above.loop && lb == x_above.loop);
    } else {
        la = x_below.loop;  // = y_below's loop
        lb = x_above.loop;  // = y_above's loop
        assert(la == y_below.loop && lb == y_above.loop);
    }
    if (la != lb) return -1;
    return x_below.dir == x_above.dir ? +1 : 0;
}

int LoopSet::insert_node(int v, const Node& nd) {
    auto& nds = nodes_[v];
    auto& sts = strands_[v];
    const int k = static_cast<int>(nds.size());
    const int pos = static_cast<int>(
        std::lower_bound(nds.begin(), nds.end(), nd, node_less) - nds.begin());
    nds.insert(nds.begin() + pos, nd);
    if (k >= 1) {
        // split: the new strand copies the label of its cyclic predecessor
        sts.insert(sts.begin() + pos, Strand{});
        const Strand& src = sts[(pos - 1 + k + 1) % (k + 1)];
        sts[pos] = src;
        loops_[src.loop].strands += 1;
    }
    return pos;
}

void LoopSet::erase_node(int v, int ni) {
    auto& nds = nodes_[v];
    auto& sts = strands_[v];
    const int k = static_cast<int>(nds.size());
    nds.erase(nds.begin() + ni);
    if (k >= 2) {
        // strand above the node merges into the strand below, which keeps its label
        loops_[sts[ni].loop].strands -= 1;
        sts.erase(sts.begin() + ni);
    }
}

std::int64_t LoopSet::assign_walk(const Graph& g, Cursor c, std::int32_t label,
                                  int wall_edge, double wall_time) {
    std::int64_t visited = 0;
    while (true) {
        Strand& st = strands_[c.v][c.slot];
        if (st.loop != label) {
            loops_[st.loop].strands -= 1;
            loops_[label].strands += 1;
            st.loop = label;
        }
        st.dir = static_cast<std::int8_t>(c.dir);
        ++visited;
        const Node& exit = nodes_[c.v][exit_node(c.v, c.slot, c.dir)];
        if (exit.edge == wall_edge && exit.time == wall_time) return visited;
        c = step(g, c);
    }
}

void LoopSet::commit_insert(const Graph& g, int e, double t, TransitionKind kind) {
    const auto [x, y] = g.edge(e);
    bool on_x = false, on_y = false;
    const Strand sx = strands_[x][strand_at(x, t, &on_x)];
    const Strand sy = strands_[y][strand_at(y, t, &on_y)];
    assert(!on_x && !on_y);
    const int delta = delta_insert(g, e, t, kind);

    const Node nd{t, e, kind};
    const int px = insert_node(x, nd);
    const int py = insert_node(y, nd);
    ++transition_count_;

    const bool cross = kind == TransitionKind::Cross;
    if (delta == -1) {
        // merge: rebuild the smaller loop's side, walking away from the new
        // transition until it is reached again
        const bool take_y = loops_[sy.loop].strands <= loops_[sx.loop].strands;
        if (take_y) {
            // links: cross x_below->y_above, bar x_above<->y_above
            const int dir = cross ? sx.dir : -sx.dir;
            assign_walk(g, Cursor{y, slot_above(y, py), dir}, sx.loop, e, t);
            release_loop(sy.loop);
        } else {
            const int dir = cross ? sy.dir : -sy.dir;
            assign_walk(g, Cursor{x, slot_above(x, px), dir}, sy.loop, e, t);
            release_loop(sx.loop);
        }
        return;
    }

    if (delta == +1) {
        // split: the strands above and below the new node at x now lie on two
        // distinct loops; find the smaller by alternating walks
        Cursor c1{x, slot_above(x, px), sx.dir};
        Cursor c2{x, slot_below(x, px), -sx.dir};  // walk the loop backwards
        const Cursor s1 = c1, s2 = c2;
        std::vector<Point> trail1{{c1.v, c1.slot}}, trail2{{c2.v, c2.slot}};
        while (true) {
            c1 = step(g, c1);
            if (c1.v == s1.v && c1.slot == s1.slot) {
                const std::int32_t id = new_loop_id();
                for (const auto& p : trail1) {
                    Strand& st = strands_[p.vertex][p.slot];
                    loops_[st.loop].strands -= 1;
                    loops_[id].strands += 1;
                    st.loop = id;
                }
                return;
            }
            trail1.push_back({c1.v, c1.slot});
            c2 = step(g, c2);
            if (c2.v == s2.v && c2.slot == s2.slot) {
                const std::int32_t id = new_loop_id();
                for (const auto& p : trail2) {
                    Strand& st = strands_[p.vertex][p.slot];
                    loops_[st.loop].strands -= 1;
                    loops_[id].strands += 1;
                    st.loop = id;
                }
                return;
            }
            trail2.push_back({c2.v, c2.slot});
        }
    }

    // delta == 0: rewiring; the loop keeps its identity but one of the two
    // arcs between the new legs reverses direction. Flip the smaller arc.
    Cursor c1{x, slot_above(x, px), +1};    // motion away from the new node
    Cursor c2{x, slot_below(x, px), -1};
    std::vector<Point> trail1{{c1.v, c1.slot}}, trail2{{c2.v, c2.slot}};
    bool done1 = false, done2 = false;
    while (true) {
        {
            const Node& exit = nodes_[c1.v][exit_node(c1.v, c1.slot, c1.dir)];
            if (exit.edge == e && exit.time == t) done1 = true;
        }
        if (done1) break;
        c1 = step(g, c1);
        trail1.push_back({c1.v, c1.slot});
        {
            const Node& exit = nodes_[c2.v][exit_node(c2.v, c2.slot, c2.dir)];
            if (exit.edge == e && exit.time == t) done2 = true;
        }
        if (done2) break;
        c2 = step(g, c2);
        trail2.push_back({c2.v, c2.slot});
    }
    const auto& arc = done1 ? trail1 : trail2;
    for (const auto& p : arc) {
        Strand& st = strands_[p.vertex][p.slot];
        st.dir = static_cast<std::int8_t>(-st.dir);
    }
}

void LoopSet::commit_remove(const Graph& g, int e, double t) {
    const auto [x, y] = g.edge(e);
    const int nx = find_node(x, t, e);
    const int ny = find_node(y, t, e);
    const TransitionKind kind = nodes_[x][nx].kind;
    const bool cross = kind == TransitionKind::Cross;
    const Strand x_below = strands_[x][slot_below(x, nx)];
    const Strand x_above = strands_[x][slot_above(x, nx)];
    const Strand y_below = strands_[y][slot_below(y, ny)];
    const Strand y_above = strands_[y][slot_above(y, ny)];
    const int delta = delta_remove(g, e, t);

    // Records of pre-removal walks, with the per-vertex slot indices fixed up
    // after the node erasures. Entries landing on an erased slot are dropped:
    // the surviving merged strand keeps the label of the strand below.
    const int kx = static_cast<int>(nodes_[x].size());
    const int ky = static_cast<int>(nodes_[y].size());
    auto remap = [&](std::vector<Point>& pts) {
        std::vector<Point> out;
        out.reserve(pts.size());
        for (const auto& p : pts) {
            Point q = p;
            if (p.vertex == x && kx >= 2) {
                if (p.slot == nx) continue;
                if (p.slot > nx) --q.slot;
            }
            if (p.vertex == y && ky >= 2) {
                if (p.slot == ny) continue;
                if (p.slot > ny) --q.slot;
            }
            out.push_back(q);
        }
        return out;
    };

    if (delta == -1) {
        // merge: record the smaller loop, then relabel it onto the survivor.
        // Leg loops: cross pairs (x_below, y_above) vs (x_above, y_below),
        // double bar pairs (x_below, y_below) vs (x_above, y_above).
        const std::int32_t la = x_below.loop;
        const std::int32_t lb = x_above.loop;
        const bool take_b = loops_[lb].strands <= loops_[la].strands;
        const std::int32_t small = take_b ? lb : la;
        const std::int32_t big = take_b ? la : lb;
        Cursor c = take_b ? Cursor{x, slot_above(x, nx), x_above.dir}
                          : Cursor{x, slot_below(x, nx), x_below.dir};
        const Cursor start = c;
        std::vector<Point> trail;
        do {
            trail.push_back({c.v, c.slot});
            c = step(g, c);
        } while (!(c.v == start.v && c.slot == start.slot));
        // vertical continuity after removal: the merged strand is traversed
        // in one direction, so the relabeled side reverses iff the stored
        // directions at the junction disagree
        const bool flip = x_below.dir != x_above.dir;
        erase_node(x, nx);
        erase_node(y, ny);
        --transition_count_;
        auto fixed = remap(trail);
        for (const auto& p : fixed) {
            Strand& st = strands_[p.vertex][p.slot];
            if (st.loop != big) {
                loops_[st.loop].strands -= 1;
                loops_[big].strands += 1;
                st.loop = big;
            }
            if (flip) st.dir = static_cast<std::int8_t>(-st.dir);
        }
        release_loop(small);
        return;
    }

    if (delta == +1) {
        // split: after removal the merged strands at x and y lie on two
        // distinct loops; alternate closed walks to find the smaller.
        erase_node(x, nx);
        erase_node(y, ny);
        --transition_count_;
        const int kx2 = static_cast<int>(nodes_[x].size());
        const int ky2 = static_cast<int>(nodes_[y].size());
        const int sx2 = kx2 == 0 ? 0 : (nx == 0 ? kx2 - 1 : nx - 1);
        const int sy2 = ky2 == 0 ? 0 : (ny == 0 ? ky2 - 1 : ny - 1);
        auto closed_walk_step = [&](Cursor& c, const Cursor& start,
                                    std::vector<Point>& trail) -> bool {
            if (nodes_[c.v].empty()) return true;  // isolated full-circle strand
            c = step(g, c);
            if (c.v == start.v && c.slot == start.slot) return true;
            trail.push_back({c.v, c.slot});
            return false;
        };
        Cursor c1{x, sx2, strands_[x][sx2].dir};
        Cursor c2{y, sy2, strands_[y][sy2].dir};
        const Cursor s1 = c1, s2 = c2;
        std::vector<Point> trail1{{c1.v, c1.slot}}, trail2{{c2.v, c2.slot}};
        while (true) {
            if (closed_walk_step(c1, s1, trail1)) {
                const std::int32_t id = new_loop_id();
                for (const auto& p : trail1) {
                    Strand& st = strands_[p.vertex][p.slot];
                    loops_[st.loop].strands -= 1;
                    loops_[id].strands += 1;
                    st.loop = id;
                }
                return;
            }
            if (closed_walk_step(c2, s2, trail2)) {
                const std::int32_t id = new_loop_id();
                for (const auto& p : trail2) {
                    Strand& st = strands_[p.vertex][p.slot];
                    loops_[st.loop].strands -= 1;
                    loops_[id].strands += 1;
                    st.loop = id;
                }
                return;
            }
        }
    }

    // delta == 0: rewiring. Record both arcs between the legs (walls at the
    // transition being removed), flip the smaller one after the erasure.
    {
        Cursor c1{x, slot_above(x, nx), +1};  // motion away from the node
        Cursor c2{x, slot_below(x, nx), -1};
        std::vector<Point> trail1{{c1.v, c1.slot}}, trail2{{c2.v, c2.slot}};
        bool done1 = false, done2 = false;
        while (true) {
            {
                const Node& exit = nodes_[c1.v][exit_node(c1.v, c1.slot, c1.dir)];
                if (exit.edge == e && exit.time == t) done1 = true;
            }
            if (done1) break;
            c1 = step(g, c1);
            trail1.push_back({c1.v, c1.slot});
            {
                const Node& exit = nodes_[c2.v][exit_node(c2.v, c2.slot, c2.dir)];
                if (exit.edge == e && exit.time == t) done2 = true;
            }
            if (done2) break;
            c2 = step(g, c2);
            trail2.push_back({c2.v, c2.slot});
        }
        erase_node(x, nx);
        erase_node(y, ny);
        --transition_count_;
        auto arc = remap(done1 ? trail1 : trail2);
        for (const auto& p : arc) {
            Strand& st = strands_[p.vertex][p.slot];
            st.dir = static_cast<std::int8_t>(-st.dir);
        }
    }
}

// ---------------------------------------------------------------------------
// checks

bool LoopSet::consistent(const Graph& g, std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    std::vector<std::int64_t> counts(loops_.size(), 0);
    for (int v = 0; v < vertex_count(); ++v) {
        const int k = static_cast<int>(nodes_[v].size());
        if (static_cast<int>(strands_[v].size()) != std::max(1, k))
            return fail("strand/node size mismatch");
        for (int s = 0; s < strand_count(v); ++s) {
            const Strand& st = strands_[v][s];
            if (st.loop < 0 || st.loop >= static_cast<int>(loops_.size()) ||
                !loops_[st.loop].alive)
                return fail("strand references a dead loop");
            if (st.dir != 1 && st.dir != -1) return fail("bad direction");
            ++counts[st.loop];
        }
        for (int i = 0; i + 1 < k; ++i)
            if (!node_less(nodes_[v][i], nodes_[v][i + 1])) return fail("nodes out of order");
    }
    for (std::size_t i = 0; i < loops_.size(); ++i) {
        if (loops_[i].alive && counts[i] != loops_[i].strands)
            return fail("loop strand count mismatch");
        if (!loops_[i].alive && counts[i] != 0) return fail("dead loop has strands");
    }
    // every strand's walk successor carries the same loop and consistent direction
    for (int v = 0; v < vertex_count(); ++v) {
        if (nodes_[v].empty()) continue;
        for (int s = 0; s < strand_count(v); ++s) {
            const Strand& st = strands_[v][s];
            const Cursor next = step(g, Cursor{v, s, st.dir});
            const Strand& nx = strands_[next.v][next.slot];
            if (nx.loop != st.loop) return fail("walk leaves its loop");
            if (nx.dir != next.dir) return fail("walk direction mismatch");
        }
    }
    return true;
}

bool LoopSet::equivalent(const LoopSet& a, const LoopSet& b, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (a.vertex_count() != b.vertex_count()) return fail("vertex counts differ");
    if (a.loop_count() != b.loop_count()) return fail("loop counts differ");
    for (int v = 0; v < a.vertex_count(); ++v) {
        if (a.nodes_[v].size() != b.nodes_[v].size()) return fail("node counts differ");
        for (std::size_t i = 0; i < a.nodes_[v].size(); ++i) {
            const Node& na = a.nodes_[v][i];
            const Node& nb = b.nodes_[v][i];
            if (na.time != nb.time || na.edge != nb.edge || na.kind != nb.kind)
                return fail("transition structure differs");
        }
    }
    // bijection between loop ids, with a per-pair relative orientation
    std::vector<std::int32_t> a2b(a.loops_.size(), -1);
    std::vector<std::int8_t> sign(a.loops_.size(), 0);
    std::vector<char> b_used(b.loops_.size(), 0);
    for (int v = 0; v < a.vertex_count(); ++v) {
        for (int s = 0; s < a.strand_count(v); ++s) {
            const Strand& sa = a.strands_[v][s];
            const Strand& sb = b.strands_[v][s];
            if (a2b[sa.loop] == -1) {
                if (b_used[sb.loop]) return fail("loop map not injective");
                a2b[sa.loop] = sb.loop;
                b_used[sb.loop] = 1;
                sign[sa.loop] = static_cast<std::int8_t>(sa.dir * sb.dir);
            } else {
                if (a2b[sa.loop] != sb.loop) return fail("partition differs");
                if (sign[sa.loop] != sa.dir * sb.dir) return fail("directions inconsistent");
            }
        }
    }
    return true;
}

}  // namespace loopmc

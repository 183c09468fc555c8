#include "loopmc/loop_config.hpp"

#include <algorithm>
#include <cassert>

#include "loopmc/errors.hpp"
#include "json.hpp"

namespace loopmc {

LoopConfig::LoopConfig(ModelParams params, int edge_count) : params_(params) {
    params_.validate();
    edges_.resize(edge_count);
}

bool LoopConfig::has_time(int e, double t) const {
    const auto& ts = edges_[e].times;
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    return it != ts.end() && *it == t;
}

int LoopConfig::index_of(int e, double t) const {
    const auto& ts = edges_[e].times;
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.end() || *it != t) return -1;
    return static_cast<int>(it - ts.begin());
}

void LoopConfig::insert(int e, double t, TransitionKind k) {
    assert(t >= 0.0 && t < params_.beta);
    auto& el = edges_[e];
    const auto pos = std::lower_bound(el.times.begin(), el.times.end(), t) - el.times.begin();
    assert(pos == static_cast<long>(el.times.size()) || el.times[pos] != t);
    auto& reg = registry_[static_cast<int>(k)];
    el.times.insert(el.times.begin() + pos, t);
    el.kinds.insert(el.kinds.begin() + pos, k);
    el.kind_slot.insert(el.kind_slot.begin() + pos, static_cast<std::uint32_t>(reg.size()));
    reg.push_back({e, t});
    ++total_;
}

void LoopConfig::remove(int e, int index_in_edge) {
    auto& el = edges_[e];
    const TransitionKind k = el.kinds[index_in_edge];
    auto& reg = registry_[static_cast<int>(k)];
    const std::uint32_t slot = el.kind_slot[index_in_edge];
    // swap-pop the registry; redirect the moved entry's back-pointer
    reg[slot] = reg.back();
    reg.pop_back();
    if (slot < reg.size()) {
        const auto& moved = reg[slot];
        const int idx = index_of(moved.edge, moved.time);
        assert(idx >= 0);
        edges_[moved.edge].kind_slot[idx] = slot;
    }
    el.times.erase(el.times.begin() + index_in_edge);
    el.kinds.erase(el.kinds.begin() + index_in_edge);
    el.kind_slot.erase(el.kind_slot.begin() + index_in_edge);
    --total_;
}

Transition LoopConfig::kind_entry(TransitionKind k, std::size_t i) const {
    const auto& entry = registry_[static_cast<int>(k)][i];
    return {entry.edge, entry.time, k};
}

std::vector<Transition> LoopConfig::all_transitions() const {
    std::vector<Transition> out;
    out.reserve(total_);
    for (int e = 0; e < edge_count(); ++e) {
        const auto& el = edges_[e];
        for (std::size_t i = 0; i < el.times.size(); ++i)
            out.push_back({e, el.times[i], el.kinds[i]});
    }
    return out;
}

std::string LoopConfig::to_json(const Graph& g) const {
    nlohmann::json j;
    j["format"] = "loopmc-config";
    j["version"] = 1;
    j["beta"] = params_.beta;
    j["u"] = params_.u;
    j["theta"] = params_.theta;
    if (params_.spin) j["spin"] = *params_.spin;
    nlohmann::json gj;
    if (g.cube()) {
        gj["kind"] = "periodic_cubic";
        gj["side"] = g.cube()->side;
        gj["dim"] = g.cube()->dim;
    } else {
        gj["kind"] = "edge_list";
        gj["vertices"] = g.vertex_count();
        nlohmann::json ej = nlohmann::json::array();
        for (const auto& [a, b] : g.edges()) ej.push_back({a, b});
        gj["edges"] = ej;
    }
    j["graph"] = gj;
    nlohmann::json tr = nlohmann::json::array();
    for (const auto& t : all_transitions())
        tr.push_back({t.edge, t.time, t.kind == TransitionKind::Cross ? 0 : 1});
    j["transitions"] = tr;
    return j.dump();
}

LoopConfig LoopConfig::from_json(const std::string& text, const Graph& g) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "loopmc-config" || j.value("version", 0) != 1)
        throw ValidationError("unrecognized config dump format");
    ModelParams p;
    p.beta = j.at("beta").get<double>();
    p.u = j.at("u").get<double>();
    p.theta = j.at("theta").get<double>();
    if (j.contains("spin")) p.spin = j.at("spin").get<double>();
    LoopConfig cfg(p, g.edge_count());
    for (const auto& t : j.at("transitions")) {
        const int e = t.at(0).get<int>();
        if (e < 0 || e >= g.edge_count()) throw ValidationError("transition edge out of range");
        cfg.insert(e, t.at(1).get<double>(),
                   t.at(2).get<int>() == 0 ? TransitionKind::Cross : TransitionKind::DoubleBar);
    }
    return cfg;
}

LoopConfig sample_poisson(const ModelParams& params, const Graph& g, std::mt19937_64& rng) {
    LoopConfig cfg(params, g.edge_count());
    std::uniform_real_distribution<double> unif(0.0, params.beta);
    for (int e = 0; e < g.edge_count(); ++e) {
        for (TransitionKind kind : {TransitionKind::Cross, TransitionKind::DoubleBar}) {
            const double intensity = kind == TransitionKind::Cross ? params.u : 1.0 - params.u;
            if (intensity <= 0.0) continue;
            std::poisson_distribution<int> pois(intensity * params.beta);
            const int n = pois(rng);
            for (int i = 0; i < n; ++i) {
                double t = unif(rng);
                while (cfg.has_time(e, t)) t = unif(rng);  // measure-zero tie
                cfg.insert(e, t, kind);
            }
        }
    }
    return cfg;
}

}  // namespace loopmc

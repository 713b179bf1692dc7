#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tng/network.hpp"

namespace tng {

struct PathStep {
    int vertex = 0;
    Rat dwell;
};

/// A timed path in dwell form: a sequence of (vertex, dwell) steps followed
/// by the final vertex. The empty-step path is the trivial path that starts
/// and ends at `final_vertex` at time 0.
struct TimedPath {
    std::vector<PathStep> steps;
    int final_vertex = 0;

    int source() const { return steps.empty() ? final_vertex : steps.front().vertex; }

    Rat end_time() const {
        Rat t = 0;
        for (const PathStep& s : steps) t += s.dwell;
        return t;
    }

    /// Vertex occupied during the half-open interval starting at absolute
    /// time `t`, or nullopt when the path has already ended.
    std::optional<int> vertex_at(const Rat& t) const {
        Rat acc = 0;
        for (const PathStep& s : steps) {
            acc += s.dwell;
            if (t < acc) return s.vertex;
        }
        return std::nullopt;
    }

    bool is_integral() const {
        for (const PathStep& s : steps)
            if (!rat_is_integer(s.dwell)) return false;
        return true;
    }
};

struct Profile {
    std::vector<TimedPath> strategies;

    size_t size() const { return strategies.size(); }
};

/// Certificate for a legal path: the edges crossed, in order, plus the clock
/// valuation observed at each crossing.
struct LegalityWitness {
    std::vector<int> edge_indices;
    std::vector<ClockValuation> valuations;
};

struct IllegalPath {
    size_t step_index = 0;  // 1-based index of the failing crossing
    std::string reason;
};

using LegalityResult = std::variant<LegalityWitness, IllegalPath>;

inline bool is_legal(const LegalityResult& r) {
    return std::holds_alternative<LegalityWitness>(r);
}

namespace detail {

inline bool legal_search(const TimedNetwork& net, const TimedPath& path, size_t j,
                         const ClockValuation& kappa, LegalityWitness& wit,
                         IllegalPath& deepest) {
    const size_t n = path.steps.size();
    if (j == n) return true;
    const int src = path.steps[j].vertex;
    const int dst = (j + 1 < n) ? path.steps[j + 1].vertex : path.final_vertex;
    bool edge_exists = false;
    for (int e = 0; e < static_cast<int>(net.edges.size()); ++e) {
        const Edge& edge = net.edges[static_cast<size_t>(e)];
        if (edge.src != src || edge.dst != dst) continue;
        edge_exists = true;
        if (!eval_guard(edge.guard, kappa)) continue;
        wit.edge_indices.push_back(e);
        wit.valuations.push_back(kappa);
        const Rat& next_dwell = (j + 1 < n) ? path.steps[j + 1].dwell : Rat(0);
        if (legal_search(net, path, j + 1, advance(kappa, edge.resets, next_dwell), wit,
                         deepest))
            return true;
        wit.edge_indices.pop_back();
        wit.valuations.pop_back();
    }
    if (j + 1 >= deepest.step_index) {
        deepest.step_index = j + 1;
        deepest.reason = edge_exists
                             ? ("no guard-enabled edge " + net.vertex_names[src] + " -> " +
                                net.vertex_names[dst] + " at crossing " + std::to_string(j + 1))
                             : ("no edge " + net.vertex_names[src] + " -> " +
                                net.vertex_names[dst]);
    }
    return false;
}

}  // namespace detail

/// Checks legality conditions (initial valuation, resets, guard satisfaction
/// at every crossing). Among parallel edges the search backtracks in edge
/// order, so a legal path yields the lexicographically first edge sequence.
inline LegalityResult check_legal(const TimedNetwork& net, const TimedPath& path) {
    if (path.final_vertex < 0 || path.final_vertex >= net.vertex_count())
        return IllegalPath{0, "final vertex out of range"};
    for (const PathStep& s : path.steps) {
        if (s.vertex < 0 || s.vertex >= net.vertex_count())
            return IllegalPath{0, "vertex out of range"};
        if (s.dwell < 0) return IllegalPath{0, "negative dwell"};
    }
    if (path.steps.empty()) return LegalityWitness{};
    ClockValuation kappa(static_cast<size_t>(net.clock_count()), path.steps[0].dwell);
    LegalityWitness wit;
    IllegalPath deepest{0, "unreachable"};
    if (detail::legal_search(net, path, 0, kappa, wit, deepest)) return wit;
    return deepest;
}

}  // namespace tng

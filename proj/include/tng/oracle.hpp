#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "tng/game.hpp"
#include "tng/path.hpp"
#include "tng/periods.hpp"
#include "tng/pta.hpp"

namespace tng {

// Deliberately naive reference implementations. Everything here recomputes
// from first principles (path enumeration, uniform slicing, layered dynamic
// programming) so the main engines can be cross-checked against independent
// code paths.

struct EnumerationBudget {
    long horizon = 8;          // latest admissible end time
    int max_steps = 6;         // crossings per strategy
    size_t max_paths = 200'000;
};

namespace detail {

inline void enum_dfs(const TimedNetwork& net, int target, const EnumerationBudget& budget,
                     int at, std::vector<long>& clocks, long time,
                     std::vector<PathStep>& prefix, std::vector<TimedPath>& out) {
    if (at == target) {
        out.push_back(TimedPath{prefix, target});
        if (out.size() > budget.max_paths)
            throw BudgetError("path budget exhausted during strategy enumeration");
    }
    if (static_cast<int>(prefix.size()) >= budget.max_steps) return;
    for (long d = 0; time + d <= budget.horizon; ++d) {
        for (const Edge& e : net.edges) {
            if (e.src != at) continue;
            bool ok = true;
            for (const AtomicConstraint& a : e.guard.atoms) {
                const long v = clocks[static_cast<size_t>(a.clock)] + d;
                if ((a.op == CmpOp::Le && v > a.bound) ||
                    (a.op == CmpOp::Eq && v != a.bound) ||
                    (a.op == CmpOp::Ge && v < a.bound)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            std::vector<long> next = clocks;
            for (long& x : next) x += d;
            for (int c : e.resets) next[static_cast<size_t>(c)] = 0;
            prefix.push_back({at, Rat(d)});
            enum_dfs(net, target, budget, e.dst, next, time + d, prefix, out);
            prefix.pop_back();
        }
    }
}

inline bool path_less(const TimedPath& a, const TimedPath& b) {
    if (a.end_time() != b.end_time()) return a.end_time() < b.end_time();
    if (a.steps.size() != b.steps.size()) return a.steps.size() < b.steps.size();
    for (size_t i = 0; i < a.steps.size(); ++i) {
        if (a.steps[i].vertex != b.steps[i].vertex)
            return a.steps[i].vertex < b.steps[i].vertex;
        if (a.steps[i].dwell != b.steps[i].dwell) return a.steps[i].dwell < b.steps[i].dwell;
    }
    return false;
}

inline bool path_eq(const TimedPath& a, const TimedPath& b) {
    if (a.final_vertex != b.final_vertex || a.steps.size() != b.steps.size()) return false;
    for (size_t i = 0; i < a.steps.size(); ++i)
        if (a.steps[i].vertex != b.steps[i].vertex || a.steps[i].dwell != b.steps[i].dwell)
            return false;
    return true;
}

}  // namespace detail

/// Enumerates every integral legal strategy from `source` to `target` with
/// end time and step count within the budget, ordered by (end time, length,
/// lexicographic). Parallel edges yielding the same dwell sequence count
/// once. Throws BudgetError when the path cap is hit.
inline std::vector<TimedPath> enum_strategies(const TimedNetwork& net, int source,
                                              int target, const EnumerationBudget& budget) {
    std::vector<TimedPath> out;
    std::vector<long> clocks(static_cast<size_t>(net.clock_count()), 0);
    std::vector<PathStep> prefix;
    detail::enum_dfs(net, target, budget, source, clocks, 0, prefix, out);
    std::sort(out.begin(), out.end(), detail::path_less);
    out.erase(std::unique(out.begin(), out.end(), detail::path_eq), out.end());
    return out;
}

struct OracleBr {
    Rat best_cost;
    TimedPath best;
    size_t candidates = 0;
};

/// Brute-force best response: tries every enumerated strategy of the player
/// and evaluates the full profile cost each time.
inline OracleBr oracle_br(const Tng& game, const std::vector<TimedPath>& others,
                          int player, const EnumerationBudget& budget) {
    std::vector<TimedPath> mine =
        enum_strategies(game.network, game.objectives[static_cast<size_t>(player)].source,
                        game.objectives[static_cast<size_t>(player)].target, budget);
    if (mine.empty())
        throw ModelError("oracle best response: no strategy within the budget");
    OracleBr out;
    out.candidates = mine.size();
    bool first = true;
    for (const TimedPath& cand : mine) {
        Profile full;
        for (size_t i = 0, j = 0; i < others.size() + 1; ++i)
            full.strategies.push_back(static_cast<int>(i) == player ? cand : others[j++]);
        const Rat c =
            cost_of(game, full).per_player.at(static_cast<size_t>(player));
        if (first || c < out.best_cost) {
            out.best_cost = c;
            out.best = cand;
            first = false;
        }
    }
    return out;
}

struct OracleSo {
    Rat best_cost;
    Profile best;
    size_t candidates = 0;
};

/// Brute-force social optimum over the cartesian product of the players'
/// enumerated strategies.
inline OracleSo oracle_so(const Tng& game, const EnumerationBudget& budget) {
    std::vector<std::vector<TimedPath>> choices;
    size_t product = 1;
    for (const Objective& o : game.objectives) {
        choices.push_back(enum_strategies(game.network, o.source, o.target, budget));
        if (choices.back().empty())
            throw ModelError("oracle social optimum: a player has no strategy within the "
                             "budget");
        product *= choices.back().size();
        if (product > budget.max_paths)
            throw BudgetError("profile budget exhausted during the social optimum oracle");
    }
    OracleSo out;
    out.candidates = product;
    std::vector<size_t> pick(choices.size(), 0);
    bool first = true;
    while (true) {
        Profile profile;
        for (size_t i = 0; i < choices.size(); ++i)
            profile.strategies.push_back(choices[i][pick[i]]);
        const Rat total = cost_of(game, profile).total;
        if (first || total < out.best_cost) {
            out.best_cost = total;
            out.best = profile;
            first = false;
        }
        size_t pos = 0;
        while (pos < pick.size() && ++pick[pos] == choices[pos].size()) pick[pos++] = 0;
        if (pos == pick.size()) break;
    }
    return out;
}

/// Recomputes profile costs by uniform slicing at the finest granularity of
/// the profile's crossing times, bypassing the period decomposition.
inline ProfileCosts slice_cost(const Tng& game, const Profile& profile) {
    std::vector<Rat> cuts;
    Rat t_max = 0;
    for (const TimedPath& p : profile.strategies) {
        Rat acc = 0;
        for (const PathStep& s : p.steps) {
            acc += s.dwell;
            cuts.push_back(acc);
        }
        t_max = std::max(t_max, acc);
    }
    const BigInt scale = denominator_lcm(cuts);
    const Rat slice = Rat(1) / Rat(scale);
    ProfileCosts costs;
    costs.per_player.assign(profile.size(), Rat(0));
    costs.total = 0;
    for (Rat t = 0; t < t_max; t += slice) {
        std::vector<int> load(static_cast<size_t>(game.network.vertex_count()), 0);
        std::vector<std::optional<int>> where(profile.size());
        for (size_t i = 0; i < profile.size(); ++i) {
            where[i] = profile.strategies[i].vertex_at(t);
            if (where[i]) load[static_cast<size_t>(*where[i])] += 1;
        }
        for (size_t i = 0; i < profile.size(); ++i) {
            if (!where[i]) continue;
            costs.per_player[i] +=
                game.latency[static_cast<size_t>(*where[i])].eval(
                    load[static_cast<size_t>(*where[i])]) *
                slice;
        }
    }
    for (const Rat& c : costs.per_player) costs.total += c;
    return costs;
}

/// Layered dynamic program over half-integer time steps: an independent
/// optimum for priced reachability. Clock values are doubled and capped just
/// above the largest guard constant. Exploring the half grid up to `horizon`
/// gives a lower bound on the integral optimum; agreement certifies both the
/// search engine and the integrality of optimal runs.
inline std::optional<Rat> half_grid_optimum(const Pta& pta, int source, int target,
                                            long horizon) {
    const TimedNetwork& net = pta.network;
    const long chi = max_constant(net);
    const long cap = 2 * chi + 1;  // doubled values; cap means "> chi"
    const int cc = net.clock_count();

    using Key = std::vector<long>;  // vertex followed by doubled clock values
    auto guard_ok = [&](const Guard& g, const Key& key) {
        for (const AtomicConstraint& a : g.atoms) {
            const long v = key[static_cast<size_t>(a.clock) + 1];
            if ((a.op == CmpOp::Le && v > 2 * a.bound) ||
                (a.op == CmpOp::Eq && v != 2 * a.bound) ||
                (a.op == CmpOp::Ge && v < 2 * a.bound))
                return false;
        }
        return true;
    };

    std::map<Key, Rat> layer;
    Key start(static_cast<size_t>(cc) + 1, 0);
    start[0] = source;
    layer[start] = 0;

    std::optional<Rat> best;
    auto note_target = [&](const std::map<Key, Rat>& states) {
        for (const auto& [key, cost] : states)
            if (key[0] == target && (!best || cost < *best)) best = cost;
    };

    for (long half = 0; half <= 2 * horizon; ++half) {
        // Close the layer under instantaneous edge crossings.
        std::vector<Key> work;
        for (const auto& [key, cost] : layer) work.push_back(key);
        while (!work.empty()) {
            Key key = work.back();
            work.pop_back();
            const Rat cost = layer[key];
            for (const Edge& e : net.edges) {
                if (e.src != key[0] || !guard_ok(e.guard, key)) continue;
                Key next = key;
                next[0] = e.dst;
                for (int c : e.resets) next[static_cast<size_t>(c) + 1] = 0;
                auto it = layer.find(next);
                if (it == layer.end() || cost < it->second) {
                    layer[next] = cost;
                    work.push_back(next);
                }
            }
        }
        note_target(layer);
        if (half == 2 * horizon) break;
        // Advance every state by half a time unit.
        std::map<Key, Rat> advanced;
        for (const auto& [key, cost] : layer) {
            Key next = key;
            for (int c = 0; c < cc; ++c)
                next[static_cast<size_t>(c) + 1] =
                    std::min(next[static_cast<size_t>(c) + 1] + 1, cap);
            const Rat moved =
                cost + pta.rates[static_cast<size_t>(key[0])] / 2;
            auto it = advanced.find(next);
            if (it == advanced.end() || moved < it->second) advanced[next] = moved;
        }
        layer = std::move(advanced);
    }
    return best;
}

}  // namespace tng

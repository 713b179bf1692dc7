#pragma once

#include <random>
#include <vector>

#include "tng/equilibria.hpp"
#include "tng/io.hpp"
#include "tng/oracle.hpp"

namespace tng::testing {

struct GenOptions {
    int min_players = 2;
    int max_players = 2;
    int max_vertices = 4;
    int max_clocks = 2;
    int family = -1;          // -1 mixed, else LatencyFunction::Kind
    bool allow_self_loops = false;
    bool integer_latencies = false;
    long horizon = 6;
    int max_steps = 4;
    size_t max_paths = 4000;
    size_t max_strategies = 400;  // per player, else regenerate
};

struct GeneratedGame {
    Tng game;
    std::vector<std::vector<TimedPath>> strategies;  // per player, within budget
    EnumerationBudget budget;
};

inline LatencyFunction random_latency(std::mt19937& rng, const GenOptions& opt, int k) {
    std::uniform_int_distribution<int> kind_pick(0, 2);
    std::uniform_int_distribution<long> num(0, 4);
    std::uniform_int_distribution<long> den(1, opt.integer_latencies ? 1 : 2);
    const int kind = opt.family >= 0 ? opt.family : kind_pick(rng);
    switch (kind) {
        case 0: return LatencyFunction::cost_sharing(make_rat(num(rng), den(rng)));
        case 1: {
            std::vector<Rat> table;
            Rat cur = make_rat(num(rng), den(rng));
            for (int l = 0; l < k; ++l) {
                table.push_back(cur);
                cur += make_rat(num(rng), den(rng));
            }
            return LatencyFunction::congestion(std::move(table));
        }
        default: return LatencyFunction::affine(make_rat(num(rng), den(rng)), make_rat(num(rng), den(rng)));
    }
}

inline Guard random_guard(std::mt19937& rng, int clocks) {
    std::uniform_int_distribution<int> shape(0, 4);
    std::uniform_int_distribution<int> clock(0, clocks - 1);
    std::uniform_int_distribution<long> bound(0, 3);
    Guard g;
    const int c = clock(rng);
    switch (shape(rng)) {
        case 0: break;  // true
        case 1: g.atoms.push_back({c, CmpOp::Eq, bound(rng)}); break;
        case 2: g.atoms.push_back({c, CmpOp::Ge, bound(rng)}); break;
        case 3: g.atoms.push_back({c, CmpOp::Le, bound(rng)}); break;
        default: {
            long a = bound(rng), b = bound(rng);
            if (a > b) std::swap(a, b);
            g.atoms.push_back({c, CmpOp::Ge, a});
            g.atoms.push_back({c, CmpOp::Le, b});
            break;
        }
    }
    return g;
}

/// Draws small playable games: every player is guaranteed at least one (and
/// at most max_strategies) integral strategies within the budget.
inline GeneratedGame random_game(std::mt19937& rng, const GenOptions& opt = {}) {
    for (int attempt = 0; attempt < 10'000; ++attempt) {
        Tng game;
        std::uniform_int_distribution<int> nv(2, opt.max_vertices);
        std::uniform_int_distribution<int> nc(1, opt.max_clocks);
        std::uniform_int_distribution<int> nk(opt.min_players, opt.max_players);
        const int v = nv(rng);
        const int c = nc(rng);
        const int k = nk(rng);
        for (int i = 0; i < v; ++i) game.network.vertex_names.push_back("n" + std::to_string(i));
        for (int i = 0; i < c; ++i) game.network.clock_names.push_back("c" + std::to_string(i));
        std::uniform_int_distribution<int> ne(v, v + 3);
        std::uniform_int_distribution<int> pick(0, v - 1);
        std::bernoulli_distribution reset(0.4);
        const int edges = ne(rng);
        for (int e = 0; e < edges; ++e) {
            Edge edge;
            edge.src = pick(rng);
            edge.dst = pick(rng);
            if (!opt.allow_self_loops && edge.dst == edge.src) edge.dst = (edge.src + 1) % v;
            edge.guard = random_guard(rng, c);
            for (int x = 0; x < c; ++x)
                if (reset(rng)) edge.resets.push_back(x);
            game.network.edges.push_back(std::move(edge));
        }
        for (int i = 0; i < v; ++i) game.latency.push_back(random_latency(rng, opt, k));
        game.player_count = k;
        for (int i = 0; i < k; ++i) game.objectives.push_back({pick(rng), pick(rng)});

        GeneratedGame out;
        out.budget = {opt.horizon, opt.max_steps, opt.max_paths};
        bool ok = true;
        try {
            validate_game(game);
            for (const Objective& o : game.objectives) {
                auto strategies =
                    enum_strategies(game.network, o.source, o.target, out.budget);
                if (strategies.empty() || strategies.size() > opt.max_strategies) {
                    ok = false;
                    break;
                }
                out.strategies.push_back(std::move(strategies));
            }
        } catch (const ModelError&) {
            ok = false;
        } catch (const BudgetError&) {
            ok = false;
        }
        if (!ok) continue;
        out.game = std::move(game);
        return out;
    }
    throw std::runtime_error("random game generation failed to converge");
}

inline Profile random_profile(std::mt19937& rng, const GeneratedGame& gg) {
    Profile p;
    for (const auto& options : gg.strategies) {
        std::uniform_int_distribution<size_t> pick(0, options.size() - 1);
        p.strategies.push_back(options[pick(rng)]);
    }
    return p;
}

/// Random legal walk with rational dwells through a guard-free network.
inline TimedPath random_walk(std::mt19937& rng, const TimedNetwork& net, int source) {
    std::uniform_int_distribution<int> len(0, 4);
    std::uniform_int_distribution<long> num(0, 5);
    std::uniform_int_distribution<long> den(1, 3);
    TimedPath path;
    int at = source;
    const int steps = len(rng);
    for (int s = 0; s < steps; ++s) {
        std::vector<int> out = net.out_edges(at);
        if (out.empty()) break;
        std::uniform_int_distribution<size_t> pick(0, out.size() - 1);
        const Edge& e = net.edges[static_cast<size_t>(out[pick(rng)])];
        path.steps.push_back({at, make_rat(num(rng), den(rng))});
        at = e.dst;
    }
    path.final_vertex = at;
    return path;
}

/// Guard-free game plus a random non-integral legal path tuple, used by the
/// rational-dwell potential checks.
inline std::pair<GeneratedGame, Profile> random_rational_setup(std::mt19937& rng) {
    GenOptions opt;
    opt.max_clocks = 1;
    GeneratedGame gg = random_game(rng, opt);
    for (Edge& e : gg.game.network.edges) e.guard.atoms.clear();  // all guards true
    Profile p;
    for (int i = 0; i < gg.game.player_count; ++i)
        p.strategies.push_back(
            random_walk(rng, gg.game.network, gg.game.objectives[static_cast<size_t>(i)].source));
    return {std::move(gg), std::move(p)};
}

}  // namespace tng::testing

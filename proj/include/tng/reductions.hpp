#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tng/game.hpp"
#include "tng/path.hpp"
#include "tng/periods.hpp"
#include "tng/pta.hpp"

namespace tng {

// ---------------------------------------------------------------------------
// Best response reduction
// ---------------------------------------------------------------------------

/// One-player PTA for the best response of a player against fixed integral
/// strategies Q of the other players. The network is layered into one copy
/// per period of Q's decomposition plus one unbounded copy for the time
/// after every other player has arrived. A fresh global clock g (never
/// reset) drives the copy switches:
///   - internal edges replicate the original edges inside each copy,
///   - external edges (v, j) -> (v, j+1) carry the guard g == sup(period j),
///   - target edges (u, j) -> u* carry g <= sup(period j) (last copy:
///     g >= t_max, or true when Q is empty).
/// Rates in copy j are ell_v(load_Q(v, j) + 1); in the last copy ell_v(1).
struct BrConstruction {
    Pta pta;
    int source = 0;
    int target = 0;   // the fresh target vertex u*
    int copies = 0;   // bounded copies plus the final unbounded copy
    int base_vertices = 0;
    int global_clock = 0;
    std::vector<long> copy_sup;  // sup of each bounded period

    enum class EdgeKind { Internal, External, Target };
    std::vector<EdgeKind> edge_kind;  // indexed like pta.network.edges
    std::vector<int> edge_base;       // Internal: original edge index, else -1

    int vertex_id(int base, int copy) const { return copy * base_vertices + base; }
    int base_of(int vertex) const { return vertex % base_vertices; }
};

inline BrConstruction br_pta(const Tng& game, const std::vector<TimedPath>& others,
                             int player) {
    if (player < 0 || player >= game.player_count)
        throw ModelError("best response: player index out of range");
    if (others.size() + 1 != static_cast<size_t>(game.player_count))
        throw ModelError("best response: expected one strategy per other player");
    for (const TimedPath& q : others) {
        if (!q.is_integral())
            throw ModelError("best response: other players' strategies must be integral");
        if (!is_legal(check_legal(game.network, q)))
            throw ModelError("best response: other players' strategies must be legal");
    }

    Profile rest{others};
    const PeriodDecomposition dec = decompose(rest, game.network.vertex_count());
    const int m = static_cast<int>(dec.periods.size());
    const TimedNetwork& base = game.network;
    const int nb = base.vertex_count();

    BrConstruction br;
    br.copies = m + 1;
    br.base_vertices = nb;
    br.source = game.objectives[player].source;
    br.target = br.copies * nb;  // fresh u*
    br.global_clock = base.clock_count();
    for (const Period& p : dec.periods) br.copy_sup.push_back(rat_to_long(p.end));

    TimedNetwork& net = br.pta.network;
    net.clock_names = base.clock_names;
    net.clock_names.push_back("@g");
    for (int j = 0; j < br.copies; ++j)
        for (int v = 0; v < nb; ++v)
            net.vertex_names.push_back(base.vertex_names[v] + "#" + std::to_string(j));
    net.vertex_names.push_back("@target");

    br.pta.rates.assign(static_cast<size_t>(br.copies) * nb + 1, Rat(0));
    for (int j = 0; j < br.copies; ++j)
        for (int v = 0; v < nb; ++v) {
            const int load = (j < m) ? dec.load_at(static_cast<size_t>(j), v) : 0;
            br.pta.rates[static_cast<size_t>(br.vertex_id(v, j))] =
                game.latency[static_cast<size_t>(v)].eval(load + 1);
        }

    // Internal edges, copy-major, preserving the original edge order.
    for (int j = 0; j < br.copies; ++j)
        for (int e = 0; e < static_cast<int>(base.edges.size()); ++e) {
            Edge copy = base.edges[static_cast<size_t>(e)];
            copy.src = br.vertex_id(copy.src, j);
            copy.dst = br.vertex_id(copy.dst, j);
            net.edges.push_back(copy);
            br.edge_kind.push_back(BrConstruction::EdgeKind::Internal);
            br.edge_base.push_back(e);
        }
    // External edges: cross to the next copy exactly at the period boundary.
    for (int j = 0; j + 1 < br.copies; ++j)
        for (int v = 0; v < nb; ++v) {
            Edge e;
            e.src = br.vertex_id(v, j);
            e.dst = br.vertex_id(v, j + 1);
            e.guard.atoms.push_back({br.global_clock, CmpOp::Eq, br.copy_sup[j]});
            net.edges.push_back(e);
            br.edge_kind.push_back(BrConstruction::EdgeKind::External);
            br.edge_base.push_back(-1);
        }
    // Target edges from the player's target vertex in every copy.
    const int u = game.objectives[player].target;
    for (int j = 0; j < br.copies; ++j) {
        Edge e;
        e.src = br.vertex_id(u, j);
        e.dst = br.target;
        if (j < m)
            e.guard.atoms.push_back({br.global_clock, CmpOp::Le, br.copy_sup[j]});
        else if (m > 0)
            e.guard.atoms.push_back({br.global_clock, CmpOp::Ge, br.copy_sup[m - 1]});
        net.edges.push_back(e);
        br.edge_kind.push_back(BrConstruction::EdgeKind::Target);
        br.edge_base.push_back(-1);
    }
    return br;
}

/// Maps a cost-optimal witness of the best response PTA back to a strategy
/// of the original game. External hops merge into the surrounding dwell;
/// internal edges become the strategy's crossings.
inline TimedPath strategy_from_path(const Tng& game, const BrConstruction& br,
                                    const PricedPath& witness) {
    TimedPath out;
    Rat acc = 0;
    int at = br.base_of(br.source);
    bool done = false;
    for (size_t j = 0; j < witness.edge_indices.size(); ++j) {
        if (done) throw ModelError("malformed witness: continues past the target");
        acc += witness.path.steps.at(j).dwell;
        const int e = witness.edge_indices[j];
        switch (br.edge_kind.at(static_cast<size_t>(e))) {
            case BrConstruction::EdgeKind::Internal: {
                const Edge& orig =
                    game.network.edges[static_cast<size_t>(br.edge_base[static_cast<size_t>(e)])];
                out.steps.push_back({at, acc});
                acc = 0;
                at = orig.dst;
                break;
            }
            case BrConstruction::EdgeKind::External:
                break;  // same base vertex, keep accumulating
            case BrConstruction::EdgeKind::Target:
                if (acc != 0)
                    throw ModelError("malformed witness: dwells at the target vertex");
                done = true;
                break;
        }
    }
    if (!done) throw ModelError("malformed witness: does not reach the target");
    out.final_vertex = at;
    return out;
}

// ---------------------------------------------------------------------------
// Self-loop elimination
// ---------------------------------------------------------------------------

/// Self-loops are split before the product construction: each loop edge
/// (v, g, R, v) becomes (v, g, R + {x}, v') and (v', x == 0, {}, v) with a
/// fresh zero-latency vertex v' and a fresh clock x, preserving costs (the
/// detour takes zero time).
struct LoopFree {
    Tng game;
    std::vector<int> injected_from;  // per vertex: original vertex, or -1
};

inline LoopFree eliminate_self_loops(const Tng& game) {
    LoopFree out;
    out.game = game;
    out.injected_from.assign(static_cast<size_t>(game.network.vertex_count()), -1);
    TimedNetwork& net = out.game.network;
    std::vector<Edge> rebuilt;
    std::vector<Edge> returns;
    for (const Edge& e : net.edges) {
        if (e.src != e.dst) {
            rebuilt.push_back(e);
            continue;
        }
        const int fresh_clock = net.clock_count();
        net.clock_names.push_back("@loop" + std::to_string(fresh_clock));
        const int fresh_vertex = net.vertex_count();
        net.vertex_names.push_back(net.vertex_names[static_cast<size_t>(e.src)] + "'");
        out.injected_from.push_back(e.src);
        out.game.latency.push_back(LatencyFunction::zero());

        Edge enter = e;
        enter.dst = fresh_vertex;
        enter.resets.push_back(fresh_clock);  // fresh clock id is largest, stays sorted
        rebuilt.push_back(enter);

        Edge back;
        back.src = fresh_vertex;
        back.dst = e.src;
        back.guard.atoms.push_back({fresh_clock, CmpOp::Eq, 0});
        returns.push_back(back);
    }
    rebuilt.insert(rebuilt.end(), returns.begin(), returns.end());
    net.edges = std::move(rebuilt);
    return out;
}

/// Collapses the zero-time detours through injected loop vertices, mapping a
/// path of the loop-free game back to the original game.
inline TimedPath contract_injected(const std::vector<int>& injected_from, TimedPath path) {
    TimedPath out;
    for (const PathStep& s : path.steps) {
        const int orig = injected_from.at(static_cast<size_t>(s.vertex));
        if (orig >= 0) {
            if (s.dwell != 0)
                throw ModelError("malformed witness: dwells at an injected loop vertex");
            continue;  // v -> v' -> v becomes the original self-loop crossing
        }
        out.steps.push_back(s);
    }
    const int fin = injected_from.at(static_cast<size_t>(path.final_vertex));
    out.final_vertex = fin >= 0 ? fin : path.final_vertex;
    return out;
}

// ---------------------------------------------------------------------------
// Social optimum reduction
// ---------------------------------------------------------------------------

/// Product PTA over k copies of a loop-free network. Every coordinate owns a
/// private copy of the clocks; a product edge moves any non-empty subset of
/// coordinates simultaneously along enabled edges. The price rate of a
/// product vertex is sum over occupied vertices of load * ell_v(load).
/// One zero-rate sink per distinct target vertex is appended so that the
/// product target is the tuple of sinks: parked players cost nothing.
struct SoConstruction {
    Pta pta;
    int source = 0;
    int target = 0;
    int players = 0;
    int base_vertices = 0;                 // including appended sinks
    std::vector<int> sink_of;              // per base vertex: its sink id or -1
    std::vector<bool> is_sink;             // per base vertex
    std::vector<std::vector<int>> coords;  // per product vertex: base vertices
    std::vector<std::vector<int>> moves;   // per product edge: base edge per coord, -1 stay
};

struct SoLimits {
    size_t max_product_states = 10'000'000;
};

inline SoConstruction so_pta(const Tng& game, const SoLimits& limits = {}) {
    const TimedNetwork& base = game.network;
    if (base.has_self_loop())
        throw ModelError("social optimum product requires a loop-free network");
    const int k = game.player_count;
    const int nc = base.clock_count();

    SoConstruction so;
    so.players = k;

    // Extend the base with one sink per distinct target vertex.
    TimedNetwork ext = base;
    std::vector<LatencyFunction> ext_latency = game.latency;
    so.sink_of.assign(static_cast<size_t>(base.vertex_count()), -1);
    for (const Objective& o : game.objectives) {
        if (so.sink_of[static_cast<size_t>(o.target)] >= 0) continue;
        const int sink = ext.vertex_count();
        ext.vertex_names.push_back(base.vertex_names[static_cast<size_t>(o.target)] + "@sink");
        ext_latency.push_back(LatencyFunction::zero());
        so.sink_of[static_cast<size_t>(o.target)] = sink;
        Edge park;
        park.src = o.target;
        park.dst = sink;
        ext.edges.push_back(park);
        so.sink_of.push_back(-1);
    }
    so.base_vertices = ext.vertex_count();
    so.is_sink.assign(static_cast<size_t>(so.base_vertices), false);
    for (int s : so.sink_of)
        if (s >= 0) so.is_sink[static_cast<size_t>(s)] = true;

    TimedNetwork& net = so.pta.network;
    for (int i = 0; i < k; ++i)
        for (int c = 0; c < nc; ++c)
            net.clock_names.push_back(base.clock_names[static_cast<size_t>(c)] + "@" +
                                      std::to_string(i + 1));

    std::vector<std::vector<int>> out_of(static_cast<size_t>(ext.vertex_count()));
    for (int v = 0; v < ext.vertex_count(); ++v) out_of[static_cast<size_t>(v)] = ext.out_edges(v);

    auto product_name = [&](const std::vector<int>& cs) {
        std::string name = "<";
        for (size_t i = 0; i < cs.size(); ++i) {
            if (i) name += ",";
            name += ext.vertex_names[static_cast<size_t>(cs[i])];
        }
        return name + ">";
    };
    auto product_rate = [&](const std::vector<int>& cs) {
        std::vector<int> load(static_cast<size_t>(ext.vertex_count()), 0);
        for (int v : cs) load[static_cast<size_t>(v)] += 1;
        Rat rate = 0;
        for (int v = 0; v < ext.vertex_count(); ++v) {
            const int l = load[static_cast<size_t>(v)];
            if (l > 0) rate += Rat(l) * ext_latency[static_cast<size_t>(v)].eval(l);
        }
        return rate;
    };

    std::map<std::vector<int>, int> index;
    auto intern = [&](const std::vector<int>& cs) {
        auto it = index.find(cs);
        if (it != index.end()) return it->second;
        if (index.size() >= limits.max_product_states)
            throw BudgetError("product state budget exhausted during the social optimum "
                              "construction");
        const int id = static_cast<int>(so.coords.size());
        index.emplace(cs, id);
        so.coords.push_back(cs);
        net.vertex_names.push_back(product_name(cs));
        so.pta.rates.push_back(product_rate(cs));
        return id;
    };

    std::vector<int> start, goal;
    for (const Objective& o : game.objectives) {
        start.push_back(o.source);
        goal.push_back(so.sink_of[static_cast<size_t>(o.target)]);
    }
    so.source = intern(start);

    // Breadth-first closure over guard-agnostic reachability; edge guards
    // are kept, so this explores a superset of the truly reachable part.
    for (int p = 0; p < static_cast<int>(so.coords.size()); ++p) {
        const std::vector<int> cs = so.coords[static_cast<size_t>(p)];
        // Enumerate per-coordinate choices in mixed radix: 0 = stay,
        // 1 + j = take the j-th outgoing edge of that coordinate.
        std::vector<size_t> choice(static_cast<size_t>(k), 0);
        while (true) {
            size_t pos = 0;
            while (pos < static_cast<size_t>(k)) {
                const size_t options =
                    1 + out_of[static_cast<size_t>(cs[pos])].size();
                if (++choice[pos] < options) break;
                choice[pos] = 0;
                ++pos;
            }
            if (pos == static_cast<size_t>(k)) break;

            Edge pe;
            pe.src = p;
            std::vector<int> move(static_cast<size_t>(k), -1);
            std::vector<int> next = cs;
            for (size_t i = 0; i < static_cast<size_t>(k); ++i) {
                if (choice[i] == 0) continue;
                const int e = out_of[static_cast<size_t>(cs[i])][choice[i] - 1];
                const Edge& be = ext.edges[static_cast<size_t>(e)];
                move[i] = e;
                next[i] = be.dst;
                for (const AtomicConstraint& a : be.guard.atoms)
                    pe.guard.atoms.push_back(
                        {static_cast<int>(i) * nc + a.clock, a.op, a.bound});
                for (int c : be.resets) pe.resets.push_back(static_cast<int>(i) * nc + c);
            }
            std::sort(pe.resets.begin(), pe.resets.end());
            pe.dst = intern(next);
            if (static_cast<size_t>(net.edges.size()) >= 32 * limits.max_product_states)
                throw BudgetError("product edge budget exhausted during the social "
                                  "optimum construction");
            net.edges.push_back(pe);
            so.moves.push_back(move);
        }
    }
    so.target = intern(goal);
    return so;
}

/// Maps a cost-optimal witness of the product PTA back to a profile: each
/// coordinate's moves become that player's crossings; the final hop into her
/// sink is dropped, so the strategy ends at the player's real target. Any
/// dwell at the target before parking is discarded; this never changes the
/// price of an optimal witness, since parking earlier is always enabled.
inline Profile profile_from_path(const SoConstruction& so, const PricedPath& witness) {
    Profile profile;
    profile.strategies.resize(static_cast<size_t>(so.players));
    std::vector<Rat> acc(static_cast<size_t>(so.players), Rat(0));
    std::vector<int> at = so.coords.at(static_cast<size_t>(so.source));
    std::vector<bool> parked(static_cast<size_t>(so.players), false);
    for (size_t j = 0; j < witness.edge_indices.size(); ++j) {
        const int pe = witness.edge_indices[j];
        const std::vector<int>& move = so.moves.at(static_cast<size_t>(pe));
        const std::vector<int>& next = so.coords.at(
            static_cast<size_t>(so.pta.network.edges.at(static_cast<size_t>(pe)).dst));
        for (int i = 0; i < so.players; ++i) {
            const auto ii = static_cast<size_t>(i);
            acc[ii] += witness.path.steps.at(j).dwell;
            if (move[ii] < 0) continue;
            if (parked[ii]) throw ModelError("malformed witness: player moves after parking");
            if (so.is_sink.at(static_cast<size_t>(next[ii]))) {
                profile.strategies[ii].final_vertex = at[ii];
                parked[ii] = true;
            } else {
                profile.strategies[ii].steps.push_back({at[ii], acc[ii]});
            }
            acc[ii] = 0;
        }
        at = next;
    }
    for (bool p : parked)
        if (!p) throw ModelError("malformed witness: player never reaches her sink");
    return profile;
}

}  // namespace tng

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tng/periods.hpp"
#include "tng/reductions.hpp"

namespace tng {

struct BrResult {
    Rat current_cost;
    Rat best_cost;
    std::optional<TimedPath> deviation;  // empty when already best

    bool improved() const { return deviation.has_value(); }
};

/// Exact best response of `player` against the rest of an integral profile,
/// via the layered PTA reduction. Returns a strict improvement when one
/// exists, otherwise reports that the current strategy is already optimal.
inline BrResult best_response(const Tng& game, const Profile& profile, int player,
                              const SearchLimits& limits = {}) {
    std::vector<TimedPath> others;
    for (size_t i = 0; i < profile.size(); ++i)
        if (static_cast<int>(i) != player) others.push_back(profile.strategies[i]);
    const BrConstruction br = br_pta(game, others, player);
    const std::optional<PricedPath> witness = cor(br.pta, br.source, br.target, limits);
    if (!witness)
        throw ModelError("best response: target unreachable, the player has no strategy");

    BrResult out;
    out.current_cost = cost_of(game, profile).per_player.at(static_cast<size_t>(player));
    out.best_cost = witness->price;
    if (out.best_cost < out.current_cost)
        out.deviation = strategy_from_path(game, br, *witness);
    return out;
}

struct NeCheck {
    bool is_equilibrium = true;
    int player = -1;                     // first improving player, if any
    std::optional<TimedPath> deviation;  // her best response
    Rat current_cost, best_cost;
};

inline NeCheck is_ne(const Tng& game, const Profile& profile,
                     const SearchLimits& limits = {}) {
    NeCheck out;
    for (int i = 0; i < game.player_count; ++i) {
        BrResult br = best_response(game, profile, i, limits);
        if (br.improved()) {
            out.is_equilibrium = false;
            out.player = i;
            out.deviation = std::move(br.deviation);
            out.current_cost = br.current_cost;
            out.best_cost = br.best_cost;
            return out;
        }
    }
    return out;
}

struct DynamicsStep {
    int player = 0;
    Rat cost_before, cost_after;
    Rat potential_before, potential_after;
};

struct DynamicsTrace {
    std::vector<DynamicsStep> steps;
};

/// Best response dynamics: round-robin over players, replacing the first
/// strict improver's strategy by her best response, until no player can
/// improve. Terminates because the Rosenthal potential drops by at least
/// 1/L at every step, where L normalizes all latency values to integers.
inline std::pair<Profile, DynamicsTrace> find_ne(const Tng& game, Profile seed,
                                                 const SearchLimits& limits = {}) {
    validate_profile(game, seed);
    for (const TimedPath& p : seed.strategies)
        if (!p.is_integral())
            throw ModelError("best response dynamics needs an integral seed profile");
    DynamicsTrace trace;
    int idx = 0;
    int stale = 0;
    while (stale < game.player_count) {
        const int i = idx % game.player_count;
        ++idx;
        BrResult br = best_response(game, seed, i, limits);
        if (!br.improved()) {
            ++stale;
            continue;
        }
        stale = 0;
        DynamicsStep step;
        step.player = i;
        step.cost_before = br.current_cost;
        step.cost_after = br.best_cost;
        step.potential_before = potential(game, seed);
        seed.strategies[static_cast<size_t>(i)] = *br.deviation;
        step.potential_after = potential(game, seed);
        trace.steps.push_back(std::move(step));
    }
    return {std::move(seed), std::move(trace)};
}

struct SoResult {
    Profile profile;
    Rat cost;
    long end_time = 0;
};

/// Exact social optimum via the product PTA (after self-loop elimination).
inline SoResult social_optimum(const Tng& game, const SearchLimits& limits = {},
                               const SoLimits& so_limits = {}) {
    const LoopFree lf = eliminate_self_loops(game);
    const SoConstruction so = so_pta(lf.game, so_limits);
    const std::optional<PricedPath> witness = cor(so.pta, so.source, so.target, limits);
    if (!witness)
        throw ModelError("social optimum: some player cannot reach her target");
    SoResult out;
    out.cost = witness->price;
    out.end_time = witness->end_time;
    Profile lifted = profile_from_path(so, *witness);
    for (TimedPath& p : lifted.strategies) p = contract_injected(lf.injected_from, p);
    out.profile = std::move(lifted);
    return out;
}

enum class LatencyFamily { CostSharing, AffineCongestion, General };

inline LatencyFamily classify_family(const Tng& game) {
    bool all_cs = true, all_affine = true;
    for (const LatencyFunction& f : game.latency) {
        if (f.is_zero()) continue;  // zero latency belongs to every family
        all_cs &= f.kind == LatencyFunction::Kind::CostSharing;
        all_affine &= f.kind == LatencyFunction::Kind::Affine;
    }
    if (all_cs) return LatencyFamily::CostSharing;
    if (all_affine) return LatencyFamily::AffineCongestion;
    return LatencyFamily::General;
}

struct InefficiencyReport {
    Rat so_cost;
    Rat ne_cost;
    bool ratio_finite = true;
    Rat ratio;  // meaningful only when finite
    LatencyFamily family = LatencyFamily::General;
    double pos_bound = 0;   // reported, family asymptotic
    bool has_poa_bound = false;
    Rat poa_bound;          // exact per-equilibrium bound when known
    bool poa_bound_holds = true;
};

/// Compares a given equilibrium against the social optimum. A zero-cost
/// optimum with a positive equilibrium cost yields an infinite ratio.
inline InefficiencyReport inefficiency(const Tng& game, const Profile& ne,
                                       const SearchLimits& limits = {},
                                       const SoLimits& so_limits = {}) {
    InefficiencyReport rep;
    rep.so_cost = social_optimum(game, limits, so_limits).cost;
    rep.ne_cost = cost_of(game, ne).total;
    if (rep.so_cost == 0) {
        rep.ratio_finite = rep.ne_cost == 0;
        rep.ratio = rep.ratio_finite ? Rat(1) : Rat(0);
    } else {
        rep.ratio = rep.ne_cost / rep.so_cost;
    }
    rep.family = classify_family(game);
    switch (rep.family) {
        case LatencyFamily::CostSharing:
            rep.pos_bound = std::log(static_cast<double>(game.player_count));
            rep.has_poa_bound = true;
            rep.poa_bound = game.player_count;
            break;
        case LatencyFamily::AffineCongestion:
            rep.pos_bound = 1.577;
            rep.has_poa_bound = true;
            rep.poa_bound = Rat(5, 2);
            break;
        default:
            break;
    }
    if (rep.has_poa_bound && rep.ratio_finite)
        rep.poa_bound_holds = rep.ratio <= rep.poa_bound;
    return rep;
}

struct NeTimeBound {
    BigInt potential_bound;  // scaled potential of the social optimum (phi)
    BigInt bound;            // phi * |V| * chi^|C| + |V|^k * chi^(k |C|)
    BigInt padded_bound;     // same shape with chi replaced by chi + 2
};

inline BigInt ne_bound_formula(const BigInt& phi, int vertices, long chi, int clocks,
                               int players) {
    const auto c = static_cast<unsigned long>(clocks);
    const auto k = static_cast<unsigned long>(players);
    return phi * BigInt(vertices) * int_pow(BigInt(chi), c) +
           int_pow(BigInt(vertices), k) * int_pow(BigInt(chi), k * c);
}

/// Diagnostic bound on the end time of the equilibrium reached by best
/// response dynamics seeded with the social optimum. phi bounds the number
/// of improvement steps: L * SO for congestion latencies, and an extra
/// (ln k + 1) factor for cost sharing.
inline NeTimeBound ne_time_bound(const Tng& game, const SearchLimits& limits = {},
                                 const SoLimits& so_limits = {}) {
    const Rat so = social_optimum(game, limits, so_limits).cost;
    const BigInt scale = normalize(game).second;
    Rat phi_rat = Rat(scale) * so;
    if (classify_family(game) == LatencyFamily::CostSharing) {
        // Exact stand-in for ln(k) + 1: the harmonic sum 1 + 1/2 + ... + 1/k.
        Rat harmonic = 0;
        for (int j = 1; j <= game.player_count; ++j) harmonic += Rat(1, j);
        phi_rat *= harmonic;
    }
    BigInt phi = BigInt(phi_rat.get_num()) / BigInt(phi_rat.get_den());
    if (phi_rat != Rat(phi)) phi += 1;  // ceil

    const int v = game.network.vertex_count();
    const long chi = max_constant(game.network);
    const int c = game.network.clock_count();
    NeTimeBound out;
    out.potential_bound = phi;
    out.bound = ne_bound_formula(phi, v, chi, c, game.player_count);
    out.padded_bound = ne_bound_formula(phi, v, chi + 2, c, game.player_count);
    return out;
}

}  // namespace tng

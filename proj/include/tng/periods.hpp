#pragma once

#include <algorithm>
#include <vector>

#include "tng/game.hpp"
#include "tng/path.hpp"

namespace tng {

struct Period {
    Rat begin, end;

    Rat length() const { return end - begin; }
};

/// Period decomposition of a profile: the coarsest partition of [0, t_max]
/// such that no player crosses an edge in the interior of a period. A player
/// contributes to loads only while travelling; once she reaches the end of
/// her path she stops occupying vertices.
struct PeriodDecomposition {
    std::vector<Period> periods;
    std::vector<Rat> arrival;                // per player: end time of her path
    std::vector<std::vector<int>> occupant;  // [period][player] vertex, -1 if arrived
    std::vector<std::vector<int>> load;      // [period][vertex]
    Rat t_max;

    int load_at(size_t period, int vertex) const {
        return load.at(period).at(static_cast<size_t>(vertex));
    }
};

/// Computes the decomposition. `extra_boundaries` may insert additional cut
/// points; costs and potentials are invariant under such refinements.
inline PeriodDecomposition decompose(const Profile& profile, int vertex_count,
                                     const std::vector<Rat>& extra_boundaries = {}) {
    PeriodDecomposition d;
    std::vector<Rat> cuts{Rat(0)};
    d.t_max = 0;
    for (const TimedPath& path : profile.strategies) {
        Rat acc = 0;
        for (const PathStep& s : path.steps) {
            acc += s.dwell;
            cuts.push_back(acc);
        }
        d.arrival.push_back(acc);
        d.t_max = std::max(d.t_max, acc);
    }
    for (const Rat& b : extra_boundaries)
        if (b >= 0 && b <= d.t_max) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        d.periods.push_back({cuts[i], cuts[i + 1]});  // empty periods already merged

    const size_t k = profile.size();
    d.occupant.assign(d.periods.size(), std::vector<int>(k, -1));
    d.load.assign(d.periods.size(),
                  std::vector<int>(static_cast<size_t>(vertex_count), 0));
    for (size_t g = 0; g < d.periods.size(); ++g) {
        for (size_t i = 0; i < k; ++i) {
            std::optional<int> v = profile.strategies[i].vertex_at(d.periods[g].begin);
            if (!v) continue;
            d.occupant[g][i] = *v;
            d.load[g][static_cast<size_t>(*v)] += 1;
        }
    }
    return d;
}

struct ProfileCosts {
    std::vector<Rat> per_player;
    Rat total;
};

/// Exact profile cost: player i pays ell_v(load) * |period| for every period
/// she spends travelling at v; the periods of her own path refine the
/// decomposition, so the sum is well defined.
inline ProfileCosts cost_of(const Tng& game, const Profile& profile,
                            const std::vector<Rat>& extra_boundaries = {}) {
    const PeriodDecomposition d =
        decompose(profile, game.network.vertex_count(), extra_boundaries);
    ProfileCosts costs;
    costs.per_player.assign(profile.size(), Rat(0));
    costs.total = 0;
    for (size_t g = 0; g < d.periods.size(); ++g) {
        const Rat len = d.periods[g].length();
        for (size_t i = 0; i < profile.size(); ++i) {
            const int v = d.occupant[g][i];
            if (v < 0) continue;
            costs.per_player[i] += game.latency[static_cast<size_t>(v)].eval(
                                       d.load_at(g, v)) *
                                   len;
        }
    }
    for (const Rat& c : costs.per_player) costs.total += c;
    return costs;
}

/// Rosenthal potential: sum over periods and vertices of
/// |period| * (ell_v(1) + ... + ell_v(load)).
inline Rat potential(const Tng& game, const Profile& profile,
                     const std::vector<Rat>& extra_boundaries = {}) {
    const PeriodDecomposition d =
        decompose(profile, game.network.vertex_count(), extra_boundaries);
    Rat psi = 0;
    for (size_t g = 0; g < d.periods.size(); ++g) {
        const Rat len = d.periods[g].length();
        for (int v = 0; v < game.network.vertex_count(); ++v) {
            const int l = d.load_at(g, v);
            for (int j = 1; j <= l; ++j)
                psi += game.latency[static_cast<size_t>(v)].eval(j) * len;
        }
    }
    return psi;
}

/// Checks that every strategy is legal and matches its player's objective.
inline void validate_profile(const Tng& game, const Profile& profile) {
    if (profile.size() != static_cast<size_t>(game.player_count))
        throw ModelError("profile size does not match player count");
    for (size_t i = 0; i < profile.size(); ++i) {
        const TimedPath& path = profile.strategies[i];
        if (path.source() != game.objectives[i].source)
            throw ModelError("player " + std::to_string(i + 1) +
                             ": strategy does not start at her source");
        if (path.final_vertex != game.objectives[i].target)
            throw ModelError("player " + std::to_string(i + 1) +
                             ": strategy does not end at her target");
        const LegalityResult r = check_legal(game.network, path);
        if (!is_legal(r)) {
            const auto& bad = std::get<IllegalPath>(r);
            throw ModelError("player " + std::to_string(i + 1) + ": illegal path at step " +
                             std::to_string(bad.step_index) + ": " + bad.reason);
        }
    }
}

}  // namespace tng

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tng/network.hpp"
#include "tng/path.hpp"

namespace tng {

/// Per-vertex latency: cost per time unit charged to each of `load` players
/// currently travelling through the vertex.
struct LatencyFunction {
    enum class Kind { CostSharing, Congestion, Affine };

    Kind kind = Kind::Affine;
    Rat share;              // CostSharing: fixed cost split evenly
    std::vector<Rat> table; // Congestion: table[l-1] for load l
    Rat slope, intercept;   // Affine: slope * load + intercept

    static LatencyFunction cost_sharing(Rat c) {
        LatencyFunction f;
        f.kind = Kind::CostSharing;
        f.share = std::move(c);
        return f;
    }
    static LatencyFunction congestion(std::vector<Rat> t) {
        LatencyFunction f;
        f.kind = Kind::Congestion;
        f.table = std::move(t);
        return f;
    }
    static LatencyFunction affine(Rat a, Rat b) {
        LatencyFunction f;
        f.kind = Kind::Affine;
        f.slope = std::move(a);
        f.intercept = std::move(b);
        return f;
    }
    static LatencyFunction zero() { return affine(0, 0); }

    Rat eval(int load) const {
        if (load < 1) throw ModelError("latency evaluated at load < 1");
        switch (kind) {
            case Kind::CostSharing: return share / load;
            case Kind::Congestion:
                if (static_cast<size_t>(load) > table.size())
                    throw ModelError("congestion table evaluated beyond its size");
                return table[static_cast<size_t>(load) - 1];
            default: return slope * load + intercept;
        }
    }

    bool is_zero() const {
        switch (kind) {
            case Kind::CostSharing: return share == 0;
            case Kind::Congestion:
                for (const Rat& v : table)
                    if (v != 0) return false;
                return true;
            default: return slope == 0 && intercept == 0;
        }
    }

    std::vector<Rat> parameters() const {
        switch (kind) {
            case Kind::CostSharing: return {share};
            case Kind::Congestion: return table;
            default: return {slope, intercept};
        }
    }
};

struct Objective {
    int source = 0;
    int target = 0;
};

/// A timed network game: k players, a timed network, one latency function
/// per vertex and one (source, target) objective per player.
struct Tng {
    int player_count = 0;
    TimedNetwork network;
    std::vector<LatencyFunction> latency;  // indexed by vertex
    std::vector<Objective> objectives;     // indexed by player
};

inline void validate_game(const Tng& game) {
    validate_network(game.network);
    if (game.player_count < 1) throw ModelError("game needs at least one player");
    if (static_cast<int>(game.objectives.size()) != game.player_count)
        throw ModelError("objective count does not match player count");
    if (game.latency.size() != static_cast<size_t>(game.network.vertex_count()))
        throw ModelError("latency count does not match vertex count");
    for (size_t v = 0; v < game.latency.size(); ++v) {
        const LatencyFunction& f = game.latency[v];
        const std::string tag = "latency of " + game.network.vertex_names[v];
        for (const Rat& p : f.parameters())
            if (p < 0) throw ModelError(tag + ": negative parameter");
        if (f.kind == LatencyFunction::Kind::Congestion) {
            if (static_cast<int>(f.table.size()) < game.player_count)
                throw ModelError(tag + ": congestion table shorter than player count");
            for (size_t i = 1; i < f.table.size(); ++i)
                if (f.table[i] < f.table[i - 1])
                    throw ModelError(tag + ": congestion table must be non-decreasing");
        }
    }
    for (const Objective& o : game.objectives) {
        if (o.source < 0 || o.source >= game.network.vertex_count() || o.target < 0 ||
            o.target >= game.network.vertex_count())
            throw ModelError("player objective out of range");
    }
}

/// Scales every latency by the least common multiple L of all latency value
/// denominators, so that each ell_v(l) of the result is a natural number.
/// Returns the scaled game and L.
inline std::pair<Tng, BigInt> normalize(const Tng& game) {
    std::vector<Rat> values;
    for (const LatencyFunction& f : game.latency)
        for (int l = 1; l <= game.player_count; ++l) values.push_back(f.eval(l));
    const BigInt scale = denominator_lcm(values);
    Tng out = game;
    for (LatencyFunction& f : out.latency) {
        switch (f.kind) {
            case LatencyFunction::Kind::CostSharing:
                // den(c/l) divides L for every load l, so L*c/l is integral.
                f.share *= Rat(scale);
                break;
            case LatencyFunction::Kind::Congestion:
                for (Rat& v : f.table) v *= Rat(scale);
                break;
            default:
                f.slope *= Rat(scale);
                f.intercept *= Rat(scale);
                break;
        }
    }
    return {out, scale};
}

}  // namespace tng

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "tng/network.hpp"
#include "tng/path.hpp"

namespace tng {

/// Priced timed automaton: a timed network plus a price rate per vertex.
struct Pta {
    TimedNetwork network;
    std::vector<Rat> rates;  // indexed by vertex
};

inline void validate_pta(const Pta& pta) {
    validate_network(pta.network);
    if (pta.rates.size() != static_cast<size_t>(pta.network.vertex_count()))
        throw ModelError("rate count does not match vertex count");
    for (const Rat& r : pta.rates)
        if (r < 0) throw ModelError("negative price rate");
}

/// Number of chi-saturated abstract clock valuations times vertices:
/// |V| * (chi + 2)^|C|. Termination bound for the abstract search.
inline BigInt horizon(const Pta& pta) {
    const BigInt base = max_constant(pta.network) + 2;
    return BigInt(pta.network.vertex_count()) *
           int_pow(base, static_cast<unsigned long>(pta.network.clock_count()));
}

struct SearchLimits {
    size_t max_states = 10'000'000;
};

/// Cost-optimal witness: an integral timed path, the edges it crosses, the
/// exact optimal price and the (integer) end time.
struct PricedPath {
    TimedPath path;
    std::vector<int> edge_indices;
    Rat price;
    long end_time = 0;
};

namespace detail {

// Abstract valuations store each clock as min(value, chi + 1); the value
// chi + 1 acts as "above every guard constant". States are packed into a
// 64-bit key: vertex first, then clocks in mixed radix chi + 2.
struct CorSpace {
    long chi;
    uint64_t radix;
    int clocks;
    int vertices;

    explicit CorSpace(const TimedNetwork& net)
        : chi(max_constant(net)),
          radix(static_cast<uint64_t>(chi) + 2),
          clocks(net.clock_count()),
          vertices(net.vertex_count()) {
        // The packed key must fit 64 bits: |V| * radix^|C| <= 2^64.
        long double bits = 0;
        for (int c = 0; c < clocks; ++c) bits += std::log2((long double)radix);
        bits += std::log2((long double)vertices);
        if (bits > 62)
            throw BudgetError("abstract state space does not fit the search encoding");
    }

    uint64_t encode(int vertex, const std::vector<long>& vals) const {
        uint64_t key = static_cast<uint64_t>(vertex);
        for (long v : vals) key = key * radix + static_cast<uint64_t>(v);
        return key;
    }

    int vertex_of(uint64_t key) const {
        uint64_t k = key;
        for (int c = 0; c < clocks; ++c) k /= radix;
        return static_cast<int>(k);
    }

    bool atom_sat(const AtomicConstraint& a, const std::vector<long>& vals) const {
        const long v = vals[static_cast<size_t>(a.clock)];
        switch (a.op) {
            case CmpOp::Le: return v <= a.bound;  // v == chi+1 means v > chi >= bound
            case CmpOp::Eq: return v == a.bound;
            default: return v >= a.bound || v == chi + 1;
        }
    }

    bool guard_sat(const Guard& g, const std::vector<long>& vals) const {
        for (const AtomicConstraint& a : g.atoms)
            if (!atom_sat(a, vals)) return false;
        return true;
    }

    std::vector<long> decode_clocks(uint64_t key) const {
        std::vector<long> vals(static_cast<size_t>(clocks), 0);
        for (int c = clocks - 1; c >= 0; --c) {
            vals[static_cast<size_t>(c)] = static_cast<long>(key % radix);
            key /= radix;
        }
        return vals;
    }
};

struct CorEntry {
    BigInt cost;       // price scaled to an integer
    long time = 0;
    bool settled = false;
    uint64_t parent = 0;
    int action = -2;   // -2 root, -1 wait one unit, >= 0 edge index
};

struct CorQueueItem {
    BigInt cost;
    long time;
    uint64_t seq;
    uint64_t key;

    bool operator>(const CorQueueItem& o) const {
        if (cost != o.cost) return cost > o.cost;
        if (time != o.time) return time > o.time;
        return seq > o.seq;
    }
};

}  // namespace detail

/// Cost-optimal reachability over integral paths. Since all guards are
/// non-strict, some optimal-price run is integral, so a Dijkstra search over
/// chi-saturated abstract valuations with unit waits is exact. Ties in price
/// are broken towards the earliest end time. Returns nullopt when the target
/// is unreachable; throws BudgetError when the state budget is exhausted.
inline std::optional<PricedPath> cor(const Pta& pta, int source, int target,
                                     const SearchLimits& limits = {}) {
    const TimedNetwork& net = pta.network;
    detail::CorSpace space(net);

    // Scale rates to integers so queue keys stay exact and cheap to compare.
    const BigInt scale = denominator_lcm(pta.rates);
    std::vector<BigInt> weight;
    for (const Rat& r : pta.rates) {
        Rat w = r * Rat(scale);
        weight.push_back(BigInt(w.get_num()));
    }

    std::unordered_map<uint64_t, detail::CorEntry> table;
    std::priority_queue<detail::CorQueueItem, std::vector<detail::CorQueueItem>,
                        std::greater<detail::CorQueueItem>>
        queue;
    uint64_t seq = 0;

    const uint64_t start =
        space.encode(source, std::vector<long>(static_cast<size_t>(space.clocks), 0));
    table[start] = {BigInt(0), 0, false, 0, -2};
    queue.push({BigInt(0), 0, seq++, start});

    auto relax = [&](uint64_t key, BigInt cost, long time, uint64_t parent, int action) {
        auto it = table.find(key);
        if (it == table.end()) {
            if (table.size() >= limits.max_states)
                throw BudgetError("state budget exhausted during cost-optimal search");
            table.emplace(key, detail::CorEntry{cost, time, false, parent, action});
            queue.push({std::move(cost), time, seq++, key});
        } else if (!it->second.settled &&
                   (cost < it->second.cost ||
                    (cost == it->second.cost && time < it->second.time))) {
            it->second.cost = cost;
            it->second.time = time;
            it->second.parent = parent;
            it->second.action = action;
            queue.push({std::move(cost), time, seq++, key});
        }
    };

    while (!queue.empty()) {
        detail::CorQueueItem item = queue.top();
        queue.pop();
        detail::CorEntry& entry = table[item.key];
        if (entry.settled) continue;
        if (item.cost != entry.cost || item.time != entry.time) continue;
        entry.settled = true;

        const int v = space.vertex_of(item.key);
        if (v == target) {
            // Reconstruct the witness by walking parents back to the root.
            std::vector<int> actions;
            uint64_t cur = item.key;
            while (true) {
                const detail::CorEntry& e = table[cur];
                if (e.action == -2) break;
                actions.push_back(e.action);
                cur = e.parent;
            }
            std::reverse(actions.begin(), actions.end());
            PricedPath out;
            out.price = Rat(entry.cost) / Rat(scale);
            out.end_time = entry.time;
            int at = source;
            long dwell = 0;
            for (int a : actions) {
                if (a == -1) {
                    ++dwell;
                } else {
                    out.path.steps.push_back({at, Rat(dwell)});
                    out.edge_indices.push_back(a);
                    at = net.edges[static_cast<size_t>(a)].dst;
                    dwell = 0;
                }
            }
            out.path.final_vertex = target;
            return out;
        }

        const std::vector<long> vals = space.decode_clocks(item.key);

        // Wait one time unit.
        std::vector<long> waited = vals;
        for (long& x : waited) x = std::min(x + 1, space.chi + 1);
        relax(space.encode(v, waited), entry.cost + weight[static_cast<size_t>(v)],
              entry.time + 1, item.key, -1);

        // Cross an enabled edge instantaneously.
        for (int e = 0; e < static_cast<int>(net.edges.size()); ++e) {
            const Edge& edge = net.edges[static_cast<size_t>(e)];
            if (edge.src != v || !space.guard_sat(edge.guard, vals)) continue;
            std::vector<long> next = vals;
            for (int c : edge.resets) next[static_cast<size_t>(c)] = 0;
            relax(space.encode(edge.dst, next), entry.cost, entry.time, item.key, e);
        }
    }
    return std::nullopt;
}

/// Same search without witness reconstruction; returns the optimal price.
inline std::optional<Rat> cor_price(const Pta& pta, int source, int target,
                                    const SearchLimits& limits = {}) {
    std::optional<PricedPath> w = cor(pta, source, target, limits);
    if (!w) return std::nullopt;
    return w->price;
}

/// Integral reachability in a plain timed network (complete for non-strict
/// guards by the integrality of optimal runs).
inline bool reachable(const TimedNetwork& net, int source, int target,
                      const SearchLimits& limits = {}) {
    Pta pta{net, std::vector<Rat>(static_cast<size_t>(net.vertex_count()), Rat(0))};
    return cor_price(pta, source, target, limits).has_value();
}

}  // namespace tng

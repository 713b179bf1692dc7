#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tng/rational.hpp"

namespace tng {

// Guards only use non-strict comparisons. Strict inequalities are rejected
// at parse time; the whole integral-path machinery depends on this.
enum class CmpOp { Le, Eq, Ge };

inline const char* cmp_op_name(CmpOp op) {
    switch (op) {
        case CmpOp::Le: return "<=";
        case CmpOp::Eq: return "==";
        default: return ">=";
    }
}

struct AtomicConstraint {
    int clock = 0;
    CmpOp op = CmpOp::Le;
    long bound = 0;  // guard constants are natural numbers
};

/// Conjunction of atomic clock constraints; empty means true.
struct Guard {
    std::vector<AtomicConstraint> atoms;

    bool is_true() const { return atoms.empty(); }
};

struct Edge {
    int src = 0;
    int dst = 0;
    Guard guard;
    std::vector<int> resets;  // sorted, unique clock ids
};

struct TimedNetwork {
    std::vector<std::string> clock_names;
    std::vector<std::string> vertex_names;
    std::vector<Edge> edges;

    int clock_count() const { return static_cast<int>(clock_names.size()); }
    int vertex_count() const { return static_cast<int>(vertex_names.size()); }

    std::vector<int> out_edges(int v) const {
        std::vector<int> out;
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
            if (edges[e].src == v) out.push_back(e);
        return out;
    }

    bool has_self_loop() const {
        for (const Edge& e : edges)
            if (e.src == e.dst) return true;
        return false;
    }
};

/// Clock valuation, indexed by clock id.
using ClockValuation = std::vector<Rat>;

inline bool eval_atom(const AtomicConstraint& a, const ClockValuation& kappa) {
    const Rat& v = kappa.at(static_cast<size_t>(a.clock));
    switch (a.op) {
        case CmpOp::Le: return v <= a.bound;
        case CmpOp::Eq: return v == a.bound;
        default: return v >= a.bound;
    }
}

inline bool eval_guard(const Guard& g, const ClockValuation& kappa) {
    return std::all_of(g.atoms.begin(), g.atoms.end(),
                       [&](const AtomicConstraint& a) { return eval_atom(a, kappa); });
}

/// Applies resets, then advances every clock by the dwell time.
inline ClockValuation advance(ClockValuation kappa, const std::vector<int>& resets,
                              const Rat& dwell) {
    for (int c : resets) kappa.at(static_cast<size_t>(c)) = 0;
    for (Rat& v : kappa) v += dwell;
    return kappa;
}

/// A guard is statically satisfiable when, per clock, the implied interval
/// of admissible values is non-empty.
inline bool guard_satisfiable(const Guard& g, int clock_count) {
    constexpr long kInf = std::numeric_limits<long>::max();
    std::vector<long> lo(static_cast<size_t>(clock_count), 0);
    std::vector<long> hi(static_cast<size_t>(clock_count), kInf);
    for (const AtomicConstraint& a : g.atoms) {
        auto c = static_cast<size_t>(a.clock);
        switch (a.op) {
            case CmpOp::Le: hi[c] = std::min(hi[c], a.bound); break;
            case CmpOp::Ge: lo[c] = std::max(lo[c], a.bound); break;
            case CmpOp::Eq:
                lo[c] = std::max(lo[c], a.bound);
                hi[c] = std::min(hi[c], a.bound);
                break;
        }
    }
    for (size_t c = 0; c < lo.size(); ++c)
        if (lo[c] > hi[c]) return false;
    return true;
}

/// Largest constant appearing in any guard.
inline long max_constant(const TimedNetwork& net) {
    long chi = 0;
    for (const Edge& e : net.edges)
        for (const AtomicConstraint& a : e.guard.atoms) chi = std::max(chi, a.bound);
    return chi;
}

inline void validate_network(const TimedNetwork& net) {
    const int n = net.vertex_count();
    const int cc = net.clock_count();
    if (n == 0) throw ModelError("network has no vertices");
    for (size_t i = 0; i < net.edges.size(); ++i) {
        const Edge& e = net.edges[i];
        const std::string tag = "edge #" + std::to_string(i);
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
            throw ModelError(tag + ": endpoint out of range");
        for (const AtomicConstraint& a : e.guard.atoms) {
            if (a.clock < 0 || a.clock >= cc)
                throw ModelError(tag + ": guard references unknown clock");
            if (a.bound < 0) throw ModelError(tag + ": negative guard constant");
        }
        for (int c : e.resets)
            if (c < 0 || c >= cc) throw ModelError(tag + ": reset of unknown clock");
        if (!std::is_sorted(e.resets.begin(), e.resets.end()) ||
            std::adjacent_find(e.resets.begin(), e.resets.end()) != e.resets.end())
            throw ModelError(tag + ": resets must be sorted and unique");
        if (!guard_satisfiable(e.guard, cc))
            throw ModelError(tag + ": guard is unsatisfiable");
    }
}

}  // namespace tng

#pragma once

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "tng/game.hpp"
#include "tng/path.hpp"
#include "tng/periods.hpp"
#include "tng/pta.hpp"

namespace tng {

using Json = nlohmann::json;

/// A game plus named example profiles, as stored on disk.
struct Instance {
    std::string name;
    Tng game;
    std::map<std::string, Profile> profiles;
};

namespace detail {

inline int lookup(const std::vector<std::string>& names, const std::string& name,
                  const char* what) {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw ModelError(std::string("unknown ") + what + ": " + name);
}

inline Rat json_rat(const Json& j, const char* what) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    throw ModelError(std::string(what) + ": expected an integer or a \"p/q\" string");
}

inline CmpOp parse_op(const std::string& op) {
    if (op == "<=") return CmpOp::Le;
    if (op == "==") return CmpOp::Eq;
    if (op == ">=") return CmpOp::Ge;
    if (op == "<" || op == ">")
        throw ModelError("strict guard \"" + op +
                         "\" is not supported: guards must be non-strict");
    throw ModelError("unknown guard operator: " + op);
}

inline Guard parse_guard(const Json& j, const std::vector<std::string>& clock_names) {
    Guard g;
    if (j.is_null()) return g;
    for (const Json& a : j) {
        const int clock = lookup(clock_names, a.at("clock").get<std::string>(), "clock");
        if (a.contains("interval")) {
            const long lo = a.at("interval").at(0).get<long>();
            const long hi = a.at("interval").at(1).get<long>();
            g.atoms.push_back({clock, CmpOp::Ge, lo});
            g.atoms.push_back({clock, CmpOp::Le, hi});
        } else {
            g.atoms.push_back({clock, parse_op(a.at("op").get<std::string>()),
                               a.at("bound").get<long>()});
        }
    }
    return g;
}

inline LatencyFunction parse_latency(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "cost_sharing") return LatencyFunction::cost_sharing(json_rat(j.at("c"), "c"));
    if (kind == "congestion") {
        std::vector<Rat> table;
        for (const Json& v : j.at("table")) table.push_back(json_rat(v, "table entry"));
        return LatencyFunction::congestion(std::move(table));
    }
    if (kind == "affine")
        return LatencyFunction::affine(json_rat(j.at("a"), "a"), json_rat(j.at("b"), "b"));
    throw ModelError("unknown latency kind: " + kind);
}

inline TimedPath parse_path(const Json& j, const std::vector<std::string>& vertex_names) {
    TimedPath path;
    for (const Json& s : j.at("steps"))
        path.steps.push_back(
            {lookup(vertex_names, s.at("vertex").get<std::string>(), "vertex"),
             json_rat(s.at("dwell"), "dwell")});
    path.final_vertex = lookup(vertex_names, j.at("final").get<std::string>(), "vertex");
    return path;
}

}  // namespace detail

/// Parses, then validates: static guard checks, latency checks, and a
/// reachability check guaranteeing every player has at least one strategy.
inline Instance load_instance(const Json& j) {
    Instance inst;
    inst.name = j.value("name", "");
    Tng& game = inst.game;
    for (const Json& c : j.at("clocks"))
        game.network.clock_names.push_back(c.get<std::string>());
    for (const Json& v : j.at("vertices")) {
        game.network.vertex_names.push_back(v.at("name").get<std::string>());
        game.latency.push_back(detail::parse_latency(v.at("latency")));
    }
    for (const Json& e : j.at("edges")) {
        Edge edge;
        edge.src = detail::lookup(game.network.vertex_names,
                                  e.at("src").get<std::string>(), "vertex");
        edge.dst = detail::lookup(game.network.vertex_names,
                                  e.at("dst").get<std::string>(), "vertex");
        edge.guard = detail::parse_guard(e.value("guard", Json()), game.network.clock_names);
        for (const Json& r : e.value("resets", Json::array()))
            edge.resets.push_back(detail::lookup(game.network.clock_names,
                                                 r.get<std::string>(), "clock"));
        std::sort(edge.resets.begin(), edge.resets.end());
        game.network.edges.push_back(std::move(edge));
    }
    for (const Json& p : j.at("players"))
        game.objectives.push_back(
            {detail::lookup(game.network.vertex_names, p.at("source").get<std::string>(),
                            "vertex"),
             detail::lookup(game.network.vertex_names, p.at("target").get<std::string>(),
                            "vertex")});
    game.player_count = static_cast<int>(game.objectives.size());
    validate_game(game);
    for (size_t i = 0; i < game.objectives.size(); ++i)
        if (!reachable(game.network, game.objectives[i].source, game.objectives[i].target))
            throw ModelError("player " + std::to_string(i + 1) +
                             " cannot reach her target: no strategy exists");
    const Json profiles = j.value("profiles", Json::object());
    for (const auto& [name, paths] : profiles.items()) {
        Profile profile;
        for (const Json& p : paths)
            profile.strategies.push_back(detail::parse_path(p, game.network.vertex_names));
        validate_profile(game, profile);
        inst.profiles.emplace(name, std::move(profile));
    }
    return inst;
}

inline Json path_to_json(const TimedNetwork& net, const TimedPath& path) {
    Json steps = Json::array();
    for (const PathStep& s : path.steps)
        steps.push_back({{"vertex", net.vertex_names[static_cast<size_t>(s.vertex)]},
                         {"dwell", rat_to_string(s.dwell)}});
    return {{"steps", steps},
            {"final", net.vertex_names[static_cast<size_t>(path.final_vertex)]}};
}

inline Json latency_to_json(const LatencyFunction& f) {
    switch (f.kind) {
        case LatencyFunction::Kind::CostSharing:
            return {{"kind", "cost_sharing"}, {"c", rat_to_string(f.share)}};
        case LatencyFunction::Kind::Congestion: {
            Json table = Json::array();
            for (const Rat& v : f.table) table.push_back(rat_to_string(v));
            return {{"kind", "congestion"}, {"table", table}};
        }
        default:
            return {{"kind", "affine"},
                    {"a", rat_to_string(f.slope)},
                    {"b", rat_to_string(f.intercept)}};
    }
}

inline Json instance_to_json(const Instance& inst) {
    const Tng& game = inst.game;
    const TimedNetwork& net = game.network;
    Json j;
    j["name"] = inst.name;
    j["clocks"] = net.clock_names;
    Json vertices = Json::array();
    for (int v = 0; v < net.vertex_count(); ++v)
        vertices.push_back({{"name", net.vertex_names[static_cast<size_t>(v)]},
                            {"latency", latency_to_json(game.latency[static_cast<size_t>(v)])}});
    j["vertices"] = vertices;
    Json edges = Json::array();
    for (const Edge& e : net.edges) {
        Json guard = Json::array();
        for (const AtomicConstraint& a : e.guard.atoms)
            guard.push_back({{"clock", net.clock_names[static_cast<size_t>(a.clock)]},
                             {"op", cmp_op_name(a.op)},
                             {"bound", a.bound}});
        Json resets = Json::array();
        for (int c : e.resets) resets.push_back(net.clock_names[static_cast<size_t>(c)]);
        edges.push_back({{"src", net.vertex_names[static_cast<size_t>(e.src)]},
                         {"dst", net.vertex_names[static_cast<size_t>(e.dst)]},
                         {"guard", guard},
                         {"resets", resets}});
    }
    j["edges"] = edges;
    Json players = Json::array();
    for (const Objective& o : game.objectives)
        players.push_back({{"source", net.vertex_names[static_cast<size_t>(o.source)]},
                           {"target", net.vertex_names[static_cast<size_t>(o.target)]}});
    j["players"] = players;
    Json profiles = Json::object();
    for (const auto& [name, profile] : inst.profiles) {
        Json arr = Json::array();
        for (const TimedPath& p : profile.strategies) arr.push_back(path_to_json(net, p));
        profiles[name] = arr;
    }
    j["profiles"] = profiles;
    return j;
}

/// FNV-1a over the canonical serialization; reports cite this digest so that
/// results can be tied to the exact instance they were computed from.
inline std::string instance_digest(const Instance& inst) {
    const std::string dump = instance_to_json(inst).dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Built-in fixtures
// ---------------------------------------------------------------------------

namespace fixtures {

/// Two players routing s -> u1 and s -> u2 over a diamond with affine
/// latencies; the canonical "canonical" profile costs (10, 14).
inline Instance example1() {
    Instance inst;
    inst.name = "example1";
    Tng& g = inst.game;
    g.network.clock_names = {"x", "y"};
    g.network.vertex_names = {"s", "v1", "v2", "u1", "u2"};
    g.latency = {LatencyFunction::affine(2, 0), LatencyFunction::affine(1, 0),
                 LatencyFunction::affine(3, 0), LatencyFunction::zero(),
                 LatencyFunction::zero()};
    g.network.edges = {
        {0, 1, Guard{{{0, CmpOp::Eq, 2}}}, {0}},
        {1, 3, Guard{{{0, CmpOp::Ge, 1}, {0, CmpOp::Le, 2}, {1, CmpOp::Ge, 3}, {1, CmpOp::Le, 4}}}, {0}},
        {1, 2, Guard{{{0, CmpOp::Eq, 2}}}, {0}},
        {2, 4, Guard{{{0, CmpOp::Ge, 1}, {0, CmpOp::Le, 2}, {1, CmpOp::Ge, 4}, {1, CmpOp::Le, 5}}}, {0}},
    };
    g.player_count = 2;
    g.objectives = {{0, 3}, {0, 4}};
    Profile canonical;
    canonical.strategies = {TimedPath{{{0, Rat(2)}, {1, Rat(1)}}, 3},
                        TimedPath{{{0, Rat(2)}, {1, Rat(2)}, {2, Rat(1)}}, 4}};
    inst.profiles.emplace("canonical", std::move(canonical));
    return inst;
}

/// Single-player network whose flattened snapshot path is illegal and whose
/// s1 -> u pair is unreachable; the shipped player routes s2 -> u.
inline Instance fig2() {
    Instance inst;
    inst.name = "fig2";
    Tng& g = inst.game;
    g.network.clock_names = {"x", "y"};
    g.network.vertex_names = {"s1", "s2", "v1", "v2", "u"};
    g.latency.assign(5, LatencyFunction::affine(0, 1));
    g.network.edges = {
        {0, 2, Guard{}, {}},
        {2, 3, Guard{{{0, CmpOp::Eq, 2}}}, {0}},
        {1, 3, Guard{}, {}},
        {3, 4, Guard{{{0, CmpOp::Eq, 2}, {1, CmpOp::Eq, 2}}}, {}},
    };
    g.player_count = 1;
    g.objectives = {{1, 4}};
    Profile valid;
    valid.strategies = {TimedPath{{{1, Rat(0)}, {3, Rat(2)}}, 4}};
    inst.profiles.emplace("valid", std::move(valid));
    return inst;
}

/// k players with pairwise coprime cycle lengths sharing one cost-sharing
/// vertex; the social optimum synchronizes at the product of the primes.
inline Instance cs_prime(const std::vector<long>& primes) {
    Instance inst;
    inst.name = "cs-prime";
    Tng& g = inst.game;
    const int k = static_cast<int>(primes.size());
    g.network.clock_names = {"x"};
    for (int i = 0; i < k; ++i) {
        g.network.vertex_names.push_back("s" + std::to_string(i + 1));
        g.network.vertex_names.push_back("w" + std::to_string(i + 1));
    }
    const int v = 2 * k;
    const int u = 2 * k + 1;
    g.network.vertex_names.push_back("v");
    g.network.vertex_names.push_back("u");
    g.latency.assign(static_cast<size_t>(2 * k), LatencyFunction::zero());
    g.latency.push_back(LatencyFunction::cost_sharing(1));
    g.latency.push_back(LatencyFunction::zero());
    for (int i = 0; i < k; ++i) {
        const int si = 2 * i, wi = 2 * i + 1;
        g.network.edges.push_back({si, wi, Guard{{{0, CmpOp::Eq, primes[static_cast<size_t>(i)]}}}, {0}});
        g.network.edges.push_back({wi, si, Guard{{{0, CmpOp::Eq, 0}}}, {}});
        g.network.edges.push_back({si, v, Guard{{{0, CmpOp::Eq, primes[static_cast<size_t>(i)]}}}, {0}});
        g.objectives.push_back({si, u});
    }
    g.network.edges.push_back({v, u, Guard{{{0, CmpOp::Eq, 1}}}, {}});
    g.player_count = k;
    Profile solo;
    for (int i = 0; i < k; ++i)
        solo.strategies.push_back(
            TimedPath{{{2 * i, Rat(primes[static_cast<size_t>(i)])}, {v, Rat(1)}}, u});
    inst.profiles.emplace("solo", std::move(solo));
    return inst;
}

/// Two players swapping places over self-loop cycles with coprime lengths;
/// the zero-cost optimum must wait for the cycles to synchronize.
inline Instance congestion_polygon(long p1, long p2) {
    Instance inst;
    inst.name = "congestion-polygon";
    Tng& g = inst.game;
    g.network.clock_names = {"x"};
    g.network.vertex_names = {"s1", "s2", "u1", "u2"};
    g.latency = {LatencyFunction::congestion({Rat(0), Rat(1)}),
                 LatencyFunction::congestion({Rat(0), Rat(1)}), LatencyFunction::zero(),
                 LatencyFunction::zero()};
    g.network.edges = {
        {0, 0, Guard{{{0, CmpOp::Eq, p1}}}, {0}},
        {1, 1, Guard{{{0, CmpOp::Eq, p2}}}, {0}},
        {0, 1, Guard{{{0, CmpOp::Eq, p1}}}, {0}},
        {1, 0, Guard{{{0, CmpOp::Eq, p2}}}, {0}},
        {1, 2, Guard{{{0, CmpOp::Eq, p1}}}, {}},
        {0, 3, Guard{{{0, CmpOp::Eq, p2}}}, {}},
    };
    g.player_count = 2;
    g.objectives = {{0, 2}, {1, 3}};
    Profile greedy;
    greedy.strategies = {TimedPath{{{0, Rat(p1)}, {1, Rat(p1)}}, 2},
                         TimedPath{{{1, Rat(p2)}, {0, Rat(p2)}}, 3}};
    inst.profiles.emplace("greedy", std::move(greedy));
    return inst;
}

namespace detail_ss {

inline void subset_chain(Tng& g, const std::vector<long>& items) {
    // Chain v1 .. v(n+1); each hop either waits exactly item i or is free.
    const int n = static_cast<int>(items.size());
    for (int i = 0; i <= n; ++i)
        g.network.vertex_names.push_back("v" + std::to_string(i + 1));
    for (int i = 0; i < n; ++i) {
        g.network.edges.push_back(
            {i, i + 1, Guard{{{0, CmpOp::Eq, items[static_cast<size_t>(i)]}}}, {0}});
        g.network.edges.push_back({i, i + 1, Guard{{{0, CmpOp::Eq, 0}}}, {0}});
    }
}

}  // namespace detail_ss

/// Deciding whether the cost-sharing vertex can be shared amounts to hitting
/// the other player's window [mu, mu + 1], i.e. to solving subset sum.
inline Instance subset_sum_cs(const std::vector<long>& items, long mu) {
    Instance inst;
    inst.name = "subset-sum-cs";
    Tng& g = inst.game;
    g.network.clock_names = {"x"};
    detail_ss::subset_chain(g, items);
    const int n = static_cast<int>(items.size());
    const int vpaid = n;  // v(n+1)
    const int u1 = n + 1, u2 = n + 2, s2 = n + 3;
    g.network.vertex_names.push_back("u1");
    g.network.vertex_names.push_back("u2");
    g.network.vertex_names.push_back("s2");
    g.latency.assign(static_cast<size_t>(n), LatencyFunction::zero());
    g.latency.push_back(LatencyFunction::cost_sharing(1));  // v(n+1)
    g.latency.push_back(LatencyFunction::zero());
    g.latency.push_back(LatencyFunction::zero());
    g.latency.push_back(LatencyFunction::zero());
    g.network.edges.push_back({vpaid, u1, Guard{{{0, CmpOp::Eq, 1}}}, {}});
    g.network.edges.push_back({vpaid, u2, Guard{{{0, CmpOp::Eq, 1}}}, {}});
    g.network.edges.push_back({s2, vpaid, Guard{{{0, CmpOp::Eq, mu}}}, {0}});
    g.player_count = 2;
    g.objectives = {{0, u1}, {s2, u2}};
    Profile baseline;
    TimedPath skip_all;
    for (int i = 0; i < n; ++i) skip_all.steps.push_back({i, Rat(0)});
    skip_all.steps.push_back({vpaid, Rat(1)});
    skip_all.final_vertex = u1;
    baseline.strategies = {skip_all, TimedPath{{{s2, Rat(mu)}, {vpaid, Rat(1)}}, u2}};
    inst.profiles.emplace("baseline", std::move(baseline));
    return inst;
}

/// Congestion variant: two fixed players tile [0, mu] and [mu + 1, S + 1];
/// player 1 travels alone exactly when her subset sums to mu.
inline Instance subset_sum_con(const std::vector<long>& items, long mu) {
    Instance inst;
    inst.name = "subset-sum-con";
    Tng& g = inst.game;
    g.network.clock_names = {"x"};
    detail_ss::subset_chain(g, items);
    const int n = static_cast<int>(items.size());
    long total = 0;
    for (long a : items) total += a;
    if (mu < 0) throw ModelError("subset-sum-con expects mu >= 0");
    // Player 3 blocks every window after mu; one unit suffices when the
    // item sum does not reach past mu.
    const long tail = std::max(total - mu, 1L);
    const int vpaid = n;
    const int u1 = n + 1, u2 = n + 2, u3 = n + 3, s2 = n + 4, s3 = n + 5;
    for (const char* name : {"u1", "u2", "u3", "s2", "s3"})
        g.network.vertex_names.push_back(name);
    g.latency.assign(static_cast<size_t>(n), LatencyFunction::zero());
    g.latency.push_back(LatencyFunction::congestion({Rat(1), Rat(2), Rat(3)}));
    for (int i = 0; i < 5; ++i) g.latency.push_back(LatencyFunction::zero());
    g.network.edges.push_back({vpaid, u1, Guard{{{0, CmpOp::Eq, 1}}}, {}});
    g.network.edges.push_back({vpaid, u2, Guard{{{0, CmpOp::Eq, mu}}}, {}});
    g.network.edges.push_back({vpaid, u3, Guard{{{0, CmpOp::Eq, tail}}}, {}});
    g.network.edges.push_back({s2, vpaid, Guard{{{0, CmpOp::Eq, 0}}}, {}});
    g.network.edges.push_back({s3, vpaid, Guard{{{0, CmpOp::Eq, mu + 1}}}, {0}});
    g.player_count = 3;
    g.objectives = {{0, u1}, {s2, u2}, {s3, u3}};
    Profile baseline;
    TimedPath skip_all;
    for (int i = 0; i < n; ++i) skip_all.steps.push_back({i, Rat(0)});
    skip_all.steps.push_back({vpaid, Rat(1)});
    skip_all.final_vertex = u1;
    baseline.strategies = {skip_all,
                           TimedPath{{{s2, Rat(0)}, {vpaid, Rat(mu)}}, u2},
                           TimedPath{{{s3, Rat(mu + 1)}, {vpaid, Rat(tail)}}, u3}};
    inst.profiles.emplace("baseline", std::move(baseline));
    return inst;
}

}  // namespace fixtures

}  // namespace tng

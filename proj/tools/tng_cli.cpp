#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tng/equilibria.hpp"
#include "tng/io.hpp"
#include "tng/oracle.hpp"

namespace {

using namespace tng;

struct CommonOpts {
    std::string instance_path;
    std::string profile_name = "";
    std::string format = "text";
    std::string output = "";
    int player = 1;
    size_t budget = 10'000'000;
    long horizon = 8;
    int max_steps = 6;
    size_t max_paths = 200'000;
};

Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open instance file: " + path);
    Json j;
    in >> j;
    return load_instance(j);
}

const Profile& pick_profile(const Instance& inst, const std::string& name) {
    if (!name.empty()) {
        auto it = inst.profiles.find(name);
        if (it == inst.profiles.end()) throw ModelError("no profile named " + name);
        return it->second;
    }
    if (inst.profiles.size() == 1) return inst.profiles.begin()->second;
    throw ModelError("instance has " + std::to_string(inst.profiles.size()) +
                     " profiles, pick one with --profile");
}

void emit(const CommonOpts& opts, const Json& report) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!opts.output.empty()) {
        file.open(opts.output);
        if (!file) throw ModelError("cannot open output file: " + opts.output);
        out = &file;
    }
    if (opts.format == "json") {
        *out << report.dump(2) << "\n";
        return;
    }
    for (const auto& [key, value] : report.items()) {
        if (value.is_string())
            *out << key << ": " << value.get<std::string>() << "\n";
        else
            *out << key << ": " << value.dump() << "\n";
    }
}

Json profile_json(const Instance& inst, const Profile& profile) {
    Json arr = Json::array();
    for (const TimedPath& p : profile.strategies)
        arr.push_back(path_to_json(inst.game.network, p));
    return arr;
}

Json base_report(const Instance& inst, const std::string& command) {
    return {{"command", command},
            {"instance", inst.name},
            {"instance_digest", instance_digest(inst)}};
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_instance = true) {
    auto* o = cmd->add_option("--instance", opts.instance_path, "instance JSON file");
    if (needs_instance) o->required();
    cmd->add_option("--format", opts.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--output", opts.output, "write the report to a file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solvers for timed network games"};
    app.require_subcommand(1);
    CommonOpts opts;

    auto* c_validate = app.add_subcommand("validate", "parse and validate an instance");
    add_common(c_validate, opts);

    auto* c_cost = app.add_subcommand("cost", "exact per-player costs of a profile");
    add_common(c_cost, opts);
    c_cost->add_option("--profile", opts.profile_name, "profile name");

    auto* c_potential = app.add_subcommand("potential", "Rosenthal potential of a profile");
    add_common(c_potential, opts);
    c_potential->add_option("--profile", opts.profile_name, "profile name");

    auto* c_br = app.add_subcommand("best-response",
                                    "exact best response of one player");
    add_common(c_br, opts);
    c_br->add_option("--profile", opts.profile_name, "profile name");
    c_br->add_option("--player", opts.player, "player index, 1-based")->required();
    c_br->add_option("--budget", opts.budget, "search state budget");

    auto* c_nash = app.add_subcommand(
        "nash", "best response dynamics to a Nash equilibrium");
    add_common(c_nash, opts);
    c_nash->add_option("--seed", opts.profile_name,
                       "seed profile name (default: the social optimum)");
    c_nash->add_option("--budget", opts.budget, "search state budget");

    auto* c_so = app.add_subcommand("social-optimum", "exact social optimum");
    add_common(c_so, opts);
    c_so->add_option("--budget", opts.budget, "search state budget");

    auto* c_ineff = app.add_subcommand(
        "inefficiency", "equilibrium cost against the social optimum");
    add_common(c_ineff, opts);
    c_ineff->add_option("--profile", opts.profile_name,
                        "equilibrium profile name (default: run the dynamics)");
    c_ineff->add_option("--budget", opts.budget, "search state budget");

    auto* c_oracle = app.add_subcommand(
        "oracle", "brute-force best response and social optimum");
    add_common(c_oracle, opts);
    c_oracle->add_option("--profile", opts.profile_name, "profile name");
    c_oracle->add_option("--player", opts.player,
                         "player for the best response oracle, 1-based");
    c_oracle->add_option("--horizon", opts.horizon, "enumeration end time cap");
    c_oracle->add_option("--max-steps", opts.max_steps, "crossings per strategy");
    c_oracle->add_option("--max-paths", opts.max_paths, "enumerated path cap");

    auto* c_horizon = app.add_subcommand(
        "horizon", "termination bounds for the search and the dynamics");
    add_common(c_horizon, opts);
    c_horizon->add_option("--budget", opts.budget, "search state budget");

    auto* c_gen = app.add_subcommand("gen", "emit a built-in fixture");
    std::string fixture;
    std::vector<long> params;
    c_gen->add_option("--fixture", fixture,
                      "example1 | fig2 | cs-prime | congestion-polygon | "
                      "subset-sum-cs | subset-sum-con")
        ->required();
    c_gen->add_option("--params", params,
                      "cs-prime: cycle lengths; congestion-polygon: p1 p2; "
                      "subset-sum-*: items then mu");
    c_gen->add_option("--format", opts.format)->check(CLI::IsMember({"text", "json"}));
    c_gen->add_option("--output", opts.output, "write the instance to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_gen->parsed()) {
            Instance inst;
            if (fixture == "example1") inst = fixtures::example1();
            else if (fixture == "fig2") inst = fixtures::fig2();
            else if (fixture == "cs-prime") {
                if (params.size() < 2)
                    throw ModelError("cs-prime needs at least two cycle lengths");
                inst = fixtures::cs_prime(params);
            } else if (fixture == "congestion-polygon") {
                if (params.size() != 2)
                    throw ModelError("congestion-polygon needs exactly p1 p2");
                inst = fixtures::congestion_polygon(params[0], params[1]);
            } else if (fixture == "subset-sum-cs" || fixture == "subset-sum-con") {
                if (params.size() < 2)
                    throw ModelError(fixture + " needs items followed by mu");
                std::vector<long> items(params.begin(), params.end() - 1);
                inst = fixture == "subset-sum-cs"
                           ? fixtures::subset_sum_cs(items, params.back())
                           : fixtures::subset_sum_con(items, params.back());
            } else {
                throw ModelError("unknown fixture: " + fixture);
            }
            const Json j = instance_to_json(inst);
            if (!opts.output.empty()) {
                std::ofstream out(opts.output);
                if (!out) throw ModelError("cannot open output file: " + opts.output);
                out << j.dump(2) << "\n";
            } else {
                std::cout << j.dump(2) << "\n";
            }
            return 0;
        }

        Instance inst = read_instance(opts.instance_path);
        const SearchLimits limits{opts.budget};
        const SoLimits so_limits{opts.budget};

        if (c_validate->parsed()) {
            Json rep = base_report(inst, "validate");
            rep["valid"] = true;
            rep["players"] = inst.game.player_count;
            rep["vertices"] = inst.game.network.vertex_count();
            rep["clocks"] = inst.game.network.clock_count();
            rep["max_constant"] = max_constant(inst.game.network);
            emit(opts, rep);
        } else if (c_cost->parsed()) {
            const Profile& p = pick_profile(inst, opts.profile_name);
            const ProfileCosts c = cost_of(inst.game, p);
            Json rep = base_report(inst, "cost");
            Json per = Json::array();
            for (const Rat& x : c.per_player) per.push_back(rat_to_string(x));
            rep["per_player"] = per;
            rep["total"] = rat_to_string(c.total);
            emit(opts, rep);
        } else if (c_potential->parsed()) {
            const Profile& p = pick_profile(inst, opts.profile_name);
            Json rep = base_report(inst, "potential");
            rep["potential"] = rat_to_string(potential(inst.game, p));
            emit(opts, rep);
        } else if (c_br->parsed()) {
            const Profile& p = pick_profile(inst, opts.profile_name);
            if (opts.player < 1 || opts.player > inst.game.player_count)
                throw ModelError("player index out of range");
            const BrResult br = best_response(inst.game, p, opts.player - 1, limits);
            Json rep = base_report(inst, "best-response");
            rep["player"] = opts.player;
            rep["current_cost"] = rat_to_string(br.current_cost);
            rep["best_cost"] = rat_to_string(br.best_cost);
            rep["improves"] = br.improved();
            if (br.improved())
                rep["deviation"] = path_to_json(inst.game.network, *br.deviation);
            emit(opts, rep);
        } else if (c_nash->parsed()) {
            Profile seed = opts.profile_name.empty()
                               ? social_optimum(inst.game, limits, so_limits).profile
                               : pick_profile(inst, opts.profile_name);
            auto [ne, trace] = find_ne(inst.game, std::move(seed), limits);
            Json rep = base_report(inst, "nash");
            rep["steps"] = trace.steps.size();
            Json steps = Json::array();
            for (const DynamicsStep& s : trace.steps)
                steps.push_back({{"player", s.player + 1},
                                 {"cost_before", rat_to_string(s.cost_before)},
                                 {"cost_after", rat_to_string(s.cost_after)},
                                 {"potential_before", rat_to_string(s.potential_before)},
                                 {"potential_after", rat_to_string(s.potential_after)}});
            rep["trace"] = steps;
            rep["equilibrium"] = profile_json(inst, ne);
            rep["equilibrium_cost"] = rat_to_string(cost_of(inst.game, ne).total);
            emit(opts, rep);
        } else if (c_so->parsed()) {
            const SoResult so = social_optimum(inst.game, limits, so_limits);
            Json rep = base_report(inst, "social-optimum");
            rep["cost"] = rat_to_string(so.cost);
            rep["end_time"] = so.end_time;
            rep["profile"] = profile_json(inst, so.profile);
            emit(opts, rep);
        } else if (c_ineff->parsed()) {
            Profile ne = opts.profile_name.empty()
                             ? find_ne(inst.game,
                                       social_optimum(inst.game, limits, so_limits).profile,
                                       limits)
                                   .first
                             : pick_profile(inst, opts.profile_name);
            const NeCheck check = is_ne(inst.game, ne, limits);
            if (!check.is_equilibrium)
                throw ModelError("profile is not an equilibrium: player " +
                                 std::to_string(check.player + 1) + " can improve from " +
                                 rat_to_string(check.current_cost) + " to " +
                                 rat_to_string(check.best_cost));
            const InefficiencyReport r = inefficiency(inst.game, ne, limits, so_limits);
            Json rep = base_report(inst, "inefficiency");
            rep["so_cost"] = rat_to_string(r.so_cost);
            rep["ne_cost"] = rat_to_string(r.ne_cost);
            rep["ratio"] = r.ratio_finite ? Json(rat_to_string(r.ratio)) : Json("inf");
            rep["family"] = r.family == LatencyFamily::CostSharing ? "cost_sharing"
                            : r.family == LatencyFamily::AffineCongestion
                                ? "affine_congestion"
                                : "general";
            rep["pos_family_bound"] = r.pos_bound;
            if (r.has_poa_bound) {
                rep["poa_bound"] = rat_to_string(r.poa_bound);
                rep["poa_bound_holds"] = r.poa_bound_holds;
            }
            emit(opts, rep);
        } else if (c_oracle->parsed()) {
            const EnumerationBudget budget{opts.horizon, opts.max_steps, opts.max_paths};
            Json rep = base_report(inst, "oracle");
            if (!opts.profile_name.empty() || !inst.profiles.empty()) {
                const Profile& p = pick_profile(inst, opts.profile_name);
                if (opts.player < 1 || opts.player > inst.game.player_count)
                    throw ModelError("player index out of range");
                std::vector<TimedPath> others;
                for (size_t i = 0; i < p.strategies.size(); ++i)
                    if (static_cast<int>(i) != opts.player - 1)
                        others.push_back(p.strategies[i]);
                const OracleBr br = oracle_br(inst.game, others, opts.player - 1, budget);
                rep["player"] = opts.player;
                rep["br_cost"] = rat_to_string(br.best_cost);
                rep["br_candidates"] = br.candidates;
            }
            const OracleSo so = oracle_so(inst.game, budget);
            rep["so_cost"] = rat_to_string(so.best_cost);
            rep["so_candidates"] = so.candidates;
            emit(opts, rep);
        } else if (c_horizon->parsed()) {
            Pta pta{inst.game.network,
                    std::vector<Rat>(static_cast<size_t>(inst.game.network.vertex_count()),
                                     Rat(0))};
            Json rep = base_report(inst, "horizon");
            rep["abstract_states"] = horizon(pta).get_str();
            const NeTimeBound b = ne_time_bound(inst.game, limits, so_limits);
            rep["dynamics_potential_bound"] = b.potential_bound.get_str();
            rep["ne_time_bound"] = b.bound.get_str();
            rep["ne_time_bound_padded"] = b.padded_bound.get_str();
            emit(opts, rep);
        }
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        std::cerr << "error: malformed instance: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

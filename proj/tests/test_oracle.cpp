#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "tng/equilibria.hpp"
#include "tng/io.hpp"
#include "tng/oracle.hpp"

using namespace tng;

TEST_CASE("strategy enumeration lists exactly the legal integral paths") {
    Instance inst = fixtures::fig2();
    // From s2, the only freedom is when to cross into v2; the exit guard
    // pins the total time to 2.
    const std::vector<TimedPath> all =
        enum_strategies(inst.game.network, 1, 4, EnumerationBudget{8, 6, 1000});
    REQUIRE(all.size() == 3);
    for (const TimedPath& p : all) {
        CHECK(p.end_time() == 2);
        CHECK(is_legal(check_legal(inst.game.network, p)));
        CHECK(p.final_vertex == 4);
    }
    // Ordered lexicographically once end time and length tie.
    CHECK(all[0].steps[0].dwell == 0);
    CHECK(all[1].steps[0].dwell == 1);
    CHECK(all[2].steps[0].dwell == 2);

    CHECK(enum_strategies(inst.game.network, 0, 4, EnumerationBudget{8, 6, 1000}).empty());
}

TEST_CASE("enumeration deduplicates parallel edges") {
    TimedNetwork net;
    net.clock_names = {"x"};
    net.vertex_names = {"a", "b"};
    net.edges.push_back({0, 1, Guard{{{0, CmpOp::Le, 2}}}, {}});
    net.edges.push_back({0, 1, Guard{{{0, CmpOp::Le, 3}}}, {0}});
    const std::vector<TimedPath> all =
        enum_strategies(net, 0, 1, EnumerationBudget{3, 1, 1000});
    REQUIRE(all.size() == 4);  // dwell 0..3, each counted once
    for (size_t i = 0; i < all.size(); ++i) CHECK(all[i].steps[0].dwell == Rat(static_cast<long>(i)));
}

TEST_CASE("enumeration budgets are enforced") {
    Instance inst = fixtures::example1();
    CHECK_THROWS_AS(enum_strategies(inst.game.network, 0, 3, EnumerationBudget{8, 6, 1}),
                    BudgetError);
    // A horizon below the guards leaves no strategy at all.
    CHECK(enum_strategies(inst.game.network, 0, 3, EnumerationBudget{2, 6, 1000}).empty());
}

TEST_CASE("oracle best response matches the engine on the fixtures") {
    Instance inst = fixtures::example1();
    const Profile& canonical = inst.profiles.at("canonical");
    for (int player = 0; player < 2; ++player) {
        std::vector<TimedPath> others;
        for (int i = 0; i < 2; ++i)
            if (i != player) others.push_back(canonical.strategies[static_cast<size_t>(i)]);
        const OracleBr oracle = oracle_br(inst.game, others, player,
                                          EnumerationBudget{8, 6, 10'000});
        const BrResult engine = best_response(inst.game, canonical, player);
        CHECK(oracle.best_cost == engine.best_cost);
    }
}

TEST_CASE("oracle social optimum matches the engine on the fixtures") {
    const EnumerationBudget budget{8, 6, 100'000};
    Instance e1 = fixtures::example1();
    CHECK(oracle_so(e1.game, budget).best_cost == social_optimum(e1.game).cost);
    Instance prime = fixtures::cs_prime({2, 3});
    const OracleSo so = oracle_so(prime.game, budget);
    CHECK(so.best_cost == 1);
    CHECK(so.best_cost == social_optimum(prime.game).cost);
}

TEST_CASE("profile enumeration budget is enforced") {
    Instance prime = fixtures::cs_prime({2, 3});
    CHECK_THROWS_AS(oracle_so(prime.game, EnumerationBudget{8, 6, 2}), BudgetError);
}

TEST_CASE("slicing recomputation is exact on mixed denominators") {
    Instance inst = fixtures::example1();
    Profile p = inst.profiles.at("canonical");
    p.strategies[0].steps[1].dwell = Rat(3, 2);
    const ProfileCosts a = cost_of(inst.game, p);
    const ProfileCosts b = slice_cost(inst.game, p);
    CHECK(a.per_player == b.per_player);
    CHECK(a.total == b.total);
}

TEST_CASE("half grid dynamic program agrees with the search engine") {
    std::mt19937 rng(53);
    std::uniform_int_distribution<long> num(0, 4);
    std::uniform_int_distribution<long> den(1, 3);
    for (int round = 0; round < 25; ++round) {
        testing::GeneratedGame gg = testing::random_game(rng);
        Pta pta{gg.game.network, {}};
        for (int v = 0; v < gg.game.network.vertex_count(); ++v)
            pta.rates.push_back(make_rat(num(rng), den(rng)));
        const int s = gg.game.objectives[0].source;
        const int t = gg.game.objectives[0].target;
        const std::optional<PricedPath> w = cor(pta, s, t);
        REQUIRE(w.has_value());
        const std::optional<Rat> dp = half_grid_optimum(pta, s, t, w->end_time + 2);
        REQUIRE(dp.has_value());
        CHECK(*dp == w->price);
    }
}

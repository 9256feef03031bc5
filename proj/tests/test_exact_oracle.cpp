#include <doctest.h>

#include "hmp/exact_oracle.hpp"
#include "test_support.hpp"

using namespace hmp;
using hmp_test::InstanceBuilder;
using hmp_test::make_train;
using hmp_test::tiny_regulations;

TEST_CASE("one unconstrained train is delivered as late as possible") {
    RegulationTable regs = default_regulations();
    regs.rules[MaintenanceLevel::III].left_offset_km = 0;
    regs.rules[MaintenanceLevel::III].right_offset_km = 2 * 1600.0;
    const Instance inst = InstanceBuilder{}
                              .regs(regs)
                              .train(make_train("A", 100, 1600, MaintenanceLevel::III))
                              .build();

    const OracleResult result = solve_exact(inst);
    CHECK(result.searched_count == 3);
    CHECK(result.feasible_count == 3);
    REQUIRE(result.optimum.has_value());
    CHECK(result.optimum->day_of("A") == 102);
    CHECK(result.optimum_loss == doctest::Approx(-2 * 1600.0));
}

TEST_CASE("two trains forced to overlap under capacity one are infeasible") {
    RegulationTable regs = tiny_regulations();
    regs.rules[MaintenanceLevel::III].left_offset_km = 0;
    regs.rules[MaintenanceLevel::III].right_offset_km = 1500.0;  // window [50, 51]
    regs.rules[MaintenanceLevel::III].service_days = 3;
    const Instance inst = InstanceBuilder{}
                              .regs(regs)
                              .train(make_train("A", 50, 1500, MaintenanceLevel::III))
                              .train(make_train("B", 50, 1500, MaintenanceLevel::III))
                              .aggregate_capacity(1)
                              .build();

    const OracleResult result = solve_exact(inst);
    CHECK(result.searched_count == 4);
    CHECK(result.feasible_count == 0);
    CHECK_FALSE(result.optimum.has_value());
}

TEST_CASE("node limit is enforced with the offending product") {
    const Instance inst = hmp_test::small_instance(5, 6);
    OracleLimits limits;
    limits.max_nodes = 10;
    CHECK_THROWS_AS(solve_exact(inst, limits), ValidationError);
}

TEST_CASE("pruned and unpruned searches agree on 30 random instances") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Instance inst = hmp_test::small_instance(seed, 4);
        OracleLimits pruned;
        OracleLimits unpruned;
        unpruned.prune = false;
        const OracleResult a = solve_exact(inst, pruned);
        const OracleResult b = solve_exact(inst, unpruned);
        CHECK(a.searched_count == b.searched_count);
        CHECK(a.feasible_count == b.feasible_count);
        REQUIRE(a.optimum.has_value() == b.optimum.has_value());
        if (a.optimum) {
            CHECK(a.optimum_loss == doctest::Approx(b.optimum_loss));
            CHECK(a.optimum->delivery == b.optimum->delivery);  // identical tie-break
        }
    }
}

TEST_CASE("result does not depend on the thread count") {
    for (std::uint64_t seed = 40; seed < 46; ++seed) {
        const Instance inst = hmp_test::small_instance(seed, 5);
        OracleLimits one;
        OracleLimits four;
        four.threads = 4;
        const OracleResult a = solve_exact(inst, one);
        const OracleResult b = solve_exact(inst, four);
        CHECK(a.feasible_count == b.feasible_count);
        REQUIRE(a.optimum.has_value() == b.optimum.has_value());
        if (a.optimum) {
            CHECK(a.optimum_loss == b.optimum_loss);
            CHECK(a.optimum->delivery == b.optimum->delivery);
        }
    }
}

TEST_CASE("every reported optimum evaluates as feasible") {
    int found = 0;
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const Instance inst = hmp_test::small_instance(seed, 4);
        const OracleResult result = solve_exact(inst);
        if (!result.optimum) continue;
        ++found;
        const Evaluation eval = evaluate(inst, *result.optimum);
        CHECK(eval.feasible);
        CHECK(eval.mileage_loss == doctest::Approx(result.optimum_loss));
    }
    CHECK(found > 0);
}

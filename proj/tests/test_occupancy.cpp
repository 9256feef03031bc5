#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "hmp/occupancy.hpp"
#include "test_support.hpp"

using namespace hmp;
using hmp_test::make_train;
using hmp_test::simulate_days;

TEST_CASE("next expiry follows the cycle formula") {
    CHECK(next_expiry(10, 25, 600'000, 1600) == doctest::Approx(410.0));
    CHECK(next_expiry(1, 0, 0, 1600) == doctest::Approx(1.0));
    CHECK(next_expiry(96, 40, 600'000, 1800) == doctest::Approx(469.3333333));
    CHECK_THROWS_AS(next_expiry(1, 1, 1000, 0.0), ConfigError);
}

namespace {

RegulationTable regs_with(int service_iii, int service_next, double interval) {
    RegulationTable regs;
    regs.cycle_interval_km = interval;
    regs.rules[MaintenanceLevel::III] = {MaintenanceLevel::III, 600'000, 50'000, 20'000,
                                         service_iii, 3};
    regs.rules[MaintenanceLevel::IV] = {MaintenanceLevel::IV, 1'200'000, 100'000, 50'000,
                                        service_next, 2};
    regs.rules[MaintenanceLevel::V] = {MaintenanceLevel::V, 2'400'000, 100'000, 100'000, 60, 1};
    return regs;
}

}  // namespace

TEST_CASE("interval construction matches the worked cases") {
    SUBCASE("no carryover, next maintenance beyond the horizon") {
        const auto regs = regs_with(40, 40, 600'000);
        const auto train = make_train("T", 127, 1600, MaintenanceLevel::III);
        const auto occ = occupancy_intervals(train, 96, regs, 208);
        CHECK_FALSE(occ.carryover.has_value());
        CHECK(occ.current.begin == 96);
        CHECK(occ.current.end == 136);
        CHECK_FALSE(occ.next.has_value());
    }

    SUBCASE("carryover reaching into the horizon is clipped at day 0") {
        const auto regs = regs_with(40, 40, 600'000);
        auto train = make_train("T", 160, 1600, MaintenanceLevel::III);
        train.carryover = Carryover{-10, 25, std::nullopt};
        const auto occ = occupancy_intervals(train, 150, regs, 208);
        REQUIRE(occ.carryover.has_value());
        CHECK(occ.carryover->begin == 0);
        CHECK(occ.carryover->end == 15);
        CHECK(occ.current.begin == 150);
        CHECK(occ.current.end == 190);
    }

    SUBCASE("early delivery brings the next maintenance inside the horizon") {
        const auto regs = regs_with(10, 10, 100 * 1600.0);  // 100 running days per cycle
        const auto train = make_train("T", 5, 1600, MaintenanceLevel::III,
                                      MaintenanceLevel::IV);
        const auto occ = occupancy_intervals(train, 1, regs, 200);
        CHECK(occ.current.begin == 1);
        CHECK(occ.current.end == 11);
        REQUIRE(occ.next.has_value());
        CHECK(occ.next->begin == 111);
        CHECK(occ.next->end == 121);
        CHECK(occ.next->level == MaintenanceLevel::IV);
    }
}

TEST_CASE("state function basics") {
    const auto regs = regs_with(25, 40, 600'000);
    const auto train = make_train("T", 127, 1600, MaintenanceLevel::III);
    CHECK(state(train, 96, 96, regs, 208) == 1);   // interval start inclusive
    CHECK(state(train, 96, 121, regs, 208) == 1);  // interval end inclusive
    CHECK(state(train, 96, 122, regs, 208) == 0);  // strictly between intervals
    CHECK(state(train, 96, 0, regs, 208) == 0);
}

TEST_CASE("state matches the day-stepping simulator on 1000 random configurations") {
    std::mt19937 gen(2024);
    int checked = 0;
    while (checked < 1000) {
        RegulationTable regs = regs_with(1 + int(gen() % 30), 1 + int(gen() % 30),
                                         double(20'000 + gen() % 600'000));
        auto train = make_train("T", 10 + int(gen() % 150), 1400 + double(gen() % 500),
                                kAllLevels[gen() % 3], kAllLevels[gen() % 3]);
        regs.rules[train.level].service_days = 1 + int(gen() % 30);
        if (gen() % 3 == 0) {
            Carryover c;
            c.duration_days = 1 + int(gen() % 40);
            c.start_day = -int(gen() % 50);
            if (gen() % 2 == 0) c.level = kAllLevels[gen() % 3];
            train.carryover = c;
        }
        const TimeWindow w = compute_window(train, regs);
        const int horizon = w.end_day + int(gen() % 200);
        const int delivery = w.begin_day + int(gen() % w.width());

        const auto expected = simulate_days(train, delivery, regs, horizon);
        for (int t = 0; t <= horizon; ++t) {
            REQUIRE(state(train, delivery, t, regs, horizon) == expected[t]);
        }
        ++checked;
    }
}

TEST_CASE("state sums to the clipped interval lengths") {
    std::mt19937 gen(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto regs = regs_with(1 + int(gen() % 20), 1 + int(gen() % 20),
                                    double(50'000 + gen() % 400'000));
        auto train = make_train("T", 20 + int(gen() % 100), 1500, kAllLevels[gen() % 3]);
        if (gen() % 2 == 0) train.carryover = Carryover{-int(gen() % 20), 1 + int(gen() % 20)};
        const TimeWindow w = compute_window(train, regs);
        const int horizon = w.end_day + 50;
        const int delivery = w.begin_day + int(gen() % w.width());

        const auto occ = occupancy_intervals(train, delivery, regs, horizon);
        int total = 0;
        for (int t = 0; t <= horizon; ++t) total += state(train, delivery, t, regs, horizon);

        // Union of the clipped intervals; carryover may overlap the current
        // interval, so the union can be shorter than the summed lengths.
        std::vector<char> marked(horizon + 1, 0);
        auto mark = [&](const DayInterval& iv) {
            for (int t = std::max(0, iv.begin); t <= std::min(horizon, iv.end); ++t) {
                marked[t] = 1;
            }
        };
        if (occ.carryover) mark(*occ.carryover);
        mark(occ.current);
        if (occ.next) mark(*occ.next);
        const int union_days = int(std::count(marked.begin(), marked.end(), 1));
        CHECK(total == union_days);
        CHECK(total <= occ.total_days());

        // Dropping carryover only zeroes days, never adds any.
        auto bare = train;
        bare.carryover.reset();
        for (int t = 0; t <= horizon; ++t) {
            CHECK(state(bare, delivery, t, regs, horizon) <=
                  state(train, delivery, t, regs, horizon));
        }
    }
}

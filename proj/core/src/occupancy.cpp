#include "hmp/occupancy.hpp"

#include <algorithm>
#include <cmath>

namespace hmp {

double next_expiry(int delivery_day, int service_days, double cycle_interval_km,
                   double daily_mileage_km) {
    if (daily_mileage_km <= 0.0) {
        throw ConfigError("next_expiry: daily mileage must be positive");
    }
    return delivery_day + service_days + cycle_interval_km / daily_mileage_km;
}

OccupancyIntervals occupancy_intervals(const TrainRecord& train, int delivery_day,
                                       const RegulationTable& regs, int horizon) {
    const LevelRule& rule = regs.rule(train.level);
    OccupancyIntervals out;

    if (train.carryover) {
        const Carryover& c = *train.carryover;
        const int end = c.start_day + c.duration_days;
        if (end > 0 && c.start_day <= horizon) {
            out.carryover = DayInterval{std::max(0, c.start_day), std::min(horizon, end),
                                        c.level.value_or(train.level)};
        }
    }

    out.current = DayInterval{delivery_day, std::min(horizon, delivery_day + rule.service_days),
                              train.level};

    const int next_start = static_cast<int>(std::floor(next_expiry(
        delivery_day, rule.service_days, regs.cycle_interval_km, train.daily_mileage_km)));
    if (next_start <= horizon) {
        const int next_service = regs.rule(train.next_level).service_days;
        out.next = DayInterval{next_start, std::min(horizon, next_start + next_service),
                               train.next_level};
    }
    return out;
}

int state(const TrainRecord& train, int delivery_day, int day, const RegulationTable& regs,
          int horizon) {
    return occupancy_intervals(train, delivery_day, regs, horizon).covers(day) ? 1 : 0;
}

}  // namespace hmp

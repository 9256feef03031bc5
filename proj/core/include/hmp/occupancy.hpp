#ifndef HMP_OCCUPANCY_HPP
#define HMP_OCCUPANCY_HPP

#include <optional>

#include "hmp/fleet_model.hpp"

namespace hmp {

/// Inclusive day interval tagged with the level it counts against for
/// per-level capacity accounting.
struct DayInterval {
    int begin = 0;
    int end = 0;
    MaintenanceLevel level = MaintenanceLevel::III;

    int length_days() const { return end - begin + 1; }
    bool contains(int day) const { return day >= begin && day <= end; }

    friend bool operator==(const DayInterval&, const DayInterval&) = default;
};

/// The up-to-three maintenance intervals of one train within [0, T]:
/// carryover from the previous horizon, the planned maintenance, and the
/// possible next-cycle maintenance falling into the same horizon.
struct OccupancyIntervals {
    std::optional<DayInterval> carryover;
    DayInterval current;
    std::optional<DayInterval> next;

    bool covers(int day) const {
        return (carryover && carryover->contains(day)) || current.contains(day) ||
               (next && next->contains(day));
    }
    int total_days() const {
        return (carryover ? carryover->length_days() : 0) + current.length_days() +
               (next ? next->length_days() : 0);
    }
};

/// Expiry time of the next maintenance after a delivery on `delivery_day`:
/// tau + service_days + cycle_interval / daily_mileage. Real-valued; callers
/// floor it to a day index.
double next_expiry(int delivery_day, int service_days, double cycle_interval_km,
                   double daily_mileage_km);

/// All maintenance intervals of `train` clipped to [0, horizon] when it is
/// delivered on `delivery_day`.
OccupancyIntervals occupancy_intervals(const TrainRecord& train, int delivery_day,
                                       const RegulationTable& regs, int horizon);

/// Binary state function: 1 iff the train is under maintenance on `day`.
int state(const TrainRecord& train, int delivery_day, int day, const RegulationTable& regs,
          int horizon);

}  // namespace hmp

#endif

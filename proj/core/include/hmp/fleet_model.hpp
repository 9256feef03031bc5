#ifndef HMP_FLEET_MODEL_HPP
#define HMP_FLEET_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hmp/errors.hpp"

namespace hmp {

/// High-level maintenance levels. Levels I/II (operational) are out of scope.
enum class MaintenanceLevel { III = 3, IV = 4, V = 5 };

inline constexpr MaintenanceLevel kAllLevels[] = {MaintenanceLevel::III,
                                                  MaintenanceLevel::IV,
                                                  MaintenanceLevel::V};

std::string to_string(MaintenanceLevel level);
std::optional<MaintenanceLevel> level_from_string(const std::string& s);

/// Regulation row for one maintenance level: target mileage, the window
/// offsets around it, how long the service takes and how many trains the
/// workshop can hold at that level.
struct LevelRule {
    MaintenanceLevel level = MaintenanceLevel::III;
    double target_mileage_km = 0.0;
    double left_offset_km = 0.0;
    double right_offset_km = 0.0;
    int service_days = 1;
    int capacity = 1;

    friend bool operator==(const LevelRule&, const LevelRule&) = default;
};

/// Full regulation table: one rule per level plus the mileage spacing between
/// adjacent high-level maintenances.
struct RegulationTable {
    std::map<MaintenanceLevel, LevelRule> rules;
    double cycle_interval_km = 0.0;

    const LevelRule& rule(MaintenanceLevel level) const;
    bool has_rule(MaintenanceLevel level) const { return rules.count(level) > 0; }

    friend bool operator==(const RegulationTable&, const RegulationTable&) = default;
};

/// Maintenance begun before the horizon that still occupies workshop days.
/// `level` is the level of that previous maintenance; when absent the train's
/// current level is assumed.
struct Carryover {
    int start_day = 0;  // may be <= 0
    int duration_days = 1;
    std::optional<MaintenanceLevel> level;

    friend bool operator==(const Carryover&, const Carryover&) = default;
};

/// One EMU train of the fleet.
struct TrainRecord {
    std::string id;
    int unit_count = 1;            // train units of eight cars
    double daily_mileage_km = 0.0;
    int expired_day = 1;           // theoretical maintenance expiry day
    MaintenanceLevel level = MaintenanceLevel::III;
    MaintenanceLevel next_level = MaintenanceLevel::III;
    std::optional<Carryover> carryover;

    friend bool operator==(const TrainRecord&, const TrainRecord&) = default;
};

/// Inclusive integer day range within which a train may be delivered.
struct TimeWindow {
    int begin_day = 1;
    int end_day = 1;

    int width() const { return end_day - begin_day + 1; }
    bool contains(int day) const { return day >= begin_day && day <= end_day; }

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Delivery window for a train. Fractional bounds round toward the window
/// center (ceil on begin, floor on end); the begin is clamped to day 1.
TimeWindow compute_window(const TrainRecord& train, const RegulationTable& regs);

/// Horizon length T: the latest window end across the fleet.
int planning_horizon(const std::vector<TrainRecord>& trains, const RegulationTable& regs);

}  // namespace hmp

#endif

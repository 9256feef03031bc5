#include "hmp/fleet_model.hpp"

#include <algorithm>
#include <cmath>

namespace hmp {

std::string to_string(MaintenanceLevel level) {
    switch (level) {
        case MaintenanceLevel::III: return "III";
        case MaintenanceLevel::IV: return "IV";
        case MaintenanceLevel::V: return "V";
    }
    return "?";
}

std::optional<MaintenanceLevel> level_from_string(const std::string& s) {
    if (s == "III") return MaintenanceLevel::III;
    if (s == "IV") return MaintenanceLevel::IV;
    if (s == "V") return MaintenanceLevel::V;
    return std::nullopt;
}

const LevelRule& RegulationTable::rule(MaintenanceLevel level) const {
    auto it = rules.find(level);
    if (it == rules.end()) {
        throw ConfigError("no regulation rule for level " + to_string(level));
    }
    return it->second;
}

TimeWindow compute_window(const TrainRecord& train, const RegulationTable& regs) {
    if (train.daily_mileage_km <= 0.0) {
        throw ConfigError("train " + train.id + ": daily mileage must be positive");
    }
    const LevelRule& rule = regs.rule(train.level);

    const double lower = train.expired_day - rule.left_offset_km / train.daily_mileage_km;
    const double upper = train.expired_day + rule.right_offset_km / train.daily_mileage_km;

    TimeWindow window;
    window.begin_day = std::max(1, static_cast<int>(std::ceil(lower)));
    window.end_day = static_cast<int>(std::floor(upper));
    if (window.begin_day > window.end_day) {
        throw InfeasibleTrainError("train " + train.id + ": empty delivery window [" +
                                   std::to_string(window.begin_day) + ", " +
                                   std::to_string(window.end_day) + "]");
    }
    return window;
}

int planning_horizon(const std::vector<TrainRecord>& trains, const RegulationTable& regs) {
    if (trains.empty()) {
        throw ValidationError("planning horizon requires a non-empty fleet");
    }
    int horizon = 0;
    for (const TrainRecord& train : trains) {
        horizon = std::max(horizon, compute_window(train, regs).end_day);
    }
    return horizon;
}

}  // namespace hmp

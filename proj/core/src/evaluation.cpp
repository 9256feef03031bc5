#include "hmp/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace hmp {

namespace {

int level_index(MaintenanceLevel level) { return static_cast<int>(level) - 3; }

void throw_all(const std::vector<std::string>& problems) {
    if (problems.empty()) return;
    std::ostringstream os;
    for (size_t i = 0; i < problems.size(); ++i) {
        if (i) os << "; ";
        os << problems[i];
    }
    throw ValidationError(os.str());
}

struct DayCounts {
    std::vector<int> total;                  // trains in maintenance per day
    std::vector<std::vector<int>> by_level;  // [level index][day]
    std::vector<int> deliveries;             // new deliveries per day
};

DayCounts count_occupancy(const Instance& instance, const Schedule& schedule) {
    const int T = instance.horizon;
    DayCounts counts;
    counts.total.assign(T + 1, 0);
    counts.by_level.assign(3, std::vector<int>(T + 1, 0));
    counts.deliveries.assign(T + 1, 0);

    auto mark = [&](const DayInterval& iv) {
        for (int t = std::max(0, iv.begin); t <= std::min(T, iv.end); ++t) {
            ++counts.total[t];
            ++counts.by_level[level_index(iv.level)][t];
        }
    };

    for (const TrainRecord& train : instance.trains) {
        const int day = schedule.day_of(train.id);
        const OccupancyIntervals occ = occupancy_intervals(train, day, instance.regs, T);
        if (occ.carryover) mark(*occ.carryover);
        mark(occ.current);
        if (occ.next) mark(*occ.next);
        if (day >= 0 && day <= T) ++counts.deliveries[day];
    }
    return counts;
}

}  // namespace

void finalize(Instance& instance) {
    std::vector<std::string> problems;

    if (instance.trains.empty()) {
        throw ValidationError("instance has an empty fleet");
    }

    std::set<std::string> ids;
    for (const TrainRecord& train : instance.trains) {
        if (!ids.insert(train.id).second) {
            problems.push_back("duplicate train id " + train.id);
        }
        if (train.unit_count < 1) problems.push_back(train.id + ": unit_count must be >= 1");
        if (train.daily_mileage_km <= 0) {
            problems.push_back(train.id + ": daily mileage must be positive");
        }
        if (train.expired_day < 1) problems.push_back(train.id + ": expired_day must be >= 1");
        if (!instance.regs.has_rule(train.level)) {
            problems.push_back(train.id + ": no rule for level " + to_string(train.level));
        }
        if (!instance.regs.has_rule(train.next_level)) {
            problems.push_back(train.id + ": no rule for next level " +
                               to_string(train.next_level));
        }
        if (train.carryover && train.carryover->duration_days < 1) {
            problems.push_back(train.id + ": carryover duration must be >= 1");
        }
    }
    for (const auto& [level, rule] : instance.regs.rules) {
        if (rule.target_mileage_km <= 0 || rule.left_offset_km < 0 || rule.right_offset_km < 0 ||
            rule.service_days < 1 || rule.capacity < 1 ||
            rule.left_offset_km >= rule.target_mileage_km) {
            problems.push_back("invalid rule for level " + to_string(level));
        }
    }
    if (instance.regs.cycle_interval_km <= 0) {
        problems.push_back("cycle_interval_km must be positive");
    }
    if (instance.daily_acceptance < 1) problems.push_back("daily_acceptance must be >= 1");
    if (instance.capacity.kind == CapacityMode::Kind::Aggregate && instance.capacity.total < 1) {
        problems.push_back("aggregate capacity must be >= 1");
    }
    throw_all(problems);

    if (instance.horizon == 0) {
        instance.horizon = planning_horizon(instance.trains, instance.regs);
    }
    const int T = instance.horizon;

    for (const TrainRecord& train : instance.trains) {
        try {
            const TimeWindow w = compute_window(train, instance.regs);
            if (w.end_day > T) {
                problems.push_back(train.id + ": window [" + std::to_string(w.begin_day) + ", " +
                                   std::to_string(w.end_day) + "] exceeds horizon " +
                                   std::to_string(T));
            }
        } catch (const InfeasibleTrainError& e) {
            problems.push_back(e.what());
        }
    }

    if (instance.rate_periods.empty()) {
        problems.push_back("rate periods are required");
    } else {
        int expect = 0;
        for (const RatePeriod& p : instance.rate_periods) {
            if (p.max_rate < 0 || p.max_rate > 1) {
                problems.push_back("period '" + p.label + "': max_rate outside [0,1]");
            }
            if (p.begin_day > p.end_day) {
                problems.push_back("period '" + p.label + "': begin after end");
            } else if (p.begin_day != expect) {
                problems.push_back("period '" + p.label + "': starts at day " +
                                   std::to_string(p.begin_day) + ", expected " +
                                   std::to_string(expect) + " (gap or overlap)");
                expect = p.end_day + 1;
            } else {
                expect = p.end_day + 1;
            }
        }
        if (expect != T + 1) {
            problems.push_back("rate periods end at day " + std::to_string(expect - 1) +
                               ", horizon is " + std::to_string(T));
        }
    }
    throw_all(problems);
}

std::vector<TimeWindow> fleet_windows(const Instance& instance) {
    std::vector<TimeWindow> windows;
    windows.reserve(instance.trains.size());
    for (const TrainRecord& train : instance.trains) {
        windows.push_back(compute_window(train, instance.regs));
    }
    return windows;
}

double rate_limit_on(const Instance& instance, int day) {
    for (const RatePeriod& p : instance.rate_periods) {
        if (day >= p.begin_day && day <= p.end_day) return p.max_rate;
    }
    throw ValidationError("day " + std::to_string(day) + " not covered by any rate period");
}

int Schedule::day_of(const std::string& id) const {
    auto it = delivery.find(id);
    if (it == delivery.end()) {
        throw ValidationError("schedule has no delivery for train " + id);
    }
    return it->second;
}

void validate_schedule(const Instance& instance, const Schedule& schedule) {
    std::vector<std::string> problems;
    std::set<std::string> known;
    for (const TrainRecord& train : instance.trains) {
        known.insert(train.id);
        auto it = schedule.delivery.find(train.id);
        if (it == schedule.delivery.end()) {
            problems.push_back("missing delivery for " + train.id);
            continue;
        }
        const TimeWindow w = compute_window(train, instance.regs);
        if (!w.contains(it->second)) {
            problems.push_back(train.id + ": delivery day " + std::to_string(it->second) +
                               " outside window [" + std::to_string(w.begin_day) + ", " +
                               std::to_string(w.end_day) + "]");
        }
    }
    for (const auto& [id, day] : schedule.delivery) {
        if (!known.count(id)) problems.push_back("unknown train " + id + " in schedule");
    }
    throw_all(problems);
}

double mileage_loss(const Instance& instance, const Schedule& schedule) {
    double loss = 0.0;
    for (const TrainRecord& train : instance.trains) {
        loss += (train.expired_day - schedule.day_of(train.id)) * train.daily_mileage_km *
                train.unit_count;
    }
    return loss;
}

std::vector<double> rate_check(const Instance& instance, const Schedule& schedule) {
    const DayCounts counts = count_occupancy(instance, schedule);
    const double fleet = instance.fleet_size();
    std::vector<double> violation(instance.horizon + 1, 0.0);
    for (int t = 0; t <= instance.horizon; ++t) {
        violation[t] = std::max(0.0, counts.total[t] / fleet - rate_limit_on(instance, t));
    }
    return violation;
}

std::vector<int> acceptance_check(const Instance& instance, const Schedule& schedule) {
    const DayCounts counts = count_occupancy(instance, schedule);
    std::vector<int> violation(instance.horizon + 1, 0);
    for (int t = 0; t <= instance.horizon; ++t) {
        violation[t] = std::max(0, counts.deliveries[t] - instance.daily_acceptance);
    }
    return violation;
}

std::vector<std::vector<int>> capacity_check(const Instance& instance, const Schedule& schedule) {
    const DayCounts counts = count_occupancy(instance, schedule);
    const int T = instance.horizon;
    std::vector<std::vector<int>> violation;
    if (instance.capacity.kind == CapacityMode::Kind::Aggregate) {
        violation.assign(1, std::vector<int>(T + 1, 0));
        for (int t = 0; t <= T; ++t) {
            violation[0][t] = std::max(0, counts.total[t] - instance.capacity.total);
        }
    } else {
        violation.assign(3, std::vector<int>(T + 1, 0));
        for (MaintenanceLevel level : kAllLevels) {
            const int k = static_cast<int>(level) - 3;
            const int cap = instance.regs.rule(level).capacity;
            for (int t = 0; t <= T; ++t) {
                violation[k][t] = std::max(0, counts.by_level[k][t] - cap);
            }
        }
    }
    return violation;
}

double Evaluation::rate_total() const {
    return std::accumulate(rate_violation.begin(), rate_violation.end(), 0.0);
}

long long Evaluation::acceptance_total() const {
    return std::accumulate(acceptance_violation.begin(), acceptance_violation.end(), 0LL);
}

long long Evaluation::capacity_total() const {
    long long sum = 0;
    for (const auto& row : capacity_violation) {
        sum = std::accumulate(row.begin(), row.end(), sum);
    }
    return sum;
}

Evaluation evaluate(const Instance& instance, const Schedule& schedule) {
    validate_schedule(instance, schedule);
    Evaluation out;
    out.mileage_loss = mileage_loss(instance, schedule);
    out.cost_value = out.mileage_loss * instance.cost.per_km();
    out.rate_violation = rate_check(instance, schedule);
    out.acceptance_violation = acceptance_check(instance, schedule);
    out.capacity_violation = capacity_check(instance, schedule);
    out.feasible = out.rate_total() <= kFeasTol && out.acceptance_total() == 0 &&
                   out.capacity_total() == 0;
    return out;
}

long long variable_count(const Instance& instance) {
    long long count = 0;
    for (const TimeWindow& w : fleet_windows(instance)) count += w.width();
    return count;
}

long long constraint_count(const Instance& instance) {
    const long long per_day =
        instance.capacity.kind == CapacityMode::Kind::PerLevel ? 5LL : 3LL;
    return instance.fleet_size() + per_day * instance.horizon;
}

}  // namespace hmp

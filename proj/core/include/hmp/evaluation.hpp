#ifndef HMP_EVALUATION_HPP
#define HMP_EVALUATION_HPP

#include <map>
#include <string>
#include <vector>

#include "hmp/fleet_model.hpp"
#include "hmp/occupancy.hpp"

namespace hmp {

/// Violations smaller than this are treated as zero, so a day sitting exactly
/// on a rate limit stays feasible under floating-point arithmetic.
inline constexpr double kFeasTol = 1e-9;

/// One horizon segment with its maintenance-rate cap (rush periods carry a
/// lower cap than normal operation).
struct RatePeriod {
    int begin_day = 0;
    int end_day = 0;  // inclusive
    double max_rate = 1.0;
    std::string label;

    friend bool operator==(const RatePeriod&, const RatePeriod&) = default;
};

/// Workshop capacity: either one cap per maintenance level (from the
/// regulation table) or a single aggregate cap.
struct CapacityMode {
    enum class Kind { PerLevel, Aggregate };
    Kind kind = Kind::Aggregate;
    int total = 1;  // used in Aggregate mode only

    friend bool operator==(const CapacityMode&, const CapacityMode&) = default;
};

struct CostModel {
    double maintain_per_km = 1.0;
    double income_per_km = 0.0;
    double profit_rate = 0.0;

    double per_km() const { return maintain_per_km + profit_rate * income_per_km; }

    friend bool operator==(const CostModel&, const CostModel&) = default;
};

/// A full planning problem. `horizon == 0` means "derive from the windows"
/// and is resolved by finalize().
struct Instance {
    std::vector<TrainRecord> trains;
    RegulationTable regs;
    std::vector<RatePeriod> rate_periods;
    int daily_acceptance = 1;
    CapacityMode capacity;
    int horizon = 0;
    CostModel cost;

    int fleet_size() const { return static_cast<int>(trains.size()); }

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Resolves the horizon, then validates every structural invariant: windows
/// inside [1, horizon], rate periods partitioning [0, horizon], positive
/// limits, unique train ids, resolvable levels. Throws ValidationError
/// listing every violation found.
void finalize(Instance& instance);

/// Windows for all trains in fleet order.
std::vector<TimeWindow> fleet_windows(const Instance& instance);

/// Rate cap applying on day t. Throws if no period covers t.
double rate_limit_on(const Instance& instance, int day);

/// One delivery day per train.
struct Schedule {
    std::map<std::string, int> delivery;

    int day_of(const std::string& id) const;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Throws ValidationError naming every train that is missing from the
/// schedule, unknown, or delivered outside its window.
void validate_schedule(const Instance& instance, const Schedule& schedule);

/// Full score of a candidate schedule.
struct Evaluation {
    double mileage_loss = 0.0;  // train-km, signed
    double cost_value = 0.0;    // mileage_loss * (C_maintain + lambda * C_income)
    std::vector<double> rate_violation;              // per day 0..T
    std::vector<int> acceptance_violation;           // per day 0..T
    std::vector<std::vector<int>> capacity_violation;  // 1 row (aggregate) or 3 rows (III, IV, V)
    bool feasible = false;

    double rate_total() const;
    long long acceptance_total() const;
    long long capacity_total() const;
};

/// Remaining-mileage loss: sum over trains of (expired - delivery) * L * N.
/// Negative contributions from deliveries after expiry are kept as-is.
double mileage_loss(const Instance& instance, const Schedule& schedule);

std::vector<double> rate_check(const Instance& instance, const Schedule& schedule);
std::vector<int> acceptance_check(const Instance& instance, const Schedule& schedule);
std::vector<std::vector<int>> capacity_check(const Instance& instance, const Schedule& schedule);

Evaluation evaluate(const Instance& instance, const Schedule& schedule);

/// Decision-variable count: sum of window widths across the fleet.
long long variable_count(const Instance& instance);

/// Constraint count: |fleet| + 5T in per-level mode, |fleet| + 3T aggregate.
long long constraint_count(const Instance& instance);

}  // namespace hmp

#endif

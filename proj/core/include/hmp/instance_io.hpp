#ifndef HMP_INSTANCE_IO_HPP
#define HMP_INSTANCE_IO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "hmp/evaluation.hpp"

namespace hmp {

inline constexpr int kSchemaVersion = 1;

/// CRH2-style regulation defaults: 600k km spacing, window offsets per level,
/// workshop figures usable out of the box.
RegulationTable default_regulations();

/// Parses and fully validates an instance document (JSON, field names carry
/// units). Syntax errors report the byte position; semantic errors list every
/// violation found.
Instance parse_instance(const std::string& text);

std::string serialize_instance(const Instance& instance);

/// Fixed-format schedule report: one row per train plus summary and per-day
/// occupancy counts. Byte-stable for identical inputs; parse_schedule reads
/// it back.
std::string serialize_schedule(const Instance& instance, const Schedule& schedule,
                               const Evaluation& evaluation);

Schedule parse_schedule(const std::string& text);

/// Seeded random instance generation.
struct GeneratorConfig {
    int fleet_size = 10;
    int expiry_min_day = 30;
    int expiry_max_day = 300;
    std::array<double, 3> level_mix = {0.5, 0.3, 0.2};  // III, IV, V proportions
    double daily_mileage_min_km = 1400.0;
    double daily_mileage_max_km = 1900.0;
    double carryover_probability = 0.2;
    double normal_rate = 0.5;
    double rush_rate = 0.15;
    int spring_rush_begin_day = 20;
    int spring_rush_length_days = 40;  // the spring rush lasts about forty days
    int summer_rush_begin_day = 180;
    int summer_rush_length_days = 60;
    int daily_acceptance = 2;
    CapacityMode capacity{CapacityMode::Kind::Aggregate, 6};
    std::optional<RegulationTable> regulations;  // default_regulations() when absent
    std::uint64_t seed = 0;
};

GeneratorConfig parse_generator_config(const std::string& text);

/// Deterministic per seed. The produced instance always passes
/// parse-level validation; feasibility is not guaranteed.
Instance generate(const GeneratorConfig& config);

}  // namespace hmp

#endif

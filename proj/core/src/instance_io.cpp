#include "hmp/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "hmp/occupancy.hpp"
#include "hmp/rng.hpp"

using nlohmann::json;

namespace hmp {

namespace {

class ErrorCollector {
public:
    void add(const std::string& msg) { errors_.push_back(msg); }
    bool any() const { return !errors_.empty(); }
    [[noreturn]] void raise() const {
        std::ostringstream os;
        for (size_t i = 0; i < errors_.size(); ++i) {
            if (i) os << "; ";
            os << errors_[i];
        }
        throw ValidationError(os.str());
    }

private:
    std::vector<std::string> errors_;
};

MaintenanceLevel parse_level(const json& j, const std::string& context, ErrorCollector& errors) {
    if (!j.is_string()) {
        errors.add(context + ": level must be a string");
        return MaintenanceLevel::III;
    }
    const auto level = level_from_string(j.get<std::string>());
    if (!level) {
        errors.add(context + ": unknown level '" + j.get<std::string>() + "'");
        return MaintenanceLevel::III;
    }
    return *level;
}

RegulationTable parse_regulations(const json& j, ErrorCollector& errors) {
    RegulationTable regs;
    regs.cycle_interval_km = j.value("cycle_interval_km", 0.0);
    if (!j.contains("levels") || !j["levels"].is_array()) {
        errors.add("regulations: missing 'levels' array");
        return regs;
    }
    for (const json& row : j["levels"]) {
        LevelRule rule;
        rule.level = parse_level(row.value("level", json()), "regulation row", errors);
        rule.target_mileage_km = row.value("target_mileage_km", 0.0);
        rule.left_offset_km = row.value("left_offset_km", 0.0);
        rule.right_offset_km = row.value("right_offset_km", 0.0);
        rule.service_days = row.value("service_days", 0);
        rule.capacity = row.value("capacity", 0);
        if (!regs.rules.emplace(rule.level, rule).second) {
            errors.add("regulations: duplicate rule for level " + to_string(rule.level));
        }
    }
    for (MaintenanceLevel level : kAllLevels) {
        if (!regs.has_rule(level)) {
            errors.add("regulations: missing rule for level " + to_string(level));
        }
    }
    return regs;
}

json regulations_to_json(const RegulationTable& regs) {
    json levels = json::array();
    for (const auto& [level, rule] : regs.rules) {
        levels.push_back({{"level", to_string(level)},
                          {"target_mileage_km", rule.target_mileage_km},
                          {"left_offset_km", rule.left_offset_km},
                          {"right_offset_km", rule.right_offset_km},
                          {"service_days", rule.service_days},
                          {"capacity", rule.capacity}});
    }
    return {{"cycle_interval_km", regs.cycle_interval_km}, {"levels", levels}};
}

CapacityMode parse_capacity(const json& j, ErrorCollector& errors) {
    CapacityMode mode;
    const std::string kind = j.value("mode", "");
    if (kind == "per_level") {
        mode.kind = CapacityMode::Kind::PerLevel;
    } else if (kind == "aggregate") {
        mode.kind = CapacityMode::Kind::Aggregate;
        if (!j.contains("total")) {
            errors.add("capacity: aggregate mode requires 'total'");
        }
        mode.total = j.value("total", 0);
    } else {
        errors.add("capacity: mode must be 'per_level' or 'aggregate'");
    }
    return mode;
}

json capacity_to_json(const CapacityMode& mode) {
    if (mode.kind == CapacityMode::Kind::PerLevel) return {{"mode", "per_level"}};
    return {{"mode", "aggregate"}, {"total", mode.total}};
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

RegulationTable default_regulations() {
    RegulationTable regs;
    regs.cycle_interval_km = 600'000.0;
    regs.rules[MaintenanceLevel::III] =
        {MaintenanceLevel::III, 600'000.0, 50'000.0, 20'000.0, 25, 3};
    regs.rules[MaintenanceLevel::IV] =
        {MaintenanceLevel::IV, 1'200'000.0, 100'000.0, 50'000.0, 40, 2};
    regs.rules[MaintenanceLevel::V] =
        {MaintenanceLevel::V, 2'400'000.0, 100'000.0, 100'000.0, 60, 1};
    return regs;
}

Instance parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("syntax error: ") + e.what());
    }

    ErrorCollector errors;
    if (j.value("schema_version", -1) != kSchemaVersion) {
        throw ValidationError("unsupported schema_version (expected " +
                              std::to_string(kSchemaVersion) + ")");
    }

    Instance inst;
    if (j.contains("regulations")) {
        inst.regs = parse_regulations(j["regulations"], errors);
    } else {
        errors.add("missing 'regulations'");
    }

    if (j.contains("fleet") && j["fleet"].is_array()) {
        for (const json& row : j["fleet"]) {
            TrainRecord train;
            train.id = row.value("id", "");
            if (train.id.empty()) errors.add("fleet row without id");
            train.unit_count = row.value("unit_count", 1);
            train.daily_mileage_km = row.value("daily_mileage_km", 0.0);
            train.expired_day = row.value("expired_day", 0);
            train.level = parse_level(row.value("level", json()), "train " + train.id, errors);
            train.next_level =
                parse_level(row.value("next_level", json()), "train " + train.id, errors);
            if (row.contains("carryover")) {
                const json& c = row["carryover"];
                Carryover carry;
                carry.start_day = c.value("start_day", 0);
                carry.duration_days = c.value("duration_days", 0);
                if (c.contains("level")) {
                    carry.level = parse_level(c["level"], "train " + train.id, errors);
                }
                train.carryover = carry;
            }
            inst.trains.push_back(std::move(train));
        }
    } else {
        errors.add("missing 'fleet' array");
    }

    if (j.contains("rate_periods") && j["rate_periods"].is_array()) {
        for (const json& row : j["rate_periods"]) {
            RatePeriod p;
            p.begin_day = row.value("begin_day", 0);
            p.end_day = row.value("end_day", -1);
            p.max_rate = row.value("max_rate", -1.0);
            p.label = row.value("label", "");
            inst.rate_periods.push_back(std::move(p));
        }
    } else {
        errors.add("missing 'rate_periods' array");
    }

    inst.daily_acceptance = j.value("daily_acceptance", 0);
    if (j.contains("capacity")) {
        inst.capacity = parse_capacity(j["capacity"], errors);
    } else {
        errors.add("missing 'capacity'");
    }
    inst.horizon = j.value("horizon_day", 0);
    if (j.contains("cost")) {
        const json& c = j["cost"];
        inst.cost.maintain_per_km = c.value("maintain_per_km", 1.0);
        inst.cost.income_per_km = c.value("income_per_km", 0.0);
        inst.cost.profit_rate = c.value("profit_rate", 0.0);
    }

    if (errors.any()) errors.raise();
    finalize(inst);
    return inst;
}

std::string serialize_instance(const Instance& instance) {
    json fleet = json::array();
    for (const TrainRecord& train : instance.trains) {
        json row = {{"id", train.id},
                    {"unit_count", train.unit_count},
                    {"daily_mileage_km", train.daily_mileage_km},
                    {"expired_day", train.expired_day},
                    {"level", to_string(train.level)},
                    {"next_level", to_string(train.next_level)}};
        if (train.carryover) {
            json c = {{"start_day", train.carryover->start_day},
                      {"duration_days", train.carryover->duration_days}};
            if (train.carryover->level) c["level"] = to_string(*train.carryover->level);
            row["carryover"] = c;
        }
        fleet.push_back(std::move(row));
    }
    json periods = json::array();
    for (const RatePeriod& p : instance.rate_periods) {
        periods.push_back({{"begin_day", p.begin_day},
                           {"end_day", p.end_day},
                           {"max_rate", p.max_rate},
                           {"label", p.label}});
    }
    json j = {{"schema_version", kSchemaVersion},
              {"regulations", regulations_to_json(instance.regs)},
              {"fleet", fleet},
              {"rate_periods", periods},
              {"daily_acceptance", instance.daily_acceptance},
              {"capacity", capacity_to_json(instance.capacity)},
              {"horizon_day", instance.horizon},
              {"cost",
               {{"maintain_per_km", instance.cost.maintain_per_km},
                {"income_per_km", instance.cost.income_per_km},
                {"profit_rate", instance.cost.profit_rate}}}};
    return j.dump(2) + "\n";
}

std::string serialize_schedule(const Instance& instance, const Schedule& schedule,
                               const Evaluation& evaluation) {
    validate_schedule(instance, schedule);
    std::ostringstream os;
    os << "# hmp-schedule v1\n";
    os << "# fleet_size " << instance.fleet_size() << "\n";
    os << "# feasible " << (evaluation.feasible ? "true" : "false") << "\n";
    os << "# total_loss_train_km " << fixed3(evaluation.mileage_loss) << "\n";
    os << "# cost_value " << fixed3(evaluation.cost_value) << "\n";
    os << "id level window_begin window_end delivery_day days_early loss_train_km\n";
    const auto windows = fleet_windows(instance);
    std::vector<size_t> by_id(instance.trains.size());
    for (size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
    std::sort(by_id.begin(), by_id.end(), [&](size_t a, size_t b) {
        return instance.trains[a].id < instance.trains[b].id;
    });
    for (size_t i : by_id) {
        const TrainRecord& t = instance.trains[i];
        const int day = schedule.day_of(t.id);
        os << t.id << ' ' << to_string(t.level) << ' ' << windows[i].begin_day << ' '
           << windows[i].end_day << ' ' << day << ' ' << (t.expired_day - day) << ' '
           << fixed3((t.expired_day - day) * t.daily_mileage_km * t.unit_count) << "\n";
    }
    // Per-day occupancy, nonzero days only.
    std::vector<int> occupied(instance.horizon + 1, 0);
    for (const TrainRecord& t : instance.trains) {
        const auto occ = occupancy_intervals(t, schedule.day_of(t.id), instance.regs,
                                             instance.horizon);
        for (int d = 0; d <= instance.horizon; ++d) {
            if (occ.covers(d)) ++occupied[d];
        }
    }
    for (int d = 0; d <= instance.horizon; ++d) {
        if (occupied[d] > 0) os << "# occ " << d << ' ' << occupied[d] << "\n";
    }
    return os.str();
}

Schedule parse_schedule(const std::string& text) {
    Schedule s;
    std::istringstream is(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen && line.rfind("id ", 0) == 0) {
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string id, level;
        int wb, we, day, early;
        double loss;
        if (!(row >> id >> level >> wb >> we >> day >> early >> loss)) {
            throw ValidationError("malformed schedule row: " + line);
        }
        if (!s.delivery.emplace(id, day).second) {
            throw ValidationError("duplicate schedule row for " + id);
        }
    }
    if (s.delivery.empty()) throw ValidationError("schedule file contains no rows");
    return s;
}

GeneratorConfig parse_generator_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("syntax error: ") + e.what());
    }
    ErrorCollector errors;
    GeneratorConfig cfg;
    cfg.fleet_size = j.value("fleet_size", cfg.fleet_size);
    cfg.expiry_min_day = j.value("expiry_min_day", cfg.expiry_min_day);
    cfg.expiry_max_day = j.value("expiry_max_day", cfg.expiry_max_day);
    if (j.contains("level_mix")) {
        const auto mix = j["level_mix"].get<std::vector<double>>();
        if (mix.size() != 3) {
            errors.add("level_mix must hold three proportions (III, IV, V)");
        } else {
            std::copy(mix.begin(), mix.end(), cfg.level_mix.begin());
        }
    }
    cfg.daily_mileage_min_km = j.value("daily_mileage_min_km", cfg.daily_mileage_min_km);
    cfg.daily_mileage_max_km = j.value("daily_mileage_max_km", cfg.daily_mileage_max_km);
    cfg.carryover_probability = j.value("carryover_probability", cfg.carryover_probability);
    cfg.normal_rate = j.value("normal_rate", cfg.normal_rate);
    cfg.rush_rate = j.value("rush_rate", cfg.rush_rate);
    cfg.spring_rush_begin_day = j.value("spring_rush_begin_day", cfg.spring_rush_begin_day);
    cfg.spring_rush_length_days = j.value("spring_rush_length_days", cfg.spring_rush_length_days);
    cfg.summer_rush_begin_day = j.value("summer_rush_begin_day", cfg.summer_rush_begin_day);
    cfg.summer_rush_length_days = j.value("summer_rush_length_days", cfg.summer_rush_length_days);
    cfg.daily_acceptance = j.value("daily_acceptance", cfg.daily_acceptance);
    if (j.contains("capacity")) cfg.capacity = parse_capacity(j["capacity"], errors);
    if (j.contains("regulations")) cfg.regulations = parse_regulations(j["regulations"], errors);
    cfg.seed = j.value("seed", cfg.seed);
    if (errors.any()) errors.raise();
    return cfg;
}

Instance generate(const GeneratorConfig& config) {
    if (config.fleet_size < 1) throw ValidationError("generator: fleet_size must be >= 1");
    if (config.expiry_min_day < 1 || config.expiry_min_day > config.expiry_max_day) {
        throw ValidationError("generator: empty expiry-day range");
    }
    if (config.daily_mileage_min_km <= 0 ||
        config.daily_mileage_min_km > config.daily_mileage_max_km) {
        throw ValidationError("generator: empty daily-mileage range");
    }
    const double mix_sum = config.level_mix[0] + config.level_mix[1] + config.level_mix[2];
    if (std::abs(mix_sum - 1.0) > 1e-9) {
        throw ValidationError("generator: level mix proportions must sum to 1");
    }

    Rng rng(config.seed);
    Instance inst;
    inst.regs = config.regulations.value_or(default_regulations());
    inst.daily_acceptance = config.daily_acceptance;
    inst.capacity = config.capacity;

    // Level alternation over one full cycle (first III, IV, second III, V).
    static constexpr MaintenanceLevel kCycle[4] = {MaintenanceLevel::III, MaintenanceLevel::IV,
                                                   MaintenanceLevel::III, MaintenanceLevel::V};

    for (int i = 0; i < config.fleet_size; ++i) {
        TrainRecord train;
        char name[16];
        std::snprintf(name, sizeof name, "EMU_%03d", i + 1);
        train.id = name;
        train.unit_count = 1;
        train.daily_mileage_km =
            std::round(config.daily_mileage_min_km +
                       rng.unit() * (config.daily_mileage_max_km - config.daily_mileage_min_km));
        train.expired_day = rng.int_in(config.expiry_min_day, config.expiry_max_day);

        const double pick = rng.unit();
        int pos;  // cycle position of the upcoming maintenance
        if (pick < config.level_mix[0]) {
            pos = rng.unit() < 0.5 ? 0 : 2;
        } else if (pick < config.level_mix[0] + config.level_mix[1]) {
            pos = 1;
        } else {
            pos = 3;
        }
        train.level = kCycle[pos];
        train.next_level = kCycle[(pos + 1) % 4];

        if (rng.unit() < config.carryover_probability) {
            const MaintenanceLevel prev_level = kCycle[(pos + 3) % 4];
            const int duration = inst.regs.rule(prev_level).service_days;
            Carryover carry;
            carry.duration_days = duration;
            carry.start_day = -rng.int_in(0, duration - 1);
            carry.level = prev_level;
            train.carryover = carry;
        }
        inst.trains.push_back(std::move(train));
    }

    const int horizon = planning_horizon(inst.trains, inst.regs);

    struct Rush {
        int begin, end;
        const char* label;
    };
    std::vector<Rush> rushes;
    if (config.spring_rush_length_days > 0) {
        rushes.push_back({config.spring_rush_begin_day,
                          config.spring_rush_begin_day + config.spring_rush_length_days - 1,
                          "SpringRush"});
    }
    if (config.summer_rush_length_days > 0) {
        rushes.push_back({config.summer_rush_begin_day,
                          config.summer_rush_begin_day + config.summer_rush_length_days - 1,
                          "SummerRush"});
    }
    std::sort(rushes.begin(), rushes.end(),
              [](const Rush& a, const Rush& b) { return a.begin < b.begin; });

    int cursor = 0;
    for (const Rush& rush : rushes) {
        const int begin = std::max(rush.begin, cursor);
        const int end = std::min(rush.end, horizon);
        if (begin > end) continue;
        if (begin > cursor) {
            inst.rate_periods.push_back({cursor, begin - 1, config.normal_rate, "Normal"});
        }
        inst.rate_periods.push_back({begin, end, config.rush_rate, rush.label});
        cursor = end + 1;
    }
    if (cursor <= horizon) {
        inst.rate_periods.push_back({cursor, horizon, config.normal_rate, "Normal"});
    }

    finalize(inst);
    return inst;
}

}  // namespace hmp

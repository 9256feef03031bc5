#include "hmp/annealer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace hmp {

namespace {

/// Incremental score keeper: per-day occupancy and delivery counts plus
/// running violation sums, updated only on the days a move touches.
class EnergyModel {
public:
    EnergyModel(const Instance& instance, const ResolvedBetas& betas)
        : inst_(instance),
          betas_(betas),
          horizon_(instance.horizon),
          fleet_(instance.fleet_size()),
          per_level_(instance.capacity.kind == CapacityMode::Kind::PerLevel) {
        gamma_.resize(horizon_ + 1);
        for (int t = 0; t <= horizon_; ++t) gamma_[t] = rate_limit_on(inst_, t);
        if (per_level_) {
            for (MaintenanceLevel level : kAllLevels) {
                level_cap_[static_cast<int>(level) - 3] = inst_.regs.rule(level).capacity;
            }
        }
        total_.assign(horizon_ + 1, 0);
        deliv_.assign(horizon_ + 1, 0);
        for (auto& row : by_level_) row.assign(horizon_ + 1, 0);
        const int n = fleet_;
        loss_coeff_.resize(n);
        expired_.resize(n);
        cur_day_.assign(n, -1);
        for (int i = 0; i < n; ++i) {
            loss_coeff_[i] = inst_.trains[i].daily_mileage_km * inst_.trains[i].unit_count;
            expired_[i] = inst_.trains[i].expired_day;
        }
    }

    void assign(const std::vector<int>& days) {
        for (int i = 0; i < fleet_; ++i) {
            cur_day_[i] = days[i];
            apply_train(i, days[i], +1);
        }
    }

    void move(int i, int day) {
        apply_train(i, cur_day_[i], -1);
        cur_day_[i] = day;
        apply_train(i, day, +1);
    }

    int day(int i) const { return cur_day_[i]; }
    const std::vector<int>& days() const { return cur_day_; }

    double energy() const {
        return loss_ + betas_.rate * rate_sum_ + betas_.accept * static_cast<double>(acc_sum_) +
               betas_.capacity * static_cast<double>(cap_sum_);
    }

    Schedule to_schedule() const {
        Schedule s;
        for (int i = 0; i < fleet_; ++i) s.delivery[inst_.trains[i].id] = cur_day_[i];
        return s;
    }

private:
    void apply_interval(const DayInterval& iv, int sign) {
        const int k = static_cast<int>(iv.level) - 3;
        for (int t = std::max(0, iv.begin); t <= std::min(horizon_, iv.end); ++t) {
            const double rate_old = std::max(0.0, total_[t] / double(fleet_) - gamma_[t]);
            const int agg_old = std::max(0, total_[t] - inst_.capacity.total);
            const int lvl_old = std::max(0, by_level_[k][t] - level_cap_[k]);
            total_[t] += sign;
            by_level_[k][t] += sign;
            rate_sum_ += std::max(0.0, total_[t] / double(fleet_) - gamma_[t]) - rate_old;
            if (per_level_) {
                cap_sum_ += std::max(0, by_level_[k][t] - level_cap_[k]) - lvl_old;
            } else {
                cap_sum_ += std::max(0, total_[t] - inst_.capacity.total) - agg_old;
            }
        }
    }

    void apply_train(int i, int day, int sign) {
        const OccupancyIntervals occ =
            occupancy_intervals(inst_.trains[i], day, inst_.regs, horizon_);
        if (occ.carryover) apply_interval(*occ.carryover, sign);
        apply_interval(occ.current, sign);
        if (occ.next) apply_interval(*occ.next, sign);

        const int acc_old = std::max(0, deliv_[day] - inst_.daily_acceptance);
        deliv_[day] += sign;
        acc_sum_ += std::max(0, deliv_[day] - inst_.daily_acceptance) - acc_old;

        loss_ += sign * (expired_[i] - day) * loss_coeff_[i];
    }

    const Instance& inst_;
    ResolvedBetas betas_;
    int horizon_;
    int fleet_;
    bool per_level_;
    std::vector<double> gamma_;
    std::array<int, 3> level_cap_{};
    std::vector<double> loss_coeff_;
    std::vector<int> expired_;
    std::vector<int> cur_day_;
    std::vector<int> total_;
    std::vector<int> deliv_;
    std::array<std::vector<int>, 3> by_level_;
    double rate_sum_ = 0.0;
    long long acc_sum_ = 0;
    long long cap_sum_ = 0;
    double loss_ = 0.0;
};

std::vector<int> schedule_to_days(const Instance& instance, const Schedule& schedule) {
    std::vector<int> days(instance.trains.size());
    for (size_t i = 0; i < instance.trains.size(); ++i) {
        days[i] = schedule.day_of(instance.trains[i].id);
    }
    return days;
}

/// Picks (train, day) for the next move. Returns false for a width-1 no-op.
/// Draw order per proposal: train index, then day offset when width > 1.
bool propose(const std::vector<TimeWindow>& windows, const std::vector<int>& days, Rng& rng,
             int* train, int* day) {
    *train = static_cast<int>(rng.below(windows.size()));
    const TimeWindow& w = windows[*train];
    if (w.width() == 1) return false;
    int d = w.begin_day + rng.int_in(0, w.width() - 2);
    if (d >= days[*train]) ++d;  // skip the currently assigned day
    *day = d;
    return true;
}

}  // namespace

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::AcceptanceBelowEpsilon: return "acceptance_below_epsilon";
        case StopReason::EnergyStable: return "energy_stable";
        case StopReason::IterationCap: return "iteration_cap";
    }
    return "?";
}

ResolvedBetas resolve_betas(const Instance& instance, const SaParams& params) {
    double range = 0.0;
    const auto windows = fleet_windows(instance);
    for (size_t i = 0; i < instance.trains.size(); ++i) {
        const TrainRecord& t = instance.trains[i];
        range = std::max(range, (windows[i].end_day - windows[i].begin_day) *
                                    t.daily_mileage_km * t.unit_count);
    }
    const double fallback = std::max(1.0, range * instance.fleet_size());
    ResolvedBetas betas;
    betas.rate = params.beta_rate >= 0 ? params.beta_rate : fallback;
    betas.accept = params.beta_accept >= 0 ? params.beta_accept : fallback;
    betas.capacity = params.beta_capacity >= 0 ? params.beta_capacity : fallback;
    return betas;
}

double energy(const Instance& instance, const Schedule& schedule, const SaParams& params) {
    const ResolvedBetas betas = resolve_betas(instance, params);
    const Evaluation eval = evaluate(instance, schedule);
    return eval.mileage_loss + betas.rate * eval.rate_total() +
           betas.accept * static_cast<double>(eval.acceptance_total()) +
           betas.capacity * static_cast<double>(eval.capacity_total());
}

Schedule initial_solution(const Instance& instance, const SaParams& params) {
    if (params.initial_schedule) {
        validate_schedule(instance, *params.initial_schedule);
        return *params.initial_schedule;
    }
    Schedule s;
    const auto windows = fleet_windows(instance);
    for (size_t i = 0; i < instance.trains.size(); ++i) {
        const TrainRecord& t = instance.trains[i];
        s.delivery[t.id] = std::clamp(t.expired_day, windows[i].begin_day, windows[i].end_day);
    }
    return s;
}

Schedule neighbor(const Schedule& schedule, const Instance& instance, Rng& rng) {
    const auto windows = fleet_windows(instance);
    std::vector<int> days = schedule_to_days(instance, schedule);
    int train = 0, day = 0;
    Schedule out = schedule;
    if (propose(windows, days, rng, &train, &day)) {
        out.delivery[instance.trains[train].id] = day;
    }
    return out;
}

double calibrate_initial_temperature(const Instance& instance, const Schedule& schedule,
                                     const SaParams& params, Rng& rng) {
    static constexpr int kSamples = 200;
    static const double kLogAccept = std::log(1.0 / 0.95);

    const ResolvedBetas betas = resolve_betas(instance, params);
    const auto windows = fleet_windows(instance);
    EnergyModel model(instance, betas);
    model.assign(schedule_to_days(instance, schedule));

    double uphill_sum = 0.0;
    int uphill_count = 0;
    for (int s = 0; s < kSamples; ++s) {
        int train = 0, day = 0;
        if (!propose(windows, model.days(), rng, &train, &day)) continue;
        const double before = model.energy();
        const int old_day = model.day(train);
        model.move(train, day);
        const double delta = model.energy() - before;
        model.move(train, old_day);
        if (delta > 0) {
            uphill_sum += delta;
            ++uphill_count;
        }
    }
    if (uphill_count == 0) return 1.0;
    return (uphill_sum / uphill_count) / kLogAccept;
}

SaResult solve(const Instance& instance, const SaParams& params) {
    const auto windows = fleet_windows(instance);
    const ResolvedBetas betas = resolve_betas(instance, params);
    const long long var_count = variable_count(instance);
    const long long inner_generated_cap = params.inner_generated_coeff * var_count;
    const long long inner_accepted_cap = params.inner_accepted_coeff * var_count;

    Rng rng(params.seed);
    const Schedule start = initial_solution(instance, params);
    double sigma = params.initial_temp
                       ? *params.initial_temp
                       : calibrate_initial_temperature(instance, start, params, rng);
    if (sigma <= 0) throw ValidationError("initial temperature must be positive");

    EnergyModel model(instance, betas);
    model.assign(schedule_to_days(instance, start));

    SaResult result;
    double current_energy = model.energy();
    double best_energy = current_energy;
    std::vector<int> best_days = model.days();

    int stable_streak = 0;
    double prev_mean = 0.0;
    bool have_prev_mean = false;
    bool done = false;

    while (!done) {
        long long generated = 0;
        long long accepted = 0;
        double energy_sum = 0.0;

        while (generated < inner_generated_cap && accepted < inner_accepted_cap) {
            ++generated;
            ++result.evaluations;
            int train = 0, day = 0;
            if (propose(windows, model.days(), rng, &train, &day)) {
                const int old_day = model.day(train);
                model.move(train, day);
                const double candidate = model.energy();
                const double delta = candidate - current_energy;
                bool accept = delta <= 0;
                if (!accept) accept = rng.unit() < std::exp(-delta / sigma);
                if (accept) {
                    ++accepted;
                    current_energy = candidate;
                    if (params.cross_check) {
                        const double full = energy(instance, model.to_schedule(), params);
                        if (std::abs(full - current_energy) >
                            1e-6 * std::max(1.0, std::abs(full))) {
                            throw std::logic_error("incremental energy diverged from full recompute");
                        }
                    }
                    if (current_energy < best_energy) {
                        best_energy = current_energy;
                        best_days = model.days();
                    }
                } else {
                    model.move(train, old_day);
                }
            }
            energy_sum += current_energy;
            if (result.evaluations >= params.max_evaluations) {
                result.stop_reason = StopReason::IterationCap;
                done = true;
                break;
            }
        }

        const double mean = energy_sum / static_cast<double>(generated);
        const double rate = static_cast<double>(accepted) / static_cast<double>(generated);
        result.trace.push_back({sigma, mean, rate, generated, accepted});
        if (done) break;

        if (rate < params.min_accept_rate) {
            result.stop_reason = StopReason::AcceptanceBelowEpsilon;
            break;
        }
        if (have_prev_mean &&
            std::abs(mean - prev_mean) <=
                params.stability_rel_tol * std::max(std::abs(prev_mean), 1e-12)) {
            if (++stable_streak >= params.stability_count) {
                result.stop_reason = StopReason::EnergyStable;
                break;
            }
        } else {
            stable_streak = 0;
        }
        prev_mean = mean;
        have_prev_mean = true;
        sigma *= params.cooling_rate;
    }

    Schedule best;
    for (size_t i = 0; i < instance.trains.size(); ++i) {
        best.delivery[instance.trains[i].id] = best_days[i];
    }
    result.best_schedule = best;
    result.best_evaluation = evaluate(instance, best);
    result.best_energy = best_energy;
    return result;
}

SaResult solve_restarts(const Instance& instance, const SaParams& params, int restarts,
                        int threads) {
    if (restarts < 1) throw ValidationError("restarts must be >= 1");
    std::vector<SaResult> results(restarts);

    auto run = [&](int k) {
        SaParams p = params;
        p.seed = mix_seed(params.seed + static_cast<std::uint64_t>(k));
        results[k] = solve(instance, p);
    };

    if (threads <= 1 || restarts == 1) {
        for (int k = 0; k < restarts; ++k) run(k);
    } else {
        std::vector<std::thread> pool;
        std::atomic_int next{0};
        const int workers = std::min(threads, restarts);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < restarts; k = next.fetch_add(1)) run(k);
            });
        }
        for (auto& t : pool) t.join();
    }

    // Reduction in restart order, independent of completion order.
    int best = 0;
    for (int k = 1; k < restarts; ++k) {
        if (results[k].best_energy < results[best].best_energy ||
            (results[k].best_energy == results[best].best_energy &&
             results[k].best_schedule.delivery < results[best].best_schedule.delivery)) {
            best = k;
        }
    }
    return results[best];
}

}  // namespace hmp

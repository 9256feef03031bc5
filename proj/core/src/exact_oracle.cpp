#include "hmp/exact_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <thread>

namespace hmp {

namespace {

/// Per-day counters for one DFS worker, with exact feasibility checks on the
/// days an assignment touches. Counts are monotone in the number of assigned
/// trains, so a violated partial assignment can never be completed feasibly.
class Counters {
public:
    explicit Counters(const Instance& inst)
        : inst_(inst),
          horizon_(inst.horizon),
          fleet_(inst.fleet_size()),
          per_level_(inst.capacity.kind == CapacityMode::Kind::PerLevel) {
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
    }

    /// Adds the delivery-independent carryover of every train. Returns false
    /// when the carryover load alone already violates a constraint.
    bool preload_carryovers() {
        bool ok = true;
        for (const TrainRecord& train : inst_.trains) {
            if (!train.carryover) continue;
            const Carryover& c = *train.carryover;
            const int end = c.start_day + c.duration_days;
            if (end <= 0 || c.start_day > horizon_) continue;
            const DayInterval iv{std::max(0, c.start_day), std::min(horizon_, end),
                                 c.level.value_or(train.level)};
            if (!apply_interval(iv, +1)) ok = false;
        }
        return ok;
    }

    /// Applies the delivery-dependent occupancy of `train` on `day`; returns
    /// false (after fully applying) when any touched day becomes infeasible.
    bool add(const TrainRecord& train, int day) {
        bool ok = true;
        for_each_interval(train, day, [&](const DayInterval& iv) {
            if (!apply_interval(iv, +1)) ok = false;
        });
        ++deliv_[day];
        if (deliv_[day] > inst_.daily_acceptance) ok = false;
        return ok;
    }

    void remove(const TrainRecord& train, int day) {
        for_each_interval(train, day, [&](const DayInterval& iv) { apply_interval(iv, -1); });
        --deliv_[day];
    }

private:
    template <typename F>
    void for_each_interval(const TrainRecord& train, int day, F&& f) {
        const OccupancyIntervals occ = occupancy_intervals(train, day, inst_.regs, horizon_);
        f(occ.current);
        if (occ.next) f(*occ.next);
    }

    bool apply_interval(const DayInterval& iv, int sign) {
        const int k = static_cast<int>(iv.level) - 3;
        bool ok = true;
        for (int t = std::max(0, iv.begin); t <= std::min(horizon_, iv.end); ++t) {
            total_[t] += sign;
            by_level_[k][t] += sign;
            if (sign > 0) {
                if (total_[t] / double(fleet_) - gamma_[t] > kFeasTol) ok = false;
                if (per_level_) {
                    if (by_level_[k][t] > level_cap_[k]) ok = false;
                } else if (total_[t] > inst_.capacity.total) {
                    ok = false;
                }
            }
        }
        return ok;
    }

    const Instance& inst_;
    int horizon_;
    int fleet_;
    bool per_level_;
    std::vector<double> gamma_;
    std::array<int, 3> level_cap_{};
    std::vector<int> total_;
    std::vector<int> deliv_;
    std::array<std::vector<int>, 3> by_level_;
};

struct WorkerBest {
    bool found = false;
    double loss = 0.0;
    std::vector<int> days;  // ordered by train id
    long long feasible_count = 0;
};

struct SearchPlan {
    std::vector<int> order;           // train indices sorted by id
    std::vector<TimeWindow> windows;  // by position in `order`
    std::vector<double> coeff;        // L * N by position
    std::vector<int> expired;         // by position
};

SearchPlan make_plan(const Instance& instance) {
    SearchPlan plan;
    plan.order.resize(instance.trains.size());
    std::iota(plan.order.begin(), plan.order.end(), 0);
    std::sort(plan.order.begin(), plan.order.end(), [&](int a, int b) {
        return instance.trains[a].id < instance.trains[b].id;
    });
    const auto windows = fleet_windows(instance);
    for (int idx : plan.order) {
        plan.windows.push_back(windows[idx]);
        plan.coeff.push_back(instance.trains[idx].daily_mileage_km *
                             instance.trains[idx].unit_count);
        plan.expired.push_back(instance.trains[idx].expired_day);
    }
    return plan;
}

/// Pruned DFS over positions >= `pos`, days in ascending order so the first
/// minimum found is the lexicographically smallest.
void dfs(const Instance& inst, const SearchPlan& plan, Counters& counters,
         std::vector<int>& days, double loss, size_t pos, WorkerBest& best) {
    if (pos == plan.order.size()) {
        ++best.feasible_count;
        if (!best.found || loss < best.loss) {
            best.found = true;
            best.loss = loss;
            best.days = days;
        }
        return;
    }
    const TrainRecord& train = inst.trains[plan.order[pos]];
    const TimeWindow& w = plan.windows[pos];
    for (int d = w.begin_day; d <= w.end_day; ++d) {
        const bool feasible = counters.add(train, d);
        if (feasible) {
            days[pos] = d;
            dfs(inst, plan, counters, days, loss + (plan.expired[pos] - d) * plan.coeff[pos],
                pos + 1, best);
        }
        counters.remove(train, d);
    }
}

/// Unpruned reference path: enumerate everything, score leaves through the
/// public evaluate().
void enumerate_all(const Instance& inst, const SearchPlan& plan, std::vector<int>& days,
                   size_t pos, WorkerBest& best) {
    if (pos == plan.order.size()) {
        Schedule s;
        for (size_t i = 0; i < plan.order.size(); ++i) {
            s.delivery[inst.trains[plan.order[i]].id] = days[i];
        }
        const Evaluation eval = evaluate(inst, s);
        if (!eval.feasible) return;
        ++best.feasible_count;
        if (!best.found || eval.mileage_loss < best.loss) {
            best.found = true;
            best.loss = eval.mileage_loss;
            best.days = days;
        }
        return;
    }
    const TimeWindow& w = plan.windows[pos];
    for (int d = w.begin_day; d <= w.end_day; ++d) {
        days[pos] = d;
        enumerate_all(inst, plan, days, pos + 1, best);
    }
}

WorkerBest search_first_days(const Instance& inst, const SearchPlan& plan,
                             const std::vector<int>& first_days) {
    WorkerBest best;
    Counters counters(inst);
    if (!counters.preload_carryovers()) return best;
    std::vector<int> days(plan.order.size(), 0);
    const TrainRecord& first = inst.trains[plan.order[0]];
    for (int d : first_days) {
        const bool feasible = counters.add(first, d);
        if (feasible) {
            days[0] = d;
            dfs(inst, plan, counters, days, (plan.expired[0] - d) * plan.coeff[0], 1, best);
        }
        counters.remove(first, d);
    }
    return best;
}

}  // namespace

OracleResult solve_exact(const Instance& instance, const OracleLimits& limits) {
    const SearchPlan plan = make_plan(instance);

    long long product = 1;
    for (const TimeWindow& w : plan.windows) {
        product *= w.width();
        if (product > limits.max_nodes) {
            throw ValidationError("search space of at least " + std::to_string(product) +
                                  " schedules exceeds node limit " +
                                  std::to_string(limits.max_nodes));
        }
    }

    OracleResult result;
    result.searched_count = product;

    WorkerBest best;
    if (!limits.prune) {
        std::vector<int> days(plan.order.size(), 0);
        enumerate_all(instance, plan, days, 0, best);
    } else if (limits.threads <= 1 || plan.windows[0].width() == 1) {
        std::vector<int> all_days;
        for (int d = plan.windows[0].begin_day; d <= plan.windows[0].end_day; ++d) {
            all_days.push_back(d);
        }
        best = search_first_days(instance, plan, all_days);
    } else {
        const int workers = std::min(limits.threads, plan.windows[0].width());
        std::vector<std::vector<int>> chunks(workers);
        int w = 0;
        for (int d = plan.windows[0].begin_day; d <= plan.windows[0].end_day; ++d) {
            chunks[w++ % workers].push_back(d);
        }
        std::vector<WorkerBest> partial(workers);
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) {
            pool.emplace_back(
                [&, i] { partial[i] = search_first_days(instance, plan, chunks[i]); });
        }
        for (auto& t : pool) t.join();
        for (const WorkerBest& p : partial) {
            best.feasible_count += p.feasible_count;
            if (!p.found) continue;
            if (!best.found || p.loss < best.loss ||
                (p.loss == best.loss && p.days < best.days)) {
                best.found = true;
                best.loss = p.loss;
                best.days = p.days;
            }
        }
    }

    result.feasible_count = best.feasible_count;
    if (best.found) {
        Schedule s;
        for (size_t i = 0; i < plan.order.size(); ++i) {
            s.delivery[instance.trains[plan.order[i]].id] = best.days[i];
        }
        result.optimum = s;
        result.optimum_loss = best.loss;
    }
    return result;
}

}  // namespace hmp

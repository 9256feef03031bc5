#ifndef HMP_ANNEALER_HPP
#define HMP_ANNEALER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hmp/evaluation.hpp"
#include "hmp/rng.hpp"

namespace hmp {

/// Simulated-annealing parameters. Negative penalty weights mean
/// "auto-derive": each beta is set to the largest per-train window loss range
/// times the fleet size, so a unit violation outweighs any objective gain.
struct SaParams {
    double beta_rate = -1.0;
    double beta_accept = -1.0;
    double beta_capacity = -1.0;
    double cooling_rate = 0.97;        // geometric factor applied per temperature
    int inner_generated_coeff = 3;     // inner loop ends after coeff*|X| proposals...
    int inner_accepted_coeff = 6;      // ...or coeff*|X| acceptances
    double min_accept_rate = 0.001;    // stop once acceptance rate drops below this
    int stability_count = 30;
    double stability_rel_tol = 1e-4;
    std::optional<double> initial_temp;
    std::uint64_t seed = 0;
    std::optional<Schedule> initial_schedule;  // ExpiredDates mode when absent
    long long max_evaluations = 1'000'000;
    bool cross_check = false;  // recompute energy from scratch after every accepted move
};

struct ResolvedBetas {
    double rate = 0.0;
    double accept = 0.0;
    double capacity = 0.0;
};

ResolvedBetas resolve_betas(const Instance& instance, const SaParams& params);

struct TraceRow {
    double temperature = 0.0;
    double mean_energy = 0.0;
    double acceptance_rate = 0.0;
    long long generated = 0;
    long long accepted = 0;
};

enum class StopReason { AcceptanceBelowEpsilon, EnergyStable, IterationCap };

std::string to_string(StopReason reason);

struct SaResult {
    Schedule best_schedule;
    Evaluation best_evaluation;
    double best_energy = 0.0;
    std::vector<TraceRow> trace;
    long long evaluations = 0;
    StopReason stop_reason = StopReason::EnergyStable;
};

/// Penalty energy: mileage loss plus weighted rate / acceptance / capacity
/// violation sums.
double energy(const Instance& instance, const Schedule& schedule, const SaParams& params);

/// Starting schedule: each train on its expiry day clamped into its window,
/// or the provided schedule after validation.
Schedule initial_solution(const Instance& instance, const SaParams& params);

/// Moves one uniformly chosen train to a uniformly chosen other day of its
/// window. Width-1 windows leave the schedule unchanged.
Schedule neighbor(const Schedule& schedule, const Instance& instance, Rng& rng);

/// Samples 200 random transitions and sizes the initial temperature so the
/// mean uphill move is accepted with probability ~0.95. Returns 1.0 when no
/// uphill move is seen.
double calibrate_initial_temperature(const Instance& instance, const Schedule& schedule,
                                     const SaParams& params, Rng& rng);

SaResult solve(const Instance& instance, const SaParams& params);

/// Runs `restarts` independent searches with seeds derived from params.seed
/// and returns the best result. Deterministic for any thread count.
SaResult solve_restarts(const Instance& instance, const SaParams& params, int restarts,
                        int threads = 1);

}  // namespace hmp

#endif

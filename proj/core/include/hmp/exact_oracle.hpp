#ifndef HMP_EXACT_ORACLE_HPP
#define HMP_EXACT_ORACLE_HPP

#include <optional>

#include "hmp/evaluation.hpp"

namespace hmp {

struct OracleLimits {
    long long max_nodes = 10'000'000;  // refuse searches larger than this
    bool prune = true;                 // exact count-based pruning on partial assignments
    int threads = 1;                   // split the first train's window across workers
};

struct OracleResult {
    std::optional<Schedule> optimum;
    double optimum_loss = 0.0;
    long long feasible_count = 0;
    long long searched_count = 0;  // product of window widths
};

/// Exhaustively enumerates every delivery-day combination, keeps feasible
/// ones, and returns the minimum-loss schedule. Ties break toward the
/// lexicographically smallest delivery vector ordered by train id.
OracleResult solve_exact(const Instance& instance, const OracleLimits& limits = {});

}  // namespace hmp

#endif

#pragma once

#include <vector>

#include "epscope/types.hpp"

namespace epscope {

struct Assignment {
    std::vector<std::size_t> map; // map[j] = index into prev for new item j
    double total_cost = 0.0;
};

/// Minimal-total-cost assignment (Hungarian algorithm with potentials).
/// cost is n x n row-major; cost[i*n+j] matches prev item i to new item j.
Assignment solve_assignment(const std::vector<double>& cost, std::size_t n);

/// Match new eigenvalues to previous ones by minimal total |E_new - E_prev|.
/// Returns the permutation new_order with new_order[k] = index into next of
/// the eigenvalue that continues label k, plus the total cost.
Assignment match_eigenvalues(const std::vector<Cx>& prev, const std::vector<Cx>& next);

} // namespace epscope

#include "epscope/assign.hpp"

#include <cmath>
#include <limits>

#include "epscope/errors.hpp"

namespace epscope {

// Hungarian algorithm with potentials, O(n^3). Rows are previous labels,
// columns are new items; index n plays the virtual row/column.
Assignment solve_assignment(const std::vector<double>& cost, std::size_t n) {
    if (cost.size() != n * n) throw InvalidInput("solve_assignment: bad cost size");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, n), way(n + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        p[n] = i;
        std::size_t j0 = n;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = n;
            for (std::size_t j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 * n + j] - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != n);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != n);
    }
    Assignment out;
    std::vector<std::size_t> col_of_row(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        if (p[j] < n) col_of_row[p[j]] = j;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i * n + col_of_row[i]];
    out.map = std::move(col_of_row); // map[k] = new index continuing label k
    out.total_cost = total;
    return out;
}

Assignment match_eigenvalues(const std::vector<Cx>& prev, const std::vector<Cx>& next) {
    if (prev.size() != next.size())
        throw InvalidInput("match_eigenvalues: size mismatch");
    const std::size_t n = prev.size();
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = std::abs(next[j] - prev[i]);
    return solve_assignment(cost, n);
}

} // namespace epscope

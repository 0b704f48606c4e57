#include "scimatch/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace scimatch {

double solve_assignment(const std::vector<std::vector<double>>& cost, std::vector<int>& rowsol) {
    const size_t n = cost.size();
    rowsol.assign(n, -1);
    if (n == 0) return 0.0;
    const size_t m = cost[0].size();
    if (m < n) throw std::invalid_argument("solve_assignment: more rows than columns");
    for (const auto& row : cost)
        if (row.size() != m) throw std::invalid_argument("solve_assignment: ragged cost matrix");

    const double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; p[j] = row matched to column j (0 = free)
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<size_t> p(m + 1, 0), way(m + 1, 0);

    for (size_t i = 1; i <= n; ++i) {
        p[0] = i;
        size_t j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            size_t i0 = p[j0], j1 = 0;
            double delta = inf;
            for (size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0.0;
    for (size_t j = 1; j <= m; ++j) {
        if (p[j] == 0) continue;
        rowsol[p[j] - 1] = static_cast<int>(j - 1);
        total += cost[p[j] - 1][j - 1];
    }
    return total;
}

}  // namespace scimatch

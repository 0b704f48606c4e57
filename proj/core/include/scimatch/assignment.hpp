#pragma once

#include <vector>

namespace scimatch {

// Minimum-cost assignment for a dense cost matrix with rows <= cols.
// Every row gets a distinct column; rowsol[i] is the column of row i.
// Returns the total cost. Shortest-augmenting-path implementation, cubic
// in the larger dimension, exact for finite costs.
double solve_assignment(const std::vector<std::vector<double>>& cost, std::vector<int>& rowsol);

}  // namespace scimatch

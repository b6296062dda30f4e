#pragma once

#include <vector>

namespace rw2 {

/// Jonker-Volgenant shortest augmenting path solver for the dense square
/// linear assignment problem. `cost` is row-major dim x dim. On return
/// `rowsol[i]` is the column matched to row i; the total assignment cost is
/// returned. Deterministic for identical inputs.
double solve_assignment(int dim, const std::vector<double>& cost, std::vector<int>& rowsol);

} // namespace rw2

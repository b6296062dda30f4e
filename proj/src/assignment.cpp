#include "rw2/assignment.hpp"

#include "rw2/errors.hpp"

#include <limits>

namespace rw2 {

double solve_assignment(int dim, const std::vector<double>& cost, std::vector<int>& rowsol) {
    if (dim < 1) throw input_error("solve_assignment: empty problem");
    if (cost.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim))
        throw input_error("solve_assignment: cost matrix size mismatch");

    const double inf = std::numeric_limits<double>::max();
    auto c = [&](int i, int j) { return cost[static_cast<std::size_t>(i) * dim + j]; };

    // Near-equal reduced costs are treated as exact ties; otherwise the row
    // reduction can cycle when the dual update underflows to zero.
    double cmax = 0.0;
    for (double v : cost) cmax = std::max(cmax, std::abs(v));
    const double eps = 1e-10 * std::max(1.0, cmax);

    rowsol.assign(dim, -1);
    std::vector<int> colsol(dim, -1), free_rows(dim), collist(dim), matches(dim, 0), pred(dim);
    std::vector<double> v(dim), d(dim);

    // Column reduction.
    for (int j = dim - 1; j >= 0; --j) {
        double min = c(0, j);
        int imin = 0;
        for (int i = 1; i < dim; ++i) {
            if (c(i, j) < min) {
                min = c(i, j);
                imin = i;
            }
        }
        v[j] = min;
        if (++matches[imin] == 1) {
            rowsol[imin] = j;
            colsol[j] = imin;
        } else {
            colsol[j] = -1;
        }
    }

    // Reduction transfer.
    int numfree = 0;
    for (int i = 0; i < dim; ++i) {
        if (matches[i] == 0) {
            free_rows[numfree++] = i;
        } else if (matches[i] == 1) {
            int j1 = rowsol[i];
            double min = inf;
            for (int j = 0; j < dim; ++j)
                if (j != j1 && c(i, j) - v[j] < min) min = c(i, j) - v[j];
            v[j1] -= min;
        }
    }

    // Augmenting row reduction, two sweeps.
    for (int loop = 0; loop < 2; ++loop) {
        int k = 0;
        int prevnumfree = numfree;
        numfree = 0;
        while (k < prevnumfree) {
            int i = free_rows[k++];
            double umin = c(i, 0) - v[0];
            int j1 = 0;
            double usubmin = inf;
            int j2 = -1;
            for (int j = 1; j < dim; ++j) {
                double h = c(i, j) - v[j];
                if (h < usubmin) {
                    if (h >= umin) {
                        usubmin = h;
                        j2 = j;
                    } else {
                        usubmin = umin;
                        j2 = j1;
                        umin = h;
                        j1 = j;
                    }
                }
            }
            int i0 = colsol[j1];
            const bool strict = umin < usubmin - eps;
            if (strict) {
                v[j1] -= usubmin - umin;
            } else if (i0 >= 0) {
                j1 = j2;
                i0 = colsol[j1];
            }
            rowsol[i] = j1;
            colsol[j1] = i;
            if (i0 >= 0) {
                if (strict)
                    free_rows[--k] = i0;
                else
                    free_rows[numfree++] = i0;
            }
        }
    }

    // Augment remaining free rows via Dijkstra-style shortest alternating paths.
    for (int f = 0; f < numfree; ++f) {
        const int freerow = free_rows[f];
        for (int j = 0; j < dim; ++j) {
            d[j] = c(freerow, j) - v[j];
            pred[j] = freerow;
            collist[j] = j;
        }
        int low = 0, up = 0, last = -1, endofpath = -1;
        double min = 0.0;
        bool unassigned_found = false;
        do {
            if (up == low) {
                last = low - 1;
                min = d[collist[up++]];
                for (int k = up; k < dim; ++k) {
                    int j = collist[k];
                    double h = d[j];
                    if (h <= min) {
                        if (h < min) {
                            up = low;
                            min = h;
                        }
                        collist[k] = collist[up];
                        collist[up++] = j;
                    }
                }
                for (int k = low; k < up; ++k) {
                    if (colsol[collist[k]] < 0) {
                        endofpath = collist[k];
                        unassigned_found = true;
                        break;
                    }
                }
            }
            if (!unassigned_found) {
                int j1 = collist[low++];
                int i = colsol[j1];
                double h = c(i, j1) - v[j1] - min;
                for (int k = up; k < dim; ++k) {
                    int j = collist[k];
                    double v2 = c(i, j) - v[j] - h;
                    if (v2 < d[j]) {
                        pred[j] = i;
                        if (v2 == min) {
                            if (colsol[j] < 0) {
                                endofpath = j;
                                unassigned_found = true;
                                break;
                            }
                            collist[k] = collist[up];
                            collist[up++] = j;
                        }
                        d[j] = v2;
                    }
                }
            }
        } while (!unassigned_found);

        for (int k = 0; k <= last; ++k) {
            int j1 = collist[k];
            v[j1] += d[j1] - min;
        }
        int i, j = endofpath;
        do {
            i = pred[j];
            colsol[j] = i;
            int tmp = j;
            j = rowsol[i];
            rowsol[i] = tmp;
        } while (i != freerow);
    }

    double total = 0.0;
    for (int i = 0; i < dim; ++i) total += c(i, rowsol[i]);
    return total;
}

} // namespace rw2

#pragma once

// Exact integer linear algebra: Hermite normal form of a lattice row basis
// and solvability of A x = b over Z (with kernel basis). Used for membership
// and canonical forms in finitely generated subgroups of K*.

#include <cstddef>
#include <vector>

#include "glcf/field.hpp"

namespace glcf {

using ZVector = std::vector<Integer>;
using ZMatrix = std::vector<ZVector>;

/// Canonical row-style Hermite normal form of the lattice spanned by `rows`.
/// Pivots are positive, entries above a pivot are reduced into [0, pivot),
/// zero rows are dropped. The result depends only on the lattice.
inline ZMatrix row_hnf(ZMatrix rows) {
    if (rows.empty()) return {};
    const std::size_t cols = rows[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        // gcd-combine all rows below `rank` so only one has a nonzero in col
        for (std::size_t i = rank + 1; i < rows.size(); ++i) {
            while (rows[i][col] != 0) {
                if (rows[rank][col] == 0) {
                    std::swap(rows[rank], rows[i]);
                    break;
                }
                Integer q = rows[i][col] / rows[rank][col];
                for (std::size_t k = 0; k < cols; ++k) rows[i][k] -= q * rows[rank][k];
                if (rows[i][col] != 0) std::swap(rows[rank], rows[i]);
            }
        }
        if (rows[rank][col] == 0) continue;
        if (rows[rank][col] < 0)
            for (std::size_t k = 0; k < cols; ++k) rows[rank][k] = -rows[rank][k];
        // reduce entries above the pivot into [0, pivot)
        for (std::size_t i = 0; i < rank; ++i) {
            Integer q = rows[i][col] / rows[rank][col];
            if (rows[i][col] - q * rows[rank][col] < 0) q -= 1;
            if (q != 0)
                for (std::size_t k = 0; k < cols; ++k) rows[i][k] -= q * rows[rank][k];
        }
        ++rank;
    }
    rows.resize(rank);
    return rows;
}

struct ZSolve {
    bool feasible = false;
    ZVector solution;        // one solution of A x = b
    ZMatrix kernel;          // basis of { x : A x = 0 }
};

/// Solve A x = b exactly over the integers via column reduction with a
/// unimodular transform. r x c system; empty A (no rows) is feasible iff b
/// is empty, with full kernel.
inline ZSolve solve_integer_system(const ZMatrix& a, const ZVector& b) {
    const std::size_t r = a.size();
    const std::size_t c = r == 0 ? 0 : a[0].size();
    ZMatrix h = a;
    // u tracks column operations: columns of (original A) * u = columns of h
    ZMatrix u(c, ZVector(c, 0));
    for (std::size_t i = 0; i < c; ++i) u[i][i] = 1;

    auto col_sub = [&](std::size_t dst, std::size_t src, const Integer& q) {
        for (std::size_t i = 0; i < r; ++i) h[i][dst] -= q * h[i][src];
        for (std::size_t i = 0; i < c; ++i) u[i][dst] -= q * u[i][src];
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        for (std::size_t i = 0; i < r; ++i) std::swap(h[i][x], h[i][y]);
        for (std::size_t i = 0; i < c; ++i) std::swap(u[i][x], u[i][y]);
    };

    std::vector<std::pair<std::size_t, std::size_t>> pivots; // (row, col of h)
    std::size_t next_col = 0;
    for (std::size_t row = 0; row < r && next_col < c; ++row) {
        // enforce a single nonzero among columns >= next_col in this row
        for (std::size_t j = next_col + 1; j < c; ++j) {
            while (h[row][j] != 0) {
                if (h[row][next_col] == 0) {
                    col_swap(next_col, j);
                    break;
                }
                Integer q = h[row][j] / h[row][next_col];
                col_sub(j, next_col, q);
                if (h[row][j] != 0) col_swap(next_col, j);
            }
        }
        if (h[row][next_col] != 0) {
            pivots.emplace_back(row, next_col);
            ++next_col;
        }
    }

    ZSolve out;
    // back-substitute along the staircase
    ZVector residual = b;
    ZVector y(c, 0);
    for (auto [prow, pcol] : pivots) {
        Integer num = residual[prow];
        Integer den = h[prow][pcol];
        if (num % den != 0) return out; // infeasible
        y[pcol] = num / den;
        for (std::size_t i = 0; i < r; ++i) residual[i] -= y[pcol] * h[i][pcol];
    }
    for (std::size_t i = 0; i < r; ++i)
        if (residual[i] != 0) return out;

    out.feasible = true;
    out.solution.assign(c, 0);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t k = 0; k < c; ++k)
            if (y[k] != 0) out.solution[i] += u[i][k] * y[k];

    for (std::size_t j = next_col; j < c; ++j) {
        ZVector basis(c);
        for (std::size_t i = 0; i < c; ++i) basis[i] = u[i][j];
        out.kernel.push_back(std::move(basis));
    }
    return out;
}

} // namespace glcf

#pragma once

#include "flowtri/numeric.hpp"

#include <optional>

namespace flowtri::linalg {

/// Rank over Q of an integer matrix (rows x cols).
int rank(const IntMat& m);

/// Determinant of a square integer matrix, by fraction-free (Bareiss)
/// elimination.
Int det(IntMat m);

/// Row-style Hermite normal form. Returns the nonzero rows: pivots positive,
/// entries above each pivot reduced into [0, pivot). The result is the
/// canonical basis of the row lattice of `m`.
IntMat hnf_rows(IntMat m);

/// Basis of the integer kernel {x in Z^n : m * x = 0} for an (r x n) matrix,
/// as rows. Kernels of integer matrices are saturated by construction.
IntMat kernel(const IntMat& m);

/// Solves a * x = b over the rationals for a general (possibly non-square)
/// system. Returns nullopt if inconsistent. Requires full column rank, which
/// makes the solution unique; throws InvalidInputError otherwise.
std::optional<RatVec> solve(RatMat a, RatVec b);

/// Like solve, but answers nullopt instead of throwing when the system is
/// rank-deficient (no unique solution).
std::optional<RatVec> solve_unique(RatMat a, RatVec b);

}  // namespace flowtri::linalg

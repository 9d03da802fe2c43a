#pragma once

#include <cstddef>
#include <cstdint>

#include "simplab/int_matrix.hpp"

namespace simplab {

inline constexpr std::size_t kDetCofactorLimit = 10;

/// Signed Laplace expansion along `row` (1-based, same clamping policy as
/// perm_expand). Throws std::out_of_range or GuardError.
Integer det_cofactor(const IntMatrix& a, std::size_t row = 1, std::size_t max_n = kDetCofactorLimit);

struct EliminationReport {
    Integer value;
    std::uint64_t divisions = 0;
    std::uint64_t row_swaps = 0;
    /// Set when a pivot column was entirely zero and elimination stopped.
    bool singular = false;
};

/// Fraction-free (Bareiss) elimination: each step pivots on the leading entry,
/// exchanging rows when it is zero, and updates
///   b[i][j] <- (pivot * b[i][j] - b[i][k] * b[k][j]) / previous_pivot,
/// where every division is exact. An inexact division throws
/// ConsistencyError.
EliminationReport det_elimination_report(const IntMatrix& a);
Integer det_elimination(const IntMatrix& a);

}  // namespace simplab

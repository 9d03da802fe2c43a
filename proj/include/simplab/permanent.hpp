#pragma once

#include <cstddef>

#include "simplab/int_matrix.hpp"

namespace simplab {

inline constexpr std::size_t kPermNaiveLimit = 12;
inline constexpr std::size_t kPermExpandLimit = 13;
inline constexpr std::size_t kPermSubsetDpLimit = 26;
inline constexpr std::size_t kPermRyserLimit = 30;

/// Sum over all n! permutations of the product a[i][sigma(i)], permutations
/// visited in lexicographic order. Throws GuardError when n > max_n.
Integer perm_naive(const IntMatrix& a, std::size_t max_n = kPermNaiveLimit);

/// Row expansion perm(A) = sum_j a[row][j] * perm(A without row, column j),
/// applied literally at every level. `row` is 1-based; once it exceeds the
/// size of the shrinking submatrix the first remaining row is used.
/// Throws std::out_of_range for a bad row, GuardError when n > max_n.
Integer perm_expand(const IntMatrix& a, std::size_t row = 1, std::size_t max_n = kPermExpandLimit);

/// The same expansion memoized over column subsets: P(empty) = 1 and
/// P(S) = sum_{j in S} a[|S|][j] * P(S \ {j}). Theta(2^n n) time, 2^n entries.
Integer perm_subset_dp(const IntMatrix& a, std::size_t max_n = kPermSubsetDpLimit);

/// Ryser's inclusion-exclusion formula
///   perm(A) = (-1)^n sum_{S nonempty} (-1)^|S| prod_i sum_{j in S} a[i][j],
/// with subsets visited in Gray-code order so each step adjusts the row sums
/// by one column.
Integer perm_ryser(const IntMatrix& a, std::size_t max_n = kPermRyserLimit);

}  // namespace simplab

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simplab/expr.hpp"

namespace simplab {

/// Dense square matrix of arbitrary-precision integers, row-major.
class IntMatrix {
public:
    /// n x n zero matrix; n must be at least 1.
    explicit IntMatrix(std::size_t n);
    /// Throws std::invalid_argument unless `rows` is square and non-empty.
    static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows);
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
    static IntMatrix identity(std::size_t n);
    static IntMatrix ones(std::size_t n);
    /// Entries uniform in [lo, hi], reproducible for a given seed on every
    /// platform.
    static IntMatrix random(std::size_t n, std::uint64_t seed, long lo = -9, long hi = 9);

    std::size_t size() const noexcept { return n_; }
    const Integer& operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }
    std::span<const Integer> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }

    IntMatrix with_entry(std::size_t row, std::size_t col, Integer value) const;
    IntMatrix with_rows_swapped(std::size_t a, std::size_t b) const;
    IntMatrix with_cols_swapped(std::size_t a, std::size_t b) const;
    /// Row i of the result is row perm[i] of this matrix.
    IntMatrix with_rows_permuted(std::span<const std::size_t> perm) const;
    IntMatrix with_cols_permuted(std::span<const std::size_t> perm) const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t n_;
    std::vector<Integer> data_;
};

/// Text form: first line n, then n lines of n whitespace-separated integers.
/// Throws ParseError.
IntMatrix parse_matrix(std::string_view text);
std::string render_matrix(const IntMatrix& m);

}  // namespace simplab

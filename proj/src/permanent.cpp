#include "simplab/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "simplab/errors.hpp"

namespace simplab {

namespace {

void guard(const char* algorithm, const IntMatrix& a, std::size_t limit) {
    if (a.size() > limit) throw GuardError(algorithm, limit, a.size());
}

/// k-th (0-based) set bit of mask.
unsigned nth_bit(std::uint32_t mask, std::size_t k) {
    for (; k > 0; --k) mask &= mask - 1;
    return static_cast<unsigned>(std::countr_zero(mask));
}

Integer expand(const IntMatrix& a, std::uint32_t rows, std::uint32_t cols, std::size_t row) {
    const auto m = static_cast<std::size_t>(std::popcount(rows));
    const unsigned r = nth_bit(rows, row <= m ? row - 1 : 0);
    if (m == 1) return a(r, static_cast<unsigned>(std::countr_zero(cols)));
    Integer sum = 0;
    for (std::uint32_t rest = cols; rest != 0; rest &= rest - 1) {
        const unsigned c = static_cast<unsigned>(std::countr_zero(rest));
        sum += a(r, c) * expand(a, rows & ~(1u << r), cols & ~(1u << c), row);
    }
    return sum;
}

}  // namespace

Integer perm_naive(const IntMatrix& a, std::size_t max_n) {
    guard("perm_naive", a, max_n);
    const std::size_t n = a.size();
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    Integer total = 0;
    Integer product;
    do {
        product = 1;
        for (std::size_t i = 0; i < n; ++i) product *= a(i, sigma[i]);
        total += product;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

Integer perm_expand(const IntMatrix& a, std::size_t row, std::size_t max_n) {
    guard("perm_expand", a, max_n);
    if (row < 1 || row > a.size()) {
        throw std::out_of_range("perm_expand: row " + std::to_string(row) + " outside [1, " +
                                std::to_string(a.size()) + "]");
    }
    const std::uint32_t all = (1u << a.size()) - 1;
    return expand(a, all, all, row);
}

Integer perm_subset_dp(const IntMatrix& a, std::size_t max_n) {
    guard("perm_subset_dp", a, max_n);
    const std::size_t n = a.size();
    std::vector<Integer> table(std::size_t{1} << n);
    table[0] = 1;
    for (std::uint32_t set = 1; set < table.size(); ++set) {
        const std::size_t r = static_cast<std::size_t>(std::popcount(set)) - 1;
        mpz_ptr out = table[set].get_mpz_t();
        for (std::uint32_t rest = set; rest != 0; rest &= rest - 1) {
            const unsigned c = static_cast<unsigned>(std::countr_zero(rest));
            mpz_addmul(out, a(r, c).get_mpz_t(), table[set & ~(1u << c)].get_mpz_t());
        }
    }
    return table.back();
}

namespace {

// Row sums in machine words; valid when n * max|a_ij| fits comfortably.
Integer ryser_small(const IntMatrix& a) {
    const std::size_t n = a.size();
    std::vector<long> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = a(i, j).get_si();
    }
    std::vector<long> sums(n, 0);
    Integer total = 0;
    Integer product;
    std::uint64_t gray = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const unsigned j = static_cast<unsigned>(std::countr_zero(k));
        gray ^= std::uint64_t{1} << j;
        const bool added = (gray >> j) & 1;
        for (std::size_t i = 0; i < n; ++i) sums[i] += added ? entries[i * n + j] : -entries[i * n + j];

        // Same work for every subset: zero sums are flagged rather than
        // short-circuited, and factors are batched in a machine word.
        bool zero = false;
        long chunk = 1;
        mpz_set_ui(product.get_mpz_t(), 1);
        for (std::size_t i = 0; i < n; ++i) {
            const long s = sums[i] == 0 ? 1 : sums[i];
            zero |= sums[i] == 0;
            long next;
            if (__builtin_mul_overflow(chunk, s, &next)) {
                mpz_mul_si(product.get_mpz_t(), product.get_mpz_t(), chunk);
                next = s;
            }
            chunk = next;
        }
        mpz_mul_si(product.get_mpz_t(), product.get_mpz_t(), chunk);
        if (zero) continue;
        if (std::popcount(gray) % 2 == 1) {
            total -= product;
        } else {
            total += product;
        }
    }
    return n % 2 == 1 ? Integer(-total) : total;
}

Integer ryser_big(const IntMatrix& a) {
    const std::size_t n = a.size();
    std::vector<Integer> sums(n, 0);
    Integer total = 0;
    Integer product;
    std::uint64_t gray = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const unsigned j = static_cast<unsigned>(std::countr_zero(k));
        gray ^= std::uint64_t{1} << j;
        const bool added = (gray >> j) & 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (added) {
                sums[i] += a(i, j);
            } else {
                sums[i] -= a(i, j);
            }
        }
        product = sums[0];
        for (std::size_t i = 1; i < n && sgn(product) != 0; ++i) product *= sums[i];
        if (std::popcount(gray) % 2 == 1) {
            total -= product;
        } else {
            total += product;
        }
    }
    return n % 2 == 1 ? Integer(-total) : total;
}

}  // namespace

Integer perm_ryser(const IntMatrix& a, std::size_t max_n) {
    guard("perm_ryser", a, max_n);
    const std::size_t n = a.size();
    const Integer bound = Integer(std::numeric_limits<long>::max() / 2) / static_cast<unsigned long>(n);
    bool small = true;
    for (std::size_t i = 0; i < n && small; ++i) {
        for (std::size_t j = 0; j < n && small; ++j) small = abs(a(i, j)) <= bound;
    }
    return small ? ryser_small(a) : ryser_big(a);
}

}  // namespace simplab

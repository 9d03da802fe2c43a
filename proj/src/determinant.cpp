#include "simplab/determinant.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

#include "simplab/errors.hpp"

namespace simplab {

namespace {

Integer laplace(const IntMatrix& a, std::uint32_t rows, std::uint32_t cols, std::size_t row) {
    const auto m = static_cast<std::size_t>(std::popcount(rows));
    const std::size_t pick = row <= m ? row - 1 : 0;
    std::uint32_t mask = rows;
    for (std::size_t k = 0; k < pick; ++k) mask &= mask - 1;
    const unsigned r = static_cast<unsigned>(std::countr_zero(mask));
    if (m == 1) return a(r, static_cast<unsigned>(std::countr_zero(cols)));

    Integer sum = 0;
    std::size_t position = 0;  // 0-based column position inside the submatrix
    for (std::uint32_t rest = cols; rest != 0; rest &= rest - 1, ++position) {
        const unsigned c = static_cast<unsigned>(std::countr_zero(rest));
        Integer term = a(r, c) * laplace(a, rows & ~(1u << r), cols & ~(1u << c), row);
        if ((pick + position) % 2 == 1) {
            sum -= term;
        } else {
            sum += term;
        }
    }
    return sum;
}

}  // namespace

Integer det_cofactor(const IntMatrix& a, std::size_t row, std::size_t max_n) {
    if (a.size() > max_n) throw GuardError("det_cofactor", max_n, a.size());
    if (row < 1 || row > a.size()) {
        throw std::out_of_range("det_cofactor: row " + std::to_string(row) + " outside [1, " +
                                std::to_string(a.size()) + "]");
    }
    const std::uint32_t all = (1u << a.size()) - 1;
    return laplace(a, all, all, row);
}

EliminationReport det_elimination_report(const IntMatrix& a) {
    const std::size_t n = a.size();
    std::vector<Integer> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j);
    }
    auto at = [&](std::size_t i, std::size_t j) -> Integer& { return m[i * n + j]; };

    EliminationReport report;
    bool negate = false;
    Integer previous = 1;
    Integer scratch;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(at(k, k)) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && sgn(at(swap, k)) == 0) ++swap;
            if (swap == n) {
                report.value = 0;
                report.singular = true;
                return report;
            }
            for (std::size_t j = k; j < n; ++j) std::swap(at(k, j), at(swap, j));
            negate = !negate;
            ++report.row_swaps;
        }
        const Integer& pivot = at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_ptr target = at(i, j).get_mpz_t();
                mpz_mul(scratch.get_mpz_t(), pivot.get_mpz_t(), target);
                mpz_submul(scratch.get_mpz_t(), at(i, k).get_mpz_t(), at(k, j).get_mpz_t());
                if (mpz_divisible_p(scratch.get_mpz_t(), previous.get_mpz_t()) == 0) {
                    throw ConsistencyError("det_elimination: inexact division at step " +
                                           std::to_string(k));
                }
                mpz_divexact(target, scratch.get_mpz_t(), previous.get_mpz_t());
                ++report.divisions;
            }
            at(i, k) = 0;
        }
        previous = pivot;
    }
    report.value = negate ? Integer(-at(n - 1, n - 1)) : at(n - 1, n - 1);
    return report;
}

Integer det_elimination(const IntMatrix& a) { return det_elimination_report(a).value; }

}  // namespace simplab

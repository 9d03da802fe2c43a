#include "simplab/int_matrix.hpp"

#include <cctype>
#include <random>
#include <stdexcept>

#include "simplab/errors.hpp"

namespace simplab {

IntMatrix::IntMatrix(std::size_t n) : n_(n), data_(n * n) {
    if (n == 0) throw std::invalid_argument("matrix dimension must be at least 1");
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows) {
    IntMatrix m(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.size()) throw std::invalid_argument("matrix must be square");
        for (std::size_t c = 0; c < rows.size(); ++c) m.data_[r * m.n_ + c] = rows[r][c];
    }
    return m;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<Integer>> v;
    for (const auto& r : rows) v.emplace_back(r.begin(), r.end());
    return from_rows(v);
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
}

IntMatrix IntMatrix::ones(std::size_t n) {
    IntMatrix m(n);
    for (auto& v : m.data_) v = 1;
    return m;
}

IntMatrix IntMatrix::random(std::size_t n, std::uint64_t seed, long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("random matrix: empty entry range");
    IntMatrix m(n);
    std::mt19937_64 rng(seed);
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    for (auto& v : m.data_) v = lo + static_cast<long>(rng() % span);
    return m;
}

IntMatrix IntMatrix::with_entry(std::size_t row, std::size_t col, Integer value) const {
    IntMatrix m = *this;
    m.data_.at(row * n_ + col) = std::move(value);
    return m;
}

IntMatrix IntMatrix::with_rows_swapped(std::size_t a, std::size_t b) const {
    IntMatrix m = *this;
    for (std::size_t c = 0; c < n_; ++c) std::swap(m.data_[a * n_ + c], m.data_[b * n_ + c]);
    return m;
}

IntMatrix IntMatrix::with_cols_swapped(std::size_t a, std::size_t b) const {
    IntMatrix m = *this;
    for (std::size_t r = 0; r < n_; ++r) std::swap(m.data_[r * n_ + a], m.data_[r * n_ + b]);
    return m;
}

IntMatrix IntMatrix::with_rows_permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw std::invalid_argument("permutation size mismatch");
    IntMatrix m(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t c = 0; c < n_; ++c) m.data_[r * n_ + c] = (*this)(perm[r], c);
    }
    return m;
}

IntMatrix IntMatrix::with_cols_permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw std::invalid_argument("permutation size mismatch");
    IntMatrix m(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t c = 0; c < n_; ++c) m.data_[r * n_ + c] = (*this)(r, perm[c]);
    }
    return m;
}

IntMatrix parse_matrix(std::string_view text) {
    std::size_t pos = 0;
    auto next_token = [&](const char* what) -> std::pair<std::string, std::size_t> {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) throw ParseError(std::string("expected ") + what, pos);
        const std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        return {std::string(text.substr(start, pos - start)), start};
    };
    auto to_integer = [](const std::string& tok, std::size_t at) {
        const std::size_t digits = tok.starts_with('-') || tok.starts_with('+') ? 1 : 0;
        if (tok.size() == digits ||
            tok.find_first_not_of("0123456789", digits) != std::string::npos) {
            throw ParseError("'" + tok + "' is not an integer", at);
        }
        return Integer(tok[0] == '+' ? tok.substr(1) : tok);
    };

    const auto [dim_tok, dim_at] = next_token("matrix dimension");
    const Integer dim = to_integer(dim_tok, dim_at);
    if (dim < 1 || dim > 100000) throw ParseError("matrix dimension out of range", dim_at);
    const std::size_t n = dim.get_ui();

    std::vector<std::vector<Integer>> rows(n, std::vector<Integer>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const auto [tok, at] = next_token("matrix entry");
            rows[r][c] = to_integer(tok, at);
        }
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw ParseError("trailing data after matrix", pos);
    return IntMatrix::from_rows(rows);
}

std::string render_matrix(const IntMatrix& m) {
    std::string out = std::to_string(m.size()) + "\n";
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t c = 0; c < m.size(); ++c) {
            if (c) out += ' ';
            out += m(r, c).get_str();
        }
        out += '\n';
    }
    return out;
}

}  // namespace simplab

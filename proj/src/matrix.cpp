#include "sandpile/matrix.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sandpile {

Integer parse_integer(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size() ||
        !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
        throw std::invalid_argument("not a decimal integer: '" + s + "'");
    if (s[0] == '+') s.erase(0, 1);
    return Integer(s, 10);
}

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t f = 2; f * f <= p; ++f)
        if (p % f == 0) return false;
    return true;
}

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
        for (long v : r) data_.emplace_back(v);
    }
}

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

void IntegerMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) swap((*this)(a, j), (*this)(b, j));
}

void IntegerMatrix::swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) swap((*this)(i, a), (*this)(i, b));
}

bool IntegerMatrix::is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (i != j && sgn((*this)(i, j)) != 0) return false;
    return true;
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    IntegerMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Integer& x = a(i, k);
            if (sgn(x) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (sgn(b(k, j)) != 0) mpz_addmul(c(i, j).get_mpz_t(), x.get_mpz_t(), b(k, j).get_mpz_t());
        }
    return c;
}

IntegerMatrix transpose(const IntegerMatrix& m) {
    IntegerMatrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

Integer bareiss_determinant(IntegerMatrix m) {
    if (!m.square()) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    int sign = 1;
    Integer prev = 1;
    Integer t;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(m(k, k)) == 0) {
            std::size_t p = k + 1;
            while (p < n && sgn(m(p, k)) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        const Integer& pivot = m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const bool touched = sgn(m(i, k)) != 0;
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer& x = m(i, j);
                x *= pivot;
                if (touched) mpz_submul(x.get_mpz_t(), m(i, k).get_mpz_t(), m(k, j).get_mpz_t());
                mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = pivot;
    }
    return sign * m(n - 1, n - 1);
}

Integer sparse_symmetric_determinant(const IntegerMatrix& m) {
    if (!m.square()) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    std::vector<std::map<std::size_t, Integer>> rows(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (m(i, j) != m(j, i)) throw std::invalid_argument("sparse_symmetric_determinant: matrix not symmetric");
            if (sgn(m(i, j)) != 0) rows[i].emplace(j, m(i, j));
        }

    // pivots[s] is the pivot used at step s; pivots[0] = 1.
    std::vector<Integer> pivots{Integer(1)};
    std::vector<std::size_t> fresh_at(n, 0);
    std::vector<bool> done(n, false);

    auto materialize = [&](std::size_t r, std::size_t step) {
        if (fresh_at[r] == step) return;
        const Integer& num = pivots[step];
        const Integer& den = pivots[fresh_at[r]];
        for (auto& [c, v] : rows[r]) {
            v *= num;
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), den.get_mpz_t());
        }
        fresh_at[r] = step;
    };

    Integer t;
    for (std::size_t step = 1; step <= n; ++step) {
        std::size_t k = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i] && (k == n || rows[i].size() < rows[k].size())) k = i;
        const std::size_t prev_step = step - 1;
        materialize(k, prev_step);
        auto diag = rows[k].find(k);
        if (diag == rows[k].end()) throw std::domain_error("sparse_symmetric_determinant: zero pivot");
        const Integer pivot = diag->second;
        const Integer& prev = pivots[prev_step];

        for (const auto& [j, akj] : rows[k]) {
            if (j == k) continue;
            materialize(j, prev_step);
            auto& row = rows[j];
            const Integer ajk = row.at(k);
            row.erase(k);
            for (auto& [c, v] : row) v *= pivot;
            for (const auto& [c, kc] : rows[k]) {
                if (c == k) continue;
                Integer& v = row[c];
                mpz_submul(v.get_mpz_t(), ajk.get_mpz_t(), kc.get_mpz_t());
            }
            for (auto it = row.begin(); it != row.end();) {
                mpz_divexact(it->second.get_mpz_t(), it->second.get_mpz_t(), prev.get_mpz_t());
                it = sgn(it->second) == 0 ? row.erase(it) : std::next(it);
            }
            fresh_at[j] = step;
        }
        done[k] = true;
        pivots.push_back(pivot);
    }
    return pivots.back();
}

}  // namespace sandpile

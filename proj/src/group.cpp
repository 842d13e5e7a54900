#include "sandpile/group.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sandpile {

namespace {

int cmpabs(const Integer& x, const Integer& y) { return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t()); }

// Working state of the Smith reduction; keeps the transforms and their
// inverses in step with every elementary operation applied to `a`.
class SmithReducer {
public:
    explicit SmithReducer(const IntegerMatrix& m)
        : a(m),
          u(IntegerMatrix::identity(m.rows())),
          v(IntegerMatrix::identity(m.cols())),
          u_inv(IntegerMatrix::identity(m.rows())),
          v_inv(IntegerMatrix::identity(m.cols())) {}

    IntegerMatrix a, u, v, u_inv, v_inv;

    // row_i += q * row_j
    void add_row(std::size_t i, std::size_t j, const Integer& q) {
        if (sgn(q) == 0) return;
        axpy_row(a, i, j, q);
        axpy_row(u, i, j, q);
        // u_inv: col_j -= q * col_i
        for (std::size_t r = 0; r < u_inv.rows(); ++r)
            if (sgn(u_inv(r, i)) != 0) mpz_submul(u_inv(r, j).get_mpz_t(), q.get_mpz_t(), u_inv(r, i).get_mpz_t());
    }

    // col_i += q * col_j
    void add_col(std::size_t i, std::size_t j, const Integer& q) {
        if (sgn(q) == 0) return;
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (sgn(a(r, j)) != 0) mpz_addmul(a(r, i).get_mpz_t(), q.get_mpz_t(), a(r, j).get_mpz_t());
        for (std::size_t r = 0; r < v.rows(); ++r)
            if (sgn(v(r, j)) != 0) mpz_addmul(v(r, i).get_mpz_t(), q.get_mpz_t(), v(r, j).get_mpz_t());
        // v_inv: row_j -= q * row_i
        for (std::size_t c = 0; c < v_inv.cols(); ++c)
            if (sgn(v_inv(i, c)) != 0) mpz_submul(v_inv(j, c).get_mpz_t(), q.get_mpz_t(), v_inv(i, c).get_mpz_t());
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        a.swap_rows(i, j);
        u.swap_rows(i, j);
        u_inv.swap_cols(i, j);
    }

    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        a.swap_cols(i, j);
        v.swap_cols(i, j);
        v_inv.swap_rows(i, j);
    }

    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
        for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = -u(i, c);
        for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv(r, i) = -u_inv(r, i);
    }

    void reduce() {
        const std::size_t steps = std::min(a.rows(), a.cols());
        for (std::size_t t = 0; t < steps; ++t) {
            if (!place_pivot(t)) break;
            while (!clear_cross(t)) {
            }
            if (sgn(a(t, t)) < 0) negate_row(t);
        }
    }

private:
    static void axpy_row(IntegerMatrix& m, std::size_t i, std::size_t j, const Integer& q) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (sgn(m(j, c)) != 0) mpz_addmul(m(i, c).get_mpz_t(), q.get_mpz_t(), m(j, c).get_mpz_t());
    }

    // Moves the best pivot of the trailing block to (t, t); false if the
    // block is zero.
    bool place_pivot(std::size_t t) {
        const std::size_t rows = a.rows(), cols = a.cols();
        std::vector<std::size_t> row_nnz(rows, 0), col_nnz(cols, 0);
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (sgn(a(i, j)) != 0) {
                    ++row_nnz[i];
                    ++col_nnz[j];
                }
        std::size_t bi = rows, bj = cols;
        for (std::size_t i = t; i < rows; ++i) {
            if (row_nnz[i] == 0) continue;
            for (std::size_t j = t; j < cols; ++j) {
                if (sgn(a(i, j)) == 0) continue;
                if (bi == rows) {
                    bi = i, bj = j;
                    continue;
                }
                const int c = cmpabs(a(i, j), a(bi, bj));
                if (c < 0 || (c == 0 && (row_nnz[i] - 1) * (col_nnz[j] - 1) < (row_nnz[bi] - 1) * (col_nnz[bj] - 1)))
                    bi = i, bj = j;
            }
        }
        if (bi == rows) return false;
        swap_rows(t, bi);
        swap_cols(t, bj);
        return true;
    }

    // One round of clearing row t and column t against the pivot. Returns true
    // once the cross is clear and the pivot divides the trailing block.
    bool clear_cross(std::size_t t) {
        const std::size_t rows = a.rows(), cols = a.cols();
        Integer q;
        for (std::size_t i = t + 1; i < rows; ++i)
            if (sgn(a(i, t)) != 0) {
                mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
                add_row(i, t, -q);
            }
        for (std::size_t j = t + 1; j < cols; ++j)
            if (sgn(a(t, j)) != 0) {
                mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
                add_col(j, t, -q);
            }

        // Remainders left behind are smaller than the pivot: promote the smallest.
        std::size_t best_i = rows, best_j = cols;
        for (std::size_t i = t + 1; i < rows; ++i)
            if (sgn(a(i, t)) != 0 && (best_i == rows || cmpabs(a(i, t), a(best_i, t)) < 0)) best_i = i;
        for (std::size_t j = t + 1; j < cols; ++j)
            if (sgn(a(t, j)) != 0 && (best_j == cols || cmpabs(a(t, j), a(t, best_j)) < 0)) best_j = j;
        if (best_i != rows || best_j != cols) {
            const bool use_row = best_j == cols || (best_i != rows && cmpabs(a(best_i, t), a(t, best_j)) <= 0);
            if (use_row)
                swap_rows(t, best_i);
            else
                swap_cols(t, best_j);
            return false;
        }

        if (cmpabs(a(t, t), 1UL) == 0) return true;
        for (std::size_t i = t + 1; i < rows; ++i)
            for (std::size_t j = t + 1; j < cols; ++j)
                if (sgn(a(i, j)) != 0 && !mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
                    add_row(t, i, 1);
                    return false;
                }
        return true;
    }
};

}  // namespace

SmithForm smith_normal_form(const IntegerMatrix& m) {
    SmithReducer r(m);
    r.reduce();
    return SmithForm{std::move(r.a), std::move(r.u), std::move(r.v), std::move(r.u_inv), std::move(r.v_inv)};
}

void verify_smith_form(const IntegerMatrix& m, const SmithForm& f) {
    const auto& d = f.diagonal;
    if (d.rows() != m.rows() || d.cols() != m.cols()) throw std::logic_error("smith form: shape mismatch");
    if (!d.is_diagonal()) throw std::logic_error("smith form: result is not diagonal");
    const std::size_t k = std::min(d.rows(), d.cols());
    for (std::size_t i = 0; i < k; ++i) {
        if (sgn(d(i, i)) < 0) throw std::logic_error("smith form: negative diagonal entry");
        if (i + 1 < k && sgn(d(i + 1, i + 1)) != 0 &&
            (sgn(d(i, i)) == 0 || !mpz_divisible_p(d(i + 1, i + 1).get_mpz_t(), d(i, i).get_mpz_t())))
            throw std::logic_error("smith form: divisibility chain broken");
        if (i + 1 < k && sgn(d(i, i)) == 0 && sgn(d(i + 1, i + 1)) != 0)
            throw std::logic_error("smith form: zero before nonzero on the diagonal");
    }
    if (f.left * m * f.right != d) throw std::logic_error("smith form: u * m * v != d");
    if (f.left * f.left_inverse != IntegerMatrix::identity(m.rows()))
        throw std::logic_error("smith form: left transform is not unimodular");
    if (f.right * f.right_inverse != IntegerMatrix::identity(m.cols()))
        throw std::logic_error("smith form: right transform is not unimodular");
}

GroupDecomposition::GroupDecomposition(std::vector<Integer> invariant_factors) {
    for (auto& f : invariant_factors) {
        if (sgn(f) <= 0) throw std::invalid_argument("invariant factors must be positive");
        if (f == 1) continue;
        if (!factors_.empty() && !mpz_divisible_p(f.get_mpz_t(), factors_.back().get_mpz_t()))
            throw std::invalid_argument("invariant factors must form a divisibility chain");
        order_ *= f;
        factors_.push_back(std::move(f));
    }
}

std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n) {
    if (sgn(n) <= 0) throw std::invalid_argument("factorize needs a positive integer");
    std::vector<std::pair<Integer, unsigned>> out;
    Integer rest = n;
    constexpr unsigned long trial_limit = 1'000'000;
    for (unsigned long p = 2; p <= trial_limit && cmp(rest, 1UL) > 0; ++p) {
        if (Integer(p) * p > rest) break;
        if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
        unsigned e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        }
        out.emplace_back(Integer(p), e);
    }
    if (cmp(rest, 1UL) > 0) {
        if (Integer(trial_limit) * trial_limit < rest && mpz_probab_prime_p(rest.get_mpz_t(), 50) == 0)
            throw std::domain_error("factorize: cofactor too large for trial division");
        out.emplace_back(rest, 1);
    }
    return out;
}

GroupDecomposition canonical_form(const CyclicSummandList& summands) {
    constexpr std::uint64_t max_copies = 10'000'000;
    std::map<Integer, std::vector<unsigned>> exponents;
    for (const auto& s : summands) {
        if (sgn(s.modulus) <= 0) throw std::invalid_argument("cyclic summand modulus must be positive");
        if (s.multiplicity > max_copies) throw std::length_error("cyclic summand multiplicity too large");
        for (const auto& [p, e] : factorize(s.modulus)) {
            auto& list = exponents[p];
            list.insert(list.end(), s.multiplicity, e);
        }
    }
    std::size_t count = 0;
    for (auto& [p, list] : exponents) {
        std::sort(list.begin(), list.end(), std::greater<>());
        count = std::max(count, list.size());
    }
    // factors[0] is the largest invariant factor.
    std::vector<Integer> factors(count, Integer(1));
    for (const auto& [p, list] : exponents)
        for (std::size_t i = 0; i < list.size(); ++i) factors[i] *= ipow(p, list[i]);
    std::reverse(factors.begin(), factors.end());
    return GroupDecomposition(std::move(factors));
}

bool decomposition_equals(const CyclicSummandList& a, const GroupDecomposition& b) { return canonical_form(a) == b; }

GroupDecomposition sandpile_group(const SinkedMultigraph& g) {
    const IntegerMatrix laplacian = reduced_laplacian(g);
    const SmithForm f = smith_normal_form(laplacian);
    verify_smith_form(laplacian, f);
    std::vector<Integer> diag;
    for (std::size_t i = 0; i < f.diagonal.rows(); ++i) {
        if (sgn(f.diagonal(i, i)) == 0) throw std::logic_error("sandpile_group: singular reduced Laplacian");
        diag.push_back(f.diagonal(i, i));
    }
    GroupDecomposition dec(std::move(diag));
    if (dec.order() != spanning_tree_count(g))
        throw std::logic_error("sandpile_group: group order differs from spanning-tree count");
    return dec;
}

std::size_t sylow_rank(const GroupDecomposition& dec, std::uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("sylow_rank needs a prime");
    return static_cast<std::size_t>(std::count_if(dec.invariant_factors().begin(), dec.invariant_factors().end(),
                                                  [p](const Integer& f) { return mpz_divisible_ui_p(f.get_mpz_t(), p) != 0; }));
}

}  // namespace sandpile

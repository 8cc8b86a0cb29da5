#pragma once

#include "abelnet/numeric.hpp"

#include <optional>
#include <utility>

namespace abelnet {

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        Rational inv = Rational(1) / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            Rational f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(RatMatrix m) { return rref(m).size(); }

// Basis of the right null space.
inline std::vector<RatVec> kernel(RatMatrix m) {
    auto pivots = rref(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (auto p : pivots) is_pivot[p] = 1;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(m.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& a) {
    std::size_t n = a.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

inline std::optional<RatVec> solve(const RatMatrix& a, const RatVec& b) {
    auto inv = inverse(a);
    if (!inv) return std::nullopt;
    return mat_vec(*inv, b);
}

inline Rational determinant(RatMatrix m) {
    std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rational f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

inline BigInt determinant(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
    return numer(determinant(r));
}

struct SmithForm {
    IntMatrix U, S, V;  // U * M * V = S

    std::vector<BigInt> diagonal() const {
        std::vector<BigInt> d;
        for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
        return d;
    }
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row a += f * row b
inline void add_row(IntMatrix& m, std::size_t a, std::size_t b, const BigInt& f) {
    if (f == 0) return;
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) += f * m(b, j);
}
inline void add_col(IntMatrix& m, std::size_t a, std::size_t b, const BigInt& f) {
    if (f == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) += f * m(i, b);
}
inline void negate_row(IntMatrix& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}

// Floor division that keeps remainders nonnegative.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

} // namespace detail

// Smith normal form by pivoting on the smallest nonzero entry.
inline SmithForm smith_normal_form(const IntMatrix& M) {
    using namespace detail;
    std::size_t m = M.rows(), n = M.cols();
    SmithForm f{IntMatrix::identity(m), M, IntMatrix::identity(n)};
    IntMatrix& S = f.S;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        while (true) {
            // smallest nonzero entry in the trailing block
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (S(i, j) != 0 && (!best || abs(S(i, j)) < abs(S(best->first, best->second))))
                        best = std::make_pair(i, j);
            if (!best) return f;
            swap_rows(S, t, best->first);
            swap_rows(f.U, t, best->first);
            swap_cols(S, t, best->second);
            swap_cols(f.V, t, best->second);

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (S(i, t) == 0) continue;
                BigInt q = floor_div(S(i, t), S(t, t));
                add_row(S, i, t, -q);
                add_row(f.U, i, t, -q);
                if (S(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (S(t, j) == 0) continue;
                BigInt q = floor_div(S(t, j), S(t, t));
                add_col(S, j, t, -q);
                add_col(f.V, j, t, -q);
                if (S(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility: pull in any entry not divisible by the pivot
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        add_row(S, t, i, 1);
                        add_row(f.U, t, i, 1);
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (S(t, t) < 0) {
            negate_row(S, t);
            negate_row(f.U, t);
        }
    }
    return f;
}

// Column-style Hermite basis: returns a basis (as columns) of the lattice
// spanned by the columns of G. Rank is the number of returned columns.
inline IntMatrix lattice_basis(const IntMatrix& G) {
    using namespace detail;
    // work on the transpose so that column operations become row operations
    IntMatrix R = G.transpose();
    std::size_t rows = R.rows(), cols = R.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        while (true) {
            std::optional<std::size_t> best;
            for (std::size_t i = r; i < rows; ++i)
                if (R(i, c) != 0 && (!best || abs(R(i, c)) < abs(R(*best, c)))) best = i;
            if (!best) break;
            swap_rows(R, r, *best);
            bool done = true;
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (R(i, c) == 0) continue;
                add_row(R, i, r, -floor_div(R(i, c), R(r, c)));
                if (R(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (r < rows && R(r, c) != 0) {
            if (R(r, c) < 0) negate_row(R, r);
            ++r;
        }
    }
    IntMatrix B(G.rows(), r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < G.rows(); ++i) B(i, j) = R(j, i);
    return B;
}

// Basis (columns) of the integer kernel {z : M z = 0}.
inline IntMatrix integer_kernel(const IntMatrix& M) {
    auto f = smith_normal_form(M);
    std::size_t rk = 0;
    for (const auto& d : f.diagonal())
        if (d != 0) ++rk;
    IntMatrix K(M.cols(), M.cols() - rk);
    for (std::size_t j = rk; j < M.cols(); ++j)
        for (std::size_t i = 0; i < M.cols(); ++i) K(i, j - rk) = f.V(i, j);
    return K;
}

// Solve B y = z for integer y when B has full column rank; nullopt otherwise.
inline std::optional<std::vector<BigInt>> integer_coordinates(const IntMatrix& B, const std::vector<BigInt>& z) {
    RatMatrix aug(B.rows(), B.cols() + 1);
    for (std::size_t i = 0; i < B.rows(); ++i) {
        for (std::size_t j = 0; j < B.cols(); ++j) aug(i, j) = Rational(B(i, j));
        aug(i, B.cols()) = Rational(z[i]);
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == B.cols()) return std::nullopt;
    std::vector<BigInt> y(B.cols(), 0);
    for (std::size_t r = 0; r < piv.size(); ++r) {
        Rational v = aug(r, B.cols());
        if (!is_integer(v)) return std::nullopt;
        y[piv[r]] = numer(v);
    }
    return y;
}

} // namespace abelnet

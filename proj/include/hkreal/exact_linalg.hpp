#pragma once

#include <cstddef>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "hkreal/matrix.hpp"
#include "hkreal/polynomial.hpp"

namespace hkreal {

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

// row_a -= q * row_b
inline void row_axpy(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
    if (q == 0) return;
    Int t;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        t = q * m(b, j);
        m(a, j) -= t;
    }
}

inline void negate_row(IntMatrix& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}

} // namespace detail

// Row-style Hermite normal form: returns (h, u) with u unimodular, u*m = h,
// pivots positive, entries above each pivot reduced into [0, pivot).
inline std::pair<IntMatrix, IntMatrix> hermite_normal_form(const IntMatrix& m) {
    const std::size_t r = m.rows(), c = m.cols();
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(r);
    std::size_t pivot_row = 0;
    Int g, s, t, q;
    for (std::size_t col = 0; col < c && pivot_row < r; ++col) {
        // combine rows below pivot_row so the column gcd lands at pivot_row
        std::size_t nz = pivot_row;
        while (nz < r && h(nz, col) == 0) ++nz;
        if (nz == r) continue;
        detail::swap_rows(h, pivot_row, nz);
        detail::swap_rows(u, pivot_row, nz);
        for (std::size_t i = pivot_row + 1; i < r; ++i) {
            if (h(i, col) == 0) continue;
            // 2x2 unimodular transform sending (a, b) to (gcd, 0)
            const Int a = h(pivot_row, col), b = h(i, col);
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            Int af = a / g, bf = b / g;
            for (std::size_t j = 0; j < c; ++j) {
                Int x = s * h(pivot_row, j) + t * h(i, j);
                Int y = af * h(i, j) - bf * h(pivot_row, j);
                h(pivot_row, j) = x;
                h(i, j) = y;
            }
            for (std::size_t j = 0; j < r; ++j) {
                Int x = s * u(pivot_row, j) + t * u(i, j);
                Int y = af * u(i, j) - bf * u(pivot_row, j);
                u(pivot_row, j) = x;
                u(i, j) = y;
            }
        }
        if (sgn(h(pivot_row, col)) < 0) {
            detail::negate_row(h, pivot_row);
            detail::negate_row(u, pivot_row);
        }
        const Int& piv = h(pivot_row, col);
        for (std::size_t i = 0; i < pivot_row; ++i) {
            // floor division puts the entry above into [0, piv)
            mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), piv.get_mpz_t());
            detail::row_axpy(h, i, pivot_row, q);
            detail::row_axpy(u, i, pivot_row, q);
        }
        ++pivot_row;
    }
    return {h, u};
}

inline std::size_t rank(const IntMatrix& m) {
    if (m.rows() == 0) return 0;
    auto [h, u] = hermite_normal_form(m);
    (void)u;
    std::size_t r = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) {
                zero = false;
                break;
            }
        if (!zero) ++r;
    }
    return r;
}

// Nonzero rows of the HNF: the canonical basis of the row span.
inline IntMatrix row_span_basis(const IntMatrix& m) {
    if (m.rows() == 0) return m;
    auto [h, u] = hermite_normal_form(m);
    (void)u;
    std::vector<IntVec> rows;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) {
                zero = false;
                break;
            }
        if (!zero) rows.push_back(h.row(i));
    }
    return IntMatrix::from_rows(rows, m.cols());
}

// Smith normal form: (d, u, v) with u, v unimodular, u*m*v = d, diagonal
// nonnegative with d1 | d2 | ...
inline std::tuple<IntMatrix, IntMatrix, IntMatrix> smith_normal_form(const IntMatrix& m) {
    const std::size_t r = m.rows(), c = m.cols();
    IntMatrix d = m;
    IntMatrix u = IntMatrix::identity(r);
    IntMatrix v = IntMatrix::identity(c);
    Int g, s, t, q;

    auto col_gcd_step = [&](std::size_t k, std::size_t j) {
        // 2x2 unimodular transform on columns k and j of d (and of v); plain
        // elimination when the pivot already divides the entry, so the gcd
        // path always strictly shrinks the pivot
        const Int a = d(k, k), b = d(k, j);
        if (b % a == 0) {
            Int q = b / a;
            for (std::size_t i = 0; i < r; ++i) d(i, j) -= q * d(i, k);
            for (std::size_t i = 0; i < c; ++i) v(i, j) -= q * v(i, k);
            return;
        }
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Int af = a / g, bf = b / g;
        for (std::size_t i = 0; i < r; ++i) {
            Int x = s * d(i, k) + t * d(i, j);
            Int y = af * d(i, j) - bf * d(i, k);
            d(i, k) = x;
            d(i, j) = y;
        }
        for (std::size_t i = 0; i < c; ++i) {
            Int x = s * v(i, k) + t * v(i, j);
            Int y = af * v(i, j) - bf * v(i, k);
            v(i, k) = x;
            v(i, j) = y;
        }
    };
    auto row_gcd_step = [&](std::size_t k, std::size_t i) {
        const Int a = d(k, k), b = d(i, k);
        if (b % a == 0) {
            Int q = b / a;
            for (std::size_t j = 0; j < c; ++j) d(i, j) -= q * d(k, j);
            for (std::size_t j = 0; j < r; ++j) u(i, j) -= q * u(k, j);
            return;
        }
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Int af = a / g, bf = b / g;
        for (std::size_t j = 0; j < c; ++j) {
            Int x = s * d(k, j) + t * d(i, j);
            Int y = af * d(i, j) - bf * d(k, j);
            d(k, j) = x;
            d(i, j) = y;
        }
        for (std::size_t j = 0; j < r; ++j) {
            Int x = s * u(k, j) + t * u(i, j);
            Int y = af * u(i, j) - bf * u(k, j);
            u(k, j) = x;
            u(i, j) = y;
        }
    };

    const std::size_t n = std::min(r, c);
    for (std::size_t k = 0; k < n; ++k) {
        // move a nonzero entry to (k, k) if one exists
        std::size_t pi = r, pj = c;
        for (std::size_t i = k; i < r && pi == r; ++i)
            for (std::size_t j = k; j < c; ++j)
                if (d(i, j) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi == r) break;
        detail::swap_rows(d, k, pi);
        detail::swap_rows(u, k, pi);
        if (pj != k) {
            for (std::size_t i = 0; i < r; ++i) std::swap(d(i, k), d(i, pj));
            for (std::size_t i = 0; i < c; ++i) std::swap(v(i, k), v(i, pj));
        }
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t i = k + 1; i < r; ++i)
                if (d(i, k) != 0) row_gcd_step(k, i);
            for (std::size_t j = k + 1; j < c; ++j)
                if (d(k, j) != 0) {
                    col_gcd_step(k, j);
                    dirty = true;
                }
        }
        // pivot must divide the whole trailing block for the divisor chain
        bool again = true;
        while (again) {
            again = false;
            for (std::size_t i = k + 1; i < r && !again; ++i)
                for (std::size_t j = k + 1; j < c; ++j) {
                    if (d(i, j) % d(k, k) != 0) {
                        // fold row i into row k and restart the pivot cleanup
                        for (std::size_t jj = 0; jj < c; ++jj) d(k, jj) += d(i, jj);
                        for (std::size_t jj = 0; jj < r; ++jj) u(k, jj) += u(i, jj);
                        bool d2 = true;
                        while (d2) {
                            d2 = false;
                            for (std::size_t ii = k + 1; ii < r; ++ii)
                                if (d(ii, k) != 0) row_gcd_step(k, ii);
                            for (std::size_t jj = k + 1; jj < c; ++jj)
                                if (d(k, jj) != 0) {
                                    col_gcd_step(k, jj);
                                    d2 = true;
                                }
                        }
                        again = true;
                        break;
                    }
                }
        }
        if (sgn(d(k, k)) < 0) {
            for (std::size_t i = 0; i < c; ++i) v(i, k) = -v(i, k);
            d(k, k) = -d(k, k);
        }
    }
    return {d, u, v};
}

// Saturated basis of {v : v*m^T = 0}, i.e. integer solutions of m x = 0
// presented as rows, in HNF. kernel_basis(identity) is the 0-row matrix.
inline IntMatrix kernel_basis(const IntMatrix& m) {
    const std::size_t c = m.cols();
    if (m.rows() == 0) return IntMatrix::identity(c);
    auto [h, u] = hermite_normal_form(transpose(m));
    std::vector<IntVec> rows;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) {
                zero = false;
                break;
            }
        if (zero) rows.push_back(u.row(i));
    }
    IntMatrix k = IntMatrix::from_rows(rows, c);
    return row_span_basis(k); // canonical HNF presentation
}

// Basis of the primitive closure of the row span of sub inside Z^ambient_rank.
inline IntMatrix saturate(const IntMatrix& sub, std::size_t ambient_rank) {
    if (sub.rows() != 0 && sub.cols() != ambient_rank)
        throw ValidationError("saturate: ambient rank does not match row length");
    if (sub.rows() == 0) return IntMatrix(0, ambient_rank);
    if (rank(sub) != sub.rows())
        throw ValidationError("saturate: rows are dependent");
    // double Euclidean complement: Q-span stays fixed, lattice saturates
    return kernel_basis(kernel_basis(sub));
}

// Determinant by fraction-free (Bareiss) elimination.
inline Int det(const IntMatrix& m_in) {
    if (m_in.rows() != m_in.cols()) throw ValidationError("det: matrix not square");
    const std::size_t n = m_in.rows();
    if (n == 0) return 1;
    IntMatrix m = m_in;
    Int denom = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t s = k + 1;
            while (s < n && m(s, k) == 0) ++s;
            if (s == n) return 0;
            detail::swap_rows(m, k, s);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), denom.get_mpz_t());
            }
            m(i, k) = 0;
        }
        denom = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : Int(-m(n - 1, n - 1));
}

inline Rat det(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("det: matrix not square");
    auto [d, num] = clear_denominators(m);
    Rat dn(det(num));
    Rat dd(d);
    Rat pw = 1;
    for (std::size_t i = 0; i < m.rows(); ++i) pw *= dd;
    Rat r = dn / pw;
    r.canonicalize();
    return r;
}

inline bool is_unimodular(const IntMatrix& m) {
    if (m.rows() != m.cols()) return false;
    Int d = det(m);
    return d == 1 || d == -1;
}

// Solve a x = b exactly (a square nonsingular), Gauss-Jordan over Q.
inline RatVec solve(const RatMatrix& a_in, const RatVec& b_in) {
    const std::size_t n = a_in.rows();
    if (a_in.cols() != n || b_in.size() != n)
        throw ValidationError("solve: dimension mismatch");
    RatMatrix a = a_in;
    RatVec b = b_in;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) throw ValidationError("solve: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        Rat inv = 1 / a(k, k);
        for (std::size_t j = k; j < n; ++j) a(k, j) *= inv;
        b[k] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            Rat f = a(i, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    return b;
}

inline RatMatrix inverse(const RatMatrix& a_in) {
    const std::size_t n = a_in.rows();
    if (a_in.cols() != n) throw ValidationError("inverse: matrix not square");
    RatMatrix a = a_in;
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) throw ValidationError("inverse: singular matrix");
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        Rat f = 1 / a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) *= f;
            inv(k, j) *= f;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            Rat g = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= g * a(k, j);
                inv(i, j) -= g * inv(k, j);
            }
        }
    }
    return inv;
}

// Inertia (pos, neg, zero) of a symmetric rational matrix by congruent
// elimination. When every remaining diagonal entry vanishes but some
// off-diagonal entry a_ij does not, the congruent move row_i += row_j
// manufactures the nonzero diagonal pivot 2*a_ij (hyperbolic-pair pivoting).
inline std::tuple<std::size_t, std::size_t, std::size_t> symmetric_signature_with_transform(
    const RatMatrix& g_in, RatMatrix* transform_out) {
    if (!is_symmetric(g_in)) throw ValidationError("symmetric_signature: matrix not symmetric");
    const std::size_t n = g_in.rows();
    RatMatrix a = g_in;
    RatMatrix c = RatMatrix::identity(n);
    auto congruent_swap = [&](std::size_t x, std::size_t y) {
        if (x == y) return;
        for (std::size_t j = 0; j < n; ++j) std::swap(a(x, j), a(y, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(a(i, x), a(i, y));
        for (std::size_t j = 0; j < n; ++j) std::swap(c(x, j), c(y, j));
    };
    auto congruent_add = [&](std::size_t x, std::size_t y, const Rat& f) {
        // row_x += f*row_y, col_x += f*col_y
        if (f == 0) return;
        for (std::size_t j = 0; j < n; ++j) a(x, j) += f * a(y, j);
        for (std::size_t i = 0; i < n; ++i) a(i, x) += f * a(i, y);
        for (std::size_t j = 0; j < n; ++j) c(x, j) += f * c(y, j);
    };
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, p) == 0) ++p;
            if (p < n) {
                congruent_swap(k, p);
            } else {
                // all diagonal entries from k on are zero
                std::size_t bi = n, bj = n;
                for (std::size_t i = k; i < n && bi == n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j)
                        if (a(i, j) != 0) {
                            bi = i;
                            bj = j;
                            break;
                        }
                if (bi == n) break; // trailing zero block
                congruent_add(bi, bj, Rat(1));
                congruent_swap(k, bi);
            }
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = -a(i, k) / a(k, k);
            congruent_add(i, k, f);
        }
    }
    std::size_t pos = 0, neg = 0, zero = 0;
    for (std::size_t k = 0; k < n; ++k) {
        int s = sgn(a(k, k));
        if (s > 0)
            ++pos;
        else if (s < 0)
            ++neg;
        else
            ++zero;
    }
    if (transform_out) *transform_out = c;
    return {pos, neg, zero};
}

inline std::tuple<std::size_t, std::size_t, std::size_t> symmetric_signature(const RatMatrix& g) {
    return symmetric_signature_with_transform(g, nullptr);
}

inline std::tuple<std::size_t, std::size_t, std::size_t> symmetric_signature(const IntMatrix& g) {
    return symmetric_signature_with_transform(RatMatrix(g), nullptr);
}

// det(x*p - q) as an integer polynomial, by Bareiss evaluation at the
// integer nodes 0..n and Newton interpolation. Exact for any square pencil.
inline IntPoly pencil_det_poly(const IntMatrix& p, const IntMatrix& q) {
    if (p.rows() != p.cols() || q.rows() != q.cols() || p.rows() != q.rows())
        throw ValidationError("pencil_det_poly: dimension mismatch");
    const std::size_t n = p.rows();
    std::vector<Rat> nodes(n + 1), values(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        IntMatrix m(n, n);
        Int x(static_cast<long>(k));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = x * p(i, j) - q(i, j);
        nodes[k] = Rat(static_cast<long>(k));
        values[k] = Rat(det(m));
    }
    // Newton divided differences
    std::vector<Rat> dd = values;
    for (std::size_t level = 1; level <= n; ++level)
        for (std::size_t i = n; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
            if (i == level) break;
        }
    RatPoly poly{dd[n]};
    for (std::size_t i = n; i-- > 0;) {
        // poly = poly*(x - nodes[i]) + dd[i]
        RatPoly next(poly.size() + 1, mpq_class(0));
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j + 1] += poly[j];
            next[j] -= nodes[i] * poly[j];
        }
        next[0] += dd[i];
        poly = std::move(next);
    }
    poly_trim(poly);
    IntPoly out(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i].get_den() != 1)
            throw ComputeError("pencil_det_poly: interpolation produced a non-integer coefficient");
        out[i] = poly[i].get_num();
    }
    return out;
}

// Exact characteristic polynomial det(x*I - m), monic.
inline RatPoly char_poly(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("char_poly: matrix not square");
    const std::size_t n = m.rows();
    auto [d, num] = clear_denominators(m);
    IntPoly p = pencil_det_poly(d * IntMatrix::identity(n), num);
    // det(xI - m) = det(x d I - num) / d^n
    RatPoly out(p.size());
    Rat dq(d);
    Rat scale = 1;
    for (std::size_t i = 0; i < n; ++i) scale /= dq;
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k] = Rat(p[k]) * scale;
        out[k].canonicalize();
    }
    poly_trim(out);
    return out;
}

inline RatPoly char_poly(const IntMatrix& m) { return char_poly(RatMatrix(m)); }

// p(m) by Horner's rule.
inline RatMatrix poly_eval_matrix(const RatPoly& p, const RatMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("poly_eval_matrix: matrix not square");
    const std::size_t n = m.rows();
    RatMatrix r(n, n);
    for (std::size_t i = p.size(); i-- > 0;) {
        r = r * m;
        for (std::size_t k = 0; k < n; ++k) r(k, k) += p[i];
    }
    return r;
}

// Saturated kernel of a rational matrix, i.e. kernel_basis after clearing
// denominators row by row (row scaling does not change the solution set).
inline IntMatrix kernel_basis(const RatMatrix& m) {
    if (m.rows() == 0) return IntMatrix::identity(m.cols());
    IntMatrix mi(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Int d = 1;
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m(i, j).get_den().get_mpz_t());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Rat v = Rat(d) * m(i, j);
            mi(i, j) = v.get_num();
        }
    }
    return kernel_basis(mi);
}

} // namespace hkreal

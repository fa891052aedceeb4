#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "hkreal/errors.hpp"
#include "hkreal/matrix.hpp"

namespace hkreal {

using Num = mpf_class;

// Dense matrix over mpf at an explicit precision.  Floats here are a search
// device only; anything they produce is re-verified exactly downstream.
class NumMatrix {
  public:
    NumMatrix() : rows_(0), cols_(0), prec_(64) {}
    NumMatrix(std::size_t rows, std::size_t cols, unsigned prec)
        : rows_(rows), cols_(cols), prec_(prec) {
        data_.reserve(rows * cols);
        for (std::size_t i = 0; i < rows * cols; ++i) data_.emplace_back(0, prec);
    }
    NumMatrix(const RatMatrix& m, unsigned prec) : NumMatrix(m.rows(), m.cols(), prec) {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                mpf_set_q((*this)(i, j).get_mpf_t(), m(i, j).get_mpq_t());
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    unsigned precision() const { return prec_; }

    Num& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Num& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    static NumMatrix identity(std::size_t n, unsigned prec) {
        NumMatrix m(n, n, prec);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

  private:
    std::size_t rows_, cols_;
    unsigned prec_;
    std::vector<Num> data_;
};

inline NumMatrix operator*(const NumMatrix& a, const NumMatrix& b) {
    if (a.cols() != b.rows()) throw ValidationError("NumMatrix: dimension mismatch in product");
    unsigned prec = std::max(a.precision(), b.precision());
    NumMatrix out(a.rows(), b.cols(), prec);
    Num acc(0, prec);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

inline NumMatrix operator-(const NumMatrix& a, const NumMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("NumMatrix: dimension mismatch in difference");
    unsigned prec = std::max(a.precision(), b.precision());
    NumMatrix out(a.rows(), a.cols(), prec);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

inline NumMatrix transpose(const NumMatrix& m) {
    NumMatrix out(m.cols(), m.rows(), m.precision());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
    return out;
}

inline Num max_abs(const NumMatrix& m) {
    Num best(0, m.precision());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Num a = abs(m(i, j));
            if (a > best) best = a;
        }
    return best;
}

// 10^exponent as an mpf at the given precision (exponent may be negative).
inline Num pow10_num(int exponent, unsigned prec) {
    Int p = 1;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rat r = exponent < 0 ? Rat(1, p) : Rat(p);
    Num out(0, prec);
    mpf_set_q(out.get_mpf_t(), r.get_mpq_t());
    return out;
}

// Cyclic Jacobi for a symmetric matrix: returns (eigenvalues, rotation) with
// rotation * a * rotation^T diagonal; rows of the rotation are eigenvectors.
inline std::pair<std::vector<Num>, NumMatrix> jacobi_eigen_symmetric(NumMatrix a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ValidationError("jacobi: matrix not square");
    const unsigned prec = a.precision();
    NumMatrix v = NumMatrix::identity(n, prec);
    // stop once off-diagonal mass is negligible at working precision, with a
    // margin for accumulated rounding
    Num scale(0, prec);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale += a(i, j) * a(i, j);
    Num eps(1, prec);
    mpf_div_2exp(eps.get_mpf_t(), eps.get_mpf_t(), prec > 24 ? prec - 8 : 16);
    Num thresh = (scale + 1) * eps * eps;

    for (int sweep = 0; sweep < 128; ++sweep) {
        Num off(0, prec);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off <= thresh) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0) continue;
                Num apq = a(p, q), app = a(p, p), aqq = a(q, q);
                Num theta = (aqq - app) / (2 * apq);
                Num t(0, prec);
                // t = sign(theta) / (|theta| + sqrt(theta^2 + 1))
                Num root(0, prec);
                root = theta * theta + 1;
                mpf_sqrt(root.get_mpf_t(), root.get_mpf_t());
                if (theta >= 0)
                    t = 1 / (theta + root);
                else
                    t = -1 / (-theta + root);
                Num c(0, prec);
                c = t * t + 1;
                mpf_sqrt(c.get_mpf_t(), c.get_mpf_t());
                c = 1 / c;
                Num s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    Num akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    Num apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    Num vpk = v(p, k), vqk = v(q, k);
                    v(p, k) = c * vpk - s * vqk;
                    v(q, k) = s * vpk + c * vqk;
                }
            }
    }
    std::vector<Num> eigs;
    eigs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) eigs.push_back(a(i, i));
    return {eigs, v};
}

// Row-reduce in place with a zero threshold; returns (rank, pivot columns).
inline std::pair<std::size_t, std::vector<std::size_t>> num_rref(NumMatrix& m, const Num& tol) {
    const std::size_t r = m.rows(), c = m.cols();
    std::size_t row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < c && row < r; ++col) {
        std::size_t best = row;
        Num best_abs = abs(m(row, col));
        for (std::size_t i = row + 1; i < r; ++i) {
            Num a = abs(m(i, col));
            if (a > best_abs) {
                best = i;
                best_abs = a;
            }
        }
        if (best_abs <= tol) {
            for (std::size_t i = row; i < r; ++i) m(i, col) = 0;
            continue;
        }
        if (best != row)
            for (std::size_t j = 0; j < c; ++j) swap(m(best, j), m(row, j));
        Num inv = 1 / m(row, col);
        for (std::size_t j = 0; j < c; ++j) m(row, j) *= inv;
        m(row, col) = 1;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == row) continue;
            Num f = m(i, col);
            if (abs(f) == 0) continue;
            for (std::size_t j = 0; j < c; ++j) m(i, j) -= f * m(row, j);
            m(i, col) = 0;
        }
        pivots.push_back(col);
        ++row;
    }
    return {row, pivots};
}

inline std::size_t num_rank(NumMatrix m, const Num& tol) { return num_rref(m, tol).first; }

// Kernel rows of m (solutions of m x = 0) extracted from the tolerant RREF.
inline NumMatrix num_kernel(NumMatrix m, const Num& tol) {
    const std::size_t c = m.cols();
    auto [rank, pivots] = num_rref(m, tol);
    std::vector<std::size_t> free_cols;
    {
        std::size_t pi = 0;
        for (std::size_t j = 0; j < c; ++j) {
            if (pi < pivots.size() && pivots[pi] == j)
                ++pi;
            else
                free_cols.push_back(j);
        }
    }
    NumMatrix k(free_cols.size(), c, m.precision());
    for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
        std::size_t fc = free_cols[fi];
        k(fi, fc) = 1;
        for (std::size_t pi = 0; pi < pivots.size(); ++pi) k(fi, pivots[pi]) = -m(pi, fc);
    }
    return k;
}

// Best rational approximation by continued fractions, denominators capped;
// an oversized partial quotient marks the natural truncation point.
inline std::optional<Rat> rational_reconstruct(const Num& x, const Int& den_bound) {
    Rat target;
    mpq_set_f(target.get_mpq_t(), x.get_mpf_t());

    Int p_prev2 = 0, q_prev2 = 1;
    Int p_prev = 1, q_prev = 0;
    Int num = target.get_num(), den = target.get_den();
    const Int huge_quotient = Int(1) << 24;
    bool have_convergent = false;
    for (;;) {
        Int a;
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (have_convergent && a >= huge_quotient) {
            // the previous convergent already matches to high accuracy
            Rat r(p_prev, q_prev);
            r.canonicalize();
            return r;
        }
        Int p = a * p_prev + p_prev2;
        Int q = a * q_prev + q_prev2;
        if (q > den_bound) {
            if (!have_convergent) return std::nullopt;
            Rat r(p_prev, q_prev);
            r.canonicalize();
            return r;
        }
        p_prev2 = p_prev;
        q_prev2 = q_prev;
        p_prev = p;
        q_prev = q;
        have_convergent = true;
        Int rem = num - a * den;
        if (rem == 0) {
            Rat r(p, q);
            r.canonicalize();
            return r;
        }
        num = den;
        den = rem;
    }
}

} // namespace hkreal

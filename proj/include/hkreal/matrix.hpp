#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hkreal/errors.hpp"

namespace hkreal {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Dense row-major matrix over Z. Zero rows are allowed (canonical empty
// basis); zero columns are not.
class IntMatrix {
  public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {
        if (cols == 0 && rows > 0)
            throw ValidationError("IntMatrix: column count must be positive");
    }
    IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        if (rows_ == 0 || cols_ == 0)
            throw ValidationError("IntMatrix: empty initializer");
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_)
                throw ValidationError("IntMatrix: ragged initializer");
            for (long v : row) data_.emplace_back(v);
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    IntVec row(std::size_t i) const {
        return IntVec(data_.begin() + static_cast<long>(i * cols_),
                      data_.begin() + static_cast<long>((i + 1) * cols_));
    }

    void set_row(std::size_t i, const IntVec& v) {
        if (v.size() != cols_) throw ValidationError("set_row: size mismatch");
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    // Matrix whose rows are the given vectors; n is required so that an
    // empty set of rows still knows its ambient dimension.
    static IntMatrix from_rows(const std::vector<IntVec>& rows, std::size_t n) {
        IntMatrix m(rows.size(), n);
        for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
        return m;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<Int> data_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw ValidationError("IntMatrix multiply: dimension mismatch");
    IntMatrix c(a.rows(), b.cols());
    Int t;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                t = aik * b(k, j);
                c(i, j) += t;
            }
        }
    return c;
}

inline IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("IntMatrix add: dimension mismatch");
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

inline IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("IntMatrix subtract: dimension mismatch");
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

inline IntMatrix operator-(const IntMatrix& a) {
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = -a(i, j);
    return c;
}

inline IntMatrix operator*(const Int& s, const IntMatrix& a) {
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

inline IntMatrix transpose(const IntMatrix& a) {
    if (a.rows() == 0) throw ValidationError("transpose: zero-row matrix has no transpose here");
    IntMatrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = a(i, j);
    return c;
}

inline bool is_symmetric(const IntMatrix& a) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != a(j, i)) return false;
    return true;
}

inline IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
    return c;
}

inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.cols()) throw ValidationError("vstack: column mismatch");
    IntMatrix c(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, j) = b(i, j);
    return c;
}

// Strict total order, used wherever deterministic element ordering matters
// (group closure, sorted vector lists).
inline int compare(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows()) return a.rows() < b.rows() ? -1 : 1;
    if (a.cols() != b.cols()) return a.cols() < b.cols() ? -1 : 1;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            int c = cmp(a(i, j), b(i, j));
            if (c != 0) return c;
        }
    return 0;
}

inline int compare(const IntVec& a, const IntVec& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c;
    }
    return 0;
}

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& a) {
    os << "[";
    for (std::size_t i = 0; i < a.rows(); ++i) {
        os << (i ? " [" : "[");
        for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? ", " : "") << a(i, j);
        os << "]" << (i + 1 < a.rows() ? ",\n" : "");
    }
    return os << "]";
}

inline std::string to_string(const IntMatrix& a) {
    std::ostringstream os;
    os << a;
    return os.str();
}

// Dense row-major matrix over Q, same shape rules as IntMatrix.
class RatMatrix {
  public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {
        if (cols == 0 && rows > 0)
            throw ValidationError("RatMatrix: column count must be positive");
    }
    explicit RatMatrix(const IntMatrix& m) : rows_(m.rows()), cols_(m.cols()), data_(m.rows() * m.cols()) {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = Rat(m(i, j));
    }
    RatMatrix(std::initializer_list<std::initializer_list<long>> init) {
        IntMatrix m(init);
        *this = RatMatrix(m);
    }
    RatMatrix(std::initializer_list<std::initializer_list<Rat>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        if (rows_ == 0 || cols_ == 0)
            throw ValidationError("RatMatrix: empty initializer");
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_)
                throw ValidationError("RatMatrix: ragged initializer");
            for (const Rat& v : row) data_.push_back(v);
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const RatMatrix& o) const { return !(*this == o); }

    RatVec row(std::size_t i) const {
        return RatVec(data_.begin() + static_cast<long>(i * cols_),
                      data_.begin() + static_cast<long>((i + 1) * cols_));
    }

    void set_row(std::size_t i, const RatVec& v) {
        if (v.size() != cols_) throw ValidationError("set_row: size mismatch");
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<Rat> data_;
};

inline RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows()) throw ValidationError("RatMatrix multiply: dimension mismatch");
    RatMatrix c(a.rows(), b.cols());
    Rat t;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rat& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                t = aik * b(k, j);
                c(i, j) += t;
            }
        }
    return c;
}

inline RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("RatMatrix add: dimension mismatch");
    RatMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

inline RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("RatMatrix subtract: dimension mismatch");
    RatMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

inline RatMatrix operator*(const Rat& s, const RatMatrix& a) {
    RatMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

inline RatMatrix transpose(const RatMatrix& a) {
    if (a.rows() == 0) throw ValidationError("transpose: zero-row matrix has no transpose here");
    RatMatrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = a(i, j);
    return c;
}

inline bool is_symmetric(const RatMatrix& a) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != a(j, i)) return false;
    return true;
}

// Least d > 0 with d*a integral, together with the integer matrix d*a.
inline std::pair<Int, IntMatrix> clear_denominators(const RatMatrix& a) {
    Int d = 1;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), a(i, j).get_den().get_mpz_t());
    IntMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Rat v = Rat(d) * a(i, j);
            m(i, j) = v.get_num(); // denominator is 1 by construction
        }
    return {d, m};
}

inline std::ostream& operator<<(std::ostream& os, const RatMatrix& a) {
    os << "[";
    for (std::size_t i = 0; i < a.rows(); ++i) {
        os << (i ? " [" : "[");
        for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? ", " : "") << a(i, j);
        os << "]" << (i + 1 < a.rows() ? ",\n" : "");
    }
    return os << "]";
}

inline Int dot(const IntVec& a, const IntVec& b) {
    if (a.size() != b.size()) throw ValidationError("dot: size mismatch");
    Int s = 0, t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        t = a[i] * b[i];
        s += t;
    }
    return s;
}

// gcd of all entries, nonnegative; 0 for the zero vector.
inline Int content(const IntVec& v) {
    Int g = 0;
    for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

inline IntVec mul_vec(const IntMatrix& m, const IntVec& v) {
    if (m.cols() != v.size()) throw ValidationError("mul_vec: dimension mismatch");
    IntVec r(m.rows());
    Int t;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            t = m(i, j) * v[j];
            s += t;
        }
        r[i] = s;
    }
    return r;
}

// Row vector times matrix.
inline IntVec vec_mul(const IntVec& v, const IntMatrix& m) {
    if (m.rows() != v.size()) throw ValidationError("vec_mul: dimension mismatch");
    IntVec r(m.cols());
    Int t;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Int s = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            t = v[i] * m(i, j);
            s += t;
        }
        r[j] = s;
    }
    return r;
}

} // namespace hkreal

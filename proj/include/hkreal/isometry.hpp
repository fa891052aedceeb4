#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hkreal/errors.hpp"
#include "hkreal/exact_linalg.hpp"
#include "hkreal/lattice.hpp"
#include "hkreal/matrix.hpp"

namespace hkreal {

// An isometry acts on column coordinate vectors: x maps to matrix*x.
struct Isometry {
    Lattice lattice;
    IntMatrix matrix;

    std::size_t rank() const { return matrix.rows(); }
};

inline Isometry make_isometry(const Lattice& l, const IntMatrix& m) {
    const std::size_t n = l.rank();
    if (m.rows() != n || m.cols() != n)
        throw ValidationError("make_isometry: matrix shape does not match lattice rank");
    if (transpose(m) * l.gram * m != l.gram)
        throw ValidationError("not an isometry");
    Int d = det(m);
    if (d != 1 && d != -1)
        throw ValidationError("make_isometry: determinant is not +-1");
    return Isometry{l, m};
}

inline Isometry identity_isometry(const Lattice& l) {
    return Isometry{l, IntMatrix::identity(l.rank())};
}

inline Isometry compose(const Isometry& f, const Isometry& g) {
    if (f.lattice.gram != g.lattice.gram)
        throw ValidationError("compose: isometries live on different lattices");
    return Isometry{f.lattice, f.matrix * g.matrix};
}

inline Isometry inverse(const Isometry& f) {
    RatMatrix inv = inverse(RatMatrix(f.matrix));
    IntMatrix m(f.rank(), f.rank());
    for (std::size_t i = 0; i < f.rank(); ++i)
        for (std::size_t j = 0; j < f.rank(); ++j) {
            const Rat& e = inv(i, j);
            if (e.get_den() != 1)
                throw ComputeError("inverse: isometry inverse is not integral");
            m(i, j) = e.get_num();
        }
    return Isometry{f.lattice, m};
}

inline IntVec apply_isometry(const Isometry& f, const IntVec& v) {
    return mul_vec(f.matrix, v);
}

inline Int trace(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("trace: matrix is not square");
    Int t = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

// sigma_v(x) = x - (2 q(x,v) / q(v)) v.  Defined over Z only when q(v)
// divides 2 q(e_j, v) for every basis vector e_j.
inline Isometry reflection(const Lattice& l, const IntVec& v) {
    if (v.size() != l.rank())
        throw ValidationError("reflection: vector length does not match lattice rank");
    IntVec w = mul_vec(l.gram, v);
    Int qv = dot(v, w);
    if (qv == 0) throw ValidationError("reflection: vector is isotropic");
    const std::size_t n = l.rank();
    IntMatrix m = IntMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) {
        Int num = 2 * w[j];
        if (num % qv != 0)
            throw ValidationError("reflection: not integral on this lattice");
        Int c = num / qv;
        for (std::size_t i = 0; i < n; ++i) m(i, j) -= c * v[i];
    }
    return make_isometry(l, m);
}

namespace detail {

inline bool leading_u_blocks(const IntMatrix& g, std::size_t count) {
    const std::size_t k = 2 * count;
    if (g.rows() < k) return false;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            Int expected = 0;
            if (j < k && (i / 2 == j / 2)) expected = (i == j) ? 0 : 1;
            if (j >= k) expected = 0;
            if (g(i, j) != expected) return false;
        }
    }
    return true;
}

} // namespace detail

// A rational positive-definite 3-space, as three lattice vectors (rows).
// For the standard lattices (leading U^3 block) we take e_i + f_i; anything
// else falls back to the rows of a diagonalizing transform with positive
// diagonal entries.
inline IntMatrix canonical_positive_frame(const Lattice& l) {
    const std::size_t n = l.rank();
    if (detail::leading_u_blocks(l.gram, 3)) {
        IntMatrix b(3, n);
        for (std::size_t i = 0; i < 3; ++i) {
            b(i, 2 * i) = 1;
            b(i, 2 * i + 1) = 1;
        }
        return b;
    }
    RatMatrix c;
    auto [pos, neg, zero] = symmetric_signature_with_transform(RatMatrix(l.gram), &c);
    if (pos != 3 || zero != 0)
        throw ValidationError("canonical_positive_frame: lattice signature is not (3, n)");
    RatMatrix diag = c * RatMatrix(l.gram) * transpose(c);
    IntMatrix b(3, n);
    std::size_t row = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diag(i, i) > 0) {
            RatVec r = c.row(i);
            Int lcm = 1;
            for (const Rat& e : r) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.get_den().get_mpz_t());
            for (std::size_t j = 0; j < n; ++j) {
                Rat scaled = r[j] * lcm;
                b(row, j) = scaled.get_num();
            }
            ++row;
        }
    }
    return b;
}

// Orientation of the positive part.  The composite P0 -> f(P0) -> P0 (second
// map the q-orthogonal projection), expressed in the frame b, has matrix
// (b q b^T)^{-1} (b f^T q b^T); the first factor has positive determinant, so
// the sign we want is the sign of det(b f^T q b^T).
inline bool is_plus_on_frame(const Isometry& f, const IntMatrix& frame) {
    if (frame.rows() != 3 || frame.cols() != f.rank())
        throw ValidationError("is_plus: frame must be 3 x rank");
    IntMatrix gram3 = frame * f.lattice.gram * transpose(frame);
    auto sig = symmetric_signature(gram3);
    if (std::get<0>(sig) != 3)
        throw ValidationError("is_plus: frame does not span a positive-definite 3-space");
    IntMatrix c = frame * transpose(f.matrix) * f.lattice.gram * transpose(frame);
    Int d = det(c);
    if (d == 0) throw ComputeError("is_plus: degenerate projection");
    return d > 0;
}

inline bool is_plus(const Isometry& f) {
    IntMatrix frame = canonical_positive_frame(f.lattice);
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            return is_plus_on_frame(f, frame);
        } catch (const ComputeError&) {
            // a positive-definite P0 cannot project degenerately, so this
            // path is a guard; perturb deterministically and retry
            IntMatrix next(3, frame.cols());
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < frame.cols(); ++j)
                    next(i, j) = 256 * frame(i, j) + Int((i + j + attempt) % 3) - 1;
            IntMatrix gram3 = next * f.lattice.gram * transpose(next);
            if (std::get<0>(symmetric_signature(gram3)) == 3) frame = next;
        }
    }
    throw ComputeError("is_plus: projection degenerate after retries");
}

// Extends f by the identity on the exceptional class (last coordinate).
inline Isometry embed_into_hilb(const Isometry& f, long n) {
    if (f.lattice.gram != lattice_k3().gram)
        throw ValidationError("embed_into_hilb: isometry is not on the K3 lattice");
    IntMatrix one(1, 1);
    one(0, 0) = 1;
    return make_isometry(lattice_k3n(n), block_diag(f.matrix, one));
}

inline Isometry restrict_from_hilb(const Isometry& g) {
    const std::size_t n = g.rank();
    Lattice k3 = lattice_k3();
    if (n != k3.rank() + 1)
        throw ValidationError("restrict_from_hilb: isometry is not on a K3^[n] lattice");
    const std::size_t last = n - 1;
    Int e = g.lattice.gram(last, last);
    if (e >= 0 || e % 2 != 0)
        throw ValidationError("restrict_from_hilb: isometry is not on a K3^[n] lattice");
    long hn = 1 + static_cast<long>(mpz_get_si(Int(-e / 2).get_mpz_t()));
    if (g.lattice.gram != lattice_k3n(hn).gram)
        throw ValidationError("restrict_from_hilb: isometry is not on a K3^[n] lattice");
    for (std::size_t i = 0; i < last; ++i)
        if (g.matrix(i, last) != 0 || g.matrix(last, i) != 0)
            throw ValidationError("does not preserve the exceptional class");
    if (g.matrix(last, last) != 1)
        throw ValidationError("does not preserve the exceptional class");
    IntMatrix m(last, last);
    for (std::size_t i = 0; i < last; ++i)
        for (std::size_t j = 0; j < last; ++j) m(i, j) = g.matrix(i, j);
    return make_isometry(k3, m);
}

struct IsometryGroup {
    Lattice lattice;
    std::vector<Isometry> generators;
    std::vector<IntMatrix> elements; // identity first, then BFS layers in lex order
    std::size_t order() const { return elements.size(); }
};

namespace detail {

struct IntMatrixLess {
    bool operator()(const IntMatrix& a, const IntMatrix& b) const {
        return compare(a, b) < 0;
    }
};

} // namespace detail

inline IsometryGroup group_closure(const Lattice& l, const std::vector<IntMatrix>& gens,
                                   std::size_t cap = 10000) {
    std::vector<Isometry> checked;
    checked.reserve(gens.size());
    for (const IntMatrix& g : gens) checked.push_back(make_isometry(l, g));

    const IntMatrix id = IntMatrix::identity(l.rank());
    std::set<IntMatrix, detail::IntMatrixLess> seen;
    std::vector<IntMatrix> elements;
    seen.insert(id);
    elements.push_back(id);
    std::vector<IntMatrix> layer{id};
    while (!layer.empty()) {
        std::set<IntMatrix, detail::IntMatrixLess> next;
        for (const IntMatrix& e : layer)
            for (const Isometry& g : checked) {
                IntMatrix prod = e * g.matrix;
                if (!seen.count(prod)) next.insert(prod);
            }
        layer.assign(next.begin(), next.end());
        for (const IntMatrix& e : layer) {
            seen.insert(e);
            elements.push_back(e);
            if (elements.size() > cap)
                throw ComputeError("group order exceeds cap (possibly infinite)");
        }
    }
    return IsometryGroup{l, std::move(checked), std::move(elements)};
}

inline std::vector<std::pair<std::size_t, Int>> character(const IsometryGroup& g) {
    std::vector<std::pair<std::size_t, Int>> out;
    out.reserve(g.elements.size());
    for (std::size_t i = 0; i < g.elements.size(); ++i)
        out.emplace_back(i, trace(g.elements[i]));
    return out;
}

} // namespace hkreal

#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hkreal/exact_linalg.hpp"
#include "hkreal/matrix.hpp"

namespace hkreal {

// An integral lattice presented by the Gram matrix of its bilinear form on
// an implicit basis.
struct Lattice {
    IntMatrix gram;
    std::string label;

    std::size_t rank() const { return gram.rows(); }
};

inline Lattice make_lattice(IntMatrix gram, std::string label) {
    if (!is_symmetric(gram)) throw ValidationError("make_lattice: Gram matrix not symmetric");
    return Lattice{std::move(gram), std::move(label)};
}

// Signature (pos, neg, zero) of the lattice's form.
inline std::tuple<std::size_t, std::size_t, std::size_t> signature(const Lattice& l) {
    return symmetric_signature(RatMatrix(l.gram));
}

inline Lattice lattice_U() {
    return make_lattice(IntMatrix{{0, 1}, {1, 0}}, "U");
}

// Negative-definite E8 in the standard simple-root basis: nodes 1-3-4-5-6-7-8
// in a chain with node 2 attached to node 4; entries -2 on the diagonal and
// +1 for adjacent roots. This exact matrix is part of the output contract.
inline Lattice lattice_E8_minus() {
    IntMatrix g(8, 8);
    for (std::size_t i = 0; i < 8; ++i) g(i, i) = -2;
    const std::pair<int, int> edges[] = {{0, 2}, {2, 3}, {1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
    for (auto [a, b] : edges) {
        g(a, b) = 1;
        g(b, a) = 1;
    }
    return make_lattice(std::move(g), "E8(-1)");
}

inline Lattice lattice_A2_minus() {
    return make_lattice(IntMatrix{{-2, 1}, {1, -2}}, "A2(-1)");
}

inline Lattice lattice_rank1(const Int& k) {
    if (k == 0) throw ValidationError("lattice_rank1: k must be nonzero");
    IntMatrix g(1, 1);
    g(0, 0) = k;
    return make_lattice(std::move(g), "<" + k.get_str() + ">");
}

inline Lattice direct_sum(const Lattice& a, const Lattice& b) {
    return make_lattice(block_diag(a.gram, b.gram), a.label + " + " + b.label);
}

// K3 lattice 3U + 2E8(-1); basis order e1,f1,e2,f2,e3,f3, then the two E8
// blocks.
inline Lattice lattice_k3() {
    Lattice u = lattice_U(), e8 = lattice_E8_minus();
    IntMatrix g = block_diag(u.gram, u.gram);
    g = block_diag(g, u.gram);
    g = block_diag(g, e8.gram);
    g = block_diag(g, e8.gram);
    return make_lattice(std::move(g), "K3");
}

// K3^[n] lattice: K3 + <-2(n-1)> with the exceptional class as the LAST
// basis vector (the embedding/retraction below depends on this).
inline Lattice lattice_k3n(long n) {
    if (n < 2) throw ValidationError("lattice_k3n: n must be >= 2");
    Lattice k3 = lattice_k3();
    IntMatrix exc(1, 1);
    exc(0, 0) = Int(-2) * Int(n - 1);
    return make_lattice(block_diag(k3.gram, exc), "K3[" + std::to_string(n) + "]");
}

inline Lattice lattice_og10() {
    Lattice k3 = lattice_k3(), a2 = lattice_A2_minus();
    return make_lattice(block_diag(k3.gram, a2.gram), "OG10");
}

inline Int pairing(const Lattice& l, const IntVec& v, const IntVec& w) {
    if (v.size() != l.rank() || w.size() != l.rank())
        throw ValidationError("pairing: vector length does not match rank");
    return dot(v, mul_vec(l.gram, w));
}

inline Int norm(const Lattice& l, const IntVec& v) { return pairing(l, v, v); }

// A sublattice in ambient coordinates; rows of basis are independent, the
// induced Gram is derived from them.
struct Sublattice {
    Lattice ambient;
    IntMatrix basis;
    IntMatrix gram; // induced: basis * ambient.gram * basis^T

    std::size_t rank() const { return basis.rows(); }
};

inline IntMatrix induced_gram(const Lattice& ambient, const IntMatrix& basis) {
    if (basis.rows() == 0) return IntMatrix(0, 0);
    return basis * ambient.gram * transpose(basis);
}

inline Sublattice make_sublattice(const Lattice& ambient, const IntMatrix& basis) {
    if (basis.rows() != 0) {
        if (basis.cols() != ambient.rank())
            throw ValidationError("make_sublattice: basis width does not match ambient rank");
        if (rank(basis) != basis.rows())
            throw ValidationError("make_sublattice: basis rows are dependent");
    }
    return Sublattice{ambient, basis, induced_gram(ambient, basis)};
}

inline Sublattice zero_sublattice(const Lattice& ambient) {
    return Sublattice{ambient, IntMatrix(0, ambient.rank()), IntMatrix(0, 0)};
}

inline Sublattice full_sublattice(const Lattice& ambient) {
    return make_sublattice(ambient, IntMatrix::identity(ambient.rank()));
}

// Saturated {v in L : q(v, s) = 0 for all s in S}; primitive by construction.
inline Sublattice orthogonal_complement(const Lattice& l, const Sublattice& s) {
    if (s.rank() == 0) return full_sublattice(l);
    IntMatrix constraints = s.basis * l.gram;
    return make_sublattice(l, kernel_basis(constraints));
}

// gcd of q(v, -) over the lattice, i.e. gcd of the coordinates of gram*v.
inline Int divisibility(const Lattice& l, const IntVec& v) {
    if (v.size() != l.rank()) throw ValidationError("divisibility: vector length mismatch");
    IntVec gv = mul_vec(l.gram, v);
    Int g = content(gv);
    if (g == 0) throw ValidationError("divisibility: q(v,-) is identically zero");
    return g;
}

inline bool is_primitive(const Lattice& l, const IntVec& v) {
    if (v.size() != l.rank()) throw ValidationError("is_primitive: vector length mismatch");
    return content(v) == 1;
}

// Invariant factors of the discriminant group L^dual / L, trivial factors
// omitted; the trivial group is the empty list.
struct DiscriminantGroup {
    std::vector<Int> invariant_factors; // d1 | d2 | ...

    Int order() const {
        Int o = 1;
        for (const auto& d : invariant_factors) o *= d;
        return o;
    }
    bool trivial() const { return invariant_factors.empty(); }
};

inline DiscriminantGroup discriminant_group(const Lattice& l) {
    if (det(l.gram) == 0)
        throw ValidationError("discriminant_group: degenerate lattice");
    auto [d, u, v] = smith_normal_form(l.gram);
    (void)u;
    (void)v;
    DiscriminantGroup g;
    for (std::size_t i = 0; i < d.rows(); ++i)
        if (d(i, i) > 1) g.invariant_factors.push_back(d(i, i));
    return g;
}

// The vector w with q(w, e_i) = delta_i for the functional delta given in
// dual-basis coordinates; rational in general.
inline RatVec dual_coordinates(const Lattice& l, const RatVec& delta) {
    if (delta.size() != l.rank()) throw ValidationError("dual_coordinates: length mismatch");
    if (det(l.gram) == 0) throw ValidationError("dual_coordinates: degenerate lattice");
    return solve(RatMatrix(l.gram), delta);
}

} // namespace hkreal

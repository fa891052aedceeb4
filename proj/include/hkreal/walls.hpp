#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "hkreal/equivariant.hpp"
#include "hkreal/errors.hpp"
#include "hkreal/exact_linalg.hpp"
#include "hkreal/lattice.hpp"
#include "hkreal/matrix.hpp"

namespace hkreal {

// A declared set of wall classes, given by (norm, divisibility) pairs. The
// geometric wall set depends on curve data no lattice computation can see,
// so it enters as input and every verdict downstream is relative to it.
struct WallEntry {
    Int norm;         // negative
    Int divisibility; // positive
};

struct WallSpec {
    std::vector<WallEntry> entries;
    std::string label;
};

struct WallWitness {
    IntVec vector; // ambient coordinates
    Int norm;
    Int divisibility;
    std::size_t entry_index;
};

inline WallSpec make_wall_spec(std::vector<WallEntry> entries, std::string label) {
    for (const WallEntry& e : entries) {
        if (e.norm >= 0) throw ValidationError("make_wall_spec: wall norm must be negative");
        if (e.divisibility <= 0)
            throw ValidationError("make_wall_spec: divisibility must be positive");
    }
    return WallSpec{std::move(entries), std::move(label)};
}

// The divisibility of a vector always divides its norm, so an entry where it
// does not can never be matched. Not an error: a wall list may be a superset
// assembled for several deformation types at once.
inline std::vector<std::string> wall_spec_warnings(const WallSpec& spec) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < spec.entries.size(); ++i) {
        if (spec.entries[i].norm % spec.entries[i].divisibility != 0)
            out.push_back("entry " + std::to_string(i) +
                          " is unmatchable: divisibility does not divide the norm");
    }
    return out;
}

inline WallSpec wall_preset(const std::string& name) {
    if (name == "k3-minus2")
        return make_wall_spec({WallEntry{Int(-2), Int(1)}}, "k3-minus2");
    throw ValidationError("wall_preset: unknown preset \"" + name + "\"");
}

// delta is a functional given by its values on the basis; it is negative
// exactly when its kernel hyperplane has signature (3, rank - 4), which for
// an ambient signature (3, rank - 3) happens iff the dual vector has
// negative square. Both characterizations are computed and compared.
inline bool is_negative_form(const Lattice& l, const RatVec& delta) {
    auto [pos, neg, zero] = signature(l);
    if (zero != 0 || pos != 3 || neg + 3 != l.rank())
        throw ValidationError("is_negative_form: lattice signature is not (3, n)");
    bool all_zero = true;
    for (const Rat& x : delta)
        if (x != 0) all_zero = false;
    if (all_zero) throw ValidationError("is_negative_form: zero functional");

    RatMatrix row(1, l.rank());
    for (std::size_t j = 0; j < l.rank(); ++j) row(0, j) = delta[j];
    IntMatrix ker = kernel_basis(row);
    auto [kp, kn, kz] =
        symmetric_signature(RatMatrix(ker * l.gram * transpose(ker)));
    bool by_kernel = (kp == 3 && kn == l.rank() - 4 && kz == 0);

    RatVec w = dual_coordinates(l, delta);
    Rat qw = 0;
    for (std::size_t j = 0; j < l.rank(); ++j) qw += delta[j] * w[j];
    bool by_square = qw < 0;

    if (by_kernel != by_square)
        throw ComputeError("is_negative_form: the two characterizations disagree");
    return by_kernel;
}

namespace detail {

// Quadratic completion q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2; the
// pivots d_i are all positive exactly when the form is positive definite.
struct FpShape {
    std::vector<Rat> d;
    RatMatrix u;
};

inline FpShape fp_decompose(const IntMatrix& gram) {
    const std::size_t n = gram.rows();
    RatMatrix q(gram);
    FpShape shape{std::vector<Rat>(n), RatMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        if (q(i, i) <= 0)
            throw ValidationError("short_vectors: form is not positive definite");
        shape.d[i] = q(i, i);
        for (std::size_t j = i + 1; j < n; ++j) shape.u(i, j) = q(i, j) / q(i, i);
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = i + 1; l < n; ++l)
                q(k, l) -= q(k, i) * q(i, l) / q(i, i);
    }
    return shape;
}

// integer range of z with (z + u)^2 <= b, for rational u and b >= 0
inline std::pair<Int, Int> shifted_square_range(const Rat& u, const Rat& b) {
    const Int& p = u.get_num();
    const Int& qd = u.get_den();
    // largest m >= 0 with m^2 * den(b) <= num(b) * qd^2
    Int scaled;
    mpz_fdiv_q(scaled.get_mpz_t(), Int(b.get_num() * qd * qd).get_mpz_t(),
               b.get_den().get_mpz_t());
    Int m;
    mpz_sqrt(m.get_mpz_t(), scaled.get_mpz_t());
    Int lo, hi;
    mpz_cdiv_q(lo.get_mpz_t(), Int(-m - p).get_mpz_t(), qd.get_mpz_t());
    mpz_fdiv_q(hi.get_mpz_t(), Int(m - p).get_mpz_t(), qd.get_mpz_t());
    return {lo, hi};
}

inline void fp_enumerate(const FpShape& shape, std::size_t level, const Rat& remaining,
                         IntVec& x, std::vector<IntVec>& out) {
    Rat shift = 0;
    for (std::size_t j = level + 1; j < x.size(); ++j)
        shift += shape.u(level, j) * Rat(x[j]);
    auto [lo, hi] = shifted_square_range(shift, remaining / shape.d[level]);
    for (Int z = lo; z <= hi; ++z) {
        x[level] = z;
        Rat inner = Rat(z) + shift;
        Rat next = remaining - shape.d[level] * inner * inner;
        if (level == 0) {
            if (next == 0) out.push_back(x);
        } else {
            fp_enumerate(shape, level - 1, next, x, out);
        }
    }
    x[level] = 0;
}

inline void flip_to_canonical_sign(IntVec& v) {
    for (const Int& c : v) {
        if (c > 0) return;
        if (c < 0) {
            for (Int& e : v) e = -e;
            return;
        }
    }
}

inline bool lex_less(const IntVec& a, const IntVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

} // namespace detail

// All vectors of exactly the target norm in a positive definite lattice,
// one representative per +- pair, sorted lexicographically. Enumeration is
// exact throughout. The outermost coordinate range may be split across
// worker threads; the merged result does not depend on the split.
inline std::vector<IntVec> short_vectors(const Lattice& definite, const Int& target_norm,
                                         unsigned jobs = 1) {
    if (target_norm <= 0)
        throw ValidationError("short_vectors: target norm must be positive");
    const std::size_t n = definite.rank();
    if (n == 0) return {};
    detail::FpShape shape = detail::fp_decompose(definite.gram);

    // top level by hand so the range can be halved (z >= 0) and partitioned
    const std::size_t top = n - 1;
    Rat budget(target_norm);
    auto [lo, hi] = detail::shifted_square_range(Rat(0), budget / shape.d[top]);
    (void)lo;
    std::vector<Int> tops;
    for (Int z = 0; z <= hi; ++z) tops.push_back(z);

    auto run_chunk = [&](std::size_t begin, std::size_t end, std::vector<IntVec>& out) {
        IntVec x(n);
        for (std::size_t t = begin; t < end; ++t) {
            x[top] = tops[t];
            Rat inner(tops[t]);
            Rat next = budget - shape.d[top] * inner * inner;
            if (top == 0) {
                if (next == 0) out.push_back(x);
            } else {
                detail::fp_enumerate(shape, top - 1, next, x, out);
            }
        }
    };

    std::vector<IntVec> found;
    if (jobs <= 1 || tops.size() <= 1) {
        run_chunk(0, tops.size(), found);
    } else {
        const std::size_t workers = std::min<std::size_t>(jobs, tops.size());
        std::vector<std::vector<IntVec>> parts(workers);
        std::vector<std::thread> pool;
        const std::size_t per = (tops.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t begin = w * per;
            std::size_t end = std::min(tops.size(), begin + per);
            pool.emplace_back([&, begin, end, w] { run_chunk(begin, end, parts[w]); });
        }
        for (std::thread& t : pool) t.join();
        for (std::vector<IntVec>& part : parts)
            for (IntVec& v : part) found.push_back(std::move(v));
    }

    for (IntVec& v : found) detail::flip_to_canonical_sign(v);
    std::sort(found.begin(), found.end(), detail::lex_less);
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

// Search Lambda_G for a vector matching some spec entry: right norm, right
// divisibility measured in the ambient lattice, primitive in the ambient
// lattice. Entries are tried in order and the enumeration order is the
// sorted order of short_vectors, so the first hit is deterministic.
inline std::optional<WallWitness> find_wall(const LambdaG& lambda_g, const WallSpec& spec,
                                            unsigned jobs = 1) {
    const Sublattice& sub = lambda_g.sublattice;
    if (sub.rank() == 0) return std::nullopt;
    IntMatrix negated = Int(-1) * sub.gram;
    Lattice definite = make_lattice(negated, "negated coinvariant core");
    for (std::size_t e = 0; e < spec.entries.size(); ++e) {
        const WallEntry& entry = spec.entries[e];
        std::vector<IntVec> coeffs = short_vectors(definite, -entry.norm, jobs);
        for (const IntVec& c : coeffs) {
            IntVec v = vec_mul(c, sub.basis);
            if (content(v) != 1) continue;
            if (divisibility(sub.ambient, v) != entry.divisibility) continue;
            // independent recheck against the ambient Gram before returning
            if (norm(sub.ambient, v) != entry.norm || !is_primitive(sub.ambient, v) ||
                divisibility(sub.ambient, v) != entry.divisibility)
                throw ComputeError("find_wall: witness failed its ambient recheck");
            return WallWitness{v, entry.norm, entry.divisibility, e};
        }
    }
    return std::nullopt;
}

} // namespace hkreal

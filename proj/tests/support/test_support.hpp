#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "hkreal/exact_linalg.hpp"
#include "hkreal/lattice.hpp"
#include "hkreal/matrix.hpp"

namespace hktest {

using namespace hkreal;

using Rng = std::mt19937_64;

inline Int rand_int(Rng& rng, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return Int(d(rng));
}

inline Rat rand_rat(Rng& rng, long num_bound, long den_bound) {
    Rat r(rand_int(rng, -num_bound, num_bound), rand_int(rng, 1, den_bound));
    r.canonicalize();
    return r;
}

inline IntMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, long bound) {
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rand_int(rng, -bound, bound);
    return m;
}

inline IntMatrix random_symmetric(Rng& rng, std::size_t n, long bound) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            m(i, j) = rand_int(rng, -bound, bound);
            m(j, i) = m(i, j);
        }
    return m;
}

// product of elementary operations, so |det| = 1 by construction
inline IntMatrix random_unimodular(Rng& rng, std::size_t n, int steps = 12) {
    IntMatrix m = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> kind(0, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t i = idx(rng), j = idx(rng);
        switch (kind(rng)) {
        case 0: {
            if (i == j) break;
            Int f = rand_int(rng, -3, 3);
            for (std::size_t k = 0; k < n; ++k) m(i, k) += f * m(j, k);
            break;
        }
        case 1:
            if (i != j)
                for (std::size_t k = 0; k < n; ++k) std::swap(m(i, k), m(j, k));
            break;
        default:
            for (std::size_t k = 0; k < n; ++k) m(i, k) = -m(i, k);
        }
    }
    return m;
}

// straightforward cofactor expansion, used as an oracle against Bareiss
inline Int cofactor_det(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    Int acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j) == 0) continue;
        IntMatrix sub(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                sub(r - 1, cc++) = m(r, c);
            }
        }
        Int term = m(0, j) * cofactor_det(sub);
        if (j % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

inline bool is_row_hnf(const IntMatrix& h) {
    long last_pivot = -1;
    std::size_t zero_rows_started = h.rows();
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t p = h.cols();
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) {
                p = j;
                break;
            }
        if (p == h.cols()) {
            zero_rows_started = std::min(zero_rows_started, i);
            continue;
        }
        if (i > zero_rows_started) return false; // nonzero row after a zero row
        if (static_cast<long>(p) <= last_pivot) return false;
        last_pivot = static_cast<long>(p);
        if (h(i, p) <= 0) return false;
        for (std::size_t k = 0; k < i; ++k)
            if (h(k, p) < 0 || h(k, p) >= h(i, p)) return false;
    }
    return true;
}

// gcd of all k x k minors; elementary divisors are the successive quotients.
// Exponential, fine for the small matrices the oracle is used on.
inline Int minor_gcd(const IntMatrix& m, std::size_t k) {
    std::vector<std::size_t> ri(k), ci(k);
    Int g = 0;
    std::vector<std::size_t> rows(m.rows()), cols(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) rows[i] = i;
    for (std::size_t j = 0; j < m.cols(); ++j) cols[j] = j;
    std::vector<bool> rsel(m.rows(), false), csel(m.cols(), false);
    std::fill(rsel.begin(), rsel.begin() + k, true);
    do {
        std::fill(csel.begin(), csel.end(), false);
        std::fill(csel.begin(), csel.begin() + k, true);
        do {
            IntMatrix sub(k, k);
            std::size_t rr = 0;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                if (!rsel[i]) continue;
                std::size_t cc = 0;
                for (std::size_t j = 0; j < m.cols(); ++j)
                    if (csel[j]) sub(rr, cc++) = m(i, j);
                ++rr;
            }
            Int d = cofactor_det(sub);
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
    return g;
}

inline std::vector<Int> elementary_divisors_oracle(const IntMatrix& m) {
    std::vector<Int> out;
    Int prev = 1;
    std::size_t kmax = std::min(m.rows(), m.cols());
    for (std::size_t k = 1; k <= kmax; ++k) {
        Int g = minor_gcd(m, k);
        if (g == 0) break;
        out.push_back(g / prev);
        prev = g;
    }
    return out;
}

// canonical form for comparing row spans over Z
inline IntMatrix row_span_canon(const IntMatrix& m) {
    auto [h, u] = hermite_normal_form(m);
    std::size_t nz = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) zero = false;
        if (!zero) nz = i + 1;
    }
    IntMatrix out(nz, h.cols());
    for (std::size_t i = 0; i < nz; ++i) out.set_row(i, h.row(i));
    return out;
}

inline bool same_row_span(const IntMatrix& a, const IntMatrix& b) {
    return row_span_canon(a) == row_span_canon(b);
}

} // namespace hktest

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "hkreal/errors.hpp"

namespace hkreal {

// Coefficient vectors, little-endian: p[i] is the coefficient of x^i.
// The zero polynomial is the empty vector.
using IntPoly = std::vector<mpz_class>;
using RatPoly = std::vector<mpq_class>;

inline void poly_trim(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}
inline void poly_trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_degree(const IntPoly& p) { return static_cast<int>(p.size()) - 1; }
inline int poly_degree(const RatPoly& p) { return static_cast<int>(p.size()) - 1; }

inline IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
    IntPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    poly_trim(r);
    return r;
}

inline IntPoly poly_sub(const IntPoly& a, const IntPoly& b) {
    IntPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    poly_trim(r);
    return r;
}

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly r(a.size() + b.size() - 1, 0);
    mpz_class t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            t = a[i] * b[j];
            r[i + j] += t;
        }
    }
    poly_trim(r);
    return r;
}

inline IntPoly poly_scale(const mpz_class& c, const IntPoly& a) {
    if (c == 0) return {};
    IntPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline IntPoly poly_derivative(const IntPoly& p) {
    if (p.size() <= 1) return {};
    IntPoly r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = mpz_class(static_cast<long>(i)) * p[i];
    poly_trim(r);
    return r;
}

inline mpz_class poly_eval(const IntPoly& p, const mpz_class& x) {
    mpz_class r = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
        r *= x;
        r += p[i];
    }
    return r;
}

inline mpq_class poly_eval(const IntPoly& p, const mpq_class& x) {
    mpq_class r = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
        r *= x;
        r += mpq_class(p[i]);
    }
    return r;
}

inline mpq_class poly_eval(const RatPoly& p, const mpq_class& x) {
    mpq_class r = 0;
    for (std::size_t i = p.size(); i-- > 0;) {
        r *= x;
        r += p[i];
    }
    return r;
}

// gcd of coefficients, nonnegative.
inline mpz_class poly_content(const IntPoly& p) {
    mpz_class g = 0;
    for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

// Divide out the content and make the leading coefficient positive.
inline IntPoly poly_primitive(const IntPoly& p) {
    if (p.empty()) return p;
    mpz_class g = poly_content(p);
    if (sgn(p.back()) < 0) g = -g;
    IntPoly r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] / g;
    return r;
}

// Exact division: returns quotient iff b divides a exactly over Z.
inline std::optional<IntPoly> poly_divide_exact(const IntPoly& a, const IntPoly& b) {
    if (b.empty()) throw ValidationError("poly_divide_exact: division by zero polynomial");
    if (a.empty()) return IntPoly{};
    if (a.size() < b.size()) return std::nullopt;
    IntPoly rem = a;
    IntPoly q(a.size() - b.size() + 1, 0);
    const mpz_class& lead = b.back();
    mpz_class t, qc;
    for (std::size_t k = a.size() - b.size() + 1; k-- > 0;) {
        const mpz_class& rc = rem[k + b.size() - 1];
        if (rc == 0) continue;
        if (!mpz_divisible_p(rc.get_mpz_t(), lead.get_mpz_t())) return std::nullopt;
        qc = rc / lead;
        q[k] = qc;
        for (std::size_t i = 0; i < b.size(); ++i) {
            t = qc * b[i];
            rem[k + i] -= t;
        }
    }
    poly_trim(rem);
    if (!rem.empty()) return std::nullopt;
    poly_trim(q);
    return q;
}

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r with deg r < deg b.
inline IntPoly poly_pseudo_rem(IntPoly a, const IntPoly& b) {
    if (b.empty()) throw ValidationError("poly_pseudo_rem: division by zero polynomial");
    poly_trim(a);
    const mpz_class& lb = b.back();
    mpz_class t;
    while (a.size() >= b.size() && !a.empty()) {
        mpz_class la = a.back();
        std::size_t shift = a.size() - b.size();
        for (auto& c : a) c *= lb;
        for (std::size_t i = 0; i < b.size(); ++i) {
            t = la * b[i];
            a[shift + i] -= t;
        }
        poly_trim(a);
    }
    return a;
}

// gcd over Z[x] via primitive pseudo-remainder sequence; lc > 0, and the
// content carries gcd(content(a), content(b)).
inline IntPoly poly_gcd(IntPoly a, IntPoly b) {
    poly_trim(a);
    poly_trim(b);
    if (a.empty() && b.empty()) return a;
    mpz_class ca = a.empty() ? mpz_class(0) : poly_content(a);
    mpz_class cb = b.empty() ? mpz_class(0) : poly_content(b);
    mpz_class cg;
    mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    if (a.empty()) return poly_scale(cg, poly_primitive(b));
    if (b.empty()) return poly_scale(cg, poly_primitive(a));
    a = poly_primitive(a);
    b = poly_primitive(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        IntPoly r = poly_pseudo_rem(a, b);
        a = std::move(b);
        b = r.empty() ? r : poly_primitive(r);
    }
    return poly_scale(cg, a);
}

// Yun's square-free decomposition of a primitive polynomial: returns the
// list (f_1, 1), (f_2, 2), ... with p = c * prod f_i^i, each f_i square-free
// and primitive with positive leading coefficient (factors of multiplicity i
// that are constant are omitted).
inline std::vector<std::pair<IntPoly, int>> poly_squarefree(const IntPoly& p_in) {
    std::vector<std::pair<IntPoly, int>> out;
    IntPoly p = poly_primitive(p_in);
    if (poly_degree(p) < 1) return out;
    IntPoly d = poly_derivative(p);
    IntPoly a = poly_gcd(p, d);
    // a is primitive, so by Gauss's lemma these divisions are exact in Z[x]
    IntPoly b = *poly_divide_exact(p, a);
    IntPoly c = poly_sub(*poly_divide_exact(d, a), poly_derivative(b));
    int i = 1;
    while (poly_degree(b) > 0) {
        IntPoly g = poly_gcd(b, c);
        if (poly_degree(g) > 0) out.emplace_back(g, i);
        b = *poly_divide_exact(b, g);
        c = poly_sub(*poly_divide_exact(c, g), poly_derivative(b));
        ++i;
    }
    return out;
}

inline int sign_of(const mpz_class& x) { return sgn(x); }
inline int sign_of(const mpq_class& x) { return sgn(x); }

// Sturm chain of p (as integer polynomials, sign-faithfully normalized).
inline std::vector<IntPoly> sturm_chain(const IntPoly& p_in) {
    std::vector<IntPoly> chain;
    IntPoly p = p_in;
    poly_trim(p);
    if (p.empty()) return chain;
    chain.push_back(p);
    IntPoly d = poly_derivative(p);
    if (d.empty()) return chain;
    chain.push_back(d);
    while (true) {
        const IntPoly& a = chain[chain.size() - 2];
        const IntPoly& b = chain.back();
        IntPoly r = poly_pseudo_rem(a, b);
        if (r.empty()) break;
        // pseudo-remainder scales by lc(b)^k with k = deg a - deg b + 1; a
        // negative lc(b) with odd k flips the sign, which Sturm needs intact
        std::size_t k = a.size() - b.size() + 1;
        bool flip = sgn(b.back()) < 0 && (k % 2 == 1);
        mpz_class g = poly_content(r);
        IntPoly nr(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) nr[i] = r[i] / g;
        if (!flip) {
            for (auto& c : nr) c = -c;
        }
        chain.push_back(nr);
    }
    return chain;
}

// Sign variations in the chain evaluated at x (zeros skipped).
inline int sturm_variations_at(const std::vector<IntPoly>& chain, const mpq_class& x) {
    int var = 0, last = 0;
    for (const auto& q : chain) {
        int s = sign_of(poly_eval(q, x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++var;
        last = s;
    }
    return var;
}

// Sign variations at -infinity (neg = true) or +infinity.
inline int sturm_variations_at_infinity(const std::vector<IntPoly>& chain, bool neg) {
    int var = 0, last = 0;
    for (const auto& q : chain) {
        if (q.empty()) continue;
        int s = sgn(q.back());
        if (neg && (q.size() - 1) % 2 == 1) s = -s;
        if (s == 0) continue;
        if (last != 0 && s != last) ++var;
        last = s;
    }
    return var;
}

// Number of distinct real roots of p in the half-open interval (a, b].
inline int sturm_count_interval(const std::vector<IntPoly>& chain, const mpq_class& a, const mpq_class& b) {
    if (chain.empty()) return 0;
    return sturm_variations_at(chain, a) - sturm_variations_at(chain, b);
}

// Distinct real roots of p, classified by sign: (positive, negative, zero)
// where the zero slot is 1 iff 0 is a root (roots are counted without
// multiplicity, which is what Sturm chains deliver). Input need not be
// square-free.
inline std::tuple<int, int, int> sturm_root_signs(const IntPoly& p_in) {
    IntPoly p = p_in;
    poly_trim(p);
    if (p.empty()) throw ValidationError("sturm_root_signs: zero polynomial");
    int zero = 0;
    std::size_t k = 0;
    while (k < p.size() && p[k] == 0) ++k;
    if (k > 0) {
        zero = 1;
        p.erase(p.begin(), p.begin() + static_cast<long>(k));
    }
    if (poly_degree(p) < 1) return {0, 0, zero};
    auto chain = sturm_chain(p);
    int v_minf = sturm_variations_at_infinity(chain, true);
    int v_zero = sturm_variations_at(chain, mpq_class(0));
    int v_pinf = sturm_variations_at_infinity(chain, false);
    return {v_zero - v_pinf, v_minf - v_zero, zero};
}

// Same, for a polynomial with rational coefficients (denominators cleared
// first; the roots are unchanged).
inline std::tuple<int, int, int> sturm_root_signs(const RatPoly& p_in) {
    RatPoly p = p_in;
    poly_trim(p);
    if (p.empty()) throw ValidationError("sturm_root_signs: zero polynomial");
    mpz_class d = 1;
    for (const auto& c : p) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den().get_mpz_t());
    IntPoly q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        mpq_class v = mpq_class(d) * p[i];
        q[i] = v.get_num();
    }
    return sturm_root_signs(q);
}

// A power-of-two bound B with all real roots of p in (-B, B).
inline mpq_class poly_root_bound(const IntPoly& p) {
    mpq_class maxq = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        mpq_class q(abs(p[i]), abs(p.back()));
        q.canonicalize();
        if (q > maxq) maxq = q;
    }
    mpq_class bound = maxq + 1;
    mpq_class b = 1;
    while (b <= bound) b *= 2;
    return b;
}

// Isolating intervals (a, b] for the distinct real roots of a square-free
// polynomial inside (lo, hi], refined until b - a < width. Deterministic.
inline std::vector<std::pair<mpq_class, mpq_class>> isolate_roots(
    const IntPoly& p, mpq_class lo, mpq_class hi, const mpq_class& width) {
    auto chain = sturm_chain(p);
    std::vector<std::pair<mpq_class, mpq_class>> done;
    std::vector<std::pair<mpq_class, mpq_class>> work;
    if (sturm_count_interval(chain, lo, hi) > 0) work.emplace_back(lo, hi);
    while (!work.empty()) {
        auto [a, b] = work.back();
        work.pop_back();
        int cnt = sturm_count_interval(chain, a, b);
        if (cnt == 0) continue;
        if (cnt == 1 && b - a < width) {
            done.emplace_back(a, b);
            continue;
        }
        mpq_class mid = (a + b) / 2;
        work.emplace_back(mid, b);
        work.emplace_back(a, mid);
    }
    std::sort(done.begin(), done.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return done;
}

namespace detail {

// Closed rational interval arithmetic, just enough for expanding
// lc * prod (x - r_i) with each r_i known to an interval.
struct QInterval {
    mpq_class lo, hi;
};

inline QInterval qi_add(const QInterval& a, const QInterval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

inline QInterval qi_mul(const QInterval& a, const QInterval& b) {
    mpq_class p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    mpq_class lo = std::min(std::min(p1, p2), std::min(p3, p4));
    mpq_class hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return {lo, hi};
}

} // namespace detail

// Attempt to extract the factor of the square-free polynomial p carrying
// exactly its positive real roots, assuming that factor lies in Z[x]. The
// intervals must isolate precisely the positive roots of p. Returns the
// primitive factor, or nullopt when rounding/division fails (which is the
// signal that the positive/nonpositive split is irrational).
inline std::optional<IntPoly> reconstruct_factor_from_roots(
    const IntPoly& p, std::vector<std::pair<mpq_class, mpq_class>> intervals) {
    auto chain = sturm_chain(p);
    mpq_class half(1, 2);
    for (int rounds = 0; rounds < 240; ++rounds) {
        // interval coefficients of lc(p) * prod (x - r_i)
        std::vector<detail::QInterval> coeffs{{mpq_class(p.back()), mpq_class(p.back())}};
        for (const auto& [a, b] : intervals) {
            std::vector<detail::QInterval> next(coeffs.size() + 1, detail::QInterval{0, 0});
            detail::QInterval root{a, b};
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                next[i + 1] = qi_add(next[i + 1], coeffs[i]); // times x
                auto t = detail::qi_mul(coeffs[i], root);
                next[i] = qi_add(next[i], detail::QInterval{-t.hi, -t.lo});
            }
            coeffs = std::move(next);
        }
        bool narrow = true;
        IntPoly cand(coeffs.size());
        for (std::size_t i = 0; i < coeffs.size() && narrow; ++i) {
            if (coeffs[i].hi - coeffs[i].lo >= 1) {
                narrow = false;
                break;
            }
            // round midpoint to nearest integer, then check containment
            mpq_class mid = (coeffs[i].lo + coeffs[i].hi) / 2 + half;
            mpz_class r;
            mpz_fdiv_q(r.get_mpz_t(), mid.get_num().get_mpz_t(), mid.get_den().get_mpz_t());
            if (mpq_class(r) < coeffs[i].lo || mpq_class(r) > coeffs[i].hi) narrow = false;
            cand[i] = r;
        }
        if (narrow) {
            poly_trim(cand);
            if (!cand.empty() && static_cast<std::size_t>(poly_degree(cand)) == intervals.size()) {
                IntPoly prim = poly_primitive(cand);
                if (poly_divide_exact(p, prim)) return prim;
            }
        }
        // refine every interval by one bisection step
        for (auto& [a, b] : intervals) {
            mpq_class mid = (a + b) / 2;
            if (sturm_count_interval(chain, a, mid) == 1)
                b = mid;
            else
                a = mid;
        }
    }
    return std::nullopt;
}

// The radical of the part of p with strictly positive real roots: a
// square-free integer polynomial whose roots are exactly the distinct
// positive real roots of p. nullopt when that polynomial is not rational.
inline std::optional<IntPoly> positive_radical_factor(const IntPoly& p_in) {
    IntPoly p = p_in;
    poly_trim(p);
    if (p.empty()) throw ValidationError("positive_radical_factor: zero polynomial");
    IntPoly result{mpz_class(1)};
    for (const auto& [f, mult] : poly_squarefree(p)) {
        (void)mult;
        auto chain = sturm_chain(f);
        mpq_class bound = poly_root_bound(f);
        int pos = sturm_count_interval(chain, mpq_class(0), bound);
        if (pos == 0) continue;
        if (pos == poly_degree(f)) {
            result = poly_mul(result, f);
            continue;
        }
        auto intervals = isolate_roots(f, mpq_class(0), bound, mpq_class(1, 16));
        auto g = reconstruct_factor_from_roots(f, std::move(intervals));
        if (!g) return std::nullopt;
        result = poly_mul(result, *g);
    }
    return poly_primitive(result);
}

} // namespace hkreal

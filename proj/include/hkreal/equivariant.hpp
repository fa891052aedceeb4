#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "hkreal/errors.hpp"
#include "hkreal/exact_linalg.hpp"
#include "hkreal/isometry.hpp"
#include "hkreal/lattice.hpp"
#include "hkreal/matrix.hpp"
#include "hkreal/numeric.hpp"
#include "hkreal/polynomial.hpp"

namespace hkreal {

struct NumericOptions {
    unsigned precision_bits = 128;
    int tolerance_exponent = -30;
    Int denominator_bound = Int(1) << 64;
};

// A G-invariant real subspace of Lambda (x) R, rows in ambient coordinates.
// When exact is false the entries are exact snapshots of certified floats.
struct FixedSpace {
    RatMatrix basis;
    bool exact = true;
    unsigned precision_bits = 0;
    int tolerance_exponent = 0;
};

struct RealSubspace {
    RatMatrix basis;
    bool exact = true;
};

enum class ConstituentType { trivial, sign_free_rotation, three_dim_irreducible, other };

inline std::string to_string(ConstituentType t) {
    switch (t) {
        case ConstituentType::trivial: return "trivial";
        case ConstituentType::sign_free_rotation: return "sign-free rotation";
        case ConstituentType::three_dim_irreducible: return "3-dim irreducible";
        default: return "other";
    }
}

struct Constituent {
    std::size_t dim = 0;
    ConstituentType type = ConstituentType::other;
    std::size_t multiplicity = 0; // of this isomorphism type inside Lambda (x) R
    RatMatrix basis;              // rows in ambient coordinates
    std::size_t type_index = 0;   // equal indices mean isomorphic constituents
};

struct IsotypicReport {
    std::vector<Constituent> constituents;
    std::size_t dim_ii_g = 0;
    bool exact = true;
};

struct LambdaG {
    Sublattice sublattice;
    FixedSpace p;
    IsotypicReport report;
    RealSubspace ii_g;
    bool exact = true;
};

inline Sublattice invariant_lattice(const IsometryGroup& g) {
    const std::size_t n = g.lattice.rank();
    if (g.generators.empty()) return full_sublattice(g.lattice);
    IntMatrix stacked = g.generators[0].matrix - IntMatrix::identity(n);
    for (std::size_t i = 1; i < g.generators.size(); ++i)
        stacked = vstack(stacked, g.generators[i].matrix - IntMatrix::identity(n));
    IntMatrix k = kernel_basis(stacked);
    if (k.rows() == 0) return zero_sublattice(g.lattice);
    return make_sublattice(g.lattice, k);
}

inline Sublattice coinvariant_lattice(const IsometryGroup& g) {
    return orthogonal_complement(g.lattice, invariant_lattice(g));
}

namespace detail {

inline RatMatrix rat_from_num(const NumMatrix& m) {
    RatMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpq_set_f(out(i, j).get_mpq_t(), m(i, j).get_mpf_t());
    return out;
}

inline RatPoly rat_poly(const IntPoly& p) {
    RatPoly out;
    out.reserve(p.size());
    for (const Int& c : p) out.emplace_back(c);
    return out;
}

inline IntPoly int_poly_from_rat(const RatPoly& p) {
    Int l = 1;
    for (const Rat& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    IntPoly out;
    out.reserve(p.size());
    for (const Rat& c : p) out.push_back(c.get_num() * (l / c.get_den()));
    poly_trim(out);
    return out;
}

// rank of the row span, exact
inline std::size_t rat_rank(const RatMatrix& m) {
    if (m.rows() == 0) return 0;
    return rank(clear_denominators(m).second);
}

// does the row span of a contain every row of b (exact)
inline bool span_contains(const RatMatrix& a, const RatMatrix& b) {
    if (b.rows() == 0) return true;
    if (a.rows() == 0) return rat_rank(b) == 0;
    RatMatrix both(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) both.set_row(i, a.row(i));
    for (std::size_t i = 0; i < b.rows(); ++i) both.set_row(a.rows() + i, b.row(i));
    return rat_rank(both) == rat_rank(a);
}

inline RatMatrix rat_vstack(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw ValidationError("vstack: column mismatch");
    RatMatrix out(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) out.set_row(i, a.row(i));
    for (std::size_t i = 0; i < b.rows(); ++i) out.set_row(a.rows() + i, b.row(i));
    return out;
}

inline NumMatrix num_vstack(const NumMatrix& a, const NumMatrix& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    NumMatrix out(a.rows() + b.rows(), a.cols(), std::max(a.precision(), b.precision()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, j) = b(i, j);
    return out;
}

// Shared bundle for the restricted action of the generators on a subspace.
// Exact data is present only when the subspace is rational; numeric copies
// are always available.
struct SubAction {
    bool exact = true;
    std::vector<RatMatrix> rho;  // per generator, row coords act by c -> c * rho
    std::vector<NumMatrix> rho_num;
    RatMatrix form;              // induced form on the coordinates
    NumMatrix form_num;
    unsigned prec = 128;
    Num tol;
};

// Restriction of each generator to the row span of basis: solves
// rho * basis = basis * m^T using the induced positive form.
inline SubAction restricted_action(const IsometryGroup& g, const RatMatrix& basis, bool exact,
                                   unsigned prec, const Num& tol) {
    SubAction act;
    act.exact = exact;
    act.prec = prec;
    act.tol = tol;
    const RatMatrix gram = RatMatrix(g.lattice.gram);
    act.form = basis * gram * transpose(basis);
    act.form_num = NumMatrix(act.form, prec);
    const RatMatrix proj = gram * transpose(basis) * inverse(act.form);
    for (const Isometry& f : g.generators) {
        RatMatrix image = basis * RatMatrix(transpose(f.matrix));
        RatMatrix rho = image * proj;
        if (exact && rho * basis != image)
            throw ComputeError("restricted_action: subspace is not invariant");
        act.rho.push_back(rho);
        act.rho_num.emplace_back(rho, prec);
    }
    return act;
}

// Joint eigenspace for a sign pattern over the generators, in subspace row
// coordinates: kernel of stacked (rho_g^T - eps_g I).
inline RatMatrix signed_fixed_exact(const SubAction& act, const std::vector<int>& eps) {
    const std::size_t d = act.form.rows();
    if (act.rho.empty()) return RatMatrix::identity(d);
    RatMatrix stacked(0, d);
    for (std::size_t i = 0; i < act.rho.size(); ++i) {
        RatMatrix block = transpose(act.rho[i]);
        for (std::size_t j = 0; j < d; ++j) block(j, j) -= Rat(eps[i]);
        stacked = rat_vstack(stacked, block);
    }
    return RatMatrix(kernel_basis(stacked));
}

inline NumMatrix signed_fixed_numeric(const SubAction& act, const std::vector<int>& eps) {
    const std::size_t d = act.form_num.rows();
    if (act.rho_num.empty()) return NumMatrix::identity(d, act.prec);
    NumMatrix stacked(0, d, act.prec);
    for (std::size_t i = 0; i < act.rho_num.size(); ++i) {
        NumMatrix block = transpose(act.rho_num[i]);
        for (std::size_t j = 0; j < d; ++j) block(j, j) -= eps[i];
        stacked = num_vstack(stacked, block);
    }
    return num_kernel(stacked, act.tol);
}

// Coordinates orthogonal to the rows of sub under the induced form.
inline RatMatrix form_complement_exact(const SubAction& act, const RatMatrix& sub) {
    if (sub.rows() == 0) return RatMatrix::identity(act.form.rows());
    return RatMatrix(kernel_basis(sub * act.form));
}

inline NumMatrix form_complement_numeric(const SubAction& act, const NumMatrix& sub) {
    if (sub.rows() == 0) return NumMatrix::identity(act.form_num.rows(), act.prec);
    NumMatrix prod = sub * act.form_num;
    return num_kernel(prod, act.tol);
}

// Restrict an action to a coordinate subspace given by rows w (within the
// current coordinates); returns the new action matrices sigma with
// w * rho = sigma * w.
inline SubAction restrict_coords_exact(const SubAction& act, const RatMatrix& w) {
    SubAction sub;
    sub.exact = true;
    sub.prec = act.prec;
    sub.tol = act.tol;
    sub.form = w * act.form * transpose(w);
    sub.form_num = NumMatrix(sub.form, act.prec);
    RatMatrix proj = act.form * transpose(w) * inverse(sub.form);
    for (const RatMatrix& rho : act.rho) {
        RatMatrix image = w * rho;
        RatMatrix sigma = image * proj;
        if (sigma * w != image) throw ComputeError("restrict_coords: subspace is not invariant");
        sub.rho.push_back(sigma);
        sub.rho_num.emplace_back(sigma, act.prec);
    }
    return sub;
}

inline SubAction restrict_coords_numeric(const SubAction& act, const NumMatrix& w) {
    SubAction sub;
    sub.exact = false;
    sub.prec = act.prec;
    sub.tol = act.tol;
    NumMatrix wt = transpose(w);
    sub.form_num = w * act.form_num * wt;
    sub.form = rat_from_num(sub.form_num);
    NumMatrix proj = act.form_num * wt * NumMatrix(inverse(sub.form), act.prec);
    for (const NumMatrix& rho : act.rho_num) {
        NumMatrix image = w * rho;
        NumMatrix sigma = image * proj;
        if (max_abs(sigma * w - image) > sub.tol)
            throw ComputeError("restrict_coords: numeric invariance residual above tolerance");
        sub.rho_num.push_back(sigma);
        sub.rho.push_back(rat_from_num(sigma));
    }
    return sub;
}

inline Rat rat_trace(const RatMatrix& m) {
    Rat t = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

// Classification of a 2-dim action with no common fixed vector: either two
// sign lines (returned as coordinate rows) or an irreducible piece.
struct TwoDimSplit {
    bool irreducible = false;
    bool all_rotations = false;        // meaningful when irreducible
    std::vector<RatMatrix> lines;      // coordinate rows, when reducible
    std::vector<std::vector<int>> line_patterns;
};

inline std::vector<int> pattern_of_line_exact(const SubAction& act, const RatMatrix& line) {
    std::vector<int> eps;
    for (const RatMatrix& rho : act.rho) {
        RatMatrix image = line * rho;
        if (image == line)
            eps.push_back(1);
        else {
            RatMatrix neg = Rat(-1) * line;
            if (image != neg) throw ComputeError("sign line does not carry a sign character");
            eps.push_back(-1);
        }
    }
    return eps;
}

inline std::vector<int> pattern_of_line_numeric(const SubAction& act, const NumMatrix& line) {
    std::vector<int> eps;
    for (const NumMatrix& rho : act.rho_num) {
        NumMatrix image = line * rho;
        NumMatrix diff_plus = image - line;
        NumMatrix neg = line;
        for (std::size_t j = 0; j < neg.cols(); ++j) neg(0, j) = -neg(0, j);
        NumMatrix diff_minus = image - neg;
        if (max_abs(diff_plus) <= act.tol)
            eps.push_back(1);
        else if (max_abs(diff_minus) <= act.tol)
            eps.push_back(-1);
        else
            throw ComputeError("inconsistent numeric classification: sign line residual");
    }
    return eps;
}

inline TwoDimSplit classify_two_dim(const SubAction& act) {
    TwoDimSplit out;
    // reducible over R iff all generators have real eigenvalues and commute
    bool real_eigs = true;
    bool commute = true;
    bool all_rot = true;
    const std::size_t k = act.rho.size();
    for (std::size_t i = 0; i < k; ++i) {
        const RatMatrix& s = act.rho[i];
        Rat tr = rat_trace(s);
        Rat dt = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
        Rat disc = tr * tr - 4 * dt;
        if (act.exact) {
            if (disc < 0) real_eigs = false;
            if (dt < 0) all_rot = false;
        } else {
            Rat tol_r;
            mpq_set_f(tol_r.get_mpq_t(), act.tol.get_mpf_t());
            if (disc < -tol_r) real_eigs = false;
            if (dt < 0) all_rot = false; // det is +-1 up to noise, sign is robust
        }
        for (std::size_t j = i + 1; j < k; ++j) {
            if (act.exact) {
                if (act.rho[i] * act.rho[j] != act.rho[j] * act.rho[i]) commute = false;
            } else {
                if (max_abs(act.rho_num[i] * act.rho_num[j] - act.rho_num[j] * act.rho_num[i]) >
                    act.tol)
                    commute = false;
            }
        }
    }
    if (!(real_eigs && commute)) {
        out.irreducible = true;
        out.all_rotations = all_rot;
        return out;
    }
    // reducible: split into two sign lines
    if (act.exact) {
        RatMatrix line1(0, 2), line2(0, 2);
        for (const RatMatrix& s : act.rho) {
            if (s == RatMatrix::identity(2)) continue;
            RatMatrix neg_id = Rat(-1) * RatMatrix::identity(2);
            if (s == neg_id) continue;
            // non-scalar with eigenvalues +1 and -1
            RatMatrix st = transpose(s);
            RatMatrix plus = st, minus = st;
            plus(0, 0) -= 1;
            plus(1, 1) -= 1;
            minus(0, 0) += 1;
            minus(1, 1) += 1;
            line1 = RatMatrix(kernel_basis(plus));
            line2 = RatMatrix(kernel_basis(minus));
            break;
        }
        if (line1.rows() == 0) {
            // every generator acts as a scalar: any orthogonal split works
            RatMatrix first(1, 2);
            first.set_row(0, RatVec{Rat(1), Rat(0)});
            line1 = first;
            line2 = RatMatrix(kernel_basis(first * act.form));
        }
        if (line1.rows() != 1 || line2.rows() != 1)
            throw ComputeError("two-dim split: unexpected eigenline dimension");
        out.lines = {line1, line2};
        out.line_patterns = {pattern_of_line_exact(act, line1), pattern_of_line_exact(act, line2)};
    } else {
        NumMatrix line1(0, 2, act.prec), line2(0, 2, act.prec);
        for (const NumMatrix& s : act.rho_num) {
            NumMatrix d_plus = s - NumMatrix::identity(2, act.prec);
            NumMatrix id2 = NumMatrix::identity(2, act.prec);
            NumMatrix neg = id2;
            neg(0, 0) = -1;
            neg(1, 1) = -1;
            NumMatrix d_minus = s - neg;
            if (max_abs(d_plus) <= act.tol || max_abs(d_minus) <= act.tol) continue;
            NumMatrix st = transpose(s);
            NumMatrix plus = st, minus = st;
            plus(0, 0) -= 1;
            plus(1, 1) -= 1;
            minus(0, 0) += 1;
            minus(1, 1) += 1;
            line1 = num_kernel(plus, act.tol);
            line2 = num_kernel(minus, act.tol);
            break;
        }
        if (line1.rows() == 0) {
            NumMatrix first(1, 2, act.prec);
            first(0, 0) = 1;
            line1 = first;
            line2 = num_kernel(first * act.form_num, act.tol);
        }
        if (line1.rows() != 1 || line2.rows() != 1)
            throw ComputeError("inconsistent numeric classification: eigenline dimension");
        out.lines = {rat_from_num(line1), rat_from_num(line2)};
        out.line_patterns = {pattern_of_line_numeric(act, line1),
                             pattern_of_line_numeric(act, line2)};
    }
    return out;
}

} // namespace detail

// The unique G-invariant positive-definite 3-space inside Lambda (x) R.
inline FixedSpace invariant_positive_3space(const IsometryGroup& g,
                                            const NumericOptions& opts = {}) {
    const Lattice& lat = g.lattice;
    const std::size_t n = lat.rank();
    {
        auto [pos, neg, zero] = symmetric_signature(lat.gram);
        (void)neg;
        if (pos != 3 || zero != 0)
            throw ValidationError("invariant_positive_3space: lattice signature is not (3, n)");
    }
    if (g.elements.empty())
        throw ValidationError("invariant_positive_3space: group has no elements (use group_closure)");

    // averaged positive form h = (1/|G|) sum g^T g; A = h^{-1} gram is
    // h-self-adjoint and commutes with the action, so its positive
    // eigenspace is the invariant 3-space
    IntMatrix h_sum(n, n);
    for (const IntMatrix& e : g.elements) h_sum = h_sum + transpose(e) * e;
    const RatMatrix gram = RatMatrix(lat.gram);
    const Rat order(static_cast<long>(g.order()));
    RatMatrix a = order * (inverse(RatMatrix(h_sum)) * gram);

    RatPoly cp = char_poly(a);
    IntPoly cz = detail::int_poly_from_rat(cp);
    std::optional<IntPoly> split = positive_radical_factor(cz);
    if (split) {
        RatMatrix pa = poly_eval_matrix(detail::rat_poly(*split), a);
        IntMatrix basis = kernel_basis(pa);
        if (basis.rows() != 3)
            throw ComputeError("invariant_positive_3space: positive eigenspace has wrong dimension");
        RatMatrix rb(basis);
        auto [pos, neg, zero] = symmetric_signature(RatMatrix(induced_gram(lat, basis)));
        if (pos != 3 || neg != 0 || zero != 0)
            throw ComputeError("invariant_positive_3space: induced form is not positive definite");
        return FixedSpace{rb, true, 0, 0};
    }

    // numeric fallback: diagonalize A in coordinates where h is the standard
    // inner product, take the three positive eigendirections, certify
    const unsigned prec = std::max(opts.precision_bits, 128u);
    const Num tol = pow10_num(opts.tolerance_exponent, prec);

    RatMatrix t;
    auto [hp, hn, hz] = symmetric_signature_with_transform(RatMatrix(h_sum), &t);
    if (hp != n || hn != 0 || hz != 0)
        throw ComputeError("invariant_positive_3space: averaged form is not positive definite");
    // t * H * t^T = D; with B = D^(1/2) t^(-T) we get H = B^T B and
    // M = B A B^(-1) symmetric
    RatMatrix t_inv = inverse(t);
    RatMatrix d_diag = t * RatMatrix(h_sum) * transpose(t);
    RatMatrix c = transpose(t_inv) * a * transpose(t); // M = D^(1/2) c D^(-1/2)
    NumMatrix cn(c, prec);
    std::vector<Num> sq;
    sq.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Num di(0, prec);
        mpf_set_q(di.get_mpf_t(), d_diag(i, i).get_mpq_t());
        Num root(0, prec);
        mpf_sqrt(root.get_mpf_t(), di.get_mpf_t());
        sq.push_back(root);
    }
    NumMatrix m(n, n, prec);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = sq[i] * cn(i, j) / sq[j];
    // symmetrize against roundoff before Jacobi
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Num avg = (m(i, j) + m(j, i)) / 2;
            m(i, j) = avg;
            m(j, i) = avg;
        }
    auto [eigs, rot] = jacobi_eigen_symmetric(m);
    std::vector<std::size_t> pos_idx;
    for (std::size_t i = 0; i < n; ++i) {
        if (abs(eigs[i]) <= tol)
            throw ComputeError("invariant_positive_3space: eigenvalue too close to zero");
        if (eigs[i] > 0) pos_idx.push_back(i);
    }
    if (pos_idx.size() != 3)
        throw ComputeError("invariant_positive_3space: numeric split found wrong positive count");

    // map eigenvectors back: x = B^(-1) y with B^(-1) = t^T D^(-1/2)
    NumMatrix tn(transpose(t), prec);
    NumMatrix basis(3, n, prec);
    for (std::size_t r = 0; r < 3; ++r) {
        std::size_t idx = pos_idx[r];
        for (std::size_t i = 0; i < n; ++i) {
            Num acc(0, prec);
            for (std::size_t k = 0; k < n; ++k) acc += tn(i, k) * rot(idx, k) / sq[k];
            basis(r, i) = acc;
        }
    }

    // certification: the span must be carried to itself by every generator
    NumMatrix h_num(RatMatrix(h_sum), prec);
    NumMatrix gram_num(gram, prec);
    NumMatrix bt = transpose(basis);
    for (const Isometry& f : g.generators) {
        NumMatrix img = basis * NumMatrix(RatMatrix(transpose(f.matrix)), prec);
        NumMatrix coeff = img * h_num * bt; // h-orthonormal rows up to scale
        // renormalize: rows are h-orthonormal by construction, so coeff is
        // the projection; residual measures invariance
        NumMatrix residual = img - coeff * basis;
        if (max_abs(residual) > tol)
            throw ComputeError("invariant_positive_3space: invariance residual above tolerance");
    }
    {
        NumMatrix form = basis * gram_num * bt;
        auto [feigs, frot] = jacobi_eigen_symmetric(form);
        (void)frot;
        for (const Num& e : feigs)
            if (e <= tol)
                throw ComputeError("invariant_positive_3space: numeric form not positive definite");
    }
    return FixedSpace{detail::rat_from_num(basis), false, prec, opts.tolerance_exponent};
}

namespace detail {

// dim Hom_G(W, Lambda (x) R) and a basis of image rows, exact flavor.
// Unknown T is d x n with sigma_g T = T m_g^T for every generator.
inline std::pair<std::size_t, RatMatrix> hom_into_lambda_exact(const IsometryGroup& g,
                                                               const SubAction& act) {
    const std::size_t n = g.lattice.rank();
    const std::size_t d = act.form.rows();
    const std::size_t unknowns = d * n;
    if (g.generators.empty()) {
        // every linear map is equivariant; images fill the whole space
        return {unknowns, RatMatrix::identity(n)};
    }
    RatMatrix sys(g.generators.size() * unknowns, unknowns);
    std::size_t row = 0;
    for (std::size_t gi = 0; gi < g.generators.size(); ++gi) {
        const RatMatrix& sigma = act.rho[gi];
        const IntMatrix& m = g.generators[gi].matrix;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t l = 0; l < d; ++l) sys(row, l * n + j) += sigma(i, l);
                for (std::size_t k = 0; k < n; ++k) sys(row, i * n + k) -= Rat(m(j, k));
                ++row;
            }
    }
    IntMatrix sol = kernel_basis(sys);
    RatMatrix images(0, n);
    for (std::size_t s = 0; s < sol.rows(); ++s) {
        RatMatrix t(d, n);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < n; ++j) t(i, j) = Rat(sol(s, i * n + j));
        images = rat_vstack(images, t);
    }
    return {sol.rows(), images};
}

inline std::pair<std::size_t, NumMatrix> hom_into_lambda_numeric(const IsometryGroup& g,
                                                                 const SubAction& act) {
    const std::size_t n = g.lattice.rank();
    const std::size_t d = act.form_num.rows();
    const std::size_t unknowns = d * n;
    if (g.generators.empty()) return {unknowns, NumMatrix::identity(n, act.prec)};
    NumMatrix sys(g.generators.size() * unknowns, unknowns, act.prec);
    std::size_t row = 0;
    for (std::size_t gi = 0; gi < g.generators.size(); ++gi) {
        const NumMatrix& sigma = act.rho_num[gi];
        const IntMatrix& m = g.generators[gi].matrix;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t l = 0; l < d; ++l) sys(row, l * n + j) += sigma(i, l);
                for (std::size_t k = 0; k < n; ++k) {
                    Num mv(0, act.prec);
                    mpf_set_z(mv.get_mpf_t(), m(j, k).get_mpz_t());
                    sys(row, i * n + k) -= mv;
                }
                ++row;
            }
    }
    NumMatrix sol = num_kernel(sys, act.tol);
    NumMatrix images(0, n, act.prec);
    for (std::size_t s = 0; s < sol.rows(); ++s) {
        NumMatrix t(d, n, act.prec);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < n; ++j) t(i, j) = sol(s, i * n + j);
        images = num_vstack(images, t);
    }
    return {sol.rows(), images};
}

// dim End_G(W): maps S with sigma_g S = S sigma_g.
inline std::size_t end_dim(const SubAction& act) {
    const std::size_t d = act.exact ? act.form.rows() : act.form_num.rows();
    if (act.rho.empty()) return d * d;
    const std::size_t unknowns = d * d;
    if (act.exact) {
        RatMatrix sys(act.rho.size() * unknowns, unknowns);
        std::size_t row = 0;
        for (const RatMatrix& sigma : act.rho) {
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    for (std::size_t l = 0; l < d; ++l) {
                        sys(row, l * d + j) += sigma(i, l);
                        sys(row, i * d + l) -= sigma(l, j);
                    }
                    ++row;
                }
        }
        return kernel_basis(sys).rows();
    }
    NumMatrix sys(act.rho_num.size() * unknowns, unknowns, act.prec);
    std::size_t row = 0;
    for (const NumMatrix& sigma : act.rho_num) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                for (std::size_t l = 0; l < d; ++l) {
                    sys(row, l * d + j) += sigma(i, l);
                    sys(row, i * d + l) -= sigma(l, j);
                }
                ++row;
            }
    }
    return num_kernel(sys, act.tol).rows();
}

} // namespace detail

// Decompose the action on P into irreducible constituents and compute each
// one's multiplicity inside Lambda (x) R.
inline IsotypicReport constituents_of_P(const IsometryGroup& g, const FixedSpace& p,
                                        const NumericOptions& opts = {}) {
    if (p.basis.rows() != 3 || p.basis.cols() != g.lattice.rank())
        throw ValidationError("constituents_of_P: P must be three rows in ambient coordinates");
    const unsigned prec = p.exact ? std::max(opts.precision_bits, 128u) : p.precision_bits;
    const Num tol =
        pow10_num(p.exact ? opts.tolerance_exponent : p.tolerance_exponent, prec);
    const bool exact = p.exact;
    detail::SubAction act = detail::restricted_action(g, p.basis, exact, prec, tol);

    struct Piece {
        std::size_t dim;
        ConstituentType type;
        RatMatrix coords; // rows within P coordinates
        std::string key;  // isomorphism key for grouping
    };
    std::vector<Piece> pieces;

    auto pattern_key = [](const std::vector<int>& eps) {
        std::string k = "sign:";
        for (int e : eps) k += (e == 1 ? '+' : '-');
        return k;
    };
    auto all_plus = [](const std::vector<int>& eps) {
        for (int e : eps)
            if (e != 1) return false;
        return true;
    };

    // fixed part
    RatMatrix fixed_c;
    NumMatrix fixed_cn;
    std::size_t dim_f = 0;
    std::vector<int> ones(g.generators.size(), 1);
    if (exact) {
        fixed_c = detail::signed_fixed_exact(act, ones);
        dim_f = fixed_c.rows();
    } else {
        fixed_cn = detail::signed_fixed_numeric(act, ones);
        dim_f = fixed_cn.rows();
        fixed_c = detail::rat_from_num(fixed_cn);
    }
    for (std::size_t i = 0; i < dim_f; ++i) {
        RatMatrix line(1, 3);
        line.set_row(0, fixed_c.row(i));
        pieces.push_back({1, ConstituentType::trivial, line, "trivial"});
    }

    // complement of the fixed part within P
    const std::size_t dim_w = 3 - dim_f;
    if (dim_w > 0) {
        RatMatrix w_c;
        NumMatrix w_cn;
        if (exact) {
            w_c = detail::form_complement_exact(act, fixed_c);
            if (w_c.rows() != dim_w)
                throw ComputeError("constituents_of_P: complement dimension mismatch");
        } else {
            w_cn = detail::form_complement_numeric(act, fixed_cn);
            if (w_cn.rows() != dim_w)
                throw ComputeError("inconsistent numeric classification: complement dimension");
            w_c = detail::rat_from_num(w_cn);
        }

        auto emit_line = [&](const RatMatrix& line_in_w, const std::vector<int>& eps) {
            RatMatrix coords = line_in_w * w_c; // back to P coordinates
            pieces.push_back({1, ConstituentType::other, coords, pattern_key(eps)});
        };

        if (dim_w == 1) {
            std::vector<int> eps;
            if (exact) {
                RatMatrix line = RatMatrix::identity(1);
                detail::SubAction wact = detail::restrict_coords_exact(act, w_c);
                eps = detail::pattern_of_line_exact(wact, line);
            } else {
                detail::SubAction wact = detail::restrict_coords_numeric(act, w_cn);
                NumMatrix line = NumMatrix::identity(1, prec);
                eps = detail::pattern_of_line_numeric(wact, line);
            }
            if (all_plus(eps)) throw ComputeError("constituents_of_P: trivial line escaped fixed part");
            RatMatrix coords = w_c;
            pieces.push_back({1, ConstituentType::other, coords, pattern_key(eps)});
        } else if (dim_w == 2) {
            detail::SubAction wact = exact ? detail::restrict_coords_exact(act, w_c)
                                           : detail::restrict_coords_numeric(act, w_cn);
            detail::TwoDimSplit split = detail::classify_two_dim(wact);
            if (split.irreducible) {
                ConstituentType t = split.all_rotations ? ConstituentType::sign_free_rotation
                                                        : ConstituentType::other;
                pieces.push_back({2, t, w_c, "irr2"});
            } else {
                for (std::size_t i = 0; i < 2; ++i)
                    emit_line(split.lines[i], split.line_patterns[i]);
            }
        } else {
            // dim_w == 3: peel off all sign lines first
            const std::size_t k = g.generators.size();
            if (k > 16)
                throw ComputeError("constituents_of_P: too many generators for sign enumeration");
            detail::SubAction wact = exact ? detail::restrict_coords_exact(act, w_c)
                                           : detail::restrict_coords_numeric(act, w_cn);
            RatMatrix diag_part(0, 3);
            std::vector<std::pair<RatMatrix, std::vector<int>>> sign_lines;
            for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) {
                std::vector<int> eps(k);
                for (std::size_t i = 0; i < k; ++i) eps[i] = (mask >> i) & 1 ? -1 : 1;
                if (exact) {
                    RatMatrix v = detail::signed_fixed_exact(wact, eps);
                    for (std::size_t r = 0; r < v.rows(); ++r) {
                        RatMatrix line(1, 3);
                        line.set_row(0, v.row(r));
                        sign_lines.push_back({line, eps});
                        diag_part = detail::rat_vstack(diag_part, line);
                    }
                } else {
                    NumMatrix v = detail::signed_fixed_numeric(wact, eps);
                    for (std::size_t r = 0; r < v.rows(); ++r) {
                        NumMatrix line(1, 3, prec);
                        for (std::size_t j = 0; j < 3; ++j) line(0, j) = v(r, j);
                        sign_lines.push_back({detail::rat_from_num(line), eps});
                        diag_part = detail::rat_vstack(diag_part, detail::rat_from_num(line));
                    }
                }
            }
            const std::size_t dim_d = sign_lines.size();
            for (auto& [line, eps] : sign_lines) emit_line(line, eps);
            if (dim_d == 3) {
                // fully diagonalizable, done
            } else if (dim_d == 0) {
                pieces.push_back({3, ConstituentType::three_dim_irreducible, w_c, "irr3"});
            } else if (dim_d == 1) {
                RatMatrix rest_c;
                NumMatrix rest_cn;
                detail::SubAction ract;
                if (exact) {
                    rest_c = detail::form_complement_exact(wact, diag_part);
                    if (rest_c.rows() != 2)
                        throw ComputeError("constituents_of_P: residual dimension mismatch");
                    ract = detail::restrict_coords_exact(wact, rest_c);
                } else {
                    NumMatrix diag_n(diag_part, prec);
                    rest_cn = detail::form_complement_numeric(wact, diag_n);
                    if (rest_cn.rows() != 2)
                        throw ComputeError("inconsistent numeric classification: residual dimension");
                    rest_c = detail::rat_from_num(rest_cn);
                    ract = detail::restrict_coords_numeric(wact, rest_cn);
                }
                detail::TwoDimSplit split = detail::classify_two_dim(ract);
                if (!split.irreducible)
                    throw ComputeError("constituents_of_P: reducible piece escaped sign peeling");
                ConstituentType t = split.all_rotations ? ConstituentType::sign_free_rotation
                                                        : ConstituentType::other;
                pieces.push_back({2, t, rest_c * w_c, "irr2"});
            } else {
                throw ComputeError("constituents_of_P: two sign lines with invariant complement line");
            }
        }
    }

    // assign type indices by key
    std::vector<std::string> keys;
    IsotypicReport report;
    report.exact = exact;
    for (const Piece& piece : pieces) {
        std::size_t idx = 0;
        auto it = std::find(keys.begin(), keys.end(), piece.key);
        if (it == keys.end()) {
            idx = keys.size();
            keys.push_back(piece.key);
        } else {
            idx = static_cast<std::size_t>(it - keys.begin());
        }
        Constituent c;
        c.dim = piece.dim;
        c.type = piece.type;
        c.type_index = idx;
        c.basis = piece.coords * p.basis; // to ambient coordinates
        report.constituents.push_back(std::move(c));
    }

    // multiplicities per distinct type, via dim Hom / dim End
    std::vector<std::size_t> mult_by_type(keys.size(), 0);
    std::vector<std::size_t> dim_by_type(keys.size(), 0);
    std::vector<bool> seen(keys.size(), false);
    for (const Constituent& c : report.constituents) {
        if (seen[c.type_index]) continue;
        seen[c.type_index] = true;
        detail::SubAction cact = detail::restricted_action(g, c.basis, exact, prec, tol);
        std::size_t hom_dim, end_d = detail::end_dim(cact);
        if (exact)
            hom_dim = detail::hom_into_lambda_exact(g, cact).first;
        else
            hom_dim = detail::hom_into_lambda_numeric(g, cact).first;
        if (end_d == 0 || hom_dim % end_d != 0)
            throw ComputeError("constituents_of_P: Hom dimension is not a multiple of End dimension");
        mult_by_type[c.type_index] = hom_dim / end_d;
        dim_by_type[c.type_index] = c.dim;
    }
    for (Constituent& c : report.constituents) c.multiplicity = mult_by_type[c.type_index];
    report.dim_ii_g = 0;
    for (std::size_t ti = 0; ti < keys.size(); ++ti)
        report.dim_ii_g += mult_by_type[ti] * dim_by_type[ti];
    return report;
}

// Span of every copy, inside Lambda (x) R, of the constituent types of P.
inline RealSubspace compute_II_G(const IsometryGroup& g, const FixedSpace& p,
                                 const IsotypicReport& report, const NumericOptions& opts = {}) {
    const unsigned prec = p.exact ? std::max(opts.precision_bits, 128u) : p.precision_bits;
    const Num tol = pow10_num(p.exact ? opts.tolerance_exponent : p.tolerance_exponent, prec);
    const bool exact = p.exact && report.exact;
    const std::size_t n = g.lattice.rank();

    std::vector<bool> seen;
    RatMatrix span_exact(0, n);
    NumMatrix span_num(0, n, prec);
    for (const Constituent& c : report.constituents) {
        if (c.type_index >= seen.size()) seen.resize(c.type_index + 1, false);
        if (seen[c.type_index]) continue;
        seen[c.type_index] = true;
        detail::SubAction cact = detail::restricted_action(g, c.basis, exact, prec, tol);
        if (exact) {
            auto [dim, images] = detail::hom_into_lambda_exact(g, cact);
            (void)dim;
            span_exact = detail::rat_vstack(span_exact, images);
        } else {
            auto [dim, images] = detail::hom_into_lambda_numeric(g, cact);
            (void)dim;
            span_num = detail::num_vstack(span_num, images);
        }
    }

    if (exact) {
        auto [den, cleared] = clear_denominators(span_exact);
        (void)den;
        IntMatrix basis = row_span_basis(cleared);
        if (basis.rows() != report.dim_ii_g)
            throw ComputeError("compute_II_G: isotypic span has wrong dimension");
        RatMatrix rb(basis);
        if (!detail::span_contains(rb, p.basis))
            throw ComputeError("compute_II_G: span does not contain P");
        return RealSubspace{rb, true};
    }

    // numeric: reduce to a basis of rows
    NumMatrix reduced = span_num;
    auto [rank_n, pivots] = num_rref(reduced, tol);
    (void)pivots;
    if (rank_n != report.dim_ii_g)
        throw ComputeError("compute_II_G: numeric isotypic span has wrong dimension");
    NumMatrix basis(rank_n, n, prec);
    for (std::size_t i = 0; i < rank_n; ++i)
        for (std::size_t j = 0; j < n; ++j) basis(i, j) = reduced(i, j);
    // containment of P: each row of P must project onto the span
    {
        NumMatrix stack = detail::num_vstack(basis, NumMatrix(p.basis, prec));
        if (num_rank(stack, tol) != rank_n)
            throw ComputeError("compute_II_G: numeric span does not contain P");
    }
    return RealSubspace{detail::rat_from_num(basis), false};
}

namespace detail {

inline IntMatrix canonical_row_form(const IntMatrix& m) {
    return hermite_normal_form(row_span_basis(m)).first;
}

// the five-part verification contract shared by both lambda_G paths
inline void verify_lambda_candidate(const IsometryGroup& g, const IntMatrix& basis,
                                    const RealSubspace& ii, std::size_t expected_rank,
                                    unsigned prec, const Num& tol) {
    const Lattice& lat = g.lattice;
    const std::size_t n = lat.rank();
    // (a) G-stable
    if (basis.rows() > 0)
        for (const Isometry& f : g.generators) {
            IntMatrix image = basis * transpose(f.matrix);
            if (rank(vstack(basis, image)) != rank(basis))
                throw ComputeError("lambda_G verification failed: candidate is not G-stable");
        }
    // (b) negative definite
    {
        auto [pos, neg, zero] = symmetric_signature(RatMatrix(induced_gram(lat, basis)));
        if (pos != 0 || zero != 0 || neg != basis.rows())
            throw ComputeError("lambda_G verification failed: form is not negative definite");
    }
    // (c) primitive
    if (basis.rows() > 0) {
        IntMatrix sat = saturate(row_span_basis(basis), n);
        if (canonical_row_form(sat) != canonical_row_form(basis))
            throw ComputeError("lambda_G verification failed: candidate is not primitive");
    }
    // (d) rank
    if (basis.rows() != expected_rank)
        throw ComputeError("lambda_G verification failed: rank does not match the isotypic count");
    // (e) orthogonality to II_G
    if (ii.exact) {
        RatMatrix prod = RatMatrix(basis) * RatMatrix(lat.gram) * transpose(ii.basis);
        for (std::size_t i = 0; i < prod.rows(); ++i)
            for (std::size_t j = 0; j < prod.cols(); ++j)
                if (prod(i, j) != 0)
                    throw ComputeError("lambda_G verification failed: not orthogonal to II_G");
    } else {
        NumMatrix prod = NumMatrix(RatMatrix(basis), prec) *
                         NumMatrix(RatMatrix(lat.gram), prec) *
                         transpose(NumMatrix(ii.basis, prec));
        if (max_abs(prod) > tol)
            throw ComputeError("lambda_G verification failed: not orthogonal to II_G");
    }
}

} // namespace detail

// Lambda_G for a supplied invariant 3-space (the main entry recomputes P
// itself; this variant exists so independence of that choice can be audited).
inline LambdaG compute_lambda_G_from_P(const IsometryGroup& g, const FixedSpace& p,
                                       const NumericOptions& opts = {}) {
    const Lattice& lat = g.lattice;
    const std::size_t n = lat.rank();
    IsotypicReport report = constituents_of_P(g, p, opts);
    RealSubspace ii = compute_II_G(g, p, report, opts);
    const unsigned prec = p.exact ? std::max(opts.precision_bits, 128u) : p.precision_bits;
    const Num tol = pow10_num(p.exact ? opts.tolerance_exponent : p.tolerance_exponent, prec);

    IntMatrix basis;
    if (ii.exact) {
        basis = kernel_basis(ii.basis * RatMatrix(lat.gram));
    } else {
        NumMatrix prod = NumMatrix(ii.basis, prec) * NumMatrix(RatMatrix(lat.gram), prec);
        NumMatrix ker = num_kernel(prod, tol);
        if (ker.rows() + report.dim_ii_g != n)
            throw ComputeError("lambda_G verification failed: numeric kernel has wrong dimension");
        // entrywise rational reconstruction, then integer span
        RatMatrix rec(ker.rows(), n);
        for (std::size_t i = 0; i < ker.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::optional<Rat> r = rational_reconstruct(ker(i, j), opts.denominator_bound);
                if (!r)
                    throw ComputeError(
                        "lambda_G verification failed: rational reconstruction exceeded the "
                        "denominator bound");
                rec(i, j) = *r;
            }
        auto [den, cleared] = clear_denominators(rec);
        (void)den;
        IntMatrix pruned = row_span_basis(cleared);
        if (pruned.rows() != ker.rows())
            throw ComputeError("lambda_G verification failed: reconstructed rows are dependent");
        basis = saturate(pruned, n);
    }

    detail::verify_lambda_candidate(g, basis, ii, n - report.dim_ii_g, prec, tol);

    LambdaG out;
    out.sublattice = basis.rows() == 0 ? zero_sublattice(lat) : make_sublattice(lat, basis);
    out.p = p;
    out.report = report;
    out.ii_g = ii;
    out.exact = ii.exact;
    return out;
}

inline LambdaG compute_lambda_G(const IsometryGroup& g, const NumericOptions& opts = {}) {
    FixedSpace p = invariant_positive_3space(g, opts);
    return compute_lambda_G_from_P(g, p, opts);
}

// Searches the invariant part orthogonal to Lambda_G for a vector of
// positive norm; returns it in ambient coordinates when one exists.
inline std::optional<IntVec> has_fixed_positive_class(const IsometryGroup& g,
                                                      const LambdaG& lambda) {
    const Lattice& lat = g.lattice;
    const std::size_t n = lat.rank();
    Sublattice inv = invariant_lattice(g);
    Sublattice perp = orthogonal_complement(lat, lambda.sublattice);
    if (inv.rank() == 0 || perp.rank() == 0) return std::nullopt;

    // intersection of the two primitive sublattices
    IntMatrix stacked = vstack(inv.basis, Int(-1) * perp.basis);
    IntMatrix pairs = kernel_basis(transpose(stacked));
    if (pairs.rows() == 0) return std::nullopt;
    IntMatrix inter(pairs.rows(), n);
    for (std::size_t r = 0; r < pairs.rows(); ++r) {
        IntVec coeff(inv.rank());
        for (std::size_t i = 0; i < inv.rank(); ++i) coeff[i] = pairs(r, i);
        IntVec v = vec_mul(coeff, inv.basis);
        for (std::size_t j = 0; j < n; ++j) inter(r, j) = v[j];
    }
    IntMatrix basis = saturate(row_span_basis(inter), n);
    if (basis.rows() == 0) return std::nullopt;
    Sublattice s = make_sublattice(lat, basis);

    auto [pos, neg, zero] = symmetric_signature(RatMatrix(s.gram));
    (void)neg;
    (void)zero;
    if (pos == 0) return std::nullopt;

    // prefer a basis vector as witness
    for (std::size_t i = 0; i < s.rank(); ++i) {
        if (s.gram(i, i) > 0) return s.basis.row(i);
    }
    // otherwise read one off the diagonalizing transform
    RatMatrix t;
    symmetric_signature_with_transform(RatMatrix(s.gram), &t);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        RatMatrix row(1, t.cols());
        row.set_row(0, t.row(i));
        RatMatrix val = row * RatMatrix(s.gram) * transpose(row);
        if (val(0, 0) > 0) {
            Int l = 1;
            for (std::size_t j = 0; j < t.cols(); ++j)
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t(i, j).get_den().get_mpz_t());
            IntVec coeff(t.cols());
            for (std::size_t j = 0; j < t.cols(); ++j)
                coeff[j] = t(i, j).get_num() * (l / t(i, j).get_den());
            return vec_mul(coeff, s.basis);
        }
    }
    throw ComputeError("has_fixed_positive_class: signature reported a positive direction but none was found");
}

} // namespace hkreal

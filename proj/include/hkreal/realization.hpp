#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hkreal/equivariant.hpp"
#include "hkreal/errors.hpp"
#include "hkreal/isometry.hpp"
#include "hkreal/lattice.hpp"
#include "hkreal/walls.hpp"

namespace hkreal {

enum class DeformationType { k3, k3n, og10, custom };

inline std::string to_string(DeformationType t) {
    switch (t) {
    case DeformationType::k3: return "k3";
    case DeformationType::k3n: return "k3n";
    case DeformationType::og10: return "og10";
    default: return "custom";
    }
}

// Facts the lattice computation cannot decide for itself. Whether the group
// fixes a connected component of the Einstein Teichmueller space is geometric
// input the caller must assert; the deformation type selects the monodromy
// policy below.
struct Assumptions {
    bool fixes_component = false;
    DeformationType deformation_type = DeformationType::custom;
    std::size_t n = 0; // the n of K3^[n], used only when deformation_type is k3n
};

// Whether the full orientation-preserving orthogonal group is known to be
// the monodromy group for the declared deformation type. Known for K3, for
// K3^[n] with n - 1 a prime power, and for OG10; for other K3^[n] and for
// custom lattices the answer is open, so the orientation check still runs
// but the result carries a caveat instead of a clean pass.
struct MonodromyPolicy {
    bool monodromy_known = false;
    std::vector<bool> generator_plus;
    bool all_plus = false;
    bool pass = false;
    std::string caveat; // nonempty exactly when monodromy_known is false
};

namespace detail {

// n = 1 counts: the K3^[2] case has n - 1 = 1 and its monodromy group is
// the full orientation-preserving group, so the degenerate value passes
inline bool is_prime_power_or_one(std::size_t m) {
    if (m == 0) return false;
    if (m == 1) return true;
    std::size_t p = 0;
    for (std::size_t d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            p = d;
            break;
        }
    if (p == 0) return true; // m itself is prime
    while (m % p == 0) m /= p;
    return m == 1;
}

} // namespace detail

inline MonodromyPolicy check_monodromy_policy(const IsometryGroup& g, const Assumptions& a) {
    MonodromyPolicy out;
    switch (a.deformation_type) {
    case DeformationType::k3:
    case DeformationType::og10:
        out.monodromy_known = true;
        break;
    case DeformationType::k3n:
        if (a.n < 2) throw ValidationError("check_monodromy_policy: k3n needs n >= 2");
        out.monodromy_known = detail::is_prime_power_or_one(a.n - 1);
        break;
    case DeformationType::custom:
        out.monodromy_known = false;
        break;
    }
    out.all_plus = true;
    for (const Isometry& f : g.generators) {
        bool plus = is_plus(f);
        out.generator_plus.push_back(plus);
        if (!plus) out.all_plus = false;
    }
    out.pass = out.all_plus;
    if (!out.monodromy_known) out.caveat = "unknown monodromy - orientation check only";
    return out;
}

enum class Verdict { realizable, not_realizable, conditional };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::realizable: return "realizable";
    case Verdict::not_realizable: return "not-realizable";
    default: return "conditional";
    }
}

struct EinsteinResult {
    Verdict verdict;
    std::optional<WallWitness> witness; // set when not_realizable
    std::string condition;              // the missing assumption when conditional
};

struct HyperkahlerResult {
    Verdict verdict;
    std::optional<WallWitness> wall_witness;
    std::optional<IntVec> fixed_class; // set when realizable
    std::string condition;             // missing assumption or failed requirement
    std::string remark;                // projectivity note when realizable
};

// The group acts on an Einstein metric iff it fixes a Teichmueller component
// and its coinvariant core meets no declared wall. The component hypothesis
// is not decidable here, so without the assertion the verdict is conditional
// and no wall search runs.
inline EinsteinResult check_einstein(const LambdaG& lambda_g, const WallSpec& spec,
                                     const Assumptions& a, unsigned jobs = 1) {
    if (!a.fixes_component)
        return EinsteinResult{Verdict::conditional, std::nullopt,
                              "component assumption not asserted"};
    std::optional<WallWitness> w = find_wall(lambda_g, spec, jobs);
    if (w.has_value()) return EinsteinResult{Verdict::not_realizable, std::move(w), ""};
    return EinsteinResult{Verdict::realizable, std::nullopt, ""};
}

inline EinsteinResult check_einstein(const IsometryGroup& g, const WallSpec& spec,
                                     const Assumptions& a, const NumericOptions& opts = {}) {
    return check_einstein(compute_lambda_G(g, opts), spec, a);
}

// The hyper-Kaehler verdict adds one requirement on top of the Einstein
// one: some positive class must be fixed by the group away from the walls.
// When it holds, that class spans a trivial subrepresentation and is a
// positive integral (1,1)-class for a suitable metric, so the manifold can
// be taken projective with the group acting by algebraic automorphisms.
inline HyperkahlerResult check_hyperkahler(const IsometryGroup& g, const LambdaG& lambda_g,
                                           const WallSpec& spec, const Assumptions& a,
                                           unsigned jobs = 1) {
    EinsteinResult e = check_einstein(lambda_g, spec, a, jobs);
    if (e.verdict == Verdict::conditional)
        return HyperkahlerResult{Verdict::conditional, std::nullopt, std::nullopt,
                                 e.condition, ""};
    if (e.verdict == Verdict::not_realizable)
        return HyperkahlerResult{Verdict::not_realizable, std::move(e.witness), std::nullopt,
                                 "", ""};
    std::optional<IntVec> fixed = has_fixed_positive_class(g, lambda_g);
    if (!fixed.has_value())
        return HyperkahlerResult{Verdict::not_realizable, std::nullopt, std::nullopt,
                                 "no fixed positive class", ""};
    return HyperkahlerResult{
        Verdict::realizable, std::nullopt, std::move(fixed), "",
        "the fixed class spans a positive integral (1,1)-class, so we can conclude using "
        "Huybrechts' projectivity criterion: the metric can be chosen with the manifold "
        "projective and the group acting by algebraic automorphisms"};
}

inline HyperkahlerResult check_hyperkahler(const IsometryGroup& g, const WallSpec& spec,
                                           const Assumptions& a,
                                           const NumericOptions& opts = {}) {
    return check_hyperkahler(g, compute_lambda_G(g, opts), spec, a);
}

struct FailureInfo {
    std::string kind; // "validation" or "computation"
    std::string message;
};

struct RealizationReport {
    WallSpec walls;
    Assumptions assumptions;
    std::size_t group_order = 0;
    MonodromyPolicy monodromy;
    std::optional<Sublattice> invariant;
    std::optional<Sublattice> coinvariant;
    std::optional<LambdaG> lambda_g;
    std::optional<EinsteinResult> einstein;
    std::optional<HyperkahlerResult> hyperkahler;
    std::vector<std::string> remarks;
    std::optional<FailureInfo> failure; // when set, the verdicts are absent
};

namespace detail {

inline void finish_report(RealizationReport& rep, const Assumptions& a) {
    if (!rep.monodromy.caveat.empty()) rep.remarks.push_back(rep.monodromy.caveat);
    if (a.deformation_type != DeformationType::k3)
        rep.remarks.push_back(
            "if the mapping classes meet the Torelli group nontrivially, a lift could be "
            "found but it would be an extension of the group");
}

} // namespace detail

// Everything the pipeline can say about one case. Errors from any stage are
// embedded as a structured failure rather than escaping: a generator may
// fail to be an isometry, the numeric reconstruction may be refused. Fields
// computed before the failure stay.
inline RealizationReport full_report(const IsometryGroup& g, const WallSpec& spec,
                                     const Assumptions& a, const NumericOptions& opts = {},
                                     unsigned jobs = 1) {
    RealizationReport rep;
    rep.walls = spec;
    rep.assumptions = a;
    try {
        rep.group_order = g.order();
        rep.monodromy = check_monodromy_policy(g, a);
        rep.invariant = invariant_lattice(g);
        rep.coinvariant = coinvariant_lattice(g);
        LambdaG lg = compute_lambda_G(g, opts);
        EinsteinResult e = check_einstein(lg, spec, a, jobs);
        HyperkahlerResult h = check_hyperkahler(g, lg, spec, a, jobs);
        rep.lambda_g = std::move(lg);
        if (!h.remark.empty()) rep.remarks.push_back(h.remark);
        rep.einstein = std::move(e);
        rep.hyperkahler = std::move(h);
    } catch (const ValidationError& err) {
        rep.failure = FailureInfo{"validation", err.what()};
    } catch (const ComputeError& err) {
        rep.failure = FailureInfo{"computation", err.what()};
    }
    detail::finish_report(rep, a);
    return rep;
}

// Same, but the group is closed here, so a runaway or malformed generator
// set also lands in the failure section instead of escaping.
inline RealizationReport full_report(const Lattice& l, const std::vector<IntMatrix>& generators,
                                     const WallSpec& spec, const Assumptions& a,
                                     const NumericOptions& opts = {},
                                     std::size_t max_group_order = 10000, unsigned jobs = 1) {
    try {
        IsometryGroup g = group_closure(l, generators, max_group_order);
        return full_report(g, spec, a, opts, jobs);
    } catch (const ValidationError& err) {
        RealizationReport rep;
        rep.walls = spec;
        rep.assumptions = a;
        rep.failure = FailureInfo{"validation", err.what()};
        detail::finish_report(rep, a);
        return rep;
    } catch (const ComputeError& err) {
        RealizationReport rep;
        rep.walls = spec;
        rep.assumptions = a;
        rep.failure = FailureInfo{"computation", err.what()};
        detail::finish_report(rep, a);
        return rep;
    }
}

// The sublattice pipeline alone: group, invariant, coinvariant, Lambda_G.
// No verdicts, so no wall enumeration is paid for.
inline RealizationReport lambda_g_report(const Lattice& l,
                                         const std::vector<IntMatrix>& generators,
                                         const NumericOptions& opts = {},
                                         std::size_t max_group_order = 10000) {
    RealizationReport rep;
    try {
        IsometryGroup g = group_closure(l, generators, max_group_order);
        rep.group_order = g.order();
        rep.invariant = invariant_lattice(g);
        rep.coinvariant = coinvariant_lattice(g);
        rep.lambda_g = compute_lambda_G(g, opts);
    } catch (const ValidationError& err) {
        rep.failure = FailureInfo{"validation", err.what()};
    } catch (const ComputeError& err) {
        rep.failure = FailureInfo{"computation", err.what()};
    }
    return rep;
}

} // namespace hkreal

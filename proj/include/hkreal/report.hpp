#pragma once

#include <sstream>
#include <string>

#include "hkreal/config.hpp"

namespace hkreal {

namespace detail {

inline json string_or_null(const std::string& s) {
    if (s.empty()) return nullptr;
    return json(s);
}

inline json sublattice_to_json(const Sublattice& s) {
    json j;
    j["rank"] = s.rank();
    j["basis"] = matrix_to_json(s.basis);
    j["gram"] = matrix_to_json(s.gram);
    return j;
}

inline json witness_to_json(const WallWitness& w) {
    json j;
    j["vector"] = vector_to_json(w.vector);
    j["norm"] = int_to_json(w.norm);
    j["divisibility"] = int_to_json(w.divisibility);
    j["entry_index"] = w.entry_index;
    return j;
}

inline json lambda_g_to_json(const LambdaG& lg) {
    json j;
    j["rank"] = lg.sublattice.rank();
    j["basis"] = matrix_to_json(lg.sublattice.basis);
    j["gram"] = matrix_to_json(lg.sublattice.gram);
    j["exact"] = lg.exact;
    j["ii_dimension"] = lg.report.dim_ii_g;
    return j;
}

inline json monodromy_to_json(const MonodromyPolicy& m) {
    json j;
    j["known"] = m.monodromy_known;
    j["orientation_passed"] = m.pass;
    j["generator_plus"] = m.generator_plus;
    j["caveat"] = string_or_null(m.caveat);
    return j;
}

inline json walls_to_json(const WallSpec& spec) {
    json entries = json::array();
    for (const WallEntry& e : spec.entries)
        entries.push_back(
            {{"norm", int_to_json(e.norm)}, {"divisibility", int_to_json(e.divisibility)}});
    json j;
    j["label"] = spec.label;
    j["entries"] = std::move(entries);
    return j;
}

inline json assumptions_to_json(const Assumptions& a) {
    json j;
    j["fixes_component"] = a.fixes_component;
    j["deformation_type"] = to_string(a.deformation_type);
    j["n"] = a.deformation_type == DeformationType::k3n ? json(a.n) : json(nullptr);
    return j;
}

} // namespace detail

inline json report_to_json(const RealizationReport& rep) {
    using namespace detail;
    json j;
    j["group_order"] = rep.group_order;
    j["assumptions"] = assumptions_to_json(rep.assumptions);
    j["walls"] = walls_to_json(rep.walls);
    j["monodromy"] = monodromy_to_json(rep.monodromy);
    j["invariant"] = rep.invariant ? sublattice_to_json(*rep.invariant) : json(nullptr);
    j["coinvariant"] = rep.coinvariant ? sublattice_to_json(*rep.coinvariant) : json(nullptr);
    j["lambda_g"] = rep.lambda_g ? lambda_g_to_json(*rep.lambda_g) : json(nullptr);
    if (rep.einstein) {
        json e;
        e["verdict"] = to_string(rep.einstein->verdict);
        e["witness"] = rep.einstein->witness ? witness_to_json(*rep.einstein->witness)
                                             : json(nullptr);
        e["condition"] = string_or_null(rep.einstein->condition);
        j["einstein"] = std::move(e);
    } else {
        j["einstein"] = nullptr;
    }
    if (rep.hyperkahler) {
        json h;
        h["verdict"] = to_string(rep.hyperkahler->verdict);
        h["wall_witness"] = rep.hyperkahler->wall_witness
                                ? witness_to_json(*rep.hyperkahler->wall_witness)
                                : json(nullptr);
        h["fixed_class"] = rep.hyperkahler->fixed_class
                               ? vector_to_json(*rep.hyperkahler->fixed_class)
                               : json(nullptr);
        h["condition"] = string_or_null(rep.hyperkahler->condition);
        j["hyperkahler"] = std::move(h);
    } else {
        j["hyperkahler"] = nullptr;
    }
    j["remarks"] = rep.remarks;
    j["failure"] = rep.failure ? json({{"kind", rep.failure->kind},
                                       {"message", rep.failure->message}})
                               : json(nullptr);
    return j;
}

inline json report_document(const RealizationReport& rep, const json& config_echo,
                            double seconds) {
    json doc;
    doc["schema"] = report_schema_id;
    doc["tool"] = {{"name", tool_name}, {"version", tool_version}};
    doc["config"] = config_echo;
    doc["report"] = report_to_json(rep);
    doc["timing"] = {{"seconds", seconds}};
    return doc;
}

// the lambda-g command reports the sublattice pipeline without verdicts
inline json lambda_g_document(const RealizationReport& rep, const json& config_echo,
                              double seconds) {
    using namespace detail;
    json result;
    result["group_order"] = rep.group_order;
    result["invariant"] = rep.invariant ? sublattice_to_json(*rep.invariant) : json(nullptr);
    result["coinvariant"] = rep.coinvariant ? sublattice_to_json(*rep.coinvariant)
                                            : json(nullptr);
    result["lambda_g"] = rep.lambda_g ? lambda_g_to_json(*rep.lambda_g) : json(nullptr);
    result["failure"] = rep.failure ? json({{"kind", rep.failure->kind},
                                            {"message", rep.failure->message}})
                                    : json(nullptr);
    json doc;
    doc["schema"] = lambda_g_schema_id;
    doc["tool"] = {{"name", tool_name}, {"version", tool_version}};
    doc["config"] = config_echo;
    doc["result"] = std::move(result);
    doc["timing"] = {{"seconds", seconds}};
    return doc;
}

namespace detail {

inline std::string discriminant_group_text(const std::vector<Int>& divisors) {
    std::string out;
    for (const Int& d : divisors) {
        if (d == 0) return "degenerate";
        if (d == 1) continue;
        if (!out.empty()) out += " x ";
        out += "Z/" + d.get_str();
    }
    return out.empty() ? "trivial" : out;
}

} // namespace detail

inline json lattice_info_document(const CaseConfig& c, double seconds) {
    Lattice l = build_lattice(c);
    auto [pos, neg, zero] = signature(l);
    auto [d, u, v] = smith_normal_form(l.gram);
    std::vector<Int> divisors;
    for (std::size_t i = 0; i < l.rank(); ++i) divisors.push_back(d(i, i));
    bool even = true;
    for (std::size_t i = 0; i < l.rank(); ++i)
        if (l.gram(i, i) % 2 != 0) even = false;

    json lat;
    lat["type"] = to_string(c.lattice_type);
    if (c.lattice_type == DeformationType::k3n) lat["n"] = c.n;
    lat["label"] = l.label;
    lat["rank"] = l.rank();

    json doc;
    doc["schema"] = lattice_info_schema_id;
    doc["tool"] = {{"name", tool_name}, {"version", tool_version}};
    doc["lattice"] = std::move(lat);
    doc["signature"] = {{"positive", pos}, {"negative", neg}, {"zero", zero}};
    doc["determinant"] = int_to_json(det(l.gram));
    doc["even"] = even;
    json divs = json::array();
    for (const Int& x : divisors) divs.push_back(int_to_json(x));
    doc["elementary_divisors"] = std::move(divs);
    doc["discriminant_group"] = detail::discriminant_group_text(divisors);
    doc["timing"] = {{"seconds", seconds}};
    return doc;
}

inline std::string render_lattice_info_text(const json& doc) {
    std::ostringstream out;
    out << tool_name << " " << tool_version << "\n";
    out << "lattice: " << doc["lattice"]["label"].get<std::string>() << " (rank "
        << doc["lattice"]["rank"].get<std::size_t>() << ")\n";
    out << "signature: (" << doc["signature"]["positive"].get<std::size_t>() << ", "
        << doc["signature"]["negative"].get<std::size_t>() << ", "
        << doc["signature"]["zero"].get<std::size_t>() << ")\n";
    const json& det = doc["determinant"];
    out << "determinant: "
        << (det.is_string() ? det.get<std::string>() : std::to_string(det.get<std::int64_t>()))
        << "\n";
    out << "even: " << (doc["even"].get<bool>() ? "true" : "false") << "\n";
    out << "discriminant group: " << doc["discriminant_group"].get<std::string>() << "\n";
    return out.str();
}

namespace detail {

inline std::string gram_to_text(const IntMatrix& m) {
    if (m.rows() > 10) return "(suppressed, rank > 10)";
    std::ostringstream out;
    out << "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << (r ? ", [" : "[");
        for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? ", " : "") << m(r, c).get_str();
        out << "]";
    }
    out << "]";
    return out.str();
}

inline std::string vector_to_text(const IntVec& v) {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i].get_str();
    out << "]";
    return out.str();
}

inline void witness_to_text(std::ostringstream& out, const WallWitness& w) {
    out << "  wall witness: " << vector_to_text(w.vector) << ", norm " << w.norm.get_str()
        << ", divisibility " << w.divisibility.get_str() << " (entry " << w.entry_index << ")\n";
}

} // namespace detail

inline json short_vectors_document(const Lattice& l, const Int& target,
                                   const std::vector<IntVec>& vecs, double seconds) {
    json doc;
    doc["schema"] = short_vectors_schema_id;
    doc["tool"] = {{"name", tool_name}, {"version", tool_version}};
    doc["rank"] = l.rank();
    doc["norm"] = int_to_json(target);
    doc["pair_count"] = vecs.size();
    json list = json::array();
    for (const IntVec& v : vecs) list.push_back(vector_to_json(v));
    doc["vectors"] = std::move(list);
    doc["timing"] = {{"seconds", seconds}};
    return doc;
}

inline std::string render_short_vectors_text(const json& doc) {
    std::ostringstream out;
    out << tool_name << " " << tool_version << "\n";
    out << "norm: " << doc["norm"].dump() << "\n";
    out << "pairs (up to sign): " << doc["pair_count"].get<std::size_t>() << "\n";
    for (const json& v : doc["vectors"]) out << v.dump() << "\n";
    return out.str();
}

inline std::string render_lambda_g_text(const RealizationReport& rep) {
    using namespace detail;
    std::ostringstream out;
    out << tool_name << " " << tool_version << "\n";
    if (rep.failure) out << "failure (" << rep.failure->kind << "): " << rep.failure->message
                         << "\n";
    if (rep.group_order > 0) out << "group order: " << rep.group_order << "\n";
    if (rep.invariant) out << "invariant sublattice: rank " << rep.invariant->rank() << "\n";
    if (rep.coinvariant) out << "coinvariant sublattice: rank " << rep.coinvariant->rank() << "\n";
    if (rep.lambda_g) {
        out << "Lambda_G: rank " << rep.lambda_g->sublattice.rank() << ", "
            << (rep.lambda_g->exact ? "exact" : "numerically certified") << "\n";
        out << "  gram: " << gram_to_text(rep.lambda_g->sublattice.gram) << "\n";
    }
    return out.str();
}

inline std::string render_text(const RealizationReport& rep) {
    using namespace detail;
    std::ostringstream out;
    out << tool_name << " " << tool_version << "\n";
    out << "walls: " << (rep.walls.label.empty() ? "(unnamed)" : rep.walls.label);
    out << " (" << rep.walls.entries.size()
        << (rep.walls.entries.size() == 1 ? " entry)\n" : " entries)\n");
    out << "assumptions: fixes_component = " << (rep.assumptions.fixes_component ? "true" : "false")
        << ", type = " << to_string(rep.assumptions.deformation_type);
    if (rep.assumptions.deformation_type == DeformationType::k3n)
        out << ", n = " << rep.assumptions.n;
    out << "\n";
    if (rep.failure) {
        out << "failure (" << rep.failure->kind << "): " << rep.failure->message << "\n";
    }
    if (rep.group_order > 0) out << "group order: " << rep.group_order << "\n";
    if (!rep.failure) {
        out << "monodromy: " << (rep.monodromy.monodromy_known ? "known" : "unknown")
            << "; orientation check " << (rep.monodromy.pass ? "passed" : "failed") << "\n";
    }
    if (rep.invariant) out << "invariant sublattice: rank " << rep.invariant->rank() << "\n";
    if (rep.coinvariant) out << "coinvariant sublattice: rank " << rep.coinvariant->rank() << "\n";
    if (rep.lambda_g) {
        out << "Lambda_G: rank " << rep.lambda_g->sublattice.rank() << ", "
            << (rep.lambda_g->exact ? "exact" : "numerically certified") << "\n";
        out << "  gram: " << gram_to_text(rep.lambda_g->sublattice.gram) << "\n";
    }
    if (rep.einstein) {
        out << "einstein: " << to_string(rep.einstein->verdict) << "\n";
        if (rep.einstein->witness) witness_to_text(out, *rep.einstein->witness);
        if (!rep.einstein->condition.empty())
            out << "  condition: " << rep.einstein->condition << "\n";
    }
    if (rep.hyperkahler) {
        out << "hyperkahler: " << to_string(rep.hyperkahler->verdict) << "\n";
        if (rep.hyperkahler->wall_witness) witness_to_text(out, *rep.hyperkahler->wall_witness);
        if (rep.hyperkahler->fixed_class)
            out << "  fixed class: " << vector_to_text(*rep.hyperkahler->fixed_class) << "\n";
        if (!rep.hyperkahler->condition.empty())
            out << "  condition: " << rep.hyperkahler->condition << "\n";
    }
    if (!rep.remarks.empty()) {
        out << "remarks:\n";
        for (const std::string& r : rep.remarks) out << "  - " << r << "\n";
    }
    return out.str();
}

} // namespace hkreal

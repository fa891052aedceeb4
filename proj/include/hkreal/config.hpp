#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkreal/realization.hpp"

namespace hkreal {

// insertion-ordered so serialized documents are byte-stable
using json = nlohmann::ordered_json;

inline constexpr const char* tool_name = "hkreal";
inline constexpr const char* tool_version = "0.1.0";
inline constexpr const char* report_schema_id = "hkreal-report/1";
inline constexpr const char* lambda_g_schema_id = "hkreal-lambda-g/1";
inline constexpr const char* short_vectors_schema_id = "hkreal-short-vectors/1";
inline constexpr const char* lattice_info_schema_id = "hkreal-lattice-info/1";

struct CaseOptions {
    std::size_t max_group_order = 10000;
    unsigned precision_bits = 128;
    int tolerance_exponent = -30;
};

struct CaseConfig {
    DeformationType lattice_type = DeformationType::custom;
    long n = 0;                       // k3n only
    std::optional<IntMatrix> gram;    // custom only
    std::vector<IntMatrix> generators;
    std::optional<std::string> preset;
    std::optional<std::vector<WallEntry>> entries;
    bool fixes_component = false;
    CaseOptions options;
};

namespace detail {

[[noreturn]] inline void cfg_fail(const std::string& path, const std::string& what) {
    throw ValidationError("config: " + path + ": " + what);
}

inline const json& field(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) cfg_fail(path, std::string("missing required field \"") + key + "\"");
    return *it;
}

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) cfg_fail(path, "unknown field \"" + it.key() + "\"");
    }
}

} // namespace detail

// Integers ride as plain JSON numbers while they fit the 53-bit safe range
// and as exact decimal strings beyond it.
inline json int_to_json(const Int& v) {
    static const Int safe = (Int(1) << 53) - 1;
    if (v <= safe && v >= -safe) return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

inline Int int_from_json(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return Int(static_cast<unsigned long>(j.get<std::uint64_t>()));
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number_float())
        detail::cfg_fail(path, "must be an integer; values beyond 2^53 go in decimal strings");
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (s.size() == start) detail::cfg_fail(path, "empty integer string");
        for (std::size_t i = start; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                detail::cfg_fail(path, "malformed integer string \"" + s + "\"");
        return Int(s, 10);
    }
    detail::cfg_fail(path, "must be an integer or a decimal string");
}

inline json vector_to_json(const IntVec& v) {
    json a = json::array();
    for (const Int& x : v) a.push_back(int_to_json(x));
    return a;
}

inline IntVec vector_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) detail::cfg_fail(path, "must be an array of integers");
    IntVec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v[i] = int_from_json(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

inline json matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(int_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline IntMatrix matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) detail::cfg_fail(path, "must be a nonempty array of rows");
    if (!j[0].is_array() || j[0].empty())
        detail::cfg_fail(path + "[0]", "must be a nonempty array of integers");
    const std::size_t cols = j[0].size();
    IntMatrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string row_path = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols)
            detail::cfg_fail(row_path, "rows must all have length " + std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = int_from_json(j[r][c], row_path + "[" + std::to_string(c) + "]");
    }
    return m;
}

inline DeformationType deformation_type_from_string(const std::string& s,
                                                    const std::string& path) {
    if (s == "k3") return DeformationType::k3;
    if (s == "k3n") return DeformationType::k3n;
    if (s == "og10") return DeformationType::og10;
    if (s == "custom") return DeformationType::custom;
    detail::cfg_fail(path, "must be one of \"k3\", \"k3n\", \"og10\", \"custom\"");
}

inline Lattice build_lattice(const CaseConfig& c) {
    switch (c.lattice_type) {
        case DeformationType::k3: return lattice_k3();
        case DeformationType::k3n: return lattice_k3n(c.n);
        case DeformationType::og10: return lattice_og10();
        case DeformationType::custom: return make_lattice(*c.gram, "custom");
    }
    throw ValidationError("build_lattice: unreachable lattice type");
}

inline WallSpec build_wall_spec(const CaseConfig& c) {
    if (c.preset.has_value()) return wall_preset(*c.preset);
    return make_wall_spec(*c.entries, "entries");
}

inline Assumptions build_assumptions(const CaseConfig& c) {
    Assumptions a;
    a.fixes_component = c.fixes_component;
    a.deformation_type = c.lattice_type;
    a.n = c.lattice_type == DeformationType::k3n ? static_cast<std::size_t>(c.n) : 0;
    return a;
}

inline CaseConfig parse_config(const json& j) {
    using detail::cfg_fail;
    using detail::field;
    using detail::reject_unknown_keys;

    if (!j.is_object()) cfg_fail("$", "top level must be an object");
    reject_unknown_keys(j, "$", {"lattice", "generators", "walls", "fixes_component", "options"});

    CaseConfig c;

    const json& lat = field(j, "$", "lattice");
    if (!lat.is_object()) cfg_fail("lattice", "must be an object");
    reject_unknown_keys(lat, "lattice", {"type", "n", "gram"});
    const json& type = field(lat, "lattice", "type");
    if (!type.is_string()) cfg_fail("lattice.type", "must be a string");
    c.lattice_type = deformation_type_from_string(type.get<std::string>(), "lattice.type");

    if (c.lattice_type == DeformationType::k3n) {
        const json& n = field(lat, "lattice", "n");
        Int ni = int_from_json(n, "lattice.n");
        if (!ni.fits_slong_p() || ni.get_si() < 2) cfg_fail("lattice.n", "must be an integer >= 2");
        c.n = ni.get_si();
    } else if (lat.contains("n")) {
        cfg_fail("lattice.n", "only allowed when type is \"k3n\"");
    }

    if (c.lattice_type == DeformationType::custom) {
        c.gram = matrix_from_json(field(lat, "lattice", "gram"), "lattice.gram");
        if (c.gram->rows() != c.gram->cols())
            cfg_fail("lattice.gram", "must be a square matrix");
    } else if (lat.contains("gram")) {
        cfg_fail("lattice.gram", "only allowed when type is \"custom\"");
    }

    const std::size_t rank = c.lattice_type == DeformationType::custom ? c.gram->rows()
                             : c.lattice_type == DeformationType::k3   ? 22
                             : c.lattice_type == DeformationType::k3n  ? 23
                                                                       : 24;

    const json& gens = field(j, "$", "generators");
    if (!gens.is_array()) cfg_fail("generators", "must be an array of square matrices");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string path = "generators[" + std::to_string(i) + "]";
        IntMatrix m = matrix_from_json(gens[i], path);
        if (m.rows() != rank || m.cols() != rank)
            cfg_fail(path, "must be " + std::to_string(rank) + "x" + std::to_string(rank) +
                               " to match the lattice rank");
        c.generators.push_back(std::move(m));
    }

    const json& walls = field(j, "$", "walls");
    if (!walls.is_object()) cfg_fail("walls", "must be an object");
    reject_unknown_keys(walls, "walls", {"preset", "entries"});
    if (walls.contains("preset") == walls.contains("entries"))
        cfg_fail("walls", "exactly one of \"preset\" or \"entries\" must be given");
    if (walls.contains("preset")) {
        const json& p = walls["preset"];
        if (!p.is_string()) cfg_fail("walls.preset", "must be a string");
        c.preset = p.get<std::string>();
    } else {
        const json& entries = walls["entries"];
        if (!entries.is_array()) cfg_fail("walls.entries", "must be an array");
        std::vector<WallEntry> list;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::string path = "walls.entries[" + std::to_string(i) + "]";
            const json& e = entries[i];
            if (!e.is_object()) cfg_fail(path, "must be an object");
            reject_unknown_keys(e, path, {"norm", "divisibility"});
            WallEntry w;
            w.norm = int_from_json(field(e, path, "norm"), path + ".norm");
            w.divisibility = int_from_json(field(e, path, "divisibility"), path + ".divisibility");
            list.push_back(std::move(w));
        }
        c.entries = std::move(list);
    }

    const json& fixes = field(j, "$", "fixes_component");
    if (!fixes.is_boolean()) cfg_fail("fixes_component", "must be a boolean");
    c.fixes_component = fixes.get<bool>();

    if (j.contains("options")) {
        const json& opt = j["options"];
        if (!opt.is_object()) cfg_fail("options", "must be an object");
        reject_unknown_keys(opt, "options",
                            {"max_group_order", "precision_bits", "tolerance_exponent"});
        if (opt.contains("max_group_order")) {
            Int v = int_from_json(opt["max_group_order"], "options.max_group_order");
            if (!v.fits_slong_p() || v.get_si() < 1)
                cfg_fail("options.max_group_order", "must be a positive integer");
            c.options.max_group_order = static_cast<std::size_t>(v.get_si());
        }
        if (opt.contains("precision_bits")) {
            Int v = int_from_json(opt["precision_bits"], "options.precision_bits");
            if (!v.fits_slong_p() || v.get_si() < 1 || v.get_si() > (1 << 20))
                cfg_fail("options.precision_bits", "must be a positive integer up to 2^20");
            c.options.precision_bits = static_cast<unsigned>(v.get_si());
        }
        if (opt.contains("tolerance_exponent")) {
            Int v = int_from_json(opt["tolerance_exponent"], "options.tolerance_exponent");
            if (!v.fits_slong_p() || v.get_si() >= 0)
                cfg_fail("options.tolerance_exponent", "must be a negative integer");
            c.options.tolerance_exponent = static_cast<int>(v.get_si());
        }
    }

    // fail on bad wall values here so a config never parses and then trips
    // over its own spec later
    build_wall_spec(c);
    if (c.gram.has_value() && !is_symmetric(*c.gram))
        cfg_fail("lattice.gram", "must be symmetric");

    return c;
}

inline CaseConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // nlohmann reports byte offsets and line context in what()
        throw ValidationError(std::string("config: ") + e.what());
    }
    return parse_config(j);
}

inline json serialize_config(const CaseConfig& c) {
    json lat;
    lat["type"] = to_string(c.lattice_type);
    if (c.lattice_type == DeformationType::k3n) lat["n"] = c.n;
    if (c.lattice_type == DeformationType::custom) lat["gram"] = matrix_to_json(*c.gram);

    json walls;
    if (c.preset.has_value()) {
        walls["preset"] = *c.preset;
    } else {
        json entries = json::array();
        for (const WallEntry& e : *c.entries)
            entries.push_back(
                {{"norm", int_to_json(e.norm)}, {"divisibility", int_to_json(e.divisibility)}});
        walls["entries"] = std::move(entries);
    }

    json gens = json::array();
    for (const IntMatrix& m : c.generators) gens.push_back(matrix_to_json(m));

    json j;
    j["lattice"] = std::move(lat);
    j["generators"] = std::move(gens);
    j["walls"] = std::move(walls);
    j["fixes_component"] = c.fixes_component;
    j["options"] = {{"max_group_order", c.options.max_group_order},
                    {"precision_bits", c.options.precision_bits},
                    {"tolerance_exponent", c.options.tolerance_exponent}};
    return j;
}

inline NumericOptions numeric_options(const CaseConfig& c) {
    NumericOptions opts;
    opts.precision_bits = c.options.precision_bits;
    opts.tolerance_exponent = c.options.tolerance_exponent;
    return opts;
}

inline RealizationReport run_case(const CaseConfig& c, unsigned jobs = 1) {
    return full_report(build_lattice(c), c.generators, build_wall_spec(c), build_assumptions(c),
                       numeric_options(c), c.options.max_group_order, jobs);
}

inline RealizationReport run_lambda_g_case(const CaseConfig& c) {
    return lambda_g_report(build_lattice(c), c.generators, numeric_options(c),
                           c.options.max_group_order);
}

} // namespace hkreal

#pragma once

#include <string>
#include <vector>

#include "hkreal/config.hpp"

namespace hkreal {

struct Demo {
    std::string name;
    std::string summary;
    CaseConfig config;
    std::vector<std::string> extra_remarks;
};

namespace detail {

inline IntVec demo_unit(std::size_t n, std::size_t i) {
    IntVec v(n);
    v[i] = 1;
    return v;
}

// reflection in a root of the first E8(-1) summand
inline Demo demo_reflection_k3() {
    Demo d;
    d.name = "reflection-k3";
    d.summary = "reflection in a norm -2 root of the K3 lattice; obstructed by its own wall";
    d.config.lattice_type = DeformationType::k3;
    d.config.generators = {reflection(lattice_k3(), demo_unit(22, 6)).matrix};
    d.config.preset = "k3-minus2";
    d.config.fixes_component = true;
    return d;
}

// on the Hilbert cube lattice the class 2e + delta has norm -4 and
// divisibility 2, so its reflection is integral and clears the norm -2 walls
inline Demo demo_reflection_norm4_hilb3() {
    Demo d;
    d.name = "reflection-norm4-hilb3";
    d.summary = "reflection in a norm -4, divisibility 2 class on the Hilbert cube lattice";
    d.config.lattice_type = DeformationType::k3n;
    d.config.n = 3;
    Lattice l = lattice_k3n(3);
    IntVec v(23);
    v[0] = 2;
    v[22] = 1;
    d.config.generators = {reflection(l, v).matrix};
    d.config.preset = "k3-minus2";
    d.config.fixes_component = true;
    return d;
}

// swap the two E8(-1) summands of the K3 lattice, push the involution into
// the Hilbert-square lattice, and confirm the restriction returns the input
inline Demo demo_involution_hilb2() {
    Demo d;
    d.name = "involution-hilb2";
    d.summary = "E8-summand swap of the K3 lattice induced on the Hilbert square";
    Lattice k3 = lattice_k3();
    IntMatrix swap = IntMatrix(22, 22);
    for (std::size_t i = 0; i < 6; ++i) swap(i, i) = 1;
    for (std::size_t i = 0; i < 8; ++i) {
        swap(6 + i, 14 + i) = 1;
        swap(14 + i, 6 + i) = 1;
    }
    Isometry base = make_isometry(k3, swap);
    Isometry induced = embed_into_hilb(base, 2);
    if (restrict_from_hilb(induced).matrix != base.matrix)
        throw ComputeError("demo involution-hilb2: embedding roundtrip failed");
    d.extra_remarks.push_back(
        "embedding roundtrip verified: the induced isometry of the Hilbert-square lattice "
        "restricts back to the input involution");
    d.config.lattice_type = DeformationType::k3n;
    d.config.n = 2;
    d.config.generators = {induced.matrix};
    d.config.preset = "k3-minus2";
    d.config.fixes_component = true;
    return d;
}

} // namespace detail

inline std::vector<std::string> demo_names() {
    return {"reflection-k3", "reflection-norm4-hilb3", "involution-hilb2"};
}

inline Demo get_demo(const std::string& name) {
    if (name == "reflection-k3") return detail::demo_reflection_k3();
    if (name == "reflection-norm4-hilb3") return detail::demo_reflection_norm4_hilb3();
    if (name == "involution-hilb2") return detail::demo_involution_hilb2();
    throw ValidationError("get_demo: unknown demo \"" + name + "\"");
}

inline RealizationReport run_demo(const Demo& d, unsigned jobs = 1) {
    RealizationReport rep = run_case(d.config, jobs);
    for (const std::string& r : d.extra_remarks) rep.remarks.push_back(r);
    return rep;
}

} // namespace hkreal

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hkreal/demos.hpp"
#include "hkreal/report.hpp"

using namespace hkreal;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string output_path;
    std::string format = "text";
    unsigned jobs = 1;
    std::optional<std::size_t> max_group_order;
    std::optional<unsigned> precision_bits;
    long seed = 0; // accepted for interface stability; results never depend on it
};

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--output", f.output_path, "write the report here instead of stdout");
    cmd->add_option("--format", f.format, "output format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();
    cmd->add_option("--seed", f.seed,
                    "seed for randomized property testing; never affects results");
}

void add_case_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "case configuration file")->required();
    cmd->add_option("--max-group-order", f.max_group_order,
                    "override the configured group closure cap");
    cmd->add_option("--precision-bits", f.precision_bits,
                    "override the configured working precision of the numeric fallback");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ValidationError("cannot read file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out.good()) throw ValidationError("cannot open output file: " + path);
    out << content;
}

CaseConfig load_case(const CommonFlags& f) {
    CaseConfig c = parse_config_text(read_file(f.config_path));
    if (f.max_group_order) c.options.max_group_order = *f.max_group_order;
    if (f.precision_bits) c.options.precision_bits = *f.precision_bits;
    return c;
}

int exit_code_for(const RealizationReport& rep) {
    if (!rep.failure) return 0;
    return rep.failure->kind == "validation" ? 2 : 3;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_check(const CommonFlags& f) {
    CaseConfig c = load_case(f);
    auto t0 = std::chrono::steady_clock::now();
    RealizationReport rep = run_case(c, f.jobs);
    if (f.format == "structured")
        emit(f.output_path, report_document(rep, serialize_config(c), seconds_since(t0)).dump(2) + "\n");
    else
        emit(f.output_path, render_text(rep));
    return exit_code_for(rep);
}

int cmd_lambda_g(const CommonFlags& f) {
    CaseConfig c = load_case(f);
    auto t0 = std::chrono::steady_clock::now();
    RealizationReport rep = run_lambda_g_case(c);
    if (f.format == "structured")
        emit(f.output_path,
             lambda_g_document(rep, serialize_config(c), seconds_since(t0)).dump(2) + "\n");
    else
        emit(f.output_path, render_lambda_g_text(rep));
    return exit_code_for(rep);
}

int cmd_short_vectors(const std::string& gram_path, const std::string& norm_text,
                      const CommonFlags& f) {
    json parsed;
    try {
        parsed = json::parse(read_file(gram_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("gram file: ") + e.what());
    }
    const json& gram_json = parsed.is_object() ? detail::field(parsed, "$", "gram") : parsed;
    IntMatrix gram = matrix_from_json(gram_json, "gram");
    if (gram.rows() != gram.cols()) throw ValidationError("gram file: matrix must be square");
    Lattice l = make_lattice(gram, "input");
    Int target = int_from_json(json(norm_text), "--norm");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<IntVec> vecs = short_vectors(l, target, f.jobs);
    json doc = short_vectors_document(l, target, vecs, seconds_since(t0));
    if (f.format == "structured")
        emit(f.output_path, doc.dump(2) + "\n");
    else
        emit(f.output_path, render_short_vectors_text(doc));
    return 0;
}

int cmd_demo(const std::string& name, const CommonFlags& f) {
    Demo d = get_demo(name);
    auto t0 = std::chrono::steady_clock::now();
    RealizationReport rep = run_demo(d, f.jobs);
    if (f.format == "structured")
        emit(f.output_path,
             report_document(rep, serialize_config(d.config), seconds_since(t0)).dump(2) + "\n");
    else
        emit(f.output_path, render_text(rep));
    return exit_code_for(rep);
}

int cmd_lattice_info(const CommonFlags& f) {
    CaseConfig c = load_case(f);
    auto t0 = std::chrono::steady_clock::now();
    json doc = lattice_info_document(c, seconds_since(t0));
    if (f.format == "structured")
        emit(f.output_path, doc.dump(2) + "\n");
    else
        emit(f.output_path, render_lattice_info_text(doc));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"realization checks for finite isometry groups of hyperkahler lattices"};
    app.require_subcommand(1);

    CommonFlags check_flags;
    CLI::App* check = app.add_subcommand(
        "check", "run the full pipeline on a case configuration and report the verdicts");
    add_case_flags(check, check_flags);
    add_output_flags(check, check_flags);
    check->add_option("--jobs", check_flags.jobs, "worker threads for wall enumeration")
        ->check(CLI::PositiveNumber);

    CommonFlags lg_flags;
    CLI::App* lambda_g = app.add_subcommand(
        "lambda-g", "compute the invariant and coinvariant sublattices and Lambda_G only");
    add_case_flags(lambda_g, lg_flags);
    add_output_flags(lambda_g, lg_flags);

    CommonFlags sv_flags;
    std::string gram_path, norm_text;
    CLI::App* short_vecs = app.add_subcommand(
        "short-vectors", "enumerate vectors of a given norm in a positive definite lattice");
    short_vecs->add_option("gram", gram_path, "JSON file holding a gram matrix")->required();
    short_vecs->add_option("--norm", norm_text, "target norm (positive integer)")->required();
    short_vecs->add_option("--jobs", sv_flags.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    add_output_flags(short_vecs, sv_flags);

    CommonFlags demo_flags;
    std::string demo_name;
    CLI::App* demo = app.add_subcommand("demo", "run a bundled demonstration case");
    std::string names;
    for (const std::string& n : demo_names()) names += (names.empty() ? "" : ", ") + n;
    demo->add_option("name", demo_name, "one of: " + names)->required();
    demo->add_option("--jobs", demo_flags.jobs, "worker threads for wall enumeration")
        ->check(CLI::PositiveNumber);
    add_output_flags(demo, demo_flags);

    CommonFlags info_flags;
    CLI::App* info = app.add_subcommand(
        "lattice-info", "print rank, signature, determinant and discriminant group");
    add_case_flags(info, info_flags);
    add_output_flags(info, info_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check->parsed()) return cmd_check(check_flags);
        if (lambda_g->parsed()) return cmd_lambda_g(lg_flags);
        if (short_vecs->parsed()) return cmd_short_vectors(gram_path, norm_text, sv_flags);
        if (demo->parsed()) return cmd_demo(demo_name, demo_flags);
        if (info->parsed()) return cmd_lattice_info(info_flags);
    } catch (const ValidationError& e) {
        std::cerr << "error (validation): " << e.what() << "\n";
        return 2;
    } catch (const ComputeError& e) {
        std::cerr << "error (computation): " << e.what() << "\n";
        return 3;
    }
    return 0;
}

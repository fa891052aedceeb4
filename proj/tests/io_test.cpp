#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hkreal/demos.hpp"
#include "hkreal/report.hpp"
#include "support/test_support.hpp"

using namespace hkreal;

namespace {

json minimal_k3_json() {
    json j;
    j["lattice"] = {{"type", "k3"}};
    j["generators"] = json::array({matrix_to_json(IntMatrix::identity(22))});
    j["walls"] = {{"preset", "k3-minus2"}};
    j["fixes_component"] = true;
    return j;
}

json reflection_k3_json() {
    Lattice k3 = lattice_k3();
    IntVec v(22);
    v[6] = 1;
    json j = minimal_k3_json();
    j["generators"] = json::array({matrix_to_json(reflection(k3, v).matrix)});
    return j;
}

json custom_u2_json() {
    json j;
    j["lattice"] = {{"type", "custom"},
                    {"gram", json::parse("[[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]")}};
    j["generators"] = json::array();
    j["walls"] = {{"entries", json::array({{{"norm", -2}, {"divisibility", 1}},
                                           {{"norm", -4}, {"divisibility", 2}}})}};
    j["fixes_component"] = false;
    j["options"] = {{"max_group_order", 64}};
    return j;
}

void expect_rejected(json j, const std::string& needle) {
    try {
        parse_config(j);
        FAIL() << "expected rejection mentioning: " << needle;
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
}

} // namespace

TEST(ConfigParse, ParsesAMinimalCase) {
    CaseConfig c = parse_config(minimal_k3_json());
    EXPECT_EQ(c.lattice_type, DeformationType::k3);
    ASSERT_EQ(c.generators.size(), 1u);
    EXPECT_EQ(c.generators[0], IntMatrix::identity(22));
    ASSERT_TRUE(c.preset.has_value());
    EXPECT_EQ(*c.preset, "k3-minus2");
    EXPECT_FALSE(c.entries.has_value());
    EXPECT_TRUE(c.fixes_component);
    EXPECT_EQ(c.options.max_group_order, 10000u);
    EXPECT_EQ(c.options.precision_bits, 128u);
    EXPECT_EQ(c.options.tolerance_exponent, -30);
}

TEST(ConfigParse, ParsesEntriesAndPartialOptions) {
    CaseConfig c = parse_config(custom_u2_json());
    EXPECT_EQ(c.lattice_type, DeformationType::custom);
    ASSERT_TRUE(c.gram.has_value());
    EXPECT_EQ(c.gram->rows(), 4u);
    ASSERT_TRUE(c.entries.has_value());
    ASSERT_EQ(c.entries->size(), 2u);
    EXPECT_EQ((*c.entries)[0].norm, -2);
    EXPECT_EQ((*c.entries)[1].divisibility, 2);
    EXPECT_EQ(c.options.max_group_order, 64u);
    EXPECT_EQ(c.options.precision_bits, 128u); // untouched default
}

TEST(ConfigParse, RoundTripIsIdentity) {
    std::vector<json> cases = {minimal_k3_json(), reflection_k3_json(), custom_u2_json()};
    for (const std::string& name : demo_names())
        cases.push_back(serialize_config(get_demo(name).config));
    for (const json& j : cases) {
        json once = serialize_config(parse_config(j));
        json twice = serialize_config(parse_config(once));
        EXPECT_EQ(once, twice);
        EXPECT_EQ(once.dump(2), twice.dump(2));
    }
}

TEST(ConfigParse, HilbParameterSurvivesTheRoundTrip) {
    json j;
    j["lattice"] = {{"type", "k3n"}, {"n", 3}};
    j["generators"] = json::array({matrix_to_json(IntMatrix::identity(23))});
    j["walls"] = {{"preset", "k3-minus2"}};
    j["fixes_component"] = true;
    CaseConfig c = parse_config(j);
    EXPECT_EQ(c.lattice_type, DeformationType::k3n);
    EXPECT_EQ(c.n, 3);
    json echo = serialize_config(c);
    EXPECT_EQ(echo["lattice"]["n"], 3);
    EXPECT_EQ(parse_config(echo).n, 3);
}

TEST(ConfigParse, BigIntegersRideAsDecimalStrings) {
    Int big = (Int(1) << 60) + 7;
    EXPECT_TRUE(int_to_json(big).is_string());
    EXPECT_TRUE(int_to_json(-big).is_string());
    EXPECT_TRUE(int_to_json((Int(1) << 53) - 1).is_number_integer());
    EXPECT_TRUE(int_to_json(Int(1) << 53).is_string());
    EXPECT_EQ(int_from_json(int_to_json(big), "t"), big);
    EXPECT_EQ(int_from_json(int_to_json(-big), "t"), -big);
    EXPECT_EQ(int_from_json(json("12345678901234567890123"), "t"),
              Int("12345678901234567890123"));

    // a custom gram with a huge entry survives serialization exactly
    json j;
    json gram = json::parse("[[2,0],[0,0]]");
    gram[1][1] = int_to_json(-big);
    j["lattice"] = {{"type", "custom"}, {"gram", gram}};
    j["generators"] = json::array();
    j["walls"] = {{"preset", "k3-minus2"}};
    j["fixes_component"] = false;
    CaseConfig c = parse_config(j);
    EXPECT_EQ((*c.gram)(1, 1), -big);
    EXPECT_EQ(serialize_config(parse_config(serialize_config(c))), serialize_config(c));
}

TEST(ConfigParse, StringIntegersAreAccepted) {
    json j = minimal_k3_json();
    j["walls"] = {{"entries", json::array({{{"norm", "-2"}, {"divisibility", "1"}}})}};
    CaseConfig c = parse_config(j);
    EXPECT_EQ((*c.entries)[0].norm, -2);
}

TEST(ConfigParse, RejectsUnknownFields) {
    json j = minimal_k3_json();
    j["bogus"] = 1;
    expect_rejected(j, "unknown field \"bogus\"");

    j = minimal_k3_json();
    j["lattice"]["extra"] = 1;
    expect_rejected(j, "lattice");

    j = minimal_k3_json();
    j["walls"]["something"] = 1;
    expect_rejected(j, "walls");

    j = minimal_k3_json();
    j["options"] = {{"max_order", 10}};
    expect_rejected(j, "options");
}

TEST(ConfigParse, RejectsMissingFields) {
    for (const char* key : {"lattice", "generators", "walls", "fixes_component"}) {
        json j = minimal_k3_json();
        j.erase(key);
        expect_rejected(j, std::string("missing required field \"") + key + "\"");
    }
}

TEST(ConfigParse, RejectsLatticeShapeMismatches) {
    json j = minimal_k3_json();
    j["lattice"]["n"] = 2;
    expect_rejected(j, "only allowed when type is \"k3n\"");

    j = minimal_k3_json();
    j["lattice"]["type"] = "k3n";
    expect_rejected(j, "missing required field \"n\"");

    j = minimal_k3_json();
    j["lattice"]["type"] = "k3n";
    j["lattice"]["n"] = 1;
    expect_rejected(j, "must be an integer >= 2");

    j = minimal_k3_json();
    j["lattice"]["type"] = "custom";
    expect_rejected(j, "missing required field \"gram\"");

    j = minimal_k3_json();
    j["lattice"]["gram"] = json::parse("[[2]]");
    expect_rejected(j, "only allowed when type is \"custom\"");

    j = minimal_k3_json();
    j["lattice"]["type"] = "sk3";
    expect_rejected(j, "must be one of");

    j = custom_u2_json();
    j["lattice"]["gram"] = json::parse("[[0,1],[1,0],[0,0]]");
    expect_rejected(j, "square");

    j = custom_u2_json();
    j["lattice"]["gram"] = json::parse("[[0,1],[2,0]]");
    expect_rejected(j, "symmetric");
}

TEST(ConfigParse, RejectsBadGenerators) {
    json j = minimal_k3_json();
    j["generators"] = json::array({matrix_to_json(IntMatrix::identity(3))});
    expect_rejected(j, "match the lattice rank");

    j = minimal_k3_json();
    j["generators"] = json::array({json::parse("[[1,0],[1]]")});
    expect_rejected(j, "rows must all have length");

    j = minimal_k3_json();
    j["generators"][0][0][0] = 1.5;
    expect_rejected(j, "must be an integer");
}

TEST(ConfigParse, RejectsBadWalls) {
    json j = minimal_k3_json();
    j["walls"] = {{"preset", "k3-minus2"}, {"entries", json::array()}};
    expect_rejected(j, "exactly one of");

    j = minimal_k3_json();
    j["walls"] = json::object();
    expect_rejected(j, "exactly one of");

    j = minimal_k3_json();
    j["walls"] = {{"preset", "no-such-preset"}};
    expect_rejected(j, "unknown preset");

    j = minimal_k3_json();
    j["walls"] = {{"entries", json::array({{{"norm", 2}, {"divisibility", 1}}})}};
    expect_rejected(j, "norm");

    j = minimal_k3_json();
    j["walls"] = {{"entries", json::array({{{"norm", -2}, {"divisibility", 0}}})}};
    expect_rejected(j, "divisibility");
}

TEST(ConfigParse, RejectsBadOptions) {
    json j = minimal_k3_json();
    j["options"] = {{"max_group_order", 0}};
    expect_rejected(j, "positive");

    j = minimal_k3_json();
    j["options"] = {{"precision_bits", -8}};
    expect_rejected(j, "positive");

    j = minimal_k3_json();
    j["options"] = {{"tolerance_exponent", 30}};
    expect_rejected(j, "negative");
}

TEST(ConfigParse, MalformedTextCarriesDiagnostics) {
    try {
        parse_config_text("{\"lattice\": ");
        FAIL() << "expected a parse failure";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("config:"), std::string::npos);
    }
}

namespace {

// mirrors schemas/report.schema.json: required keys and their broad types
void check_report_document_shape(const json& doc) {
    ASSERT_TRUE(doc.is_object());
    for (const char* k : {"schema", "tool", "config", "report", "timing"})
        ASSERT_TRUE(doc.contains(k)) << k;
    EXPECT_EQ(doc["schema"], report_schema_id);
    EXPECT_EQ(doc["tool"]["name"], tool_name);
    EXPECT_EQ(doc["tool"]["version"], tool_version);
    EXPECT_TRUE(doc["timing"]["seconds"].is_number());
    const json& rep = doc["report"];
    for (const char* k : {"group_order", "assumptions", "walls", "monodromy", "invariant",
                          "coinvariant", "lambda_g", "einstein", "hyperkahler", "remarks",
                          "failure"})
        ASSERT_TRUE(rep.contains(k)) << k;
    EXPECT_TRUE(rep["group_order"].is_number_unsigned());
    EXPECT_TRUE(rep["remarks"].is_array());
    EXPECT_TRUE(rep["monodromy"]["known"].is_boolean());
    EXPECT_TRUE(rep["monodromy"]["orientation_passed"].is_boolean());
    EXPECT_TRUE(rep["monodromy"]["generator_plus"].is_array());
    EXPECT_TRUE(rep["assumptions"]["fixes_component"].is_boolean());
    EXPECT_TRUE(rep["assumptions"]["deformation_type"].is_string());
    EXPECT_TRUE(rep["walls"]["entries"].is_array());
    for (const char* k : {"invariant", "coinvariant", "lambda_g"}) {
        if (rep[k].is_null()) continue;
        EXPECT_TRUE(rep[k]["rank"].is_number_unsigned()) << k;
        EXPECT_TRUE(rep[k]["basis"].is_array()) << k;
        EXPECT_TRUE(rep[k]["gram"].is_array()) << k;
    }
    if (!rep["einstein"].is_null()) {
        const std::string v = rep["einstein"]["verdict"].get<std::string>();
        EXPECT_TRUE(v == "realizable" || v == "not-realizable" || v == "conditional") << v;
    }
    if (!rep["failure"].is_null()) {
        const std::string kind = rep["failure"]["kind"].get<std::string>();
        EXPECT_TRUE(kind == "validation" || kind == "computation") << kind;
        EXPECT_TRUE(rep["failure"]["message"].is_string());
    }
}

} // namespace

TEST(ReportJson, DocumentShapeOnTheRootReflection) {
    CaseConfig c = parse_config(reflection_k3_json());
    RealizationReport rep = run_case(c);
    json doc = report_document(rep, serialize_config(c), 0.25);
    check_report_document_shape(doc);
    EXPECT_EQ(doc["config"], serialize_config(c));
    EXPECT_EQ(doc["report"]["group_order"], 2);
    EXPECT_EQ(doc["report"]["einstein"]["verdict"], "not-realizable");
    EXPECT_EQ(doc["report"]["lambda_g"]["gram"], json::parse("[[-2]]"));
    json witness = doc["report"]["einstein"]["witness"];
    ASSERT_FALSE(witness.is_null());
    EXPECT_EQ(witness["norm"], -2);
    EXPECT_EQ(witness["divisibility"], 1);
    EXPECT_EQ(witness["vector"][6], 1);
    EXPECT_TRUE(doc["report"]["failure"].is_null());
}

TEST(ReportJson, FailureDocumentKeepsVerdictsNull) {
    json j = minimal_k3_json();
    IntMatrix bad = IntMatrix::identity(22);
    bad(0, 0) = 2;
    j["generators"] = json::array({matrix_to_json(bad)});
    CaseConfig c = parse_config(j);
    RealizationReport rep = run_case(c);
    json doc = report_document(rep, serialize_config(c), 0.0);
    check_report_document_shape(doc);
    EXPECT_EQ(doc["report"]["failure"]["kind"], "validation");
    EXPECT_TRUE(doc["report"]["einstein"].is_null());
    EXPECT_TRUE(doc["report"]["hyperkahler"].is_null());
}

TEST(ReportJson, LambdaGDocumentShape) {
    CaseConfig c = parse_config(reflection_k3_json());
    RealizationReport rep = run_case(c);
    json doc = lambda_g_document(rep, serialize_config(c), 0.0);
    EXPECT_EQ(doc["schema"], lambda_g_schema_id);
    const json& res = doc["result"];
    EXPECT_EQ(res["group_order"], 2);
    EXPECT_EQ(res["invariant"]["rank"], 21);
    EXPECT_EQ(res["coinvariant"]["rank"], 1);
    EXPECT_EQ(res["lambda_g"]["rank"], 1);
    EXPECT_EQ(res["lambda_g"]["gram"], json::parse("[[-2]]"));
    EXPECT_TRUE(res["failure"].is_null());
    EXPECT_FALSE(doc.contains("report"));
}

TEST(ReportJson, SerializationIsDeterministic) {
    CaseConfig c = parse_config(reflection_k3_json());
    json a = report_document(run_case(c), serialize_config(c), 1.0);
    json b = report_document(run_case(c), serialize_config(c), 2.0);
    a.erase("timing");
    b.erase("timing");
    EXPECT_EQ(a.dump(2), b.dump(2));
}

TEST(ReportJson, TextRenderingNamesTheVerdicts) {
    CaseConfig c = parse_config(reflection_k3_json());
    std::string text = render_text(run_case(c));
    EXPECT_NE(text.find("einstein: not-realizable"), std::string::npos);
    EXPECT_NE(text.find("hyperkahler: not-realizable"), std::string::npos);
    EXPECT_NE(text.find("group order: 2"), std::string::npos);
    EXPECT_NE(text.find("gram: [[-2]]"), std::string::npos);
    EXPECT_NE(text.find("wall witness:"), std::string::npos);

    json j = minimal_k3_json();
    IntMatrix bad = IntMatrix::identity(22);
    bad(0, 0) = 2;
    j["generators"] = json::array({matrix_to_json(bad)});
    std::string failed = render_text(run_case(parse_config(j)));
    EXPECT_NE(failed.find("failure (validation):"), std::string::npos);
}

TEST(Demos, NamesAreStable) {
    EXPECT_EQ(demo_names(),
              (std::vector<std::string>{"reflection-k3", "reflection-norm4-hilb3",
                                        "involution-hilb2"}));
    EXPECT_THROW(get_demo("no-such-demo"), ValidationError);
}

TEST(Demos, ReflectionDemoIsObstructed) {
    Demo d = get_demo("reflection-k3");
    RealizationReport rep = run_demo(d);
    ASSERT_TRUE(rep.einstein.has_value());
    EXPECT_EQ(rep.einstein->verdict, Verdict::not_realizable);
    ASSERT_TRUE(rep.einstein->witness.has_value());
    EXPECT_EQ(rep.einstein->witness->norm, -2);
}

TEST(Demos, NormFourDemoIsRealizable) {
    RealizationReport rep = run_demo(get_demo("reflection-norm4-hilb3"));
    ASSERT_TRUE(rep.einstein.has_value());
    EXPECT_EQ(rep.einstein->verdict, Verdict::realizable);
    ASSERT_TRUE(rep.hyperkahler.has_value());
    EXPECT_EQ(rep.hyperkahler->verdict, Verdict::realizable);
    ASSERT_TRUE(rep.hyperkahler->fixed_class.has_value());
}

TEST(Demos, InvolutionDemoVerifiesTheRoundtrip) {
    Demo d = get_demo("involution-hilb2");
    ASSERT_EQ(d.config.generators.size(), 1u);
    EXPECT_EQ(d.config.generators[0].rows(), 23u);
    RealizationReport rep = run_demo(d);
    EXPECT_EQ(rep.group_order, 2u);
    ASSERT_TRUE(rep.einstein.has_value());
    EXPECT_EQ(rep.einstein->verdict, Verdict::realizable);
    ASSERT_TRUE(rep.hyperkahler.has_value());
    EXPECT_EQ(rep.hyperkahler->verdict, Verdict::realizable);
    bool roundtrip = false;
    for (const std::string& r : rep.remarks)
        if (r.find("roundtrip") != std::string::npos) roundtrip = true;
    EXPECT_TRUE(roundtrip);
    // the coinvariant piece is the anti-diagonal E8, doubled in norm
    ASSERT_TRUE(rep.lambda_g.has_value());
    EXPECT_EQ(rep.lambda_g->sublattice.rank(), 8u);
    EXPECT_EQ(rep.lambda_g->sublattice.gram(0, 0), -4);
}

TEST(Demos, GoldenConfigsMatchTheBundledCases) {
    // demos/ carries the same cases as committed JSON; both sides must agree
    for (const std::string& name : demo_names()) {
        std::string path = std::string(HKREAL_SOURCE_DIR) + "/demos/" + name + ".config.json";
        std::ifstream in(path);
        ASSERT_TRUE(in.good()) << path;
        std::stringstream buf;
        buf << in.rdbuf();
        CaseConfig from_file = parse_config_text(buf.str());
        EXPECT_EQ(serialize_config(from_file), serialize_config(get_demo(name).config)) << name;
    }
}

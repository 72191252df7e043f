#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "radgap/cli.hpp"

using namespace radgap;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "radgap_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t count_lines(const std::string& s) {
    size_t n = 0;
    for (const char c : s)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("profile CSV has the pinned schema and one row per Farey point") {
    RunConfig cfg;
    cfg.command = Command::profile;
    cfg.n = 20000;
    cfg.max_q = 8;
    cfg.format = OutputFormat::csv;
    cfg.output_path = temp_file("profile.csv").string();
    REQUIRE(run(cfg) == 0);
    const std::string body = slurp(cfg.output_path);
    CHECK(body.rfind("x_num,x_den,N,raw_gap,scaled_gap,closed_form_num,closed_form_den,rel_err\n",
                     0) == 0);
    CHECK(count_lines(body) == 1 + farey_sequence(8).size());
}

TEST_CASE("profile output is byte-identical across runs and thread counts") {
    RunConfig cfg;
    cfg.command = Command::profile;
    cfg.n = 100000;
    cfg.max_q = 6;
    cfg.a = 3;
    cfg.format = OutputFormat::csv;
    cfg.threads = 1;
    cfg.output_path = temp_file("profile_t1.csv").string();
    REQUIRE(run(cfg) == 0);
    const std::string t1 = slurp(cfg.output_path);

    cfg.threads = 8;
    cfg.output_path = temp_file("profile_t8.csv").string();
    REQUIRE(run(cfg) == 0);
    CHECK(slurp(cfg.output_path) == t1);

    cfg.output_path = temp_file("profile_t8_again.csv").string();
    REQUIRE(run(cfg) == 0);
    CHECK(slurp(cfg.output_path) == t1);
}

TEST_CASE("converge emits one row per schedule entry, JSON mirrors the keys") {
    RunConfig cfg;
    cfg.command = Command::converge;
    cfg.x_text = "1/2";
    cfg.n_schedule = {1000, 4000, 16000, 64000};
    cfg.format = OutputFormat::json;
    cfg.output_path = temp_file("converge.json").string();
    REQUIRE(run(cfg) == 0);

    const nlohmann::json j = nlohmann::json::parse(slurp(cfg.output_path));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 4);
    for (const auto& row : j) {
        for (const char* key : {"x_num", "x_den", "N", "raw_gap", "scaled_gap",
                                "closed_form_num", "closed_form_den", "rel_err"})
            CHECK(row.contains(key));
        CHECK(row["x_den"] == 2);
    }
    // approaching the limit 1
    CHECK(std::abs(j.back()["scaled_gap"].get<double>() - 1.0) < 0.02);
}

TEST_CASE("closed-form command renders value and formula path") {
    RunConfig cfg;
    cfg.command = Command::closed_form;
    cfg.x_text = "1/3";
    cfg.alpha = 3;
    cfg.format = OutputFormat::json;
    cfg.output_path = temp_file("closed.json").string();
    REQUIRE(run(cfg) == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(cfg.output_path));
    CHECK(j["value_num"] == 3);
    CHECK(j["value_den"] == 9);
    CHECK(j["formula_path"] == "higher-gcd");
}

TEST_CASE("SVG artifacts are well-formed and deterministic") {
    RunConfig cfg;
    cfg.command = Command::profile;
    cfg.n = 20000;
    cfg.max_q = 8;
    cfg.format = OutputFormat::svg;
    cfg.output_path = temp_file("profile.svg").string();
    REQUIRE(run(cfg) == 0);
    const std::string svg = slurp(cfg.output_path);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<line") != std::string::npos);

    cfg.output_path = temp_file("profile2.svg").string();
    REQUIRE(run(cfg) == 0);
    CHECK(slurp(cfg.output_path) == svg);

    RunConfig hist;
    hist.command = Command::histogram;
    hist.n = 20000;
    hist.format = OutputFormat::svg;
    hist.output_path = temp_file("hist.svg").string();
    REQUIRE(run(hist) == 0);
    CHECK(slurp(hist.output_path).find("</svg>") != std::string::npos);

    RunConfig orch;
    orch.command = Command::orchard;
    orch.scene.k_max = 50;
    orch.format = OutputFormat::svg;
    orch.output_path = temp_file("orchard.svg").string();
    REQUIRE(run(orch) == 0);
    CHECK(slurp(orch.output_path).find("</svg>") != std::string::npos);
}

TEST_CASE("orchard command emits segments and the comparison table") {
    RunConfig cfg;
    cfg.command = Command::orchard;
    cfg.scene.k_max = 141;
    cfg.max_q = 6;
    cfg.format = OutputFormat::json;
    cfg.output_path = temp_file("orchard.json").string();
    REQUIRE(run(cfg) == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(cfg.output_path));
    CHECK(j["segments"].size() > 100);
    REQUIRE(j.contains("farey_comparison"));
    for (const auto& row : j["farey_comparison"])
        CHECK(row["rel_err"].get<double>() < 0.1);
}

TEST_CASE("domain errors exit 2") {
    RunConfig cfg;
    cfg.command = Command::closed_form;
    cfg.x_text = "2/5";
    cfg.alpha = 3;
    cfg.a = 2; // no closed form for alpha > 2 with dilution
    CHECK(run(cfg) == 2);

    RunConfig bad;
    bad.command = Command::converge;
    bad.x_text = "0.5"; // floats are rejected where exactness matters
    bad.n_schedule = {100, 200};
    CHECK(run(bad) == 2);

    RunConfig singular;
    singular.command = Command::orchard;
    singular.scene.intercept = OrchardScene::Intercept::linear;
    singular.scene.c1 = 0.0;
    singular.scene.c2 = 0.0;
    CHECK(run(singular) == 2);
}

TEST_CASE("guard refusals exit 3") {
    RunConfig cfg;
    cfg.command = Command::oracle;
    cfg.x_text = "1/101"; // q over the enumeration guard
    CHECK(run(cfg) == 3);

    RunConfig hist;
    hist.command = Command::histogram;
    hist.n = 20000000; // over the full-sort guard, no sampling budget
    hist.output_path = temp_file("never.csv").string();
    CHECK(run(hist) == 3);
}

TEST_CASE("GAPS_MAX_MEMORY_MB overrides the full-sort guard") {
    ::setenv("GAPS_MAX_MEMORY_MB", "0.001", 1); // ~131 radicands worth of doubles
    RunConfig cfg;
    cfg.command = Command::histogram;
    cfg.n = 4000;
    cfg.output_path = temp_file("tiny_hist.csv").string();
    CHECK(run(cfg) == 3);
    ::unsetenv("GAPS_MAX_MEMORY_MB");
    cfg.format = OutputFormat::csv;
    CHECK(run(cfg) == 0);
}

TEST_CASE("scene JSON descriptions parse with exact coefficients") {
    std::istringstream in(R"({
        "k_max": 500,
        "intercept": {"type": "linear", "c1": "1/2", "c2": 3},
        "a": 2, "b": 1,
        "window": [0.1, 0.9]
    })");
    const OrchardScene scene = scene_from_json(in);
    CHECK(scene.k_max == 500);
    CHECK(scene.intercept == OrchardScene::Intercept::linear);
    REQUIRE(scene.c1_exact.has_value());
    CHECK(*scene.c1_exact == Rational(1, 2));
    REQUIRE(scene.c2_exact.has_value());
    CHECK(scene.c2 == 3.0);
    CHECK(scene.a == 2);
    CHECK(scene.b == 1);
    CHECK(scene.window_lo == 0.1);
    CHECK(scene.window_hi == 0.9);

    std::istringstream floats(R"({"intercept": {"type": "linear", "c1": 0.25, "c2": 1.5}})");
    const OrchardScene fscene = scene_from_json(floats);
    CHECK(fscene.c1 == 0.25);
    CHECK(!fscene.c1_exact.has_value()); // degeneracy detection stays off for floats

    std::istringstream custom(
        R"({"k_max": 10, "intercept": {"type": "custom", "knots": [[0, 0.2], [1, 0.7]]}})");
    const OrchardScene cscene = scene_from_json(custom);
    CHECK(cscene.intercept == OrchardScene::Intercept::custom);
    REQUIRE(cscene.knots.size() == 2);
    CHECK(cscene.knots[1].second == 0.7);

    std::istringstream bad(R"({"intercept": {"type": "conic"}})");
    CHECK_THROWS_AS(scene_from_json(bad), std::domain_error);
}

TEST_CASE("estimate-n prints the bare root with context") {
    RunConfig cfg;
    cfg.command = Command::estimate_n;
    cfg.epsilon = 0.2;
    cfg.format = OutputFormat::json;
    cfg.output_path = temp_file("estimate.json").string();
    REQUIRE(run(cfg) == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(cfg.output_path));
    CHECK(j["n_root"].get<double>() == Catch::Approx(2054.780016607).epsilon(1e-6));
    CHECK(!j["degenerate"].get<bool>());
}

TEST_CASE("oracle command reports the exact ratio") {
    RunConfig cfg;
    cfg.command = Command::oracle;
    cfg.x_text = "1/2";
    cfg.a = 5;
    cfg.format = OutputFormat::json;
    cfg.output_path = temp_file("oracle.json").string();
    REQUIRE(run(cfg) == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(cfg.output_path));
    CHECK(j["value_num"] == 12);
    CHECK(j["value_den"] == 4);
}

TEST_CASE("histogram csv carries the summary trailer") {
    RunConfig cfg;
    cfg.command = Command::histogram;
    cfg.n = 20000;
    cfg.format = OutputFormat::csv;
    cfg.output_path = temp_file("hist.csv").string();
    REQUIRE(run(cfg) == 0);
    const std::string body = slurp(cfg.output_path);
    CHECK(body.rfind("bin_lo,bin_hi,count\n", 0) == 0);
    CHECK(body.find("tail_power_exponent=") != std::string::npos);
}

// radgap — exact and empirical gap widths around rational points in
// fractional parts of radical sequences, plus the Euclid's-orchard view.
//
// Subcommands: closed-form, profile, converge, orchard, histogram,
// estimate-n, oracle. See README.md for the full flag reference.

#include <fstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "radgap/cli.hpp"

namespace {

using radgap::OrchardScene;
using radgap::OutputFormat;
using radgap::Rational;
using radgap::RunConfig;

OutputFormat parse_format(const std::string& s) {
    if (s == "text") return OutputFormat::text;
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "svg") return OutputFormat::svg;
    throw CLI::ValidationError("--format", "unknown format '" + s + "'");
}

// c1/c2 accept "p/q" (kept exact for singularity detection) or a float
void parse_intercept_coeff(const std::string& text, double& value,
                           std::optional<Rational>& exact) {
    try {
        const Rational r = Rational::parse(text);
        exact = r;
        value = r.value();
        return;
    } catch (const std::domain_error&) {
    }
    size_t used = 0;
    value = std::stod(text, &used);
    if (used != text.size())
        throw CLI::ValidationError("intercept", "expected p/q or float, got '" + text + "'");
    exact.reset();
}

std::vector<radgap::u64> parse_n_list(const std::string& text) {
    std::vector<radgap::u64> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        out.push_back(std::stoull(token));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gap widths around rational points in fractional parts of radical sequences"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format_text = "text";
    std::string n_list_text;
    std::string intercept_kind = "parabolic";
    std::string c1_text, c2_text, scene_path, window_text;

    const auto add_common = [&](CLI::App* cmd, bool plotting) {
        cmd->add_option("--format", format_text,
                        plotting ? "output format: csv, json, svg, text"
                                 : "output format: csv, json, text");
        cmd->add_option("-o,--output", cfg.output_path, "output file (default: stdout)");
        cmd->add_option("--precision", cfg.precision, "decimal digits for floating output");
        cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    };
    const auto add_sequence = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", cfg.alpha, "radical order (root degree), >= 2");
        cmd->add_option("--a", cfg.a, "dilution: radicands restricted to a*t + b");
        cmd->add_option("--b", cfg.b, "progression offset, 0 <= b < a");
    };

    auto* closed = app.add_subcommand("closed-form", "exact limiting gap at a rational point");
    closed->add_option("--x", cfg.x_text, "rational point p/q")->required();
    add_sequence(closed);
    add_common(closed, false);

    auto* oracle = app.add_subcommand("oracle", "brute-force unreduced residue-set gap");
    oracle->add_option("--x", cfg.x_text, "rational point p/q")->required();
    add_sequence(oracle);
    oracle->add_option("--max-q", cfg.oracle_limits.max_q, "enumeration guard on q");
    oracle->add_option("--max-a", cfg.oracle_limits.max_a, "enumeration guard on a");
    oracle->add_option("--max-alpha", cfg.oracle_limits.max_alpha, "enumeration guard on alpha");
    oracle->add_option("--max-enum", cfg.oracle_limits.max_enum, "enumeration budget");
    add_common(oracle, false);

    auto* profile = app.add_subcommand("profile", "scaled gaps at all Farey points of order max-q");
    profile->add_option("--n", cfg.n, "radicand bound N")->required();
    profile->add_option("--max-q", cfg.max_q, "Farey order")->required();
    add_sequence(profile);
    add_common(profile, true);

    auto* converge = app.add_subcommand("converge", "scaled gap at x along an N schedule");
    converge->add_option("--x", cfg.x_text, "rational point p/q")->required();
    converge->add_option("--n", n_list_text, "comma-separated ascending N values")->required();
    add_sequence(converge);
    add_common(converge, true);

    auto* histogram = app.add_subcommand("histogram", "background gap-width distribution");
    histogram->add_option("--n", cfg.n, "radicand bound N")->required();
    add_sequence(histogram);
    histogram->add_option("--samples", cfg.sample_budget,
                          "sampling budget when N exceeds the full-sort guard");
    histogram->add_option("--full-sort-limit", cfg.full_sort_limit,
                          "full-sort guard on N (env GAPS_MAX_MEMORY_MB overrides)");
    add_common(histogram, true);

    auto* orchard = app.add_subcommand("orchard", "lattice-projection illumination pattern");
    orchard->add_option("--k-max", cfg.scene.k_max, "screen position (bands)");
    orchard->add_option("--intercept", intercept_kind, "parabolic | linear | custom");
    orchard->add_option("--c1", c1_text, "linear intercept constant (p/q or float)");
    orchard->add_option("--c2", c2_text, "linear intercept slope (p/q or float)");
    orchard->add_option("--a", cfg.scene.a, "dilution filter on the radicand k^2+m");
    orchard->add_option("--b", cfg.scene.b, "dilution offset");
    orchard->add_option("--window", window_text, "screen window lo:hi inside (0,1)");
    orchard->add_option("--scene", scene_path, "scene description as JSON");
    orchard->add_option("--max-q", cfg.max_q, "also compare segments to closed forms");
    add_common(orchard, true);

    auto* estimate = app.add_subcommand("estimate-n", "N where background outliers above eps die out");
    estimate->add_option("--epsilon", cfg.epsilon, "spike level to clear")->required();
    add_common(estimate, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        cfg.format = parse_format(format_text);
        if (app.got_subcommand(closed)) cfg.command = radgap::Command::closed_form;
        if (app.got_subcommand(oracle)) cfg.command = radgap::Command::oracle;
        if (app.got_subcommand(profile)) cfg.command = radgap::Command::profile;
        if (app.got_subcommand(converge)) {
            cfg.command = radgap::Command::converge;
            cfg.n_schedule = parse_n_list(n_list_text);
        }
        if (app.got_subcommand(histogram)) cfg.command = radgap::Command::histogram;
        if (app.got_subcommand(estimate)) cfg.command = radgap::Command::estimate_n;
        if (app.got_subcommand(orchard)) {
            cfg.command = radgap::Command::orchard;
            if (intercept_kind == "parabolic")
                cfg.scene.intercept = OrchardScene::Intercept::parabolic;
            else if (intercept_kind == "linear")
                cfg.scene.intercept = OrchardScene::Intercept::linear;
            else if (intercept_kind == "custom")
                cfg.scene.intercept = OrchardScene::Intercept::custom;
            else
                throw CLI::ValidationError("--intercept", "unknown kind " + intercept_kind);
            if (!c1_text.empty()) parse_intercept_coeff(c1_text, cfg.scene.c1, cfg.scene.c1_exact);
            if (!c2_text.empty()) parse_intercept_coeff(c2_text, cfg.scene.c2, cfg.scene.c2_exact);
            if (!window_text.empty()) {
                const auto colon = window_text.find(':');
                if (colon == std::string::npos)
                    throw CLI::ValidationError("--window", "expected lo:hi");
                cfg.scene.window_lo = std::stod(window_text.substr(0, colon));
                cfg.scene.window_hi = std::stod(window_text.substr(colon + 1));
            }
            if (!scene_path.empty()) {
                std::ifstream in(scene_path);
                if (!in) throw CLI::ValidationError("--scene", "cannot open " + scene_path);
                cfg.scene = radgap::scene_from_json(in);
            }
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    return radgap::run(cfg);
}

#include "config.hpp"
#include "runner.hpp"

#include "outage/cumulants.hpp"
#include "outage/gilpelaez.hpp"
#include "outage/spa.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

using namespace outage;
using namespace outage::cli;

namespace {

const std::string kCaseB = R"(
[model]
case = b
theta_db = 0
a = 30
R = 150
alpha = 4
window = 1000
num_bs = 200

[methods]
use = gil_pelaez, spa:normal
)";

struct Row {
    std::string sweep, method, p_out, err;
};

std::vector<Row> parse_csv(const std::string& text) {
    std::vector<Row> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "sweep_value,method,p_out,diag_err,diag_note");
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        Row r;
        std::getline(ls, r.sweep, ',');
        std::getline(ls, r.method, ',');
        std::getline(ls, r.p_out, ',');
        std::getline(ls, r.err, ',');
        rows.push_back(r);
    }
    return rows;
}

std::string run_csv(const RunConfig& cfg) {
    std::ostringstream out, log;
    write_csv(run_cells(cfg, log), out);
    return out.str();
}

// Runs the installed binary, returns (exit code, stdout).
std::pair<int, std::string> run_binary(const std::string& args) {
    const std::string cmd = std::string(OUTAGE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST(Config, ParsesSectionsAndUnits) {
    const auto cfg = parse_config(kCaseB);
    EXPECT_EQ(cfg.model.kind, CaseKind::b);
    EXPECT_DOUBLE_EQ(cfg.model.theta, 1.0);
    EXPECT_NEAR(cfg.model.intensity(), 200.0 / (std::numbers::pi * 1e6), 1e-20);
    EXPECT_EQ(cfg.methods.use, (std::vector<std::string>{"gil_pelaez", "spa:normal"}));
    EXPECT_TRUE(cfg.sweep.variable.empty());
    EXPECT_DOUBLE_EQ(db_to_linear(10.0), 10.0);
    EXPECT_DOUBLE_EQ(db_to_linear(-10.0), 0.1);
}

TEST(Config, UnknownKeyReportsPosition) {
    try {
        parse_config("[model]\ncase = b\n  thetta = 3\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 3);
        EXPECT_EQ(e.column(), 3);
        EXPECT_NE(std::string(e.what()).find("thetta"), std::string::npos);
    }
}

TEST(Config, Errors) {
    EXPECT_THROW(parse_config("[modle]\n"), ConfigError);
    EXPECT_THROW(parse_config("case = b\n"), ConfigError);
    EXPECT_THROW(parse_config("[model]\ncase = d\n[methods]\nuse = mc\n"), ConfigError);
    EXPECT_THROW(parse_config("[model]\ncase = b\nnum_bs = 10\n[methods]\nuse = magic\n"), ConfigError);
    EXPECT_THROW(parse_config("[model]\ncase = b\nnum_bs = 10\ntheta = 1\ntheta_db = 0\n[methods]\nuse = mc\n"),
                 ConfigError);
    EXPECT_THROW(parse_config("[model]\ncase = b\nnum_bs = abc\n[methods]\nuse = mc\n"), ConfigError);
    EXPECT_THROW(parse_config("[model]\ncase = b\n[methods]\nuse = mc\n"), ConfigError);
    EXPECT_THROW(parse_config(kCaseB + "[sweep]\nvariable = L\nvalues = 1, 2\n"), ConfigError);
    try {
        parse_config("[model]\ncase = b\nnum_bs = 10\n[methods]\nuse = gil_pelaez, spa:foo\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 5);
        EXPECT_EQ(e.column(), 19);
    }
}

TEST(Config, SweepGridRoundTrip) {
    auto cfg = load_config(std::string(OUTAGE_CONFIG_DIR) + "/binomial_vs_L_p01.ini");
    ASSERT_EQ(cfg.sweep.variable, "L");
    ASSERT_EQ(cfg.sweep.values.size(), 20u);
    EXPECT_EQ(cfg.sweep.values.front(), 2.0);
    EXPECT_EQ(cfg.sweep.values.back(), 40.0);
    const auto rows = parse_csv(run_csv(cfg));
    ASSERT_EQ(rows.size(), 40u);
    for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
        EXPECT_EQ(std::stod(rows[2 * i].sweep), cfg.sweep.values[i]);
        EXPECT_EQ(rows[2 * i].method, "gil_pelaez");
        EXPECT_EQ(rows[2 * i + 1].method, "spa:normal");
    }
}

TEST(Run, MatchesLibraryValues) {
    const auto cfg = load_config(std::string(OUTAGE_CONFIG_DIR) + "/binomial_vs_L_p02.ini");
    const auto rows = parse_csv(run_csv(cfg));
    for (const auto& r : rows) {
        CaseAModel m;
        m.aggregation = CaseAModel::Aggregation::binomial;
        m.L = std::stoi(r.sweep);
        m.p = 0.2;
        m.theta = 0.1;
        const auto k = case_a_cgf(m);
        const double want = r.method == "gil_pelaez" ? outage_gp(*k, 0.0).p_out
                                                     : outage_spa(*k, 0.0, BaseKind::normal).p_out;
        EXPECT_EQ(r.p_out, format_number(want));
    }
}

TEST(Run, BinomialP02MethodsAgreeForLargeL) {
    const auto rows = parse_csv(run_csv(load_config(std::string(OUTAGE_CONFIG_DIR) + "/binomial_vs_L_p02.ini")));
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        if (std::stod(rows[i].sweep) < 10) continue;
        EXPECT_LE(std::abs(std::stod(rows[i].p_out) - std::stod(rows[i + 1].p_out)), 0.01) << rows[i].sweep;
    }
}

TEST(Run, SinglePointSweepEqualsSingleShot) {
    const auto single = parse_csv(run_csv(parse_config(kCaseB)));
    const auto swept = parse_csv(run_csv(parse_config(kCaseB + "[sweep]\nvariable = num_bs\nvalues = 200\n")));
    ASSERT_EQ(single.size(), swept.size());
    for (std::size_t i = 0; i < single.size(); ++i) {
        EXPECT_EQ(single[i].sweep, "NA");
        EXPECT_EQ(swept[i].sweep, "200");
        EXPECT_EQ(single[i].p_out, swept[i].p_out);
    }
}

TEST(Run, DecibelAndLinearTwinsAgree) {
    std::string lin = kCaseB;
    lin.replace(lin.find("theta_db = 0"), 12, "theta = 1");
    EXPECT_EQ(run_csv(parse_config(kCaseB)), run_csv(parse_config(lin)));
    const std::string a = "[model]\ncase = a_single\ntheta_db = 10\npower_db = 3\nnoise_db = -5\n[methods]\nuse = gil_pelaez, spa:normal\n";
    const std::string b = "[model]\ncase = a_single\ntheta = 10\npower = " + format_number(std::pow(10.0, 0.3)) +
                          "\nnoise = " + format_number(std::pow(10.0, -0.5)) + "\n[methods]\nuse = gil_pelaez, spa:normal\n";
    const auto ra = parse_csv(run_csv(parse_config(a))), rb = parse_csv(run_csv(parse_config(b)));
    for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_NEAR(std::stod(ra[i].p_out), std::stod(rb[i].p_out), 1e-8);
}

TEST(Run, MonteCarloReproducible) {
    const std::string text = "[model]\ncase = a_poisson\nlambda1 = 2\nlambda2 = 3\n[methods]\nuse = mc\nmc_trials = 20000\nmc_seed = 5\n";
    const auto a = run_csv(parse_config(text)), b = run_csv(parse_config(text));
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("trials=20000"), std::string::npos);
}

TEST(Run, CapabilityErrorsBecomeNA) {
    const std::string text =
        "[model]\ncase = c\nnum_bs = 200\nfading = lognormal\nlognormal_sigma = 0.5\n[methods]\nuse = gil_pelaez, charlier:hermite\n";
    std::ostringstream log;
    const auto cells = run_cells(parse_config(text), log);
    ASSERT_EQ(cells.size(), 2u);
    EXPECT_FALSE(cells[0].p_out.has_value());
    EXPECT_TRUE(cells[1].p_out.has_value());
    EXPECT_NE(log.str().find("note:"), std::string::npos);
}

TEST(Cumulants, CommandColumns) {
    const auto cfg = parse_config(kCaseB + "[sweep]\nvariable = num_bs\nvalues = 200, 400\n");
    std::ostringstream out;
    write_cumulants(cfg, out);
    std::istringstream in(out.str());
    std::string header, l1, l2;
    std::getline(in, header);
    std::getline(in, l1);
    std::getline(in, l2);
    EXPECT_EQ(header.substr(0, 18), "sweep_value,k1,k2,");
    auto fields = [](const std::string& s) {
        std::vector<double> v;
        std::istringstream ls(s);
        std::string f;
        while (std::getline(ls, f, ',')) v.push_back(std::stod(f));
        return v;
    };
    const auto a = fields(l1), b = fields(l2);
    ASSERT_EQ(a.size(), 1u + 16u + 2u);
    NetworkGeometry g;
    g.lambda = 200.0 / (std::numbers::pi * 1e6);
    g.a = 30.0;
    g.R = 150.0;
    g.alpha = 4.0;
    g.window = 1000.0;
    EXPECT_NEAR(a[1], omega_cumulant(1, g, FadingModel::unit(), 1.0), 5e-9 * std::abs(a[1]));
    EXPECT_NEAR(a[9], omega_cumulant_lim(1, g, FadingModel::unit()), 5e-9 * std::abs(a[9]));
    // skewness squared halves when the intensity doubles (large-u regime, approximately)
    const double s2a = a[17] * a[17], s2b = b[17] * b[17];
    EXPECT_NEAR(s2b / s2a, 0.5, 1e-7);
}

TEST(Binary, ExitCodes) {
    const auto ok = run_binary("run " + std::string(OUTAGE_CONFIG_DIR) + "/binomial_vs_L_p01.ini");
    EXPECT_EQ(ok.first, 0);
    EXPECT_EQ(ok.second.substr(0, 43), "sweep_value,method,p_out,diag_err,diag_note");
    const auto bad = write_temp("outage_bad.ini", "[model]\ncase = b\nbogus = 1\n");
    EXPECT_EQ(run_binary("run " + bad).first, 1);
    const auto na = write_temp("outage_na.ini",
                               "[model]\ncase = c\nnum_bs = 200\nfading = lognormal\n[methods]\nuse = gil_pelaez\n");
    const auto r = run_binary("run " + na);
    EXPECT_EQ(r.first, 2);
    EXPECT_NE(r.second.find(",NA,"), std::string::npos);
    EXPECT_EQ(run_binary("cumulants " + std::string(OUTAGE_CONFIG_DIR) + "/case_b_vs_count_10db.ini").first, 0);
    EXPECT_EQ(run_binary("frobnicate").first, 1);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "monomul/cli.hpp"
#include "monomul/errors.hpp"
#include "monomul/io.hpp"
#include "monomul/measures.hpp"
#include "monomul/semigroup.hpp"
#include "monomul/series.hpp"

using namespace monomul;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_args(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "monomul_io_tests";
    fs::create_directories(dir);
    return dir;
}

std::string temp_file(const std::string& name, const std::string& content) {
    const fs::path p = temp_dir() / name;
    io::write_file(p.string(), content);
    return p.string();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line); // drop the header
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

const char* kMixJson =
    R"({"domain": "half_line", "atoms": [{"position": 0, "weight": 0.5},)"
    R"( {"position": 2, "weight": 0.5}]})";

} // namespace

TEST_CASE("measure JSON round-trips") {
    const AtomicMeasure half = io::measure_from_json_text(kMixJson);
    CHECK(half.domain() == MeasureDomain::half_line);
    REQUIRE(half.atoms().size() == 2);
    CHECK(half.atoms()[0].position == 0.0);
    CHECK(half.atoms()[1].weight == 0.5);

    const AtomicMeasure half2 = io::measure_from_json_text(io::measure_to_json_text(half));
    CHECK(half2.atoms()[1].position == 2.0);

    const AtomicMeasure circ = io::measure_from_json_text(
        R"({"domain": "circle", "atoms": [{"position": 1.25, "weight": 1}]})");
    CHECK(circ.domain() == MeasureDomain::circle);
    const AtomicMeasure circ2 = io::measure_from_json_text(io::measure_to_json_text(circ));
    CHECK(std::abs(circ2.atoms()[0].position - 1.25) < 1e-15);

    const AtomicMeasure haar =
        io::measure_from_json_text(R"({"domain": "circle", "haar": true})");
    CHECK(haar.is_haar());
    CHECK(io::measure_from_json_text(io::measure_to_json_text(haar)).is_haar());
}

TEST_CASE("measure JSON rejects malformed input") {
    CHECK_THROWS_AS(io::measure_from_json_text("not json"), const Error&);
    CHECK_THROWS_AS(io::measure_from_json_text(R"({"domain": "moon", "atoms": []})"),
                    const Error&);
    CHECK_THROWS_AS(io::measure_from_json_text(R"({"domain": "half_line", "haar": true})"),
                    const Error&);
    CHECK_THROWS_AS(io::measure_from_json_text(R"({"atoms": []})"), const Error&);
}

TEST_CASE("generator JSON round-trips") {
    const Generator hl = io::generator_from_json_text(
        R"({"domain": "half_line", "a": 0.3,)"
        R"( "nu": [{"position": 0.5, "weight": 0.4}, {"position": 1.5, "weight": 0.6}]})");
    CHECK(hl.kind() == Generator::Kind::half_line_atomic);
    CHECK(hl.halfline_drift() == 0.3);
    const Generator hl2 = io::generator_from_json_text(io::generator_to_json_text(hl));
    CHECK(hl2.nu().size() == 2);
    CHECK(hl2.nu()[1].weight == 0.6);

    const Generator circ = io::generator_from_json_text(
        R"({"domain": "circle", "beta": 0.7, "rho": [{"angle": 1.0, "weight": 0.3}]})");
    CHECK(circ.kind() == Generator::Kind::circle_herglotz);
    const Generator circ2 = io::generator_from_json_text(io::generator_to_json_text(circ));
    CHECK(circ2.circle_beta() == 0.7);
    CHECK(circ2.rho()[0].position == 1.0);

    const Generator pw = io::generator_from_json_text(
        R"({"domain": "circle", "builtin": "z^n-1", "n": 2})");
    CHECK(pw.kind() == Generator::Kind::circle_power);
    CHECK(pw.power() == 2);
    CHECK(io::generator_from_json_text(io::generator_to_json_text(pw)).power() == 2);

    CHECK_THROWS_AS(io::generator_from_json_text(R"({"domain": "circle"})"), const Error&);
    CHECK_THROWS_AS(
        io::generator_from_json_text(R"({"domain": "circle", "builtin": "z^n+1", "n": 2})"),
        const Error&);
}

TEST_CASE("CSV output carries 17 significant digits") {
    TruncatedSeries s(2);
    s.set_coeff(0, cplx(1.0 / 3.0, 0.0));
    const std::string csv = io::csv_series(s);
    CHECK(csv.find("0.33333333333333331") != std::string::npos);
    CHECK(first_line(csv) == "n,re,im");

    const MomentSequence m(std::vector<cplx>{cplx(2.0, 0.0), cplx(4.0, 0.0)});
    const std::string mc = io::csv_moments(m);
    CHECK(first_line(mc) == "n,re,im");
    CHECK(data_lines(mc).size() == 2);
    CHECK(data_lines(mc)[0] == "1,2,0");
}

TEST_CASE("file IO errors are input errors") {
    bool threw = false;
    try {
        io::read_file((temp_dir() / "does_not_exist.json").string());
    } catch (const Error& e) {
        threw = e.code() == ErrorCode::InvalidInput;
    }
    CHECK(threw);
}

TEST_CASE("cli convolve recovers the self-convolution measure") {
    const std::string mix = temp_file("mix.json", kMixJson);
    const std::string measure_out = (temp_dir() / "mix_sq.json").string();

    const RunResult r = run_cli({"convolve", "--op", "mconv", "--lhs", mix, "--rhs", mix,
                                 "--order", "16", "--measure-out", measure_out});
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) == "n,re,im");
    CHECK(data_lines(r.out).size() == 16);

    const AtomicMeasure rec = io::load_measure(measure_out);
    REQUIRE(rec.atoms().size() == 2);
    CHECK(std::abs(rec.atoms()[0].position - 0.0) < 1e-8);
    CHECK(std::abs(rec.atoms()[0].weight - 2.0 / 3.0) < 1e-8);
    CHECK(std::abs(rec.atoms()[1].position - 3.0) < 1e-8);
    CHECK(std::abs(rec.atoms()[1].weight - 1.0 / 3.0) < 1e-8);

    // identical invocations produce byte-identical output
    const RunResult again = run_cli({"convolve", "--op", "mconv", "--lhs", mix, "--rhs",
                                     mix, "--order", "16"});
    const RunResult again2 = run_cli({"convolve", "--op", "mconv", "--lhs", mix, "--rhs",
                                      mix, "--order", "16"});
    CHECK(again.out == again2.out);
    CHECK(!again.out.empty());
}

TEST_CASE("cli oracle agrees with the series prediction") {
    const RunResult r = run_cli(
        {"--order", "6", "oracle", "--u1", "1;0.5", "--u2", "1;-0.25,0.1"});
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) == "n,oracle_re,oracle_im,predicted_re,predicted_im,abs_error");
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 6);
    for (const std::string& row : rows) {
        int n = 0;
        double ore = 0, oim = 0, pre = 0, pim = 0, errv = 1;
        REQUIRE(std::sscanf(row.c_str(), "%d,%lf,%lf,%lf,%lf,%lf", &n, &ore, &oim, &pre,
                            &pim, &errv) == 6);
        CHECK(errv < 1e-8);
    }
}

TEST_CASE("cli flow writes per-checkpoint measures") {
    const std::string gen = temp_file(
        "unit_rate.json",
        R"({"domain": "half_line", "a": 0, "nu": [{"position": 0, "weight": 1}]})");
    const std::string stem = (temp_dir() / "flow_ckpt").string();

    const RunResult r = run_cli({"--order", "12", "flow", "--generator", gen, "--tau-list",
                                 "0.25,1", "--measure-out", stem});
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) == "tau,n,re,im");
    CHECK(data_lines(r.out).size() == 24);

    const AtomicMeasure first = io::load_measure(stem + "_0.json");
    REQUIRE(first.atoms().size() == 2);
    CHECK(std::abs(first.atoms()[0].position - 0.0) < 1e-6);
    CHECK(std::abs(first.atoms()[0].weight - 0.2) < 1e-6);
    CHECK(std::abs(first.atoms()[1].position - 1.25) < 1e-6);

    const AtomicMeasure second = io::load_measure(stem + "_1.json");
    REQUIRE(second.atoms().size() == 2);
    CHECK(std::abs(second.atoms()[1].position - 2.0) < 1e-6);
    CHECK(std::abs(second.atoms()[1].weight - 0.5) < 1e-6);
}

TEST_CASE("cli divide lists the root moments by level") {
    const std::string mix = temp_file("mix.json", kMixJson);
    const RunResult r =
        run_cli({"--order", "8", "divide", "--measure", mix, "--depth", "2"});
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) == "level,n,re,im");
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 24); // three levels, eight moments each
    CHECK(rows[0] == "0,1,1,0");
}

TEST_CASE("cli density handles both domains") {
    const std::string haar = temp_file("haar.json", R"({"domain": "circle", "haar": true})");
    const RunResult circ =
        run_cli({"density", "--measure", haar, "--points", "8", "--radius", "0.9"});
    REQUIRE(circ.code == 0);
    CHECK(first_line(circ.out) == "theta,density");
    for (const std::string& row : data_lines(circ.out)) {
        double theta = 0, value = 0;
        REQUIRE(std::sscanf(row.c_str(), "%lf,%lf", &theta, &value) == 2);
        CHECK(std::abs(value - 1.0 / (2.0 * std::numbers::pi)) < 1e-12);
    }

    const std::string mix = temp_file("mix.json", kMixJson);
    const RunResult half = run_cli({"density", "--measure", mix, "--t-min", "1", "--t-max",
                                    "3", "--points", "5", "--epsilon", "0.01"});
    REQUIRE(half.code == 0);
    CHECK(first_line(half.out) == "t,density");
    const auto rows = data_lines(half.out);
    REQUIRE(rows.size() == 5);
    double t = 0, peak = 0;
    REQUIRE(std::sscanf(rows[2].c_str(), "%lf,%lf", &t, &peak) == 2); // t = 2
    CHECK(peak > 1.0); // atom of weight 1/2 smoothed at height 0.01
}

TEST_CASE("cli exit codes distinguish input and numerical failures") {
    const RunResult help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("convolve") != std::string::npos);

    const RunResult missing = run_cli(
        {"divide", "--measure", (temp_dir() / "nope.json").string()});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("InvalidInput") != std::string::npos);

    const RunResult badflag = run_cli({"convolve", "--nonsense"});
    CHECK(badflag.code == 2);

    const RunResult nosub = run_cli({});
    CHECK(nosub.code == 2);

    const std::string haar = temp_file("haar.json", R"({"domain": "circle", "haar": true})");
    const RunResult zerofm = run_cli({"divide", "--measure", haar, "--depth", "1"});
    CHECK(zerofm.code == 3);
    CHECK(zerofm.err.find("ZeroFirstMoment") != std::string::npos);
}

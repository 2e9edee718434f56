#include "monomul/cli.hpp"

#include <cstdlib>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "monomul/convolution.hpp"
#include "monomul/errors.hpp"
#include "monomul/io.hpp"
#include "monomul/measures.hpp"
#include "monomul/operator_model.hpp"
#include "monomul/rng.hpp"
#include "monomul/selftest.hpp"
#include "monomul/semigroup.hpp"

namespace monomul::cli {

namespace {

// "re" or "re,im".
cplx parse_complex(const std::string& text) {
    const auto bad = [&]() -> cplx {
        raise(ErrorCode::InvalidInput, "cannot parse complex value '" + text + "'");
    };
    try {
        const auto comma = text.find(',');
        std::size_t used = 0;
        if (comma == std::string::npos) {
            const double re = std::stod(text, &used);
            return used == text.size() ? cplx(re) : bad();
        }
        const std::string re_part = text.substr(0, comma);
        const std::string im_part = text.substr(comma + 1);
        const double re = std::stod(re_part, &used);
        if (used != re_part.size()) return bad();
        const double im = std::stod(im_part, &used);
        return used == im_part.size() ? cplx(re, im) : bad();
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        return bad();
    }
}

// Semicolon-separated complex values.
std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto semi = text.find(';', start);
        const std::string piece =
            text.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
        out.push_back(parse_complex(piece));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string piece = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(piece, &used);
            if (used != piece.size()) throw std::invalid_argument(piece);
            out.push_back(v);
        } catch (const std::exception&) {
            raise(ErrorCode::InvalidInput, "cannot parse number '" + piece + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

ConvOp parse_op(const std::string& name) {
    if (name == "mconv") return ConvOp::mconv;
    if (name == "mconv0") return ConvOp::mconv0;
    raise(ErrorCode::InvalidInput, "unknown convolution '" + name + "'");
}

Scheme parse_scheme(const std::string& name) {
    if (name == "rk") return Scheme::rk;
    if (name == "euler_exp") return Scheme::euler_exp;
    if (name == "crosscheck") return Scheme::crosscheck;
    raise(ErrorCode::InvalidInput, "unknown scheme '" + name + "'");
}

void emit(std::ostream& out, const std::string& text, const std::string& path) {
    if (path.empty())
        out << text;
    else
        io::write_file(path, text);
}

struct Options {
    std::uint64_t seed = kDefaultSeed;
    int order = 16;
    int dim = 32;
    double tol = 1e-6;

    std::string op_name = "mconv0";
    std::string lhs_path, rhs_path;
    std::string out_path, measure_out;
    std::string c1_text = "1", c2_text = "1";
    std::string u1_text = "1", u2_text = "1";
    std::string generator_path;
    std::string tau_text = "1";
    std::string scheme_name = "rk";
    std::string measure_path;
    int depth = 1;
    double t_min = 0.0, t_max = 4.0, epsilon = 1e-3, radius = 0.99;
    int points = 401;
};

int run_convolve(const Options& o, std::ostream& out) {
    const AtomicMeasure lhs = io::load_measure(o.lhs_path);
    const AtomicMeasure rhs = io::load_measure(o.rhs_path);
    if (lhs.domain() != rhs.domain())
        raise(ErrorCode::InvalidInput, "measures live on different domains");

    MomentSequence result;
    if (o.op_name == "pair") {
        const ConvolutionPair p1{moments(lhs, o.order), parse_complex(o.c1_text)};
        const ConvolutionPair p2{moments(rhs, o.order), parse_complex(o.c2_text)};
        result = convolve_pair(p1, p2, o.order).dist;
    } else if (parse_op(o.op_name) == ConvOp::mconv) {
        result = mconv(lhs, rhs, o.order);
    } else {
        result = mconv0(lhs, rhs, o.order);
    }
    emit(out, io::csv_moments(result), o.out_path);

    if (const auto recovered = try_prony_recover(result, lhs.domain())) {
        const std::string text = io::measure_to_json_text(*recovered);
        if (!o.measure_out.empty())
            io::write_file(o.measure_out, text);
        else if (o.out_path.empty())
            out << text;
    }
    return 0;
}

int run_oracle(const Options& o, std::ostream& out) {
    const ShiftPolyVariable v1{parse_complex_list(o.u1_text), parse_complex(o.c1_text)};
    const ShiftPolyVariable v2{parse_complex_list(o.u2_text), parse_complex(o.c2_text)};
    const OperatorScene scene = realize_pair(v1, v2, o.dim);
    const std::vector<cplx> oracle = oracle_moments(scene, {"x1", "x2"}, o.order);

    const ConvolutionPair predicted =
        convolve_pair({MomentSequence(shift_poly_moments(v1, o.dim, o.order)), v1.c},
                      {MomentSequence(shift_poly_moments(v2, o.dim, o.order)), v2.c},
                      o.order);
    emit(out, io::csv_oracle_comparison(oracle, predicted.dist.all()), o.out_path);
    return 0;
}

int run_flow(const Options& o, std::ostream& out) {
    const Generator g = io::load_generator(o.generator_path);
    const std::vector<double> taus = parse_double_list(o.tau_text);
    FlowOptions opts;
    opts.scheme = parse_scheme(o.scheme_name);
    opts.cross_tol = o.tol;
    const std::vector<SemigroupPoint> pts =
        semigroup_measures(g, parse_op(o.op_name), taus, o.order, opts);
    emit(out, io::csv_flow(pts), o.out_path);

    if (!o.measure_out.empty()) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (pts[i].measure)
                io::write_file(o.measure_out + "_" + std::to_string(i) + ".json",
                               io::measure_to_json_text(*pts[i].measure));
    }
    return 0;
}

int run_divide(const Options& o, std::ostream& out) {
    const AtomicMeasure mu = io::load_measure(o.measure_path);
    const std::vector<MomentSequence> chain =
        divisibility_chain(moments(mu, o.order), parse_op(o.op_name), o.depth);
    emit(out, io::csv_levels(chain), o.out_path);
    return 0;
}

int run_density(const Options& o, std::ostream& out) {
    const AtomicMeasure mu = io::load_measure(o.measure_path);
    if (o.points < 2) raise(ErrorCode::InvalidInput, "density grid needs >= 2 points");
    const TransformFn psi = [&mu](cplx z) { return psi_at(mu, z); };

    std::vector<double> grid(static_cast<std::size_t>(o.points));
    std::string csv;
    if (mu.domain() == MeasureDomain::half_line) {
        if (!(o.t_max > o.t_min))
            raise(ErrorCode::InvalidInput, "density grid needs t-max > t-min");
        for (int i = 0; i < o.points; ++i)
            grid[static_cast<std::size_t>(i)] =
                o.t_min + (o.t_max - o.t_min) * i / (o.points - 1);
        csv = io::csv_density(grid, stieltjes_density(psi, grid, o.epsilon), "t");
    } else {
        for (int i = 0; i < o.points; ++i)
            grid[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / o.points;
        csv = io::csv_density(grid, poisson_density(mu, grid, o.radius), "theta");
    }
    emit(out, csv, o.out_path);
    return 0;
}

int run_selftest(const Options& o, std::ostream& out) {
    const std::vector<CriterionResult> results = run_acceptance(o.seed);
    print_results(results, out);
    return all_passed(results) ? 0 : 1;
}

std::uint64_t seed_from_env() {
    if (const char* env = std::getenv("MONOMUL_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && end && *end == '\0') return v;
    }
    return kDefaultSeed;
}

void emit_error_json(std::ostream& err, const std::string& code, const std::string& msg) {
    nlohmann::json j;
    j["error"] = {{"code", code}, {"message", msg}};
    err << j.dump() << "\n";
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    o.seed = seed_from_env();

    CLI::App app{"multiplicative monotone convolution toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // accept the global options after a subcommand name too
    app.add_option("--seed", o.seed, "draw seed (overrides MONOMUL_SEED)");
    app.add_option("--order", o.order, "series / moment truncation order")
        ->check(CLI::PositiveNumber);
    app.add_option("--dim", o.dim, "operator model dimension")->check(CLI::PositiveNumber);
    app.add_option("--tol", o.tol, "scheme crosscheck tolerance")
        ->check(CLI::PositiveNumber);

    CLI::App* conv = app.add_subcommand("convolve", "convolve two measures");
    conv->add_option("--op", o.op_name, "mconv | mconv0 | pair")
        ->check(CLI::IsMember({"mconv", "mconv0", "pair"}));
    conv->add_option("--lhs", o.lhs_path, "left measure JSON")->required();
    conv->add_option("--rhs", o.rhs_path, "right measure JSON")->required();
    conv->add_option("--c1", o.c1_text, "left constant re[,im] (pair op)");
    conv->add_option("--c2", o.c2_text, "right constant re[,im] (pair op)");
    conv->add_option("--out", o.out_path, "moments CSV path (default stdout)");
    conv->add_option("--measure-out", o.measure_out, "recovered measure JSON path");

    CLI::App* orc = app.add_subcommand("oracle", "compare series against the operator model");
    orc->add_option("--u1", o.u1_text, "left symbol coefficients re[,im];re[,im];..")
        ->required();
    orc->add_option("--u2", o.u2_text, "right symbol coefficients")->required();
    orc->add_option("--c1", o.c1_text, "left centering constant re[,im]");
    orc->add_option("--c2", o.c2_text, "right centering constant re[,im]");
    orc->add_option("--out", o.out_path, "comparison CSV path (default stdout)");

    CLI::App* flw = app.add_subcommand("flow", "integrate a convolution semigroup");
    flw->add_option("--generator", o.generator_path, "generator JSON")->required();
    flw->add_option("--tau-list", o.tau_text, "ascending checkpoints, comma separated")
        ->required();
    flw->add_option("--scheme", o.scheme_name, "rk | euler_exp | crosscheck")
        ->check(CLI::IsMember({"rk", "euler_exp", "crosscheck"}));
    flw->add_option("--op", o.op_name, "mconv | mconv0")
        ->check(CLI::IsMember({"mconv", "mconv0"}));
    flw->add_option("--out", o.out_path, "flow CSV path (default stdout)");
    flw->add_option("--measure-out", o.measure_out,
                    "stem for per-checkpoint measure JSON files");

    CLI::App* div = app.add_subcommand("divide", "split a measure into convolution roots");
    div->add_option("--measure", o.measure_path, "measure JSON")->required();
    div->add_option("--depth", o.depth, "number of halvings")->check(CLI::PositiveNumber);
    div->add_option("--op", o.op_name, "mconv | mconv0")
        ->check(CLI::IsMember({"mconv", "mconv0"}));
    div->add_option("--out", o.out_path, "chain CSV path (default stdout)");

    CLI::App* den = app.add_subcommand("density", "smoothed density of a measure");
    den->add_option("--measure", o.measure_path, "measure JSON")->required();
    den->add_option("--t-min", o.t_min, "half-line grid start");
    den->add_option("--t-max", o.t_max, "half-line grid end");
    den->add_option("--points", o.points, "grid size")->check(CLI::PositiveNumber);
    den->add_option("--epsilon", o.epsilon, "half-line smoothing height")
        ->check(CLI::PositiveNumber);
    den->add_option("--radius", o.radius, "circle evaluation radius");
    den->add_option("--out", o.out_path, "density CSV path (default stdout)");

    CLI::App* self = app.add_subcommand("selftest", "run the acceptance criteria");
    (void)self;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        emit_error_json(err, "InvalidInput", e.what());
        return 2;
    }

    try {
        if (*conv) return run_convolve(o, out);
        if (*orc) return run_oracle(o, out);
        if (*flw) return run_flow(o, out);
        if (*div) return run_divide(o, out);
        if (*den) return run_density(o, out);
        if (*self) return run_selftest(o, out);
    } catch (const Error& e) {
        emit_error_json(err, e.code_name(), e.what());
        return e.is_input_error() ? 2 : 3;
    } catch (const std::exception& e) {
        emit_error_json(err, "Internal", e.what());
        return 3;
    }
    emit_error_json(err, "InvalidInput", "no subcommand given");
    return 2;
}

int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("monomul");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace monomul::cli

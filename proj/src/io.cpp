#include "monomul/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "monomul/errors.hpp"

namespace monomul::io {

namespace {

using nlohmann::json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) raise(ErrorCode::InvalidInput, "malformed JSON input");
    return j;
}

double number_field(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        raise(ErrorCode::InvalidInput, std::string("missing numeric field '") + key + "'");
    return j.at(key).get<double>();
}

std::vector<Atom> atom_list(const json& j, const char* key, const char* pos_key) {
    std::vector<Atom> atoms;
    if (!j.contains(key)) return atoms;
    const json& arr = j.at(key);
    if (!arr.is_array())
        raise(ErrorCode::InvalidInput, std::string("field '") + key + "' must be an array");
    for (const json& e : arr)
        atoms.push_back({number_field(e, pos_key), number_field(e, "weight")});
    return atoms;
}

MeasureDomain domain_field(const json& j) {
    if (!j.contains("domain") || !j.at("domain").is_string())
        raise(ErrorCode::InvalidInput, "missing 'domain' field");
    const std::string d = j.at("domain").get<std::string>();
    if (d == "half_line") return MeasureDomain::half_line;
    if (d == "circle") return MeasureDomain::circle;
    raise(ErrorCode::InvalidInput, "domain must be 'half_line' or 'circle'");
}

} // namespace

AtomicMeasure measure_from_json_text(const std::string& text) {
    const json j = parse(text);
    const MeasureDomain d = domain_field(j);
    if (j.value("haar", false)) {
        if (d != MeasureDomain::circle)
            raise(ErrorCode::InvalidInput, "the haar measure lives on the circle");
        return AtomicMeasure::haar();
    }
    return AtomicMeasure(d, atom_list(j, "atoms", "position"));
}

std::string measure_to_json_text(const AtomicMeasure& mu) {
    json j;
    j["domain"] = mu.domain() == MeasureDomain::half_line ? "half_line" : "circle";
    if (mu.is_haar()) {
        j["haar"] = true;
    } else {
        json arr = json::array();
        for (const Atom& a : mu.atoms())
            arr.push_back({{"position", a.position}, {"weight", a.weight}});
        j["atoms"] = std::move(arr);
    }
    return j.dump(2) + "\n";
}

Generator generator_from_json_text(const std::string& text) {
    const json j = parse(text);
    const MeasureDomain d = domain_field(j);
    if (d == MeasureDomain::half_line)
        return Generator::half_line(number_field(j, "a"), atom_list(j, "nu", "position"));
    if (j.contains("builtin")) {
        if (j.at("builtin").get<std::string>() != "z^n-1")
            raise(ErrorCode::InvalidInput, "unknown builtin generator family");
        const double n = number_field(j, "n");
        if (n != static_cast<int>(n))
            raise(ErrorCode::InvalidInput, "builtin exponent must be an integer");
        return Generator::circle_power(static_cast<int>(n));
    }
    return Generator::circle(number_field(j, "beta"), atom_list(j, "rho", "angle"));
}

std::string generator_to_json_text(const Generator& g) {
    json j;
    switch (g.kind()) {
    case Generator::Kind::half_line_atomic: {
        j["domain"] = "half_line";
        j["a"] = g.halfline_drift();
        json arr = json::array();
        for (const Atom& a : g.nu())
            arr.push_back({{"position", a.position}, {"weight", a.weight}});
        j["nu"] = std::move(arr);
        break;
    }
    case Generator::Kind::circle_herglotz: {
        j["domain"] = "circle";
        j["beta"] = g.circle_beta();
        json arr = json::array();
        for (const Atom& a : g.rho())
            arr.push_back({{"angle", a.position}, {"weight", a.weight}});
        j["rho"] = std::move(arr);
        break;
    }
    case Generator::Kind::circle_power:
        j["domain"] = "circle";
        j["builtin"] = "z^n-1";
        j["n"] = g.power();
        break;
    }
    return j.dump(2) + "\n";
}

AtomicMeasure load_measure(const std::string& path) {
    return measure_from_json_text(read_file(path));
}

Generator load_generator(const std::string& path) {
    return generator_from_json_text(read_file(path));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::InvalidInput, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    out << content;
    if (!out) raise(ErrorCode::InvalidInput, "write failed for '" + path + "'");
}

std::string csv_moments(const MomentSequence& m) {
    std::string out = "n,re,im\n";
    for (int n = 1; n <= m.order(); ++n) {
        const cplx c = m.moment(n);
        out += std::to_string(n) + "," + fmt17(c.real()) + "," + fmt17(c.imag()) + "\n";
    }
    return out;
}

std::string csv_series(const TruncatedSeries& s) {
    std::string out = "n,re,im\n";
    for (int n = 0; n <= s.order(); ++n) {
        const cplx c = s.coeff(n);
        out += std::to_string(n) + "," + fmt17(c.real()) + "," + fmt17(c.imag()) + "\n";
    }
    return out;
}

std::string csv_density(std::span<const double> grid, std::span<const double> density,
                        const std::string& xlabel) {
    if (grid.size() != density.size())
        raise(ErrorCode::InvalidInput, "grid and density lengths differ");
    std::string out = xlabel + ",density\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        out += fmt17(grid[i]) + "," + fmt17(density[i]) + "\n";
    return out;
}

std::string csv_oracle_comparison(std::span<const cplx> oracle,
                                  std::span<const cplx> predicted) {
    if (oracle.size() != predicted.size())
        raise(ErrorCode::InvalidInput, "oracle and prediction lengths differ");
    std::string out = "n,oracle_re,oracle_im,predicted_re,predicted_im,abs_error\n";
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        out += std::to_string(i + 1) + "," + fmt17(oracle[i].real()) + "," +
               fmt17(oracle[i].imag()) + "," + fmt17(predicted[i].real()) + "," +
               fmt17(predicted[i].imag()) + "," + fmt17(std::abs(oracle[i] - predicted[i])) +
               "\n";
    }
    return out;
}

std::string csv_flow(std::span<const SemigroupPoint> points) {
    std::string out = "tau,n,re,im\n";
    for (const SemigroupPoint& p : points) {
        for (int n = 1; n <= p.moments.order(); ++n) {
            const cplx c = p.moments.moment(n);
            out += fmt17(p.tau) + "," + std::to_string(n) + "," + fmt17(c.real()) + "," +
                   fmt17(c.imag()) + "\n";
        }
    }
    return out;
}

std::string csv_levels(std::span<const MomentSequence> levels) {
    std::string out = "level,n,re,im\n";
    for (std::size_t level = 0; level < levels.size(); ++level) {
        for (int n = 1; n <= levels[level].order(); ++n) {
            const cplx c = levels[level].moment(n);
            out += std::to_string(level) + "," + std::to_string(n) + "," +
                   fmt17(c.real()) + "," + fmt17(c.imag()) + "\n";
        }
    }
    return out;
}

} // namespace monomul::io

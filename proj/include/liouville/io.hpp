#pragma once
// Serialization and artifact emission: JSON round-trips for the value types,
// deterministic CSV/SVG writers, and a content-hashed output manifest.

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <liouville/blowup.hpp>
#include <liouville/conformal.hpp>
#include <liouville/curve.hpp>
#include <liouville/grid_field.hpp>
#include <liouville/line_field.hpp>
#include <liouville/solver.hpp>

namespace liouville {

using nlohmann::json;

// ---------- JSON round-trips ----------

inline void to_json(json& j, const GridField& f) {
    std::vector<double> re(f.v.size()), im(f.v.size());
    for (size_t k = 0; k < f.v.size(); ++k) {
        re[k] = f.v[k].real();
        im[k] = f.v[k].imag();
    }
    j = json{{"n", f.n()}, {"samples_re", re}, {"samples_im", im}};
}

inline void from_json(const json& j, GridField& f) {
    const auto re = j.at("samples_re").get<std::vector<double>>();
    const auto im = j.at("samples_im").get<std::vector<double>>();
    const auto n = j.at("n").get<size_t>();
    if (re.size() != n || im.size() != n)
        throw std::invalid_argument("grid field: sample arrays disagree with n");
    f.v.resize(n);
    for (size_t k = 0; k < n; ++k) f.v[k] = complexd(re[k], im[k]);
}

inline void to_json(json& j, const SpectralField& s) {
    std::vector<double> re(s.c.size()), im(s.c.size());
    for (size_t k = 0; k < s.c.size(); ++k) {
        re[k] = s.c[k].real();
        im[k] = s.c[k].imag();
    }
    j = json{{"n", s.n()}, {"samples_re", re}, {"samples_im", im}};
}

inline void from_json(const json& j, SpectralField& s) {
    GridField tmp;
    from_json(j, tmp);
    s.c = std::move(tmp.v);
}

inline void to_json(json& j, const ConformalFactor& cf) {
    j = json{{"lambda", cf.lambda}, {"length", cf.length}};
}

inline void from_json(const json& j, ConformalFactor& cf) {
    j.at("lambda").get_to(cf.lambda);
    j.at("length").get_to(cf.length);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SolveReport, solution, residual_sup, iterations,
                                   constraint_gap, converged, degenerate, kappa_flagged)

inline void to_json(json& j, const LineField& f) {
    j = json{{"radius", f.R}, {"samples", f.u}, {"tail_c1", f.c1}, {"tail_c2", f.c2}};
}

inline void from_json(const json& j, LineField& f) {
    j.at("radius").get_to(f.R);
    j.at("samples").get_to(f.u);
    j.at("tail_c1").get_to(f.c1);
    j.at("tail_c2").get_to(f.c2);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BubbleFit, mu, x0, sup_err)

inline void to_json(json& j, const MoebiusFit& fit) {
    j = json{{"a_re", fit.a.real()},
             {"a_im", fit.a.imag()},
             {"c0", fit.c0},
             {"residual", fit.residual}};
}

inline void from_json(const json& j, MoebiusFit& fit) {
    fit.a = complexd(j.at("a_re").get<double>(), j.at("a_im").get<double>());
    j.at("c0").get_to(fit.c0);
    j.at("residual").get_to(fit.residual);
}

// ---------- Experiment configuration ----------

// One flat bag of knobs shared by every subcommand; each run consumes the
// fields it cares about and ignores the rest. Defaults are part of the
// interface: changing them changes recorded artifacts.
struct ExperimentConfig {
    std::string subcommand;
    int n = 1024;                  // circle grid size
    double tol = 1e-10;            // solver target residual
    std::string kappa = "const:1"; // curvature spec, see parse_curvature
    std::string factor = "const:0";
    std::string family = "moebius";
    std::string suite = "trivial";
    std::vector<double> schedule;  // family parameters, monotone
    std::vector<double> centers;   // arc centers for mass profiles
    double arc_delta = 0.3;
    int mesh_level = 3;
    int count = 20;                // random-trial count
    unsigned seed = 2026;
    double alpha = 3.0;            // concentration split for sc-profile
    std::vector<double> eps;       // exponential-functional epsilons
    std::vector<double> widths;    // bump widths for the same sweep
    double line_radius = 100.0;
    int line_samples = 1 << 14;
    double mu = 1.0;
    double x0 = 0.0;
    std::string out_dir = "out";
    bool emit_svg = true;
    bool emit_csv = true;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ExperimentConfig, subcommand, n, tol, kappa, factor,
                                   family, suite, schedule, centers, arc_delta, mesh_level,
                                   count, seed, alpha, eps, widths, line_radius,
                                   line_samples, mu, x0, out_dir, emit_svg, emit_csv)

// ---------- Curvature input ----------

// Accepts "const:v", "cos:a,k" (1 + a cos(k theta)), a path to a JSON file, or
// an inline JSON object. JSON form: either a GridField or
// {"mean": m, "cos": [...], "sin": [...]} trig coefficients (index k = 1...).
[[nodiscard]] inline GridField parse_curvature(const std::string& spec, int n) {
    if (spec.rfind("const:", 0) == 0) {
        const double v = std::stod(spec.substr(6));
        return GridField::from_function(n, [v](double) { return v; });
    }
    if (spec.rfind("cos:", 0) == 0) {
        std::istringstream in(spec.substr(4));
        double a = 0.0;
        char comma = ',';
        int k = 1;
        in >> a >> comma >> k;
        if (!in || comma != ',') throw std::invalid_argument("curvature spec: want cos:a,k");
        return GridField::from_function(
            n, [a, k](double t) { return 1.0 + a * std::cos(k * t); });
    }
    json j;
    if (!spec.empty() && (spec[0] == '{' || spec[0] == '[')) {
        j = json::parse(spec);
    } else {
        std::ifstream in(spec);
        if (!in) throw std::invalid_argument("curvature spec: cannot open " + spec);
        in >> j;
    }
    if (j.contains("samples_re")) return j.get<GridField>();
    const double mean = j.value("mean", 1.0);
    const auto ac = j.value("cos", std::vector<double>{});
    const auto as = j.value("sin", std::vector<double>{});
    return GridField::from_function(n, [&](double t) {
        double v = mean;
        for (size_t k = 0; k < ac.size(); ++k) v += ac[k] * std::cos((k + 1.0) * t);
        for (size_t k = 0; k < as.size(); ++k) v += as[k] * std::sin((k + 1.0) * t);
        return v;
    });
}

// ---------- CSV emission ----------

// 17 significant digits: doubles survive a write/parse round trip, and equal
// inputs yield byte-identical files.
[[nodiscard]] inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("csv row width disagrees with header");
        for (size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << fmt17(row[c]);
        out << "\n";
    }
}

inline void write_curve_csv(const std::string& path, const PlanarCurve& c) {
    std::vector<std::vector<double>> rows(c.size());
    for (int j = 0; j < c.size(); ++j)
        rows[j] = {c.s[j], c.x[j], c.y[j], c.tx[j], c.ty[j], c.kappa[j]};
    write_csv(path, {"s", "x", "y", "tx", "ty", "kappa"}, rows);
}

inline void write_mass_csv(const std::string& path,
                           const std::vector<std::pair<double, MassProfile>>& profiles) {
    std::vector<std::vector<double>> rows;
    for (const auto& [param, prof] : profiles)
        for (const ArcMass& a : prof.arcs)
            rows.push_back({param, a.center, a.delta, a.mass, a.absmass});
    write_csv(path, {"param", "center", "delta", "mass", "absmass"}, rows);
}

// ---------- SVG emission ----------

// Fixed style: 100 px per unit, integer-unit viewbox padded one unit around
// the data, light axes through the origin, 2 px stroke. Identical curves
// produce identical files.
inline void write_curve_svg(const std::string& path, const PlanarCurve& c) {
    if (c.size() == 0) throw std::invalid_argument("svg: empty curve");
    double xmin = c.x[0], xmax = c.x[0], ymin = c.y[0], ymax = c.y[0];
    for (int j = 0; j < c.size(); ++j) {
        xmin = std::min(xmin, c.x[j]);
        xmax = std::max(xmax, c.x[j]);
        ymin = std::min(ymin, c.y[j]);
        ymax = std::max(ymax, c.y[j]);
    }
    const double u = 100.0;  // px per unit
    const long x0 = std::lround(std::floor(xmin - 1.0)) * 100;
    const long y0 = std::lround(std::floor(ymin - 1.0)) * 100;
    const long w = std::lround(std::ceil(xmax + 1.0)) * 100 - x0;
    const long h = std::lround(std::ceil(ymax + 1.0)) * 100 - y0;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    // y flips so the mathematical orientation is preserved on screen.
    auto px = [&](double x) { return fmt17(x * u); };
    auto py = [&](double y) { return fmt17(-y * u); };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 << " "
        << -(y0 + h) << " " << w << " " << h << "\">\n";
    out << "  <line x1=\"" << x0 << "\" y1=\"0\" x2=\"" << x0 + w
        << "\" y2=\"0\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    out << "  <line x1=\"0\" y1=\"" << -(y0 + h) << "\" x2=\"0\" y2=\"" << -y0
        << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    out << "  <polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"2\" points=\"";
    for (int j = 0; j < c.size(); ++j)
        out << (j ? " " : "") << px(c.x[j]) << "," << py(c.y[j]);
    out << " " << px(c.x[0]) << "," << py(c.y[0]);
    out << "\"/>\n</svg>\n";
}

// ---------- Content-addressed manifest ----------

[[nodiscard]] inline std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 digest failed");
    }
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

[[nodiscard]] inline std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot hash " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

// Collects every artifact a run produces; written last so a complete MANIFEST
// certifies a complete run.
struct Manifest {
    std::string root;
    std::vector<std::pair<std::string, std::string>> entries;  // name, sha256

    explicit Manifest(std::string dir) : root(std::move(dir)) {
        std::filesystem::create_directories(root);
    }

    [[nodiscard]] std::string path(const std::string& name) const {
        return (std::filesystem::path(root) / name).string();
    }

    void record(const std::string& name) { entries.emplace_back(name, sha256_file(path(name))); }

    void write_json(const std::string& name, const json& j) {
        std::ofstream out(path(name), std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path(name));
        out << j.dump(2) << "\n";
        out.close();
        record(name);
    }

    void finish() const {
        json files = json::array();
        for (const auto& [name, hash] : entries)
            files.push_back(json{{"path", name}, {"sha256", hash}});
        std::ofstream out(path("MANIFEST.json"), std::ios::binary);
        if (!out) throw std::runtime_error("cannot write MANIFEST");
        out << json{{"files", files}}.dump(2) << "\n";
    }
};

}  // namespace liouville

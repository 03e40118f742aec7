// Acceptance gate for the toolkit: ten timed end-to-end criteria, one
// verdict line each with the measured quantities. A criterion passes only
// if its numbers meet the stated tolerances and it finishes inside its
// runtime budget. The process exits with the number of failed criteria,
// so a zero exit is the full gate.
//
// Run all criteria with no arguments, or a single one with --only K.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "liouville/blowup.hpp"
#include "liouville/curve.hpp"
#include "liouville/disk_mesh.hpp"
#include "liouville/line_field.hpp"
#include "liouville/moebius.hpp"
#include "liouville/solver.hpp"
#include "liouville/spectral_ops.hpp"
#include "liouville/transfer.hpp"
#include "oracles.hpp"

namespace {

using namespace liouville;

// ---------- Helpers ----------

struct Verdict {
    bool pass = false;
    std::string detail;
};

[[nodiscard]] double sup_diff(const GridField& a, const GridField& b) {
    double m = 0.0;
    for (int j = 0; j < a.n(); ++j) m = std::max(m, std::abs(a.v[j] - b.v[j]));
    return m;
}

template <class... A>
[[nodiscard]] std::string format(const char* f, A... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------- 1. Spectral operators on trig monomials ----------

// Half-Laplacian and Hilbert transform on every monomial of degree <= 256
// at n = 1024, against references built by scaling the same samples. The
// lattice phase is reduced modulo n before the trig call so no k-amplified
// argument rounding enters the data.
Verdict spectral_exactness() {
    const int n = 1024;
    double worst = 0.0;
    for (int k = 1; k <= 256; ++k) {
        GridField c = GridField::zeros(n), s = GridField::zeros(n);
        for (int j = 0; j < n; ++j) {
            const double t = two_pi * static_cast<double>(std::int64_t(k) * j % n) / n;
            c.v[j] = std::cos(t);
            s.v[j] = std::sin(t);
        }
        GridField kc = c, ks = s, mc = c;
        for (auto& z : kc.v) z *= k;
        for (auto& z : ks.v) z *= k;
        for (auto& z : mc.v) z *= -1.0;
        worst = std::max({worst, sup_diff(half_laplacian(c), kc), sup_diff(half_laplacian(s), ks),
                          sup_diff(hilbert(c), s), sup_diff(hilbert(s), mc)});
    }
    const GridField one = GridField::from_function(n, [](double) { return 1.0; });
    worst = std::max({worst, half_laplacian(one).sup_abs(), hilbert(one).sup_abs()});
    return {worst <= 1e-12, format("degrees 1..256 at n = 1024, worst error %.3g (tol 1e-12)", worst)};
}

// ---------- 2. Constant-curvature explicit factors ----------

// Twenty disk-automorphism factors shifted to curvature c0 must satisfy the
// equation to 1e-8 and report exactly c0 back from the curvature formula.
Verdict explicit_factors() {
    const int n = 1024;
    std::mt19937 rng(20260823u);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst_res = 0.0, worst_curv = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        // The first trial pins the extreme radius, the rest draw uniformly.
        const double r = trial == 0 ? 0.9 : 0.9 * std::sqrt(unif(rng));
        const double phi = trial == 0 ? 1.1 : two_pi * unif(rng);
        const double c0 = trial == 0 ? 2.0 : 0.5 + 1.5 * unif(rng);
        const MoebiusMap m(std::polar(r, phi), 0.37 * phi);
        GridField lam = m.factor_field(n);
        for (auto& z : lam.v) z -= std::log(c0);
        const ConformalFactor cf(std::move(lam));
        worst_res =
            std::max(worst_res, residual(cf, PrescribedCurvature::constant(n, c0)).sup_abs());
        GridField curv = curvature_from_factor(cf);
        for (auto& z : curv.v) z -= c0;
        worst_curv = std::max(worst_curv, curv.sup_abs());
    }
    const bool ok = worst_res <= 1e-8 && worst_curv <= 1e-8;
    return {ok, format("20 factors, residual %.3g, curvature gap %.3g (tol 1e-8)", worst_res,
                       worst_curv)};
}

// ---------- 3. Curve reconstruction round trip ----------

// Twenty random trig factors: curvature carried along the traced curve must
// match fourth-order finite differences of the unit tangent, the immersion
// must have boundary degree one, and curvature weighted by speed must
// integrate to the full angle.
Verdict curve_round_trip() {
    double worst_geom = 0.0, worst_mass = 0.0;
    bool degrees_ok = true;
    for (unsigned trial = 0; trial < 20; ++trial) {
        const auto p = oracles::TrigPoly::random(10, 300 + trial);
        const ConformalFactor cf =
            ConformalFactor::from_function(512, [&](double t) { return 0.35 * p(t); });
        const DiskImmersion im = immersion_from_factor(cf);
        const PlanarCurve c = trace_curve(im, 4096);
        const double hs = c.length / c.size();
        for (int j = 0; j < c.size(); ++j) {
            const double k_geom =
                c.tx[j] * oracles::fd1(c.ty, j, hs) - c.ty[j] * oracles::fd1(c.tx, j, hs);
            worst_geom = std::max(worst_geom, std::abs(k_geom - c.kappa[j]));
        }
        degrees_ok = degrees_ok && im.cert.degree == 1 && rotation_index(c) == 1;
        GridField ke = curvature_from_factor(cf);
        for (int j = 0; j < ke.n(); ++j) ke.v[j] *= std::exp(cf.lambda.v[j].real());
        worst_mass = std::max(worst_mass, std::abs(integrate_real(ke) - two_pi));
    }
    const bool ok = worst_geom <= 1e-4 && degrees_ok && worst_mass <= 1e-8;
    return {ok, format("20 factors, curvature gap %.3g (tol 1e-4), degree %s, angle drift %.3g "
                       "(tol 1e-8)",
                       worst_geom, degrees_ok ? "1" : "wrong", worst_mass)};
}

// ---------- 4. One-point concentration family ----------

// Pullback family of the flat factor, poles approaching the boundary at
// t in {0.9, 0.99, 0.999}. The arc mass deviates linearly in 1 - t, so the
// two finest members extrapolate in that variable; the finest member must
// match the one-point limit profile away from a 0.3 arc.
Verdict one_point_family() {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::moebius_pullback;
    spec.schedule = {0.9, 0.99, 0.999};
    const auto fam = generate_family(spec);
    std::vector<double> hs, masses;
    for (const auto& m : fam) {
        const MassProfile mp = mass_profile(m.factor, m.kappa, {0.0}, 0.3);
        mp.check_total(1e-7);
        hs.push_back(1.0 - m.param);
        masses.push_back(mp.arcs[0].mass);
    }
    const double mass_inf = richardson_limit(hs, masses);
    const double rel = std::abs(mass_inf - two_pi) / two_pi;
    const double perr = limit_profile_error(fam.back().factor, BlowupCase::one_point, {0.0}, 0.3);
    const bool ok = rel <= 0.01 && perr <= 5e-2;
    return {ok, format("limit mass %.6g (off %.3g%%, tol 1%%), profile gap %.3g (tol 5e-2)",
                       mass_inf, 100.0 * rel, perr)};
}

// ---------- 5. Two-point concentration and pinching ----------

// Factors concentrating at two antipodal points, pole offsets delta in
// {0.3, 0.1, 0.03, 0.01}: extrapolated arc mass per pole, decreasing
// two-point profile error, and a pinched boundary pair whose geodesic
// distance through the immersed surface contracts by at least 10x with the
// tangents anti-parallel at the finest member. Geodesics run on the level-5
// structured disk mesh.
Verdict two_point_family() {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::two_pole;
    spec.schedule = {0.3, 0.1, 0.03, 0.01};
    const auto fam = generate_family(spec);
    const std::vector<double> poles = {0.5 * pi, -0.5 * pi};

    std::vector<double> hs, masses, perr;
    for (const auto& m : fam) {
        const MassProfile mp = mass_profile(m.factor, m.kappa, poles, 0.3);
        mp.check_total(1e-7);
        hs.push_back(m.param);
        masses.push_back(0.5 * (mp.arcs[0].mass + mp.arcs[1].mass));
        perr.push_back(limit_profile_error(m.factor, BlowupCase::two_point, poles, 0.3));
    }
    const double mass_inf = richardson_limit(hs, masses);
    const double rel = std::abs(mass_inf - pi) / pi;
    bool decreasing = true;
    for (size_t k = 1; k < perr.size(); ++k) decreasing = decreasing && perr[k] < perr[k - 1];

    const DiskMesh mesh = DiskMesh::structured(5);
    const auto pairs = detect_pinched(fam, mesh, 8, 1.2);
    double ratio = 0.0, angle_gap = pi;
    for (const auto& p : pairs) {
        const double r = p.distances.front() / p.distances.back();
        if (r > ratio) {
            ratio = r;
            angle_gap = std::abs(p.tangent_angle - pi);
        }
    }
    const bool ok =
        rel <= 0.02 && decreasing && !pairs.empty() && ratio >= 10.0 && angle_gap <= 0.05;
    return {ok, format("limit mass/pole %.6g (off %.3g%%, tol 2%%), profiles %s, pinch "
                       "contraction %.3g (needs >= 10), tangent gap %.3g (tol 0.05)",
                       mass_inf, 100.0 * rel, decreasing ? "decreasing" : "not decreasing", ratio,
                       angle_gap)};
}

// ---------- 6. Prescribed-curvature solver ----------

// kappa = 1 + 0.1 cos(theta) must solve to residual 1e-10 within 15 Newton
// steps and reproduce kappa from the solution factor to 1e-8.
Verdict curvature_solver() {
    PrescribedCurvature kap(
        GridField::from_function(256, [](double t) { return 1.0 + 0.1 * std::cos(t); }));
    SolveOptions opt;
    opt.tol = 1e-10;
    opt.max_newton = 15;
    const SolveReport rep = solve(kap, opt);
    double round_trip = std::numeric_limits<double>::quiet_NaN();
    if (rep.converged) {
        GridField back = curvature_from_factor(rep.solution);
        for (int j = 0; j < back.n(); ++j) back.v[j] -= kap.kappa.v[j];
        round_trip = back.sup_abs();
    }
    const bool ok = rep.converged && rep.residual_sup <= 1e-10 && rep.iterations <= 15 &&
                    round_trip <= 1e-8;
    return {ok, format("residual %.3g after %d steps (tol 1e-10 in <= 15), %s", rep.residual_sup,
                       rep.iterations,
                       rep.converged ? format("round trip %.3g (tol 1e-8)", round_trip).c_str()
                                     : "no convergence")};
}

// ---------- 7. Real-line explicit solutions ----------

// Six scaled and shifted solutions: principal-value quadrature must satisfy
// the equation on [-50, 50], the tail-corrected mass integral must give the
// full angle, and the standard member must transfer to the flat factor.
Verdict real_line_solutions() {
    double worst_pv = 0.0, worst_mass = 0.0;
    for (double mu : {0.5, 1.0, 2.0}) {
        for (double x0 : {0.0, 1.0}) {
            const ExplicitBubble b(mu, x0);
            const LineField f = b.sample(800.0, 1 << 17);
            for (int j = f.nearest_index(-50.0); j <= f.nearest_index(50.0); j += 32) {
                const double r = half_laplacian_line(f, j) - std::exp(f.u[j]);
                worst_pv = std::max(worst_pv, std::abs(r));
            }
            const LineField fm = b.sample(4000.0, 1 << 19);
            worst_mass = std::max(worst_mass, std::abs(pohozaev_mass(fm) - two_pi));
        }
    }
    const double flat =
        stereo_to_circle(ExplicitBubble(1.0, 0.0), -2.0, std::log(2.0), 512).lambda.sup_abs();
    const bool ok = worst_pv <= 1e-5 && worst_mass <= 1e-6 && flat <= 1e-10;
    return {ok, format("six members: equation gap %.3g (tol 1e-5), mass drift %.3g (tol 1e-6), "
                       "flat transfer %.3g (tol 1e-10)",
                       worst_pv, worst_mass, flat)};
}

// ---------- 8. Chart transfer identity ----------

// Five compact smooth perturbations of the standard bubble: the spectral
// half-Laplacian of the transferred factor and the principal-value line
// computation must agree through the 1 + sin(theta) weight on arcs at
// least 0.2 away from the pole.
Verdict transfer_identity() {
    const ExplicitBubble b(1.0, 0.0);
    const double x_edge = 1.0 / std::tan(0.1);
    struct Bump {
        double amp, center, width;
    };
    const std::vector<Bump> bumps = {{0.3, 1.5, 2.0},
                                     {-0.4, -2.0, 1.5},
                                     {0.25, 0.0, 3.0},
                                     {0.5, 4.0, 1.0},
                                     {-0.2, -5.0, 2.5}};
    double worst = 0.0;
    for (const Bump& p : bumps) {
        auto u = [&](double x) {
            const double s = (x - p.center) / p.width;
            const double phi = std::abs(s) >= 1.0 ? 0.0 : p.amp * std::exp(-1.0 / (1.0 - s * s));
            return b(x) + phi;
        };
        LineField f = LineField::from_function(800.0, 1 << 17, u, false);
        f.c1 = b.tail_c1();
        f.c2 = b.tail_c2();
        // Off-center perturbations are narrow in the angle variable, so the
        // transfer grid is deeper than the line comparison needs.
        const ConformalFactor cf = stereo_to_circle(u, f.c1, f.c2, 8192);
        const SpectralField hs = analyze(half_laplacian(cf.lambda));
        for (int j = f.nearest_index(-x_edge) + 1; j <= f.nearest_index(x_edge); j += 16) {
            const double xj = f.x(j);
            const double circle = eval_at(hs, stereo_theta(xj)).real() + 1.0;
            const double line = half_laplacian_line(f, j) * (1.0 + xj * xj) / 2.0;
            worst = std::max(worst, std::abs(circle - line));
        }
    }
    return {worst <= 1e-5, format("five perturbed fields, chart gap %.3g (tol 1e-5)", worst)};
}

// ---------- 9. Exponential functional band ----------

// Subcritical exponential functionals on the circle and on the interval
// stay inside one fixed two-sided band across the eps x width sweep, while
// the supercritical probes grow monotonically as the bump narrows.
Verdict exponential_band() {
    const std::vector<double> eps = {0.5, 1.2, 2.2};
    const std::vector<double> widths = {0.6, 0.3, 0.1, 0.03};
    double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
    bool growing = true;
    for (double e : eps) {
        double prev_c = 0.0, prev_i = 0.0;
        for (double w : widths) {
            const GridField bc = bump_field(512, pi, w);
            const double fc = mt_functional(bc, e);
            const double pc = mt_sharpness_probe(bc, e);
            const auto bi = interval_bump(513, 0.0, w);
            const double fi = interval_mt_functional(bi, e);
            const double pr = interval_mt_probe(bi, e);
            vmin = std::min({vmin, fc, fi});
            vmax = std::max({vmax, fc, fi});
            growing = growing && pc > prev_c && pr > prev_i;
            prev_c = pc;
            prev_i = pr;
        }
    }
    const bool ok = vmin >= 1e-2 && vmax <= 1e3 && growing;
    return {ok, format("functionals span [%.3g, %.3g] (band [1e-2, 1e3]), probes %s as width "
                       "shrinks",
                       vmin, vmax, growing ? "grow" : "do not grow")};
}

// ---------- 10. Total turning lower bound ----------

// Fifty random closed immersed curves all carry total absolute turning
// above pi; the unit circle gives the full angle to rounding.
Verdict turning_bound() {
    double min_turn = std::numeric_limits<double>::infinity();
    for (unsigned trial = 0; trial < 50; ++trial) {
        const auto p = oracles::TrigPoly::random(6, 700 + trial);
        const ConformalFactor cf =
            ConformalFactor::from_function(256, [&](double t) { return 0.35 * p(t); });
        const PlanarCurve c = trace_curve(immersion_from_factor(cf), 2048);
        min_turn = std::min(min_turn, total_turning(c));
    }
    const ConformalFactor flat(GridField::zeros(256));
    const double circle = total_turning(trace_curve(immersion_from_factor(flat), 4096));
    const double drift = std::abs(circle - two_pi);
    const bool ok = min_turn > pi && drift <= 1e-10;
    return {ok, format("50 curves, least total turning %.4g (needs > pi), circle drift %.3g "
                       "(tol 1e-10)",
                       min_turn, drift)};
}

// ---------- Driver ----------

struct Criterion {
    const char* name;
    double budget_s;
    Verdict (*run)();
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only K]\n", argv[0]);
            return 2;
        }
    }

    const std::vector<Criterion> criteria = {
        {"spectral operators on trig monomials", 1.0, spectral_exactness},
        {"constant-curvature explicit factors", 5.0, explicit_factors},
        {"curve reconstruction round trip", 10.0, curve_round_trip},
        {"one-point concentration family", 30.0, one_point_family},
        {"two-point concentration and pinching", 120.0, two_point_family},
        {"prescribed-curvature solver", 5.0, curvature_solver},
        {"real-line explicit solutions", 20.0, real_line_solutions},
        {"chart transfer identity", 30.0, transfer_identity},
        {"exponential functional band", 20.0, exponential_band},
        {"total turning lower bound", 5.0, turning_bound},
    };

    int failed = 0, ran = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        if (only != 0 && only != static_cast<int>(k + 1)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[k].run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = dt < criteria[k].budget_s;
        const bool ok = v.pass && in_budget;
        ++ran;
        failed += ok ? 0 : 1;
        std::printf("[%s] %2zu %-38s %s [%.2f s, budget %.0f s%s]\n", ok ? "PASS" : "FAIL", k + 1,
                    criteria[k].name, v.detail.c_str(), dt, criteria[k].budget_s,
                    in_budget ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed;
}

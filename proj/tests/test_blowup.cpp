#include "liouville/blowup.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "liouville/conformal.hpp"
#include "liouville/curve.hpp"
#include "liouville/disk_mesh.hpp"
#include "liouville/solver.hpp"
#include "oracles.hpp"

using namespace liouville;

namespace {

// Complete elliptic integral K in the parameter convention K(m), via the
// arithmetic-geometric mean.
double elliptic_k(double m) {
    double a = 1.0, b = std::sqrt(1.0 - m);
    for (int i = 0; i < 60 && std::abs(a - b) > 1e-16; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return oracles::kPi / (2.0 * a);
}

// Boundary-length normalization of the two-pole factor: c such that
// int |c / (e^{2 i t} + a^2)| dt = 2 pi, in closed form.
double two_pole_scale(double delta) {
    const double a = 1.0 + delta;
    const double a2 = a * a;
    const double m = std::pow(2.0 * a / (1.0 + a2), 2);
    const double integral = 4.0 * elliptic_k(m) / (1.0 + a2);
    return two_pi / integral;
}

// Exact curvature mass of the two-pole factor over [pi/2 - w, pi/2 + w].
// The density is 1 - d/dt arg(e^{2 i t} + a^2), so the mass telescopes.
double two_pole_arc_mass(double delta, double w) {
    const double a2 = (1.0 + delta) * (1.0 + delta);
    return 2.0 * w + 2.0 * std::atan(std::sin(2.0 * w) / (a2 - std::cos(2.0 * w)));
}

}  // namespace

TEST_CASE("disk mesh: structure and boundary placement") {
    const DiskMesh m = DiskMesh::structured(2);
    CHECK(m.rings == 16);
    CHECK(m.sectors == 64);
    CHECK(m.vertex_count() == 1 + 16 * 64);

    int boundary_count = 0;
    for (int v = 0; v < m.vertex_count(); ++v) {
        CHECK(std::abs(m.vertices[v]) <= 1.0 + 1e-12);
        if (m.on_boundary[v]) {
            ++boundary_count;
            CHECK(std::abs(std::abs(m.vertices[v]) - 1.0) <= 1e-12);
        }
    }
    CHECK(boundary_count == 64);

    const int v = m.boundary_vertex_near(2.13);
    CHECK(m.on_boundary[v]);
    CHECK(std::abs(wrap_angle(std::arg(m.vertices[v]) - 2.13)) <= pi / 64);
    CHECK(m.on_boundary[m.boundary_vertex_near(-2.9)]);

    CHECK_THROWS_AS((void)DiskMesh::structured(11), std::invalid_argument);
}

TEST_CASE("geodesic distance: Euclidean oracles on the flat metric") {
    const ConformalMetric flat = [](complexd) { return 1.0; };
    const DiskMesh mesh = DiskMesh::structured(4);

    const int q1 = mesh.boundary_vertex_near(0.0);
    const int qm1 = mesh.boundary_vertex_near(pi);
    const int qi = mesh.boundary_vertex_near(0.5 * pi);

    const auto d_diam = geodesic_distance(mesh, flat, q1, qm1);
    CHECK(d_diam.distance == doctest::Approx(2.0).epsilon(0.01));
    const auto d_chord = geodesic_distance(mesh, flat, q1, qi);
    CHECK(d_chord.distance == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));

    // Successive refinements agree within 2%.
    const DiskMesh coarse = DiskMesh::structured(3);
    const auto d_coarse = geodesic_distance(coarse, flat, coarse.boundary_vertex_near(0.0),
                                            coarse.boundary_vertex_near(pi));
    CHECK(std::abs(d_coarse.distance - d_diam.distance) <= 0.02 * d_diam.distance);

    // Symmetry of the endpoints.
    const auto d_rev = geodesic_distance(mesh, flat, qm1, q1);
    CHECK(std::abs(d_rev.distance - d_diam.distance) <= 1e-9);

    // Triangle inequality on sampled triples (up to quadrature slack).
    const int qa = mesh.boundary_vertex_near(2.4);
    const double dab = geodesic_distance(mesh, flat, q1, qa).distance;
    const double dbc = geodesic_distance(mesh, flat, qa, qm1).distance;
    CHECK(d_diam.distance <= dab + dbc + 1e-9);

    // The shortcut pass straightens the polyline: turning stays small.
    CHECK(path_turning(d_diam.path) <= 0.5);
    CHECK(path_turning(d_chord.path) <= 0.5);

    CHECK_THROWS_AS((void)geodesic_distance(mesh, flat, -1, q1), std::invalid_argument);
}

TEST_CASE("geodesic distance: Lipschitz bound in boundary arc length") {
    const ConformalMetric flat = [](complexd) { return 1.0; };
    const DiskMesh mesh = DiskMesh::structured(4);
    const int q = mesh.boundary_vertex_near(0.0);
    const int qp = mesh.boundary_vertex_near(pi);

    // Moving one endpoint along the boundary changes the distance by at
    // most the metric length of the boundary arc it slides through. The
    // flat factor has length 2 pi, so the constant is |arc| itself.
    const double base = geodesic_distance(mesh, flat, q, qp).distance;
    for (double shift : {0.2, 0.45, 0.8}) {
        const int qs = mesh.boundary_vertex_near(pi - shift);
        const double moved = geodesic_distance(mesh, flat, q, qs).distance;
        const double arc =
            std::abs(wrap_angle(std::arg(mesh.vertices[qp]) - std::arg(mesh.vertices[qs])));
        CHECK(std::abs(moved - base) <= 1.05 * arc + 0.02);
    }
}

TEST_CASE("richardson extrapolation of a linear trend is exact") {
    CHECK(richardson_limit({0.1, 0.05}, {3.2, 3.1}) == doctest::Approx(3.0).epsilon(1e-12));
    const std::vector<double> h{0.3, 0.1, 0.03};
    std::vector<double> v;
    for (double x : h) v.push_back(7.5 - 4.0 * x);
    CHECK(richardson_limit(h, v) == doctest::Approx(7.5).epsilon(1e-12));
    CHECK_THROWS_AS((void)richardson_limit({0.1}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)richardson_limit({0.1, 0.1}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("family spec validation") {
    FamilySpec bad;
    bad.kind = FamilySpec::Kind::moebius_pullback;
    bad.schedule = {0.5, 0.5};
    CHECK_THROWS_AS((void)generate_family(bad), std::invalid_argument);
    bad.schedule = {0.5, 1.2};
    CHECK_THROWS_AS((void)generate_family(bad), std::invalid_argument);

    FamilySpec tp;
    tp.kind = FamilySpec::Kind::two_pole;
    tp.schedule = {0.1, 0.3};  // must decrease
    CHECK_THROWS_AS((void)generate_family(tp), std::invalid_argument);
    tp.schedule = {0.3, -0.1};
    CHECK_THROWS_AS((void)generate_family(tp), std::invalid_argument);

    FamilySpec cu;
    cu.kind = FamilySpec::Kind::custom;
    CHECK_THROWS_AS((void)generate_family(cu), std::invalid_argument);
}

TEST_CASE("pullback of the flat factor at t = 0 is flat") {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::moebius_pullback;
    spec.schedule = {0.0};
    spec.n0 = 64;
    const auto fam = generate_family(spec);
    REQUIRE(fam.size() == 1);
    CHECK(fam[0].factor.lambda.sup_abs() <= 1e-13);
    CHECK(fam[0].residual_sup <= 1e-10);
}

TEST_CASE("single custom factor: flat member, no pinch report") {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::custom;
    spec.custom_factors.push_back(ConformalFactor(GridField::zeros(64)));
    const auto fam = generate_family(spec);
    REQUIRE(fam.size() == 1);
    CHECK((fam[0].kappa.kappa.v[0].real()) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fam[0].speed(complexd(0.3, 0.1)) == doctest::Approx(1.0).epsilon(1e-9));

    const DiskMesh mesh = DiskMesh::structured(2);
    CHECK(detect_pinched(fam, mesh, 4, 1.0).empty());
}

TEST_CASE("two-pole family: normalization, certificates, quantized masses") {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::two_pole;
    spec.schedule = {0.3, 0.1, 0.03};
    const auto fam = generate_family(spec);
    REQUIRE(fam.size() == 3);

    std::vector<double> mass_top, mass_bot;
    for (size_t k = 0; k < fam.size(); ++k) {
        const auto& m = fam[k];
        // Each member is a genuine factor: boundary length 2 pi and an
        // internally consistent curvature.
        CHECK(m.factor.length == doctest::Approx(two_pi).epsilon(1e-10));
        CHECK(m.residual_sup <= 1e-6);

        // Scale against the closed form through elliptic integrals.
        const double a2 = std::pow(1.0 + m.param, 2);
        const double c_measured = std::exp(m.factor.lambda.v[0].real()) * (1.0 + a2);
        CHECK(c_measured == doctest::Approx(two_pole_scale(m.param)).epsilon(1e-10));

        // Metric callback restricted to the boundary equals e^lambda.
        const double th = 0.77;
        const double expected =
            c_measured / std::abs(std::exp(complexd(0.0, 2.0 * th)) + a2);
        CHECK(m.speed(std::polar(1.0, th)) == doctest::Approx(expected).epsilon(1e-12));

        if (k > 0) CHECK(m.mean_lambda < fam[k - 1].mean_lambda);

        const auto prof = mass_profile(m.factor, m.kappa, {0.5 * pi, -0.5 * pi}, 0.4);
        prof.check_total(1e-8);
        mass_top.push_back(prof.arcs[0].mass);
        mass_bot.push_back(prof.arcs[1].mass);

        // Quadrature against the exact telescoping antiderivative.
        CHECK(prof.arcs[0].mass ==
              doctest::Approx(two_pole_arc_mass(m.param, 0.4)).epsilon(1e-9));
    }

    // Monotone quantization trend toward pi at both poles, and the
    // extrapolated limits land within 2%.
    for (size_t k = 1; k < mass_top.size(); ++k) {
        CHECK(mass_top[k] > mass_top[k - 1]);
        CHECK(mass_bot[k] > mass_bot[k - 1]);
    }
    const double lim_top = richardson_limit(spec.schedule, mass_top);
    const double lim_bot = richardson_limit(spec.schedule, mass_bot);
    CHECK(std::abs(lim_top - pi) <= 0.02 * pi);
    CHECK(std::abs(lim_bot - pi) <= 0.02 * pi);

    // Two-point limit profile: error decreases along the schedule.
    std::vector<double> errs;
    for (const auto& m : fam)
        errs.push_back(
            limit_profile_error(m.factor, BlowupCase::two_point, {0.5 * pi, -0.5 * pi}, 0.4));
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
}

TEST_CASE("two-pole family: geodesic gap closes and the pinch is detected") {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::two_pole;
    spec.schedule = {0.3, 0.1, 0.03};
    const auto fam = generate_family(spec);
    const DiskMesh mesh = DiskMesh::structured(4);

    // The straight segment between the arc midpoints crosses the neck
    // between the poles; the metric grows off the real axis, so the
    // segment is the exact geodesic and its length integrates in closed
    // form to (2 c / a) atan(1 / a).
    const double a = 1.0 + fam[0].param;
    const double exact = 2.0 * two_pole_scale(fam[0].param) / a * std::atan(1.0 / a);
    const int q1 = mesh.boundary_vertex_near(0.0);
    const int qm1 = mesh.boundary_vertex_near(pi);
    const auto d0 = geodesic_distance(mesh, fam[0].speed, q1, qm1);
    CHECK(d0.distance == doctest::Approx(exact).epsilon(0.02));

    const auto pairs = detect_pinched(fam, mesh, 4, 1.2);
    REQUIRE(pairs.size() == 1);
    const auto& pp = pairs[0];
    CHECK(pp.pinched);
    CHECK(pp.frac_a == doctest::Approx(0.0));
    CHECK(pp.frac_b == doctest::Approx(0.5));
    REQUIRE(pp.distances.size() == 3);
    CHECK(pp.distances[1] < pp.distances[0]);
    CHECK(pp.distances[2] < pp.distances[1]);
    CHECK(pp.distances[2] <= 0.7 * pp.distances[0]);
    CHECK(std::abs(pp.tangent_angle - pi) <= 0.05);
}

TEST_CASE("pullback family: concentration without pinching") {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::moebius_pullback;
    spec.schedule = {0.5, 0.7, 0.9};
    spec.n0 = 256;
    const auto fam = generate_family(spec);
    REQUIRE(fam.size() == 3);

    std::vector<double> masses;
    for (const auto& m : fam) {
        // Pulled back flat factor keeps unit curvature; its mean is the
        // exact automorphism value log(1 - t^2).
        GridField dev = m.kappa.kappa;
        for (auto& z : dev.v) z -= 1.0;
        CHECK(dev.sup_abs() <= 1e-8);
        CHECK(m.mean_lambda == doctest::Approx(std::log(1.0 - m.param * m.param)).epsilon(1e-11));
        CHECK(m.residual_sup <= 1e-6);

        const auto prof = mass_profile(m.factor, m.kappa, {0.0}, 0.4);
        prof.check_total(1e-8);
        masses.push_back(prof.arcs[0].mass);
    }
    CHECK(masses[1] > masses[0]);
    CHECK(masses[2] > masses[1]);

    // The one-point profile sharpens along the schedule.
    std::vector<double> errs;
    for (const auto& m : fam)
        errs.push_back(limit_profile_error(m.factor, BlowupCase::one_point, {0.0}, 0.3));
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);

    // Mass concentrates at one point while the curve stays a round
    // circle: no pair of boundary points pinches.
    const DiskMesh mesh = DiskMesh::structured(3);
    CHECK(detect_pinched(fam, mesh, 4, 2.0).empty());
}

TEST_CASE("mass profile: validation and flat-factor arcs") {
    const ConformalFactor flat(GridField::zeros(128));
    const PrescribedCurvature one = PrescribedCurvature::constant(128, 1.0);
    const auto prof = mass_profile(flat, one, {1.0}, 0.25);
    CHECK(prof.arcs[0].mass == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(prof.arcs[0].absmass == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(prof.total == doctest::Approx(two_pi).epsilon(1e-13));

    CHECK_THROWS_AS((void)mass_profile(flat, one, {0.0, 0.3}, 0.2), std::invalid_argument);
    CHECK_THROWS_AS((void)mass_profile(flat, one, {0.0}, -0.1), std::invalid_argument);
    // Wrap-around overlap is also caught.
    CHECK_THROWS_AS((void)mass_profile(flat, one, {3.1, -3.1}, 0.2), std::invalid_argument);
}

TEST_CASE("limit profile: sampled limit formula returns quadrature-level error") {
    // Feed the exact one-point limit shape back in. Away from the excluded
    // arc the only discrepancy is the sampled mean of the log singularity,
    // which shrinks like h log(1/h).
    auto sampled_error = [](int n) {
        GridField g = GridField::from_function(n, [](double t) {
            const double d = 2.0 * (1.0 - std::cos(t));
            return d < 1e-9 ? 0.0 : -std::log(d);
        });
        return limit_profile_error(ConformalFactor(g), BlowupCase::one_point, {0.0}, 0.5);
    };
    const double e_coarse = sampled_error(512);
    const double e_fine = sampled_error(4096);
    CHECK(e_coarse <= 0.05);
    CHECK(e_fine < 0.25 * e_coarse);

    const ConformalFactor flat(GridField::zeros(64));
    CHECK_THROWS_AS((void)limit_profile_error(flat, BlowupCase::one_point, {0.0}, -1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)limit_profile_error(flat, BlowupCase::two_point, {0.0}, 0.3),
                    std::invalid_argument);
}

TEST_CASE("factor-sum family: quantized atom over a convergent smooth part") {
    // A solved non-constant curvature supplies the smooth background; the
    // two-pole tail supplies the concentration. The absolutely continuous
    // part contributes nothing in the shrinking-arc limit, so the
    // extrapolated arc mass approaches pi as the arc radius drops.
    const int nb = 256;
    const PrescribedCurvature kb(GridField::from_function(
        nb, [](double t) { return 1.0 + 0.1 * std::cos(2.0 * t); }));
    const SolveReport base = solve(kb);
    REQUIRE(base.converged);

    FamilySpec spec;
    spec.kind = FamilySpec::Kind::two_pole;
    spec.schedule = {0.3, 0.1, 0.03, 0.01};
    const auto tails = generate_family(spec);

    FamilySpec sum;
    sum.kind = FamilySpec::Kind::custom;
    for (const auto& tp : tails) {
        GridField lam = resample(base.solution.lambda, tp.factor.n());
        for (int j = 0; j < lam.n(); ++j) lam.v[j] += tp.factor.lambda.v[j];
        sum.custom_factors.push_back(ConformalFactor(lam));
    }
    const auto fam = generate_family(sum);

    std::vector<double> limits;
    for (double w : {0.4, 0.2, 0.1}) {
        std::vector<double> masses;
        for (const auto& m : fam) {
            const auto prof = mass_profile(m.factor, m.kappa, {0.5 * pi}, w);
            prof.check_total(1e-8);
            masses.push_back(prof.arcs[0].mass);
        }
        limits.push_back(richardson_limit(spec.schedule, masses));
    }
    // Shrinking the arc sheds the smooth contribution; at radius 0.1 the
    // limit is within 3% of the quantized value.
    CHECK(std::abs(limits[2] - pi) < std::abs(limits[0] - pi));
    CHECK(std::abs(limits[2] - pi) <= 0.03 * pi);
}

TEST_CASE("corner profile: parallel arcs at the full split") {
    const SCProfile p(pi);
    CHECK(std::abs(p.dmap(complexd(0.0, 0.0)) - complexd(1.0, 0.0)) <= 1e-12);

    // V'(z) = 1/(z^2 + 1): boundary tangents are +-i on the two arcs.
    for (double th : {0.3, 1.2, -0.7}) {
        const complexd tau = p.boundary_tangent(th);
        CHECK(std::abs(tau / std::abs(tau) - complexd(0.0, 1.0)) <= 1e-6);
    }
    for (double th : {2.2, pi - 0.4, -2.6}) {
        const complexd tau = p.boundary_tangent(th);
        CHECK(std::abs(tau / std::abs(tau) + complexd(0.0, 1.0)) <= 1e-6);
    }

    // The path integral reproduces arctan on the disk.
    for (complexd z : {complexd(0.5, 0.0), complexd(0.0, 0.5), complexd(-0.4, 0.3),
                       std::polar(1.0, 0.2)}) {
        const complexd v = p.map(z);
        const complexd ref = std::atan(z);
        CHECK(std::abs(v - ref) <= 1e-9);
    }

    CHECK_THROWS_AS((void)p.dmap(complexd(0.0, 1.0 - 1e-9)), std::invalid_argument);
    CHECK_THROWS_AS((void)SCProfile(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)SCProfile(3.5), std::invalid_argument);
}

TEST_CASE("corner profile: boundary branches meet at pi minus the split") {
    for (double alpha : {0.5 * pi, 0.3 * pi, 0.8 * pi}) {
        const SCProfile p(alpha);
        CHECK(std::abs(sc_meeting_angle(p) - (pi - alpha)) <= 1e-3);
    }
}

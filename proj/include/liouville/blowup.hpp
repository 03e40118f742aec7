#pragma once

// Concentration families and their diagnostics: curvature-mass profiles
// over shrinking arcs, limit profiles away from the concentration points,
// conformal geodesic distances on a disk mesh, pinched-pair detection, and
// the two-point corner profile with prescribed concentration split.
//
// Family kinds:
//   moebius_pullback : factor of Phi o M_t with M_t the automorphism of
//                      pole t*a; concentrates 2pi at one boundary point.
//   two_pole         : |Phi'(z)| = c / |z^2 + (1+d)^2|, poles at +-i(1+d)
//                      just outside the disk; concentrates pi at each of
//                      +-i as d drops to 0.
//   custom           : explicit factor list.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "liouville/conformal.hpp"
#include "liouville/curve.hpp"
#include "liouville/disk_mesh.hpp"
#include "liouville/grid_field.hpp"
#include "liouville/moebius.hpp"
#include "liouville/solver.hpp"
#include "liouville/spectral_ops.hpp"

namespace liouville {

// ---------------------------------------------------------------------------
// Family generation
// ---------------------------------------------------------------------------

struct FamilySpec {
    enum class Kind { moebius_pullback, two_pole, custom };
    Kind kind = Kind::moebius_pullback;
    std::vector<double> schedule;            // t_k increasing, or delta_k decreasing
    complexd direction{1.0, 0.0};            // unit pole direction for moebius_pullback
    ConformalFactor base;                    // empty means the flat factor
    std::vector<ConformalFactor> custom_factors;
    int n0 = 512;                            // starting grid, escalated per member
    int n_max = 1 << 17;

    void validate() const {
        if (kind == Kind::custom) {
            if (custom_factors.empty())
                throw std::invalid_argument("custom family needs at least one factor");
            return;
        }
        if (schedule.empty()) throw std::invalid_argument("family schedule is empty");
        const bool increasing = kind == Kind::moebius_pullback;
        for (size_t k = 0; k < schedule.size(); ++k) {
            const double v = schedule[k];
            if (kind == Kind::moebius_pullback &&
                !(v >= 0.0 && v * std::abs(direction) < 1.0))
                throw std::invalid_argument("pullback pole leaves the disk");
            if (kind == Kind::two_pole && !(v > 0.0))
                throw std::invalid_argument("pole offset must be positive");
            if (k > 0 && !(increasing ? schedule[k] > schedule[k - 1]
                                      : schedule[k] < schedule[k - 1]))
                throw std::invalid_argument("schedule must be strictly monotone");
        }
    }
};

struct FamilyMember {
    double param = 0.0;
    ConformalFactor factor;
    PrescribedCurvature kappa;
    ConformalMetric speed;      // |Phi'(z)| on the closed disk
    double residual_sup = 0.0;  // internal-consistency certificate
    double mean_lambda = 0.0;
};

namespace detail {

// Sample a closed-form function at doubling resolution until the spectral
// tail passes the alias guard.
[[nodiscard]] inline GridField resolve_function(const std::function<double(double)>& f,
                                                int n0, int n_max) {
    int n = std::max(n0, 8);
    for (;;) {
        GridField g = GridField::from_function(n, f);
        const double tail = analyze(g).tail_energy_fraction(n / 4);
        if (tail < 1e-16 || n >= n_max) {
            if (tail >= 1e-10)
                throw aliasing_error("field unresolved at the size cap; needs n > " +
                                     std::to_string(n_max));
            return g;
        }
        n *= 2;
    }
}

[[nodiscard]] inline FamilyMember finish_member(double param, ConformalFactor cf,
                                                ConformalMetric speed) {
    FamilyMember m;
    m.param = param;
    m.kappa = PrescribedCurvature(curvature_from_factor(cf));
    m.factor = std::move(cf);
    m.speed = std::move(speed);
    m.residual_sup = residual(m.factor, m.kappa).sup_abs();
    m.mean_lambda = mean(m.factor.lambda).real();
    return m;
}

}  // namespace detail

[[nodiscard]] inline std::vector<FamilyMember> generate_family(const FamilySpec& spec) {
    spec.validate();
    std::vector<FamilyMember> out;

    if (spec.kind == FamilySpec::Kind::custom) {
        for (const auto& cf : spec.custom_factors) {
            const DiskImmersion im = immersion_from_factor(cf);
            out.push_back(detail::finish_member(
                0.0, cf, [im](complexd z) { return std::abs(im.dmap(z)); }));
        }
        return out;
    }

    if (spec.kind == FamilySpec::Kind::moebius_pullback) {
        const bool flat_base = spec.base.n() == 0;
        const ConformalFactor base =
            flat_base ? ConformalFactor(GridField::zeros(spec.n0)) : spec.base;
        // Base speed |Phi'| for the metric; the pullback multiplies it by
        // the automorphism derivative.
        std::shared_ptr<DiskImmersion> base_im;
        if (!flat_base) base_im = std::make_shared<DiskImmersion>(immersion_from_factor(base));
        for (double t : spec.schedule) {
            const MoebiusMap m(t * spec.direction, 0.0);
            ConformalFactor cf = moebius_pullback(base, m, spec.n_max);
            ConformalMetric speed = [m, base_im](complexd z) {
                const double stretch = std::abs(m.deriv(z));
                return base_im ? stretch * std::abs(base_im->dmap(m.apply(z))) : stretch;
            };
            out.push_back(detail::finish_member(t, std::move(cf), std::move(speed)));
        }
        return out;
    }

    // two_pole: lambda_d = log c_d - log |e^{2 i theta} + (1+d)^2| with c_d
    // normalizing the boundary length to 2 pi.
    for (double d : spec.schedule) {
        const double a2 = (1.0 + d) * (1.0 + d);
        GridField raw = detail::resolve_function(
            [a2](double t) {
                const complexd w = std::exp(complexd(0.0, 2.0 * t)) + a2;
                return -std::log(std::abs(w));
            },
            spec.n0, spec.n_max);
        GridField e = raw;
        for (auto& z : e.v) z = std::exp(z.real());
        const double cd = two_pi / integrate_real(e);
        for (auto& z : raw.v) z += std::log(cd);
        ConformalMetric speed = [cd, a2](complexd z) { return cd / std::abs(z * z + a2); };
        out.push_back(detail::finish_member(d, ConformalFactor(raw), std::move(speed)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mass profiles over arcs
// ---------------------------------------------------------------------------

struct ArcMass {
    double center = 0.0;
    double delta = 0.0;
    double mass = 0.0;      // int_arc kappa e^lambda
    double absmass = 0.0;   // int_arc |kappa| e^lambda
};

struct MassProfile {
    std::vector<ArcMass> arcs;
    double total = 0.0;

    void check_total(double tol = 1e-8) const {
        if (std::abs(total - two_pi) > tol)
            throw numeric_error("curvature mass drifted from 2 pi by " +
                                std::to_string(total - two_pi));
    }
};

[[nodiscard]] inline MassProfile mass_profile(const ConformalFactor& lam,
                                              const PrescribedCurvature& kappa,
                                              const std::vector<double>& centers,
                                              double delta) {
    if (lam.n() != kappa.n()) throw std::invalid_argument("mass_profile: grid mismatch");
    if (!(delta > 0.0 && delta < pi)) throw std::invalid_argument("arc radius out of range");
    for (size_t i = 0; i < centers.size(); ++i)
        for (size_t j = i + 1; j < centers.size(); ++j) {
            const double gap = std::abs(wrap_angle(centers[i] - centers[j]));
            if (gap < 2.0 * delta) throw std::invalid_argument("mass arcs overlap");
        }

    const SpectralField ls = analyze(lam.lambda);
    const SpectralField ks = analyze(kappa.kappa);
    auto density = [&](double t) {
        const double k = eval_at(ks, t).real();
        const double el = std::exp(eval_at(ls, t).real());
        return std::pair<double, double>{k * el, std::abs(k) * el};
    };

    MassProfile prof;
    const int panels = 512;
    for (double c : centers) {
        ArcMass am;
        am.center = c;
        am.delta = delta;
        double acc = 0.0, aacc = 0.0;
        for (int k = 0; k <= 2 * panels; ++k) {
            const double t = c - delta + delta * double(k) / panels;
            const auto [d, ad] = density(t);
            const double w = (k == 0 || k == 2 * panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            acc += w * d;
            aacc += w * ad;
        }
        am.mass = acc * delta / (3.0 * panels);
        am.absmass = aacc * delta / (3.0 * panels);
        prof.arcs.push_back(am);
    }

    GridField prod = lam.lambda;
    for (int j = 0; j < prod.n(); ++j)
        prod.v[j] = kappa.kappa.v[j].real() * std::exp(lam.lambda.v[j].real());
    prof.total = integrate_real(prod);
    return prof;
}

// Two-term extrapolation to h = 0 from the last two schedule points,
// assuming first-order dependence on h.
[[nodiscard]] inline double richardson_limit(const std::vector<double>& h,
                                             const std::vector<double>& v) {
    if (h.size() != v.size() || h.size() < 2)
        throw std::invalid_argument("extrapolation needs two schedule points");
    const size_t n = h.size();
    const double h0 = h[n - 2], h1 = h[n - 1];
    if (h0 == h1) throw std::invalid_argument("degenerate extrapolation nodes");
    return (v[n - 1] * h0 - v[n - 2] * h1) / (h0 - h1);
}

// ---------------------------------------------------------------------------
// Limit profiles away from the concentration points
// ---------------------------------------------------------------------------

enum class BlowupCase { one_point, two_point };

// sup over the circle minus exclusion arcs of |(lambda - mean) - v_inf| with
//   one point:  v_inf = -log(2(1 - cos(theta - p)))
//   two point:  v_inf = -(1/2) sum_j log(2(1 - cos(theta - p_j)))
[[nodiscard]] inline double limit_profile_error(const ConformalFactor& lam, BlowupCase bc,
                                                const std::vector<double>& points,
                                                double exclusion) {
    if (!(exclusion > 0.0)) throw std::invalid_argument("exclusion radius must be positive");
    const size_t want = bc == BlowupCase::one_point ? 1 : 2;
    if (points.size() != want)
        throw std::invalid_argument("wrong number of concentration points");
    const double lbar = mean(lam.lambda).real();
    const double w = bc == BlowupCase::one_point ? 1.0 : 0.5;

    double sup = 0.0;
    for (int j = 0; j < lam.n(); ++j) {
        const double t = lam.lambda.theta(j);
        bool excluded = false;
        double vinf = 0.0;
        for (double p : points) {
            const double d = wrap_angle(t - p);
            if (std::abs(d) < exclusion) {
                excluded = true;
                break;
            }
            vinf -= w * std::log(2.0 * (1.0 - std::cos(d)));
        }
        if (excluded) continue;
        sup = std::max(sup, std::abs(lam.lambda.v[j].real() - lbar - vinf));
    }
    return sup;
}

// ---------------------------------------------------------------------------
// Pinched-pair detection
// ---------------------------------------------------------------------------

struct PinchPair {
    double frac_a = 0.0, frac_b = 0.0;     // arc-length fractions along the curve
    std::vector<double> distances;          // geodesic distance per family member
    double tangent_angle = 0.0;             // |angle between tangents|, last member
    bool pinched = false;
};

// Candidate boundary points are fixed fractions of total arc length, mapped
// to conformal angles per member through the arc-length map. Fixing them in
// the conformal angle instead would be wrong: a pullback family drags every
// conformal point toward the concentration target, so all conformal pairs
// would spuriously pinch even though the curve stays a round circle.
// Only pairs passing the decision rule (strictly decreasing distance, final
// value at most 0.7 of the first and below the threshold) are returned.
[[nodiscard]] inline std::vector<PinchPair> detect_pinched(
    const std::vector<FamilyMember>& members, const DiskMesh& mesh, int n_candidates,
    double threshold) {
    std::vector<PinchPair> out;
    if (members.size() < 3 || n_candidates < 2) return out;
    const double min_sep = 0.1;  // arc-length fraction; adjacent samples are not pinch pairs

    std::vector<std::vector<double>> angles(members.size());
    for (size_t k = 0; k < members.size(); ++k) {
        const ArcLengthMap arc(members[k].factor);
        for (int c = 0; c < n_candidates; ++c)
            angles[k].push_back(arc.theta_of_s(arc.length * c / n_candidates));
    }
    const SpectralField rho_s = analyze(hilbert(members.back().factor.lambda));

    for (int i = 0; i < n_candidates; ++i) {
        for (int j = i + 1; j < n_candidates; ++j) {
            const double sep = std::min(std::abs(double(j - i)) / n_candidates,
                                        1.0 - std::abs(double(j - i)) / n_candidates);
            if (sep < min_sep) continue;
            PinchPair pp;
            pp.frac_a = double(i) / n_candidates;
            pp.frac_b = double(j) / n_candidates;
            for (size_t k = 0; k < members.size(); ++k) {
                const int va = mesh.boundary_vertex_near(angles[k][i]);
                const int vb = mesh.boundary_vertex_near(angles[k][j]);
                pp.distances.push_back(
                    geodesic_distance(mesh, members[k].speed, va, vb).distance);
            }
            bool monotone = true;
            for (size_t k = 1; k < pp.distances.size(); ++k)
                if (pp.distances[k] >= pp.distances[k - 1]) monotone = false;
            const double first = pp.distances.front(), last = pp.distances.back();
            pp.pinched = monotone && last <= 0.7 * first && last < threshold;
            if (!pp.pinched) continue;

            // Tangent directions at the finest member: the boundary tangent
            // angle is theta + pi/2 + conjugate(lambda).
            const double ta =
                angles.back()[i] + 0.5 * pi + eval_at(rho_s, angles.back()[i]).real();
            const double tb =
                angles.back()[j] + 0.5 * pi + eval_at(rho_s, angles.back()[j]).real();
            pp.tangent_angle = std::abs(wrap_angle(ta - tb));
            out.push_back(std::move(pp));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Corner profile with prescribed concentration split
// ---------------------------------------------------------------------------

// V'(z) = (z - i)^{-alpha/pi} (z + i)^{-(2 - alpha/pi)} with branch cuts on
// the outward rays from +-i, so the closed disk minus the two points stays
// simply sliced. alpha = pi gives two parallel boundary lines; smaller
// alpha makes the two boundary branches meet at angle pi - alpha.
struct SCProfile {
    double alpha = pi;

    SCProfile() = default;
    explicit SCProfile(double a) : alpha(a) {
        if (!(alpha > 0.0 && alpha <= pi))
            throw std::invalid_argument("concentration split must lie in (0, pi]");
    }

    [[nodiscard]] complexd dmap(complexd z) const {
        check_point(z);
        const double bi = alpha / pi, bm = 2.0 - alpha / pi;
        // (z - i)^bi with argument in (-3pi/2, pi/2]: cut along the ray
        // from i pointing away from the disk.
        const complexd wi = z - complexd(0.0, 1.0);
        double ai = std::arg(wi);
        if (ai > 0.5 * pi) ai -= two_pi;
        // (z + i)^bm with argument in (-pi/2, 3pi/2].
        const complexd wm = z + complexd(0.0, 1.0);
        double am = std::arg(wm);
        if (am < -0.5 * pi) am += two_pi;
        const complexd p1 = std::exp(bi * complexd(std::log(std::abs(wi)), ai));
        const complexd p2 = std::exp(bm * complexd(std::log(std::abs(wm)), am));
        return 1.0 / (p1 * p2);
    }

    // Path integral of dmap along the straight segment from 0, by adaptive
    // Simpson on the parameter.
    [[nodiscard]] complexd map(complexd z) const {
        check_point(z);
        auto f = [&](double t) { return dmap(t * z) * z; };
        return adaptive(f, 0.0, 1.0, f(0.0), f(0.5), f(1.0), 1e-11, 30);
    }

    [[nodiscard]] complexd boundary_tangent(double theta) const {
        const complexd z = std::polar(1.0, theta);
        return complexd(0.0, 1.0) * z * dmap(z);
    }

    static void check_point(complexd z) {
        if (std::abs(z - complexd(0.0, 1.0)) < 1e-6 ||
            std::abs(z + complexd(0.0, 1.0)) < 1e-6)
            throw std::invalid_argument("evaluation point too close to a corner");
    }

   private:
    template <class F>
    static complexd adaptive(F&& f, double a, double b, complexd fa, complexd fm, complexd fb,
                             double tol, int depth) {
        const double m = 0.5 * (a + b);
        const complexd flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
        const complexd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        const complexd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const complexd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return adaptive(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
               adaptive(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
    }
};

// Interior angle between the two boundary branches meeting at the corner
// near +i, measured from tangents eps away on each side.
[[nodiscard]] inline double sc_meeting_angle(const SCProfile& p, double eps = 1e-4) {
    const complexd t_minus = p.boundary_tangent(0.5 * pi - eps);   // arriving branch
    const complexd t_plus = p.boundary_tangent(0.5 * pi + eps);    // departing branch
    return std::abs(wrap_angle(std::arg(t_plus) - std::arg(-t_minus)));
}

}  // namespace liouville

#pragma once

// Stereographic dictionary between half-Laplacian fields on the real line
// and conformal factors on the circle. The projection Pi(theta) =
// tan(pi/4 - theta/2) carries the circle minus -i onto the line, with the
// exact weight identity 1 + sin(theta) = 2/(1 + x^2).

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "liouville/conformal.hpp"
#include "liouville/grid_field.hpp"
#include "liouville/line_field.hpp"
#include "liouville/spectral_ops.hpp"

namespace liouville {

// ---------------------------------------------------------------------------
// Projection maps
// ---------------------------------------------------------------------------

[[nodiscard]] inline double stereo_x(double theta) {
    return std::tan(0.25 * pi - 0.5 * theta);
}

[[nodiscard]] inline double stereo_theta(double x) { return 0.5 * pi - 2.0 * std::atan(x); }

// 1 + sin(theta) evaluated through the projection, stable near the pole.
[[nodiscard]] inline double stereo_weight(double theta) {
    const double x = stereo_x(theta);
    return std::isfinite(x) ? 2.0 / (1.0 + x * x) : 0.0;
}

// ---------------------------------------------------------------------------
// Line to circle
// ---------------------------------------------------------------------------

// lambda(theta) = u(x(theta)) - log(1 + sin theta). Where no u data exists
// (|x| beyond the crossover, or the projection pole itself) the tail model
// c1 log|x| + c2 substitutes, in the pole-stable form
// (c1 + 2) log|x| + c2 - log 2 + log(1 + 1/x^2) with |x| capped half a
// grid cell away from the pole.
[[nodiscard]] inline ConformalFactor stereo_to_circle(
    const std::function<double(double)>& u, double c1, double c2, int n,
    double crossover = std::numeric_limits<double>::infinity()) {
    const double x_cap = 1.0 / std::tan(0.5 * pi / n);
    auto lam = [&](double theta) {
        const double x = stereo_x(theta);
        if (std::isfinite(x) && std::abs(x) <= crossover)
            return u(x) + std::log1p(x * x) - std::log(2.0);
        // Only the divergent part is capped at the half-cell coordinate; the
        // curvature correction log1p(1/x^2) keeps the true x so tail fields
        // with unit mass (c1 = -2) hit their exact pole value.
        const double ax = std::isfinite(x) ? std::min(std::abs(x), x_cap) : x_cap;
        const double correction = std::isfinite(x) ? std::log1p(1.0 / (x * x)) : 0.0;
        return (c1 + 2.0) * std::log(ax) + c2 - std::log(2.0) + correction;
    };
    return ConformalFactor(GridField::from_function(n, lam));
}

[[nodiscard]] inline ConformalFactor stereo_to_circle(const LineField& f, int n) {
    f.validate();
    const double h = f.spacing();
    // Four-point Lagrange interpolation on the uniform grid.
    auto ueval = [&f, h](double xq) {
        int j0 = static_cast<int>(std::floor((xq + f.R) / h)) - 1;
        j0 = std::min(std::max(j0, 0), f.m() - 4);
        const double t = (xq - f.x(j0)) / h;
        const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
        const double w1 = t * (t - 2.0) * (t - 3.0) * 0.5;
        const double w2 = -t * (t - 1.0) * (t - 3.0) * 0.5;
        const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
        return w0 * f.u[j0] + w1 * f.u[j0 + 1] + w2 * f.u[j0 + 2] + w3 * f.u[j0 + 3];
    };
    return stereo_to_circle(ueval, f.c1, f.c2, n, f.R - 2.0 * h);
}

// ---------------------------------------------------------------------------
// Circle to line
// ---------------------------------------------------------------------------

// u(x) = lambda(theta(x)) + log(2/(1+x^2)); samples come from the spectral
// evaluation of lambda, so band-limited factors transfer exactly.
[[nodiscard]] inline LineField circle_to_stereo(const ConformalFactor& cf, double R = 100.0,
                                                int M = 1 << 14) {
    const SpectralField ls = analyze(cf.lambda);
    LineField out;
    out.R = R;
    out.u.resize(M);
    for (int j = 0; j < M; ++j) {
        const double xj = out.x(j);
        out.u[j] = eval_at(ls, stereo_theta(xj)).real() + std::log(2.0) - std::log1p(xj * xj);
    }
    out.c1 = -2.0;
    out.c2 = eval_at(ls, 1.5 * pi).real() + std::log(2.0);
    return out;
}

// ---------------------------------------------------------------------------
// Transfer diagnostics
// ---------------------------------------------------------------------------

// 2 pi minus the full-line integral of (-Delta)^{1/2} u. By the exact mean
// identities this equals the curvature mass (-Delta)^{1/2} lambda + 1 of
// the arc |theta + pi/2| < delta_ex excised by the projection.
[[nodiscard]] inline double mass_defect(const ConformalFactor& cf, double delta_ex = 0.1,
                                        int panels = 256) {
    if (!(delta_ex > 0.0 && delta_ex < pi))
        throw std::invalid_argument("excision arc must lie in (0, pi)");
    if (panels < 8) throw std::invalid_argument("too few quadrature panels");
    const SpectralField hs = analyze(half_laplacian(cf.lambda));
    const double a = 1.5 * pi - delta_ex, w = 2.0 * delta_ex;
    double acc = 0.0;
    for (int k = 0; k <= 2 * panels; ++k) {
        const double t = a + w * k / (2.0 * panels);
        const double v = eval_at(hs, t).real() + 1.0;
        acc += v * ((k == 0 || k == 2 * panels) ? 1.0 : (k % 2 ? 4.0 : 2.0));
    }
    return acc * w / (6.0 * panels);
}

// e^{lambda} of the factor carried by an explicit line solution, in the
// pole-stable closed form mu / (sin^2 s + mu^2 (cos s - x0 sin s)^2) with
// s = (theta + pi/2)/2.
[[nodiscard]] inline double bubble_factor_exp(const ExplicitBubble& b, double theta) {
    const double s = 0.5 * (theta + 0.5 * pi);
    const double si = std::sin(s), co = std::cos(s);
    const double d = co - b.x0 * si;
    return b.mu / (si * si + b.mu * b.mu * d * d);
}

}  // namespace liouville

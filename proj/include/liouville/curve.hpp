#pragma once

// Passage from a disk immersion to its boundary curve in arc-length
// parametrization. The arc-length function s(theta) = int_0^theta e^lambda
// is inverted by safeguarded Newton; curvature comes from the factor via
// kappa = (|m|-multiplier(lambda) + 1) e^{-lambda}.

#include <cmath>
#include <complex>
#include <vector>

#include "liouville/conformal.hpp"
#include "liouville/grid_field.hpp"
#include "liouville/spectral_ops.hpp"

namespace liouville {

// Spectral antiderivative of the boundary speed: monotone bijection
// [0, 2pi) -> [0, L) with smooth inverse.
struct ArcLengthMap {
    SpectralField lambda_s;   // spectrum of the factor
    SpectralField anti;       // coefficients of the oscillatory part of s(theta)
    complexd anti_at_zero{0.0, 0.0};
    double speed_mean = 0.0;
    double length = 0.0;

    explicit ArcLengthMap(const ConformalFactor& cf) {
        lambda_s = analyze(cf.lambda);
        // Sample e^lambda on a doubled grid so the product of modes is kept.
        const int n2 = 2 * cf.n();
        GridField e = resample(cf.lambda, n2);
        for (auto& z : e.v) z = std::exp(z);
        const SpectralField es = analyze(e);
        anti = SpectralField::zeros(n2);
        for (int m = -n2 / 2 + 1; m <= n2 / 2 - 1; ++m) {
            if (m == 0) continue;
            anti.set_coeff(m, es.coeff(m) / complexd(0.0, m));
        }
        anti_at_zero = eval_at(anti, 0.0);
        speed_mean = es.coeff(0).real();
        length = two_pi * speed_mean;
    }

    [[nodiscard]] double speed(double theta) const {
        return std::exp(eval_at(lambda_s, theta).real());
    }

    [[nodiscard]] double s_of_theta(double theta) const {
        return speed_mean * theta + (eval_at(anti, theta) - anti_at_zero).real();
    }

    // Inverse by bisection-safeguarded Newton on [0, 2pi].
    [[nodiscard]] double theta_of_s(double s) const {
        double lo = 0.0, hi = two_pi;
        double th = two_pi * s / length;  // exact for a circle
        for (int it = 0; it < 60; ++it) {
            const double f = s_of_theta(th) - s;
            if (std::abs(f) < 1e-14 * std::max(1.0, length)) break;
            if (f > 0.0) hi = th; else lo = th;
            const double step = f / speed(th);
            double next = th - step;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            th = next;
        }
        return th;
    }
};

struct CurveInvariants {
    double speed_spread = 0.0;   // max relative deviation of chord lengths
    double tangent_norm_err = 0.0;
    double closure_gap = 0.0;    // |oint tau ds|, zero for a closed loop
};

// Closed planar curve sampled at uniform arc length. Columns mirror the
// CSV layout: s, position, unit tangent, curvature.
struct PlanarCurve {
    std::vector<double> s, x, y, tx, ty, kappa;
    double length = 0.0;

    [[nodiscard]] int size() const { return static_cast<int>(s.size()); }

    [[nodiscard]] CurveInvariants invariants() const {
        CurveInvariants inv;
        const int m = size();
        const double hs = length / m;
        double cx = 0.0, cy = 0.0;
        for (int j = 0; j < m; ++j) {
            const int k = (j + 1) % m;
            const double chord = std::hypot(x[k] - x[j], y[k] - y[j]);
            inv.speed_spread = std::max(inv.speed_spread, std::abs(chord / hs - 1.0));
            inv.tangent_norm_err =
                std::max(inv.tangent_norm_err, std::abs(std::hypot(tx[j], ty[j]) - 1.0));
            cx += tx[j];
            cy += ty[j];
        }
        // A closed loop has oint tau ds = 0; the periodic trapezoid of the
        // smooth tangent resolves that to near machine precision.
        inv.closure_gap = std::hypot(cx, cy) * hs;
        return inv;
    }

    void check(double speed_tol = 0.01, double tangent_tol = 1e-10,
               double closure_tol = 1e-8) const {
        const CurveInvariants inv = invariants();
        if (inv.speed_spread > speed_tol)
            throw numeric_error("arc-length sampling drifted: relative chord spread " +
                                std::to_string(inv.speed_spread));
        if (inv.tangent_norm_err > tangent_tol)
            throw numeric_error("tangent lost unit norm");
        if (inv.closure_gap > closure_tol * length)
            throw numeric_error("curve fails to close: tangent circulation " +
                                std::to_string(inv.closure_gap));
    }
};

[[nodiscard]] inline PlanarCurve trace_curve(const DiskImmersion& im, int m_samples) {
    if (m_samples < 8) throw std::invalid_argument("need at least 8 curve samples");
    const ArcLengthMap arc(im.factor);
    const SpectralField hl = half_laplacian(analyze(im.factor.lambda));

    PlanarCurve c;
    c.length = arc.length;
    c.s.resize(m_samples);
    c.x.resize(m_samples);
    c.y.resize(m_samples);
    c.tx.resize(m_samples);
    c.ty.resize(m_samples);
    c.kappa.resize(m_samples);
    for (int j = 0; j < m_samples; ++j) {
        const double sj = arc.length * j / m_samples;
        const double th = arc.theta_of_s(sj);
        const complexd p = im.boundary(th);
        const complexd t = im.boundary_tangent(th);
        const complexd tau = t / std::abs(t);
        const double lam = eval_at(arc.lambda_s, th).real();
        c.s[j] = sj;
        c.x[j] = p.real();
        c.y[j] = p.imag();
        c.tx[j] = tau.real();
        c.ty[j] = tau.imag();
        c.kappa[j] = (eval_at(hl, th).real() + 1.0) * std::exp(-lam);
    }
    return c;
}

// Total absolute turning int |kappa| ds via the tangent angle increments;
// closed immersed curves always exceed pi, the circle gives exactly 2 pi.
[[nodiscard]] inline double total_turning(const PlanarCurve& c) {
    double acc = 0.0;
    const int m = c.size();
    for (int j = 0; j < m; ++j) {
        const int k = (j + 1) % m;
        const double a0 = std::atan2(c.ty[j], c.tx[j]);
        const double a1 = std::atan2(c.ty[k], c.tx[k]);
        acc += std::abs(wrap_angle(a1 - a0));
    }
    return acc;
}

// Signed turning / 2pi, the rotation index.
[[nodiscard]] inline int rotation_index(const PlanarCurve& c) {
    double acc = 0.0;
    const int m = c.size();
    for (int j = 0; j < m; ++j) {
        const int k = (j + 1) % m;
        acc += wrap_angle(std::atan2(c.ty[k], c.tx[k]) - std::atan2(c.ty[j], c.tx[j]));
    }
    return static_cast<int>(std::lround(acc / two_pi));
}

}  // namespace liouville

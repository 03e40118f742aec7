#pragma once

// Half-Laplacian fields on the real line with logarithmic tails: principal
// value quadrature with an analytic tail correction, exponential mass with
// tail correction, the log Green representation on the line, and the
// interval Green kernel with its exponential-integrability functional.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liouville/grid_field.hpp"

namespace liouville {

// ---------------------------------------------------------------------------
// Line fields and explicit solutions
// ---------------------------------------------------------------------------

// u sampled on the symmetric uniform grid x_j = -R + j h over [-R, R],
// h = 2R/(M-1), together with the two-parameter tail model
// u(y) ~ c1 log|y| + c2 for |y| > R.
struct LineField {
    double R = 100.0;
    std::vector<double> u;
    double c1 = 0.0;
    double c2 = 0.0;

    [[nodiscard]] int m() const { return static_cast<int>(u.size()); }
    [[nodiscard]] double spacing() const { return 2.0 * R / (m() - 1); }
    [[nodiscard]] double x(int j) const { return -R + spacing() * j; }
    [[nodiscard]] int nearest_index(double xq) const {
        const int j = static_cast<int>(std::lround((xq + R) / spacing()));
        return std::min(std::max(j, 0), m() - 1);
    }

    [[nodiscard]] double tail_model(double y) const {
        return c1 * std::log(std::abs(y)) + c2;
    }

    // Worst absolute deviation between samples and the tail model on the
    // outer tenth of the grid, relative to the sample size there.
    [[nodiscard]] double tail_mismatch() const {
        double worst = 0.0;
        const int mm = m();
        for (int j = 0; j < mm; ++j) {
            const double xj = x(j);
            if (std::abs(xj) < 0.9 * R) continue;
            const double dev = std::abs(u[j] - tail_model(xj));
            worst = std::max(worst, dev / std::max(std::abs(u[j]), 1.0));
        }
        return worst;
    }

    // Least squares fit of (c1, c2) against log|x| on R/2 <= |x| <= R.
    void fit_tail() {
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, b0 = 0.0, b1 = 0.0;
        for (int j = 0; j < m(); ++j) {
            const double xj = x(j);
            if (std::abs(xj) < 0.5 * R) continue;
            const double l = std::log(std::abs(xj));
            s0 += 1.0;
            s1 += l;
            s2 += l * l;
            b0 += u[j];
            b1 += u[j] * l;
        }
        const double det = s0 * s2 - s1 * s1;
        if (!(std::abs(det) > 1e-12)) throw numeric_error("tail fit is degenerate");
        c1 = (s0 * b1 - s1 * b0) / det;
        c2 = (s2 * b0 - s1 * b1) / det;
    }

    void validate() const {
        if (m() < 16) throw std::invalid_argument("line grid too small");
        if (!(R > 0.0)) throw std::invalid_argument("truncation radius must be positive");
        double l_half = 0.0;
        for (int j = 0; j < m(); ++j) {
            if (!std::isfinite(u[j])) throw std::invalid_argument("non-finite line sample");
            l_half += std::abs(u[j]) / (1.0 + x(j) * x(j));
        }
        if (!std::isfinite(l_half * spacing()))
            throw std::invalid_argument("weighted integrability check failed");
        if (tail_mismatch() > 0.05)
            throw numeric_error("tail model deviates from the outer samples by more than 5%");
    }

    [[nodiscard]] static LineField from_function(double R, int M,
                                                 const std::function<double(double)>& f,
                                                 bool fit = true) {
        if (M < 16) throw std::invalid_argument("line grid too small");
        LineField out;
        out.R = R;
        out.u.resize(M);
        for (int j = 0; j < M; ++j) out.u[j] = f(out.x(j));
        if (fit) out.fit_tail();
        return out;
    }
};

// u_{mu, x0}(x) = log(2 mu / (1 + mu^2 (x - x0)^2)), the full solution
// family of the exponential half-Laplacian equation on the line.
struct ExplicitBubble {
    double mu = 1.0;
    double x0 = 0.0;

    ExplicitBubble() = default;
    ExplicitBubble(double mu_, double x0_) : mu(mu_), x0(x0_) {
        if (!(mu > 0.0)) throw std::invalid_argument("bubble scale must be positive");
    }

    [[nodiscard]] double operator()(double x) const {
        const double d = x - x0;
        return std::log(2.0 * mu) - std::log1p(mu * mu * d * d);
    }

    [[nodiscard]] double tail_c1() const { return -2.0; }
    [[nodiscard]] double tail_c2() const { return std::log(2.0 / mu); }

    [[nodiscard]] LineField sample(double R, int M) const {
        LineField f = LineField::from_function(R, M, *this, false);
        f.c1 = tail_c1();
        f.c2 = tail_c2();
        return f;
    }
};

// ---------------------------------------------------------------------------
// Principal value half-Laplacian with analytic tail
// ---------------------------------------------------------------------------

// (-Delta)^{1/2} u (x_j) = (1/pi) PV int (u(x) - u(y))/(x-y)^2 dy.
// The symmetric pairs y = x +- t regularize the singularity up to
// t = n_side h; leftover samples on the longer side enter plainly, and the
// log tail model covers |y| > R on both wings in closed form:
//   int_R^inf [B - c1 log s]/(s -+ x)^2 ds
//     = B/(R -+ x) - c1 [ log(R)/(R -+ x) -+ (1/x) log((R -+ x)/R) ].
[[nodiscard]] inline double half_laplacian_line(const LineField& f, int j) {
    const int mm = f.m();
    if (j < 0 || j >= mm) throw std::invalid_argument("sample index out of range");
    const double h = f.spacing();
    const double xj = f.x(j);
    if (std::abs(xj) > 0.5 * f.R + h)
        throw std::invalid_argument("evaluation point too close to the truncation boundary");
    const int n_side = std::min(j, mm - 1 - j);
    if (n_side < 2) throw std::invalid_argument("not enough symmetric samples");

    auto s = [&](int k) {
        const double t = k * h;
        return (2.0 * f.u[j] - f.u[j + k] - f.u[j - k]) / (t * t);
    };
    double acc = 0.5 * (4.0 * s(1) - s(2)) / 3.0;  // s(0) by parabolic extrapolation
    for (int k = 1; k < n_side; ++k) acc += s(k);
    acc += 0.5 * s(n_side);

    // Remaining samples on the side with more data.
    if (j > mm - 1 - j) {
        const int i1 = j - n_side;
        for (int i = 0; i <= i1; ++i) {
            const double d = xj - f.x(i);
            acc += (f.u[j] - f.u[i]) / (d * d) * ((i == 0 || i == i1) ? 0.5 : 1.0);
        }
    } else if (j < mm - 1 - j) {
        const int i1 = j + n_side;
        for (int i = i1; i < mm; ++i) {
            const double d = f.x(i) - xj;
            acc += (f.u[j] - f.u[i]) / (d * d) * ((i == i1 || i == mm - 1) ? 0.5 : 1.0);
        }
    }
    const double near = acc * h / pi;

    const double B = f.u[j] - f.c2;
    auto wing = [&](double sgn) {
        const double den = f.R - sgn * xj;
        double log_part;
        if (std::abs(xj) < 1e-9) {
            log_part = (std::log(f.R) + 1.0) / f.R;
        } else {
            log_part = std::log(f.R) / den - sgn / xj * std::log(den / f.R);
        }
        return B / den - f.c1 * log_part;
    };
    return near + (wing(1.0) + wing(-1.0)) / pi;
}

[[nodiscard]] inline double half_laplacian_line(const LineField& f, double x) {
    return half_laplacian_line(f, f.nearest_index(x));
}

// ---------------------------------------------------------------------------
// Exponential mass with tail correction
// ---------------------------------------------------------------------------

// int_R e^u dx: trapezoid over the grid plus the exact mass of the tail
// model, which requires c1 < -1 for integrability.
[[nodiscard]] inline double pohozaev_mass(const LineField& f) {
    if (!(f.c1 < -1.0 - 1e-9))
        throw std::invalid_argument("tail exponent gives a non-integrable mass");
    const int mm = f.m();
    double acc = 0.5 * (std::exp(f.u[0]) + std::exp(f.u[mm - 1]));
    for (int j = 1; j < mm - 1; ++j) acc += std::exp(f.u[j]);
    const double tail = 2.0 * std::exp(f.c2) * std::pow(f.R, f.c1 + 1.0) / (-f.c1 - 1.0);
    return acc * f.spacing() + tail;
}

// ---------------------------------------------------------------------------
// Green representation on the line
// ---------------------------------------------------------------------------

// Density samples on the same symmetric grid, with a power tail
// f(y) ~ scale |y|^p beyond |y| = R.
struct LineDensity {
    double R = 100.0;
    std::vector<double> f;
    double p = -2.0;
    double scale = 0.0;

    [[nodiscard]] int m() const { return static_cast<int>(f.size()); }
    [[nodiscard]] double spacing() const { return 2.0 * R / (m() - 1); }
    [[nodiscard]] double x(int j) const { return -R + spacing() * j; }

    [[nodiscard]] static LineDensity exp_of(const LineField& u) {
        LineDensity d;
        d.R = u.R;
        d.f.resize(u.m());
        for (int j = 0; j < u.m(); ++j) d.f[j] = std::exp(u.u[j]);
        d.p = u.c1;
        d.scale = std::exp(u.c2);
        return d;
    }
};

namespace detail {

// Antiderivative of log(1 + |y|) vanishing at 0.
[[nodiscard]] inline double log_one_plus_abs_anti(double y) {
    const double a = std::abs(y);
    return (y < 0 ? -1.0 : 1.0) * ((1.0 + a) * std::log1p(a) - a);
}

// Antiderivative of log|y - x| in y (continuous through y = x).
[[nodiscard]] inline double log_dist_anti(double y, double x) {
    const double s = y - x;
    if (s == 0.0) return 0.0;
    return s * std::log(std::abs(s)) - s;
}

}  // namespace detail

// (1/pi) int log((1+|y|)/|x-y|) f(y) dy. Grid cells use the exact kernel
// integral against a per-cell constant density (so the log singularity
// needs no excision); the two wings |y| > R integrate the power-tail model
// by quadrature after the substitution y = R/s.
[[nodiscard]] inline double green_repr_line(const LineDensity& d, double x) {
    const int mm = d.m();
    if (mm < 16) throw std::invalid_argument("density grid too small");
    const double h = d.spacing();
    double acc = 0.0;
    for (int j = 0; j < mm; ++j) {
        const double a = std::max(d.x(j) - 0.5 * h, -d.R);
        const double b = std::min(d.x(j) + 0.5 * h, d.R);
        const double w = (detail::log_one_plus_abs_anti(b) - detail::log_one_plus_abs_anti(a)) -
                         (detail::log_dist_anti(b, x) - detail::log_dist_anti(a, x));
        acc += w * d.f[j];
    }

    double wings = 0.0;
    if (d.scale != 0.0) {
        if (!(d.p < -1.0)) throw std::invalid_argument("tail density is not integrable");
        // y = R/s maps (R, inf) to s in (0, 1); integrand stays smooth.
        auto wing = [&](double sign) {
            const int panels = 64;
            double s_acc = 0.0;
            for (int k = 0; k <= 2 * panels; ++k) {
                const double s = double(k) / (2 * panels);
                double val = 0.0;
                if (s > 0.0) {
                    const double y = d.R / s;
                    val = std::pow(y, d.p) * std::log((1.0 + y) / std::abs(sign * y - x)) *
                          d.R / (s * s);
                }
                s_acc += val * ((k == 0 || k == 2 * panels) ? 1.0 : (k % 2 ? 4.0 : 2.0));
            }
            return d.scale * s_acc / (6.0 * panels);
        };
        wings = wing(1.0) + wing(-1.0);
    }
    return (acc + wings) / pi;
}

// ---------------------------------------------------------------------------
// Interval Green kernel and exponential functional
// ---------------------------------------------------------------------------

// G(x, y) = (1/pi) log(sqrt(r0) + sqrt(r0 + 1)),
// r0 = (1-x^2)(1-y^2)/(x-y)^2, on (-1, 1) x (-1, 1).
[[nodiscard]] inline double interval_green(double x, double y) {
    if (!(std::abs(x) < 1.0 && std::abs(y) < 1.0))
        throw std::invalid_argument("interval Green arguments must lie in (-1, 1)");
    if (x == y) throw std::invalid_argument("interval Green kernel is singular on the diagonal");
    const double r0 = (1.0 - x * x) * (1.0 - y * y) / ((x - y) * (x - y));
    return std::log(std::sqrt(r0) + std::sqrt(r0 + 1.0)) / pi;
}

// Unit-mass smooth bump supported in (center - width, center + width),
// sampled on the uniform grid x_i = -1 + 2i/(K-1).
[[nodiscard]] inline std::vector<double> interval_bump(int K, double center, double width) {
    if (K < 16) throw std::invalid_argument("interval grid too small");
    if (!(width > 0.0 && center - width > -1.0 && center + width < 1.0))
        throw std::invalid_argument("bump support must stay inside the interval");
    std::vector<double> f(K, 0.0);
    const double h = 2.0 / (K - 1);
    double mass = 0.0;
    for (int i = 0; i < K; ++i) {
        const double s = (-1.0 + h * i - center) / width;
        if (std::abs(s) < 1.0) f[i] = std::exp(-1.0 / (1.0 - s * s));
        mass += f[i] * h;
    }
    if (!(mass > 0.0)) throw std::invalid_argument("bump has no mass on the grid");
    for (auto& v : f) v /= mass;
    return f;
}

// (eps/|I|) int_I exp((pi + sign eps) |u|) with u the interval Green
// potential of the unit-normalized density.
[[nodiscard]] inline double interval_exp_green_functional(const std::vector<double>& f,
                                                          double eps, double sign) {
    if (!(eps > 0.0 && eps < pi))
        throw std::invalid_argument("interval functional: eps must lie in (0, pi)");
    const int K = static_cast<int>(f.size());
    if (K < 16) throw std::invalid_argument("interval grid too small");
    const double h = 2.0 / (K - 1);
    double l1 = 0.0;
    for (double v : f) l1 += std::abs(v) * h;
    if (!(l1 > 0.0)) throw std::invalid_argument("interval functional: zero density");

    std::vector<double> u(K, 0.0);
    for (int i = 1; i + 1 < K; ++i) {
        const double xi = -1.0 + h * i;
        double acc = 0.0;
        for (int j = 1; j + 1 < K; ++j) {
            if (f[j] == 0.0) continue;
            const double yj = -1.0 + h * j;
            double g;
            if (i == j) {
                // Exact cell integral of the log singularity:
                // G ~ (1/pi) log(2(1-x^2)/|x-y|) near the diagonal.
                g = (std::log(2.0 * (1.0 - xi * xi)) + 1.0 - std::log(0.5 * h)) / pi;
            } else {
                g = interval_green(xi, yj);
            }
            acc += g * (f[j] / l1) * h;
        }
        u[i] = acc;
    }

    const double expnt = pi + sign * eps;
    double acc = 0.0;
    for (int i = 0; i < K; ++i)
        acc += std::exp(expnt * std::abs(u[i])) * ((i == 0 || i + 1 == K) ? 0.5 : 1.0);
    return 0.5 * eps * acc * h;
}

[[nodiscard]] inline double interval_mt_functional(const std::vector<double>& f, double eps) {
    return interval_exp_green_functional(f, eps, -1.0);
}

[[nodiscard]] inline double interval_mt_probe(const std::vector<double>& f, double eps) {
    return interval_exp_green_functional(f, eps, +1.0);
}

// ---------------------------------------------------------------------------
// Bubble fitting
// ---------------------------------------------------------------------------

struct BubbleFit {
    double mu = 1.0;
    double x0 = 0.0;
    double sup_err = 0.0;  // sup of |u - u_fit| over |x| <= R/2
};

// For an exact bubble e^{-u} is the quadratic (1 + mu^2 (x-x0)^2)/(2 mu);
// a least squares quadratic fit therefore recovers (mu, x0) directly.
[[nodiscard]] inline BubbleFit fit_bubble(const LineField& f) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (int j = 0; j < f.m(); ++j) {
        const double xj = f.x(j);
        if (std::abs(xj) > 0.5 * f.R) continue;
        const Eigen::Vector3d row(xj * xj, xj, 1.0);
        m += row * row.transpose();
        rhs += row * std::exp(-f.u[j]);
    }
    const Eigen::Vector3d coef = m.ldlt().solve(rhs);
    if (!(coef[0] > 0.0)) throw numeric_error("field is not close to any explicit solution");
    BubbleFit fit;
    fit.mu = 2.0 * coef[0];
    fit.x0 = -coef[1] / (2.0 * coef[0]);
    const ExplicitBubble b(fit.mu, fit.x0);
    for (int j = 0; j < f.m(); ++j) {
        const double xj = f.x(j);
        if (std::abs(xj) > 0.5 * f.R) continue;
        fit.sup_err = std::max(fit.sup_err, std::abs(f.u[j] - b(xj)));
    }
    return fit;
}

}  // namespace liouville

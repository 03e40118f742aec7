#pragma once

// Disk automorphisms z -> e^{i theta0} (z - a) / (1 - conj(a) z) and the
// induced boundary reparametrization and conformal stretch.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "liouville/grid_field.hpp"

namespace liouville {

struct MoebiusMap {
    complexd a{0.0, 0.0};
    double theta0 = 0.0;

    MoebiusMap() = default;
    MoebiusMap(complexd a_, double theta0_) : a(a_), theta0(theta0_) {
        if (std::abs(a) > 1.0 - 1e-12)
            throw std::invalid_argument("moebius pole too close to the boundary");
    }

    [[nodiscard]] complexd apply(complexd z) const {
        return std::polar(1.0, theta0) * (z - a) / (1.0 - std::conj(a) * z);
    }

    [[nodiscard]] complexd deriv(complexd z) const {
        const complexd d = 1.0 - std::conj(a) * z;
        return std::polar(1.0, theta0) * (1.0 - std::norm(a)) / (d * d);
    }

    // (e^{i t0}(z-a)/(1-conj(a)z))^{-1}: w -> (e^{-i t0} w + a) / (1 + conj(a) e^{-i t0} w)
    // which is again of the stored form with pole -a e^{i theta0}.
    [[nodiscard]] MoebiusMap inverse() const {
        return MoebiusMap(-a * std::polar(1.0, theta0), -theta0);
    }

    // Angle of the image of e^{i theta}; continuous representative in
    // (-pi, pi] shifted to track theta's branch is up to the caller.
    [[nodiscard]] double boundary_angle(double theta) const {
        return std::arg(apply(std::polar(1.0, theta)));
    }

    // log |d/dtheta apply(e^{i theta})| = log (1-|a|^2) - log |1 - conj(a) e^{i theta}|^2.
    // Integrates to a total stretch of exactly 2 pi.
    [[nodiscard]] double boundary_log_stretch(double theta) const {
        const complexd d = 1.0 - std::conj(a) * std::polar(1.0, theta);
        return std::log(1.0 - std::norm(a)) - std::log(std::norm(d));
    }

    [[nodiscard]] GridField factor_field(int n) const {
        return GridField::from_function(n, [&](double t) { return boundary_log_stretch(t); });
    }
};

// Winding count of a closed sample loop around the origin.
[[nodiscard]] inline int winding_number(const std::vector<complexd>& loop) {
    double acc = 0.0;
    const int n = static_cast<int>(loop.size());
    for (int j = 0; j < n; ++j) {
        const complexd z0 = loop[j], z1 = loop[(j + 1) % n];
        if (std::abs(z0) == 0.0 || std::abs(z1) == 0.0)
            throw std::invalid_argument("winding undefined through the origin");
        acc += std::arg(z1 / z0);
    }
    return static_cast<int>(std::lround(acc / two_pi));
}

}  // namespace liouville

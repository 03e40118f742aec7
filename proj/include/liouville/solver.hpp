#pragma once

// Newton solver for the prescribed-curvature equation
//   |m|-multiplier(lambda) = kappa e^lambda - 1   on the circle.
// The linearization |m| - kappa e^lambda is singular for constant kappa
// (two-parameter automorphism family through every solution), so linear
// steps go through Tikhonov-regularized least squares instead of LU.

#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <vector>

#include "liouville/conformal.hpp"
#include "liouville/grid_field.hpp"
#include "liouville/spectral_ops.hpp"

namespace liouville {

struct PrescribedCurvature {
    GridField kappa;

    PrescribedCurvature() = default;
    explicit PrescribedCurvature(GridField k) : kappa(std::move(k)) {
        if (!kappa.is_real(1e-12))
            throw std::invalid_argument("curvature must be a real field");
        if (!(kappa.sup_abs() < 1e12))
            throw std::invalid_argument("curvature out of range");
    }

    [[nodiscard]] static PrescribedCurvature constant(int n, double value) {
        return PrescribedCurvature(GridField::from_function(n, [=](double) { return value; }));
    }

    [[nodiscard]] int n() const { return kappa.n(); }
    [[nodiscard]] bool nonpositive_mean() const { return mean(kappa).real() <= 0.0; }
};

// Pointwise residual of the discrete system. The multiplier acts spectrally,
// the nonlinearity by sample; this pairing is exactly what the Jacobian
// below differentiates, so Newton can drive it to rounding level.
[[nodiscard]] inline GridField residual(const ConformalFactor& lam,
                                        const PrescribedCurvature& kappa,
                                        AliasGuard guard = {}) {
    if (lam.n() != kappa.n()) throw std::invalid_argument("residual: grid mismatch");
    GridField out = half_laplacian(lam.lambda, guard);
    for (int j = 0; j < out.n(); ++j)
        out.v[j] = out.v[j].real() - kappa.kappa.v[j].real() * std::exp(lam.lambda.v[j].real()) + 1.0;
    return out;
}

struct SolveOptions {
    double tol = 1e-12;
    int max_newton = 40;
    int max_halvings = 8;
    double tikhonov = 1e-12;   // shift on the normal equations
    bool verbose = false;
};

struct SolveReport {
    ConformalFactor solution;
    double residual_sup = 0.0;
    int iterations = 0;
    double constraint_gap = 0.0;   // | int kappa e^lambda dtheta - 2 pi |
    bool converged = false;
    bool degenerate = false;       // linearization rank-deficient up to the shift
    bool kappa_flagged = false;    // nonpositive-mean curvature accepted but suspect
};

[[nodiscard]] inline ConformalFactor balanced_constant_init(const PrescribedCurvature& kappa) {
    // lambda_0 = log(2pi / int max(kappa, eps)) starts on the mass constraint.
    GridField kp = kappa.kappa;
    for (auto& z : kp.v) z = std::max(z.real(), 1e-6);
    const double c = std::log(two_pi / integrate_real(kp));
    return ConformalFactor(GridField::from_function(kappa.n(), [=](double) { return c; }));
}

namespace detail {

// Dense circulant of the |m| multiplier: first column is the multiplier
// image of a delta sample.
[[nodiscard]] inline Eigen::MatrixXd multiplier_matrix(int n) {
    GridField delta = GridField::zeros(n);
    delta.v[0] = complexd(1.0, 0.0);
    AliasGuard off;
    off.enabled = false;
    const GridField col = half_laplacian(delta, off);
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i, j) = col.v[((i - j) % n + n) % n].real();
    return d;
}

}  // namespace detail

[[nodiscard]] inline SolveReport solve(const PrescribedCurvature& kappa,
                                       const ConformalFactor& init,
                                       SolveOptions opt = {}) {
    if (kappa.n() != init.n()) throw std::invalid_argument("solve: grid mismatch");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("solve: tolerance must be positive");
    const int n = kappa.n();

    {
        GridField ke = init.exp_field();
        for (int j = 0; j < n; ++j) ke.v[j] *= kappa.kappa.v[j].real();
        const double mass = integrate_real(ke);
        if (std::abs(mass - two_pi) > 0.5 * two_pi)
            std::clog << "solve: warning: initial curvature mass " << mass
                      << " is far from 2 pi\n";
    }

    const Eigen::MatrixXd d = detail::multiplier_matrix(n);
    Eigen::VectorXd lam(n), kap(n);
    for (int j = 0; j < n; ++j) {
        lam[j] = init.lambda.v[j].real();
        kap[j] = kappa.kappa.v[j].real();
    }

    auto residual_vec = [&](const Eigen::VectorXd& l) -> Eigen::VectorXd {
        Eigen::VectorXd r = d * l;
        for (int j = 0; j < n; ++j) r[j] += 1.0 - kap[j] * std::exp(l[j]);
        return r;
    };

    SolveReport rep;
    rep.kappa_flagged = kappa.nonpositive_mean();
    if (rep.kappa_flagged)
        std::clog << "solve: warning: curvature has nonpositive mean; "
                     "convergence is not expected in general\n";

    Eigen::VectorXd r = residual_vec(lam);
    double rsup = r.lpNorm<Eigen::Infinity>();
    const double shift = std::sqrt(opt.tikhonov);

    int it = 0;
    for (; it < opt.max_newton && rsup > opt.tol; ++it) {
        Eigen::MatrixXd a(2 * n, n);
        a.topRows(n) = d;
        for (int j = 0; j < n; ++j) a(j, j) -= kap[j] * std::exp(lam[j]);
        a.bottomRows(n) = shift * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * n);
        b.head(n) = -r;

        // Column pivoting sorts the R diagonal, so its last entry exposes
        // rank deficiency of the unregularized linearization.
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        const Eigen::VectorXd step = qr.solve(b);
        const double min_diag = std::abs(qr.matrixR()(n - 1, n - 1));
        if (min_diag < 100.0 * shift) rep.degenerate = true;
        if (!step.allFinite())
            throw numeric_error("solution-family degeneracy: linear step failed");

        double alpha = 1.0;
        Eigen::VectorXd cand;
        double cand_sup = rsup;
        for (int h = 0; h <= opt.max_halvings; ++h) {
            cand = lam + alpha * step;
            cand_sup = residual_vec(cand).lpNorm<Eigen::Infinity>();
            if (cand_sup < rsup) break;
            alpha *= 0.5;
        }
        // Keep iterates representable even when the problem has no solution
        // and the mean runs away (nonpositive curvature, obstructed data).
        lam = cand.cwiseMax(-300.0).cwiseMin(300.0);
        r = residual_vec(lam);
        rsup = r.lpNorm<Eigen::Infinity>();
        if (opt.verbose)
            std::clog << "solve: iter " << it + 1 << " residual " << rsup << " alpha "
                      << alpha << "\n";
    }

    std::vector<double> samples(n);
    for (int j = 0; j < n; ++j) samples[j] = lam[j];
    rep.solution = ConformalFactor(GridField::from_real(samples));
    rep.residual_sup = rsup;
    rep.iterations = it;
    rep.converged = rsup <= opt.tol;

    // Mass constraint on the doubled grid (dealiased product).
    const GridField ke =
        product_dealiased(kappa.kappa, exp_dealiased(rep.solution.lambda));
    rep.constraint_gap = std::abs(integrate_real(ke) - two_pi);
    return rep;
}

[[nodiscard]] inline SolveReport solve(const PrescribedCurvature& kappa, SolveOptions opt = {}) {
    return solve(kappa, balanced_constant_init(kappa), opt);
}

// Solvability diagnostic. The functional (1/2) <lambda, |m| lambda> + int lambda
// is invariant under lambda -> lambda o sigma + log sigma' for boundary maps
// sigma of disk automorphisms; differentiating that invariance along the
// automorphism flow shows every solution satisfies
//     int kappa'(theta) sin(theta - alpha) e^lambda dtheta = 0 for all alpha.
// The two components returned here therefore vanish on any solution. For
// kappa = c + eps cos(theta) the sin-component is -eps int sin^2 e^lambda,
// strictly negative for every lambda: such curvatures admit no solution and
// the iteration can only chase it along the automorphism family.
[[nodiscard]] inline std::pair<double, double> conformal_moment(const ConformalFactor& lam,
                                                                const PrescribedCurvature& kappa) {
    if (lam.n() != kappa.n()) throw std::invalid_argument("conformal_moment: grid mismatch");
    const GridField dk = derivative(kappa.kappa);
    GridField mc = lam.lambda, ms = lam.lambda;
    for (int j = 0; j < lam.n(); ++j) {
        const double t = lam.lambda.theta(j);
        const double w = dk.v[j].real() * std::exp(lam.lambda.v[j].real());
        mc.v[j] = w * std::cos(t);
        ms.v[j] = w * std::sin(t);
    }
    return {integrate_real(mc), integrate_real(ms)};
}

}  // namespace liouville

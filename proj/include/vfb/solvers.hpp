#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "vfb/nonlinear.hpp"
#include "vfb/random.hpp"
#include "vfb/report.hpp"

namespace vfb {

/// Scaling-critical regularity as a function of the integrability exponent;
/// reduces to 4 - alpha - 3/p for the momentum system and 3 - alpha - 3/p
/// for the chemotaxis system in three dimensions.
inline RegularityField critical_regularity(SystemKind sys, double alpha,
                                           const ExponentField& p) {
    const Grid& g = p.grid();
    const double d = g.dim();
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        s[i] = sys == SystemKind::nse ? 1.0 - alpha + d - d / p[i] : d - d / p[i] - alpha;
    return RegularityField::custom(std::move(s), g);
}

inline double critical_regularity_constant(SystemKind sys, double alpha, double p0, double dim) {
    return sys == SystemKind::nse ? 1.0 - alpha + dim - dim / p0 : dim - dim / p0 - alpha;
}

/// Solution-space norm: the max of named Chemin-Lerner norms.
struct XNormComponent {
    std::string label;
    double rho;
    FBSpaceSpec spec;
};

struct XNormSpec {
    std::vector<XNormComponent> components;

    double evaluate(const Trajectory& u, const DyadicPartition& part) const {
        double m = 0.0;
        for (const auto& c : components)
            m = std::max(m, chemin_lerner_norm(u, c.rho, c.spec, part).value);
        return m;
    }

    /// The triple from the well-posedness argument: the rho-indexed variable
    /// space at critical regularity + alpha/rho, the sup-in-time auxiliary
    /// space at p = 2, and its time-L1 smoothing companion.
    static XNormSpec for_system(SystemKind sys, double alpha, double rho,
                                const ExponentField& p) {
        const Grid& g = p.grid();
        const double shift = std::isfinite(rho) ? alpha / rho : 0.0;
        const double s2 = critical_regularity_constant(sys, alpha, 2.0, g.dim());
        XNormSpec x;
        x.components.push_back({"rho-critical", rho,
                                FBSpaceSpec(critical_regularity(sys, alpha, p).shifted(shift), p,
                                            1.0)});
        x.components.push_back(
            {"sup-auxiliary", infinite_exponent, FBSpaceSpec::constant(s2, 2.0, 1.0, g)});
        x.components.push_back(
            {"l1-smoothing", 1.0, FBSpaceSpec::constant(s2 + alpha, 2.0, 1.0, g)});
        return x;
    }
};

/// Smallness side of the well-posedness theorems:
/// ||u0||_crit + ||f||_{L1 crit} + ||f||_{L1 aux}.
inline double data_norm(SystemKind sys, const SpectralField& u0, const Trajectory& forcing,
                        double alpha, const ExponentField& p, const DyadicPartition& part) {
    const Grid& g = p.grid();
    FBSpaceSpec crit(critical_regularity(sys, alpha, p), p, 1.0);
    const double s2 = critical_regularity_constant(sys, alpha, 2.0, g.dim());
    FBSpaceSpec aux = FBSpaceSpec::constant(s2, 2.0, 1.0, g);
    double total = fb_norm(u0, crit, part);
    if (forcing.max_abs() > 0.0) {
        total += chemin_lerner_norm(forcing, 1.0, crit, part).value;
        total += chemin_lerner_norm(forcing, 1.0, aux, part).value;
    }
    return total;
}

struct FixedPointConfig {
    int max_iter = 40;
    double tolerance = 1e-10;
    double c_emp = 1.0; // measured bilinear constant
};

struct FixedPointDiagnostics {
    std::vector<double> iterate_norms;
    std::vector<double> difference_norms;
    std::vector<double> contraction_ratios;
    double eta = 0.0;              // X-norm of the linear part
    double smallness_margin = 0.0; // 4 * c_emp * eta
    bool converged = false;
    bool diverged = false;
    bool within_uniqueness_ball = false; // final norm <= 2 eta
    std::string verdict;
};

struct PicardResult {
    Trajectory solution;
    FixedPointDiagnostics diag;
};

namespace detail {

inline void finish_diagnostics(FixedPointDiagnostics& d) {
    for (std::size_t i = 1; i < d.difference_norms.size(); ++i)
        if (d.difference_norms[i - 1] > 0.0)
            d.contraction_ratios.push_back(d.difference_norms[i] / d.difference_norms[i - 1]);
    if (!d.iterate_norms.empty())
        d.within_uniqueness_ball = d.iterate_norms.back() <= 2.0 * d.eta * (1.0 + 1e-6);
}

} // namespace detail

/// Successive Duhamel approximations on whole trajectories:
/// u_0 = y, u_{n+1} = y -+ B(u_n, u_n), with the sign of the system's
/// integral form. Divergence is reported, not thrown.
inline PicardResult picard_solve(SystemKind sys, const SpectralField& u0,
                                 const Trajectory& forcing, double alpha, const XNormSpec& xnorm,
                                 const DyadicPartition& part, const FixedPointConfig& cfg) {
    if (sys == SystemKind::scalar_toy)
        throw parameter_error("picard_solve: use picard_solve_scalar for the toy equation");
    if (sys == SystemKind::nse && divergence_defect(u0) > 1e-8)
        throw parameter_error("picard_solve: initial velocity must be divergence-free");

    const Trajectory effective_forcing =
        sys == SystemKind::nse ? leray_project(forcing) : forcing;
    Trajectory y = heat_trajectory(u0, forcing.times(), alpha);
    if (effective_forcing.max_abs() > 0.0)
        y += duhamel_trajectory(effective_forcing, alpha, u0.zero_mode_policy());

    FixedPointDiagnostics diag;
    diag.eta = xnorm.evaluate(y, part);
    diag.smallness_margin = 4.0 * cfg.c_emp * diag.eta;

    Trajectory u = y;
    diag.iterate_norms.push_back(diag.eta);
    const double guard = 10.0 / (4.0 * cfg.c_emp);
    for (int n = 0; n < cfg.max_iter; ++n) {
        Trajectory bu = bilinear_duhamel(sys, u, u, alpha);
        Trajectory next = sys == SystemKind::nse ? y - bu : y + bu;
        const double diff = xnorm.evaluate(next - u, part);
        const double norm = xnorm.evaluate(next, part);
        diag.difference_norms.push_back(diff);
        diag.iterate_norms.push_back(norm);
        u = std::move(next);
        if (!std::isfinite(norm) || norm > 1e3 * std::max(diag.eta, 1e-12)) {
            diag.diverged = true;
            diag.verdict = "blow-up-suspected";
            break;
        }
        if (norm > guard) {
            diag.diverged = true;
            diag.verdict = "smallness-violation";
            break;
        }
        if (diff <= cfg.tolerance) {
            diag.converged = true;
            diag.verdict = "converged";
            break;
        }
    }
    if (!diag.converged && !diag.diverged) diag.verdict = "max-iterations";
    detail::finish_diagnostics(diag);
    return {std::move(u), std::move(diag)};
}

struct ScalarPicardResult {
    double fixed_point = 0.0;
    FixedPointDiagnostics diag;
};

/// Toy equation u = y + c u^2 under the same iteration and guards.
inline ScalarPicardResult picard_solve_scalar(double y, double c, const FixedPointConfig& cfg) {
    FixedPointDiagnostics diag;
    diag.eta = std::abs(y);
    diag.smallness_margin = 4.0 * cfg.c_emp * diag.eta;
    double u = y;
    diag.iterate_norms.push_back(std::abs(u));
    const double guard = 10.0 / (4.0 * std::max(cfg.c_emp, std::abs(c)));
    for (int n = 0; n < cfg.max_iter; ++n) {
        const double next = y + c * u * u;
        const double diff = std::abs(next - u);
        diag.difference_norms.push_back(diff);
        diag.iterate_norms.push_back(std::abs(next));
        u = next;
        if (!std::isfinite(u) || std::abs(u) > guard) {
            diag.diverged = true;
            diag.verdict = std::abs(u) > 1e3 * std::max(diag.eta, 1e-12)
                               ? "blow-up-suspected"
                               : "smallness-violation";
            break;
        }
        if (diff <= cfg.tolerance) {
            diag.converged = true;
            diag.verdict = "converged";
            break;
        }
    }
    if (!diag.converged && !diag.diverged) diag.verdict = "max-iterations";
    detail::finish_diagnostics(diag);
    return {u, std::move(diag)};
}

/// Stability of the fixed point in the data: ||u - u~|| / ||y - y~|| against
/// the contraction bound 1/(1 - 4 eta C), with 10% slack.
inline EstimateReport continuous_dependence_check(SystemKind sys, const SpectralField& u0a,
                                                  const SpectralField& u0b,
                                                  const Trajectory& forcing, double alpha,
                                                  const XNormSpec& xnorm,
                                                  const DyadicPartition& part,
                                                  const FixedPointConfig& cfg) {
    PicardResult a = picard_solve(sys, u0a, forcing, alpha, xnorm, part, cfg);
    PicardResult b = picard_solve(sys, u0b, forcing, alpha, xnorm, part, cfg);
    if (a.diag.diverged || b.diag.diverged)
        throw parameter_error("continuous_dependence_check: a solve diverged");

    Trajectory ya = heat_trajectory(u0a, forcing.times(), alpha);
    Trajectory yb = heat_trajectory(u0b, forcing.times(), alpha);
    const double dy = xnorm.evaluate(ya - yb, part);
    const double du = xnorm.evaluate(a.solution - b.solution, part);
    const double eta = std::max(a.diag.eta, b.diag.eta);
    const double margin = 4.0 * eta * cfg.c_emp;

    EstimateReport r;
    r.label = "continuous-dependence";
    if (dy == 0.0 && du <= cfg.tolerance * 10.0) {
        r.lhs = du;
        r.rhs = dy;
        r.ratio = 0.0;
        r.pass = true;
        r.trivial = true;
        return r;
    }
    const double bound = margin < 1.0 ? 1.0 / (1.0 - margin) : std::numeric_limits<double>::infinity();
    r = EstimateReport::against_bound("continuous-dependence", du, dy, bound * 1.1);
    r.metadata["eta"] = eta;
    r.metadata["margin"] = margin;
    return r;
}

/// Invariance of the critical constant-exponent norm under the parabolic
/// rescaling by a power-of-two lambda; exact on band-limited data because
/// the rescaled lattice is again a lattice.
inline EstimateReport critical_scaling_check(SystemKind sys, const SpectralField& u0,
                                             double alpha, double p0, int lambda = 2) {
    if (lambda < 1 || (lambda & (lambda - 1)) != 0)
        throw parameter_error("critical_scaling_check: lambda must be a power of two");
    const Grid& g = u0.grid();
    const double d = g.dim();
    const double sc = critical_regularity_constant(sys, alpha, p0, d);

    DyadicPartition part = build_partition(g);
    const double base =
        fb_norm(u0, FBSpaceSpec::constant(sc, p0, 1.0, g), part);

    Grid fine(g.dim(), g.points_per_axis(), g.box_half_width() / lambda);
    const double scale_exp = sys == SystemKind::nse ? alpha - 1.0 - d : alpha - d;
    const double factor = std::pow(static_cast<double>(lambda), scale_exp);
    SpectralField scaled(fine, u0.components(), u0.zero_mode_policy());
    for (int c = 0; c < u0.components(); ++c)
        for (std::size_t i = 0; i < g.size(); ++i) scaled.at(c, i) = factor * u0.at(c, i);

    DyadicPartition fine_part = build_partition(fine);
    const double rescaled =
        fb_norm(scaled, FBSpaceSpec::constant(sc, p0, 1.0, fine), fine_part);

    EstimateReport r = EstimateReport::against_bound("critical-scaling", rescaled, base, 1.0, 1e-8);
    r.pass = base > 0.0 && std::abs(rescaled / base - 1.0) <= 1e-8;
    r.metadata["lambda"] = lambda;
    r.metadata["alpha"] = alpha;
    r.metadata["p"] = p0;
    r.metadata["critical_s"] = sc;
    return r;
}

/// Measured constants of the fixed-point argument over a random sweep:
/// the bilinear ratio ||B(u,u)||_X / ||u||_X^2 and the linear ratios of the
/// free evolution and the forced Duhamel term.
struct BilinearVerification {
    std::vector<EstimateReport> reports;
    double c_bilinear = 0.0;
    double c_linear_data = 0.0;
    double c_linear_forcing = 0.0;
};

inline BilinearVerification verify_bilinear_estimate(SystemKind sys, double alpha,
                                                     const ExponentField& p,
                                                     const XNormSpec& xnorm,
                                                     const DyadicPartition& part,
                                                     std::size_t samples, const Rng& base_rng,
                                                     const std::vector<double>& times) {
    const Grid& g = p.grid();
    const int comps = sys == SystemKind::nse ? g.dim() : 1;
    FBSpaceSpec crit(critical_regularity(sys, alpha, p), p, 1.0);
    const double s2 = critical_regularity_constant(sys, alpha, 2.0, g.dim());
    FBSpaceSpec aux = FBSpaceSpec::constant(s2, 2.0, 1.0, g);

    BilinearVerification out;
    for (std::size_t k = 0; k < samples; ++k) {
        Rng rng = base_rng.fork(k);
        Trajectory u = random_heat_trajectory(g, comps, rng, times, alpha,
                                              sys == SystemKind::nse);
        const double xu = xnorm.evaluate(u, part);

        Trajectory bu = bilinear_duhamel(sys, u, u, alpha);
        const double xb = xnorm.evaluate(bu, part);
        EstimateReport rb = EstimateReport::against_bound(
            "bilinear-ratio", xb, xu * xu, std::numeric_limits<double>::infinity());
        rb.metadata["sample"] = k;
        out.c_bilinear = std::max(out.c_bilinear, rb.trivial ? 0.0 : rb.ratio);
        out.reports.push_back(std::move(rb));

        const double d0 = fb_norm(u.snapshot(0), crit, part);
        EstimateReport rl = EstimateReport::against_bound(
            "linear-data-ratio", xu, d0, std::numeric_limits<double>::infinity());
        rl.metadata["sample"] = k;
        out.c_linear_data = std::max(out.c_linear_data, rl.trivial ? 0.0 : rl.ratio);
        out.reports.push_back(std::move(rl));

        Trajectory f = random_heat_trajectory(g, comps, rng, times, alpha,
                                              sys == SystemKind::nse);
        Trajectory yf = duhamel_trajectory(sys == SystemKind::nse ? leray_project(f) : f, alpha);
        const double fnorm = chemin_lerner_norm(f, 1.0, crit, part).value +
                             chemin_lerner_norm(f, 1.0, aux, part).value;
        EstimateReport rf = EstimateReport::against_bound(
            "linear-forcing-ratio", xnorm.evaluate(yf, part), fnorm,
            std::numeric_limits<double>::infinity());
        rf.metadata["sample"] = k;
        out.c_linear_forcing = std::max(out.c_linear_forcing, rf.trivial ? 0.0 : rf.ratio);
        out.reports.push_back(std::move(rf));
    }
    return out;
}

/// Exponential Heun marcher (predictor-corrector with the piecewise-linear
/// kernel weights); independent route used to validate converged Picard
/// trajectories.
inline Trajectory time_march(SystemKind sys, const SpectralField& u0, const Trajectory& forcing,
                             double alpha, KsForm form = KsForm::direct) {
    const Grid& g = u0.grid();
    const Trajectory eff = sys == SystemKind::nse ? leray_project(forcing) : forcing;

    auto rhs = [&](const SpectralField& u, std::size_t node) {
        SpectralField r = eff.snapshot(node);
        if (sys == SystemKind::nse)
            r -= nse_nonlinearity(u, u);
        else
            r += ks_nonlinearity(u, u, form);
        return r;
    };

    std::vector<SpectralField> snaps;
    snaps.reserve(forcing.nodes());
    snaps.push_back(u0);
    for (std::size_t m = 0; m + 1 < forcing.nodes(); ++m) {
        const double delta = forcing.time(m + 1) - forcing.time(m);
        SpectralField gm = rhs(snaps.back(), m);
        SpectralField pred(g, u0.components(), u0.zero_mode_policy());
        for (int c = 0; c < u0.components(); ++c)
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double mu = std::pow(g.frequency_radius(i), alpha);
                double wa, wb;
                detail::duhamel_weights(mu * delta, wa, wb);
                pred.at(c, i) = std::exp(-mu * delta) * snaps.back().at(c, i) +
                                delta * (wa + wb) * gm.at(c, i);
            }
        pred.enforce_zero_mode();
        SpectralField gs = rhs(pred, m + 1);
        SpectralField next(g, u0.components(), u0.zero_mode_policy());
        for (int c = 0; c < u0.components(); ++c)
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double mu = std::pow(g.frequency_radius(i), alpha);
                double wa, wb;
                detail::duhamel_weights(mu * delta, wa, wb);
                next.at(c, i) = std::exp(-mu * delta) * snaps.back().at(c, i) +
                                delta * (wa * gm.at(c, i) + wb * gs.at(c, i));
            }
        next.enforce_zero_mode();
        snaps.push_back(std::move(next));
    }
    return Trajectory(forcing.times(), std::move(snaps));
}

} // namespace vfb

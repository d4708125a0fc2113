#pragma once

#include <cmath>
#include <vector>

#include "vfb/fbnorm.hpp"
#include "vfb/symbols.hpp"
#include "vfb/trajectory.hpp"

namespace vfb {

/// Fractional heat propagator e^{-t Lambda^alpha}, exact on the lattice.
inline SpectralField propagate(const SpectralField& u0, double t, double alpha) {
    return apply_symbol(u0, SymbolSpec::heat_multiplier(t, alpha));
}

inline Trajectory heat_trajectory(const SpectralField& u0, std::vector<double> times,
                                  double alpha) {
    std::vector<SpectralField> snaps;
    snaps.reserve(times.size());
    for (double t : times) snaps.push_back(propagate(u0, t, alpha));
    return Trajectory(std::move(times), std::move(snaps));
}

namespace detail {

/// Weights of the piecewise-linear exponential integrator on one interval:
///   int_0^D e^{-mu (D - s)} (fa (1 - s/D) + fb s/D) ds = D (fa A(z) + fb B(z))
/// with z = mu D. Series below z = 1e-4 avoids the cancellation in expm1.
inline void duhamel_weights(double z, double& wa, double& wb) {
    if (z < 1e-4) {
        wa = 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0;
        wb = 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
        return;
    }
    const double em = std::exp(-z);
    wa = (-std::expm1(-z) - z * em) / (z * z);
    wb = (z + std::expm1(-z)) / (z * z);
}

} // namespace detail

/// Duhamel integral int_0^t e^{-(t-tau) Lambda^alpha} f(tau) dtau with f
/// interpolated piecewise-linearly between its nodes; the exponential kernel
/// is integrated in closed form on every subinterval. Forcing that feeds the
/// zero mode is rejected when the result is pinned to mean zero.
inline SpectralField duhamel(const Trajectory& forcing, double t, double alpha,
                             ZeroMode policy = ZeroMode::forced_zero) {
    if (t < 0.0) throw parameter_error("duhamel: t must be nonnegative");
    if (forcing.times().front() > 1e-15 || !forcing.covers(t))
        throw coverage_error("duhamel: forcing nodes do not cover [0, t]");
    const Grid& grid = forcing.grid();
    SpectralField out(grid, forcing.components(), policy);
    if (policy == ZeroMode::forced_zero)
        for (std::size_t m = 0; m < forcing.nodes(); ++m)
            for (int c = 0; c < forcing.components(); ++c)
                if (forcing.snapshot(m).at(c, 0) != 0.0)
                    throw zero_mode_error("duhamel: forcing has a zero mode the policy pins to 0");
    if (t == 0.0) return out;

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double mu = std::pow(grid.frequency_radius(i), alpha);
        for (int c = 0; c < forcing.components(); ++c) {
            std::complex<double> acc = 0.0;
            for (std::size_t m = 0; m + 1 < forcing.nodes(); ++m) {
                const double ta = forcing.time(m);
                if (ta >= t - 1e-15) break;
                double tb = forcing.time(m + 1);
                std::complex<double> fa = forcing.snapshot(m).at(c, i);
                std::complex<double> fb = forcing.snapshot(m + 1).at(c, i);
                if (tb > t) { // cut the last interval at t
                    const double frac = (t - ta) / (tb - ta);
                    fb = fa + frac * (fb - fa);
                    tb = t;
                }
                const double delta = tb - ta;
                double wa, wb;
                detail::duhamel_weights(mu * delta, wa, wb);
                acc += std::exp(-mu * (t - tb)) * delta * (wa * fa + wb * fb);
            }
            out.at(c, i) = acc;
        }
    }
    out.enforce_zero_mode();
    return out;
}

/// Duhamel integral evaluated at every forcing node through the exact
/// interval recursion I(t_{m+1}) = e^{-mu dt} I(t_m) + local contribution.
inline Trajectory duhamel_trajectory(const Trajectory& forcing, double alpha,
                                     ZeroMode policy = ZeroMode::forced_zero) {
    const Grid& grid = forcing.grid();
    if (forcing.times().front() > 1e-15)
        throw coverage_error("duhamel_trajectory: forcing must start at t = 0");
    std::vector<SpectralField> snaps(forcing.nodes(),
                                     SpectralField(grid, forcing.components(), policy));
    if (policy == ZeroMode::forced_zero)
        for (std::size_t m = 0; m < forcing.nodes(); ++m)
            for (int c = 0; c < forcing.components(); ++c)
                if (forcing.snapshot(m).at(c, 0) != 0.0)
                    throw zero_mode_error(
                        "duhamel_trajectory: forcing has a zero mode the policy pins to 0");

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double mu = std::pow(grid.frequency_radius(i), alpha);
        for (int c = 0; c < forcing.components(); ++c) {
            std::complex<double> acc = 0.0;
            for (std::size_t m = 0; m + 1 < forcing.nodes(); ++m) {
                const double delta = forcing.time(m + 1) - forcing.time(m);
                double wa, wb;
                detail::duhamel_weights(mu * delta, wa, wb);
                acc = std::exp(-mu * delta) * acc +
                      delta * (wa * forcing.snapshot(m).at(c, i) +
                               wb * forcing.snapshot(m + 1).at(c, i));
                snaps[m + 1].at(c, i) = acc;
            }
        }
    }
    for (auto& s : snaps) s.enforce_zero_mode();
    return Trajectory(forcing.times(), std::move(snaps));
}

/// Cauchy data for the linear fractional heat equation.
struct LinearProblem {
    double alpha;
    SpectralField u0;
    Trajectory forcing; // may be a zero trajectory
    double horizon;
    double rho; // time exponent of the forcing space

    LinearProblem(double alpha_, SpectralField u0_, Trajectory forcing_, double horizon_,
                  double rho_)
        : alpha(alpha_), u0(std::move(u0_)), forcing(std::move(forcing_)), horizon(horizon_),
          rho(rho_) {
        if (!(alpha > 0.0) || alpha > 2.0)
            throw parameter_error("LinearProblem: alpha must be in (0,2]");
        if (!(rho >= 1.0)) throw parameter_error("LinearProblem: rho must be at least 1");
        if (!forcing.covers(horizon) || forcing.times().front() > 1e-15)
            throw coverage_error("LinearProblem: forcing nodes do not cover [0, T]");
        if (u0.grid() != forcing.grid() || u0.components() != forcing.components())
            throw dimension_error("LinearProblem: data and forcing disagree");
    }

    static LinearProblem homogeneous(double alpha, const SpectralField& u0, double horizon,
                                     std::size_t intervals, double rho = 1.0) {
        Trajectory zero = Trajectory::constant(
            SpectralField::zeros(u0.grid(), u0.components(), u0.zero_mode_policy()),
            uniform_nodes(horizon, intervals));
        return LinearProblem(alpha, u0, std::move(zero), horizon, rho);
    }
};

struct LinearSolveDiagnostics {
    double max_residual = 0.0;      // worst centered-difference equation residual
    double max_residual_bound = 0.0; // worst predicted discretization bound
    bool within_bound = true;        // residual <= 2 * bound + roundoff slack everywhere
};

/// Mild solution u(t) = e^{-t Lambda^alpha} u0 + Duhamel(f, t) on the given
/// output nodes. The diagnostics evaluate the centered-difference residual of
/// d/dt u + Lambda^alpha u - f at interior nodes and compare it against the
/// per-mode discretization bound (h^2/6) max|d^3u/dt^3| of that stencil.
inline Trajectory solve_linear(const LinearProblem& prob, const std::vector<double>& nodes,
                               LinearSolveDiagnostics* diag = nullptr) {
    std::vector<SpectralField> snaps;
    snaps.reserve(nodes.size());
    if (nodes == prob.forcing.times()) {
        // forcing nodes are the output nodes: one recursion instead of one
        // integral per node
        Trajectory forced = duhamel_trajectory(prob.forcing, prob.alpha,
                                               prob.u0.zero_mode_policy());
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            SpectralField u = propagate(prob.u0, nodes[m], prob.alpha);
            u += forced.snapshot(m);
            snaps.push_back(std::move(u));
        }
    } else {
        for (double t : nodes) {
            SpectralField u = propagate(prob.u0, t, prob.alpha);
            u += duhamel(prob.forcing, t, prob.alpha, prob.u0.zero_mode_policy());
            snaps.push_back(std::move(u));
        }
    }
    Trajectory traj(nodes, std::move(snaps));

    if (diag) {
        const Grid& grid = traj.grid();
        *diag = LinearSolveDiagnostics{};
        const double roundoff = 1e-10 * std::max(prob.u0.max_abs(), prob.forcing.max_abs());
        for (std::size_t m = 1; m + 1 < traj.nodes(); ++m) {
            const double tm = traj.time(m);
            const double hl = tm - traj.time(m - 1), hr = traj.time(m + 1) - tm;
            std::size_t seg = 0;
            while (seg + 2 < prob.forcing.nodes() && prob.forcing.time(seg + 1) < tm) ++seg;
            const double ta = prob.forcing.time(seg), tb = prob.forcing.time(seg + 1);
            const double frac = (tm - ta) / (tb - ta);
            for (int c = 0; c < traj.components(); ++c)
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double mu = std::pow(grid.frequency_radius(i), prob.alpha);
                    const std::complex<double> fa = prob.forcing.snapshot(seg).at(c, i);
                    const std::complex<double> fb = prob.forcing.snapshot(seg + 1).at(c, i);
                    const std::complex<double> fhat = fa + frac * (fb - fa);
                    const double slope = std::abs(fb - fa) / (tb - ta);
                    const std::complex<double> res =
                        (traj.snapshot(m + 1).at(c, i) - traj.snapshot(m - 1).at(c, i)) /
                            (hl + hr) +
                        mu * traj.snapshot(m).at(c, i) - fhat;
                    // |d^3u/dt^3| <= mu^3 max|u| + mu^2 max|f| + mu |f'| on the stencil;
                    // nonuniform spacing adds a first-order |u''| (hr - hl) term.
                    const double umax =
                        std::max({std::abs(traj.snapshot(m - 1).at(c, i)),
                                  std::abs(traj.snapshot(m).at(c, i)),
                                  std::abs(traj.snapshot(m + 1).at(c, i))});
                    const double fmax = std::max(std::abs(fa), std::abs(fb));
                    const double h2 = std::max(hl, hr) * std::max(hl, hr);
                    const double d3 = mu * mu * mu * umax + mu * mu * fmax + mu * slope;
                    const double d2 = mu * mu * umax + mu * fmax + slope;
                    const double bound = h2 / 6.0 * d3 + 0.5 * std::abs(hr - hl) * d2;
                    diag->max_residual = std::max(diag->max_residual, std::abs(res));
                    diag->max_residual_bound = std::max(diag->max_residual_bound, bound);
                    if (std::abs(res) > 2.0 * bound + roundoff) diag->within_bound = false;
                }
        }
    }
    return traj;
}

/// Decay rate floor kappa = (3/4)^alpha inherited from the shell inner edge.
inline double shell_decay_rate(double alpha) { return std::pow(0.75, alpha); }

/// Pointwise shell decay bound: e^{-t |xi|^alpha} phi_j(xi) <= e^{-kappa t 2^{alpha j}}
/// on every shell, every lattice point and every probed time.
inline EstimateReport kappa_shell_check(const DyadicPartition& part, double alpha,
                                        const std::vector<double>& times) {
    const Grid& grid = part.grid();
    const double kappa = shell_decay_rate(alpha);
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
        const auto& mask = part.phi_mask(j);
        for (std::size_t i : part.support(j)) {
            const double mu = std::pow(grid.frequency_radius(i), alpha);
            const double rate = kappa * std::exp2(alpha * static_cast<double>(j));
            for (double t : times)
                worst = std::max(worst, std::exp(-t * mu) * mask[i] - std::exp(-rate * t));
        }
    }
    EstimateReport r = EstimateReport::deviation("kappa-shell-bound", std::max(worst, 0.0), 1e-15);
    r.metadata["alpha"] = alpha;
    r.metadata["kappa"] = kappa;
    return r;
}

/// Empirical form of the linear estimate: for each rho1 >= rho,
///   ||u||_{CL^rho1(s + alpha/rho1)} <= C (||u0||_{s} + ||f||_{CL^rho(s - alpha + alpha/rho)}).
inline std::vector<EstimateReport> verify_linear_estimate(const LinearProblem& prob,
                                                          const FBSpaceSpec& spec,
                                                          const std::vector<double>& rho1_values,
                                                          const DyadicPartition& part) {
    std::vector<EstimateReport> out;
    const Trajectory u = solve_linear(prob, prob.forcing.times());

    const double data_norm = fb_norm(prob.u0, spec, part);
    double forcing_norm = 0.0;
    bool zero_forcing = prob.forcing.max_abs() == 0.0;
    if (!zero_forcing) {
        const double shift = std::isfinite(prob.rho) ? -prob.alpha + prob.alpha / prob.rho
                                                     : -prob.alpha;
        forcing_norm =
            chemin_lerner_norm(prob.forcing, prob.rho, spec.with_regularity_shift(shift), part)
                .value;
    }
    const double rhs = data_norm + forcing_norm;

    for (double rho1 : rho1_values) {
        if (rho1 < prob.rho)
            throw parameter_error("verify_linear_estimate: rho1 must be at least rho");
        const double shift = std::isfinite(rho1) ? prob.alpha / rho1 : 0.0;
        CheminLernerResult lhs =
            chemin_lerner_norm(u, rho1, spec.with_regularity_shift(shift), part);
        EstimateReport r = EstimateReport::against_bound(
            "heat-linear-estimate", lhs.value, rhs, std::numeric_limits<double>::infinity());
        r.metadata["rho"] = std::isfinite(prob.rho) ? nlohmann::ordered_json(prob.rho)
                                                    : nlohmann::ordered_json("inf");
        r.metadata["rho1"] = std::isfinite(rho1) ? nlohmann::ordered_json(rho1)
                                                 : nlohmann::ordered_json("inf");
        // Young conjugate used by the proof-side bound, recorded for reference
        if (std::isfinite(rho1) && std::isfinite(prob.rho)) {
            const double inv_rho2 = 1.0 + 1.0 / rho1 - 1.0 / prob.rho;
            r.metadata["rho2"] = inv_rho2 > 0.0 ? nlohmann::ordered_json(1.0 / inv_rho2)
                                                : nlohmann::ordered_json("inf");
        }
        r.metadata["T"] = prob.horizon;
        r.metadata["alpha"] = prob.alpha;
        r.metadata["quadrature_error"] = lhs.quadrature_error;
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace vfb

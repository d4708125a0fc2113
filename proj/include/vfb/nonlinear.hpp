#pragma once

#include <cmath>
#include <vector>

#include "vfb/semigroup.hpp"
#include "vfb/symbols.hpp"
#include "vfb/trajectory.hpp"

namespace vfb {

enum class SystemKind { nse, keller_segel, scalar_toy };
enum class KsForm { direct, symmetric };

inline SpectralField leray_project(const SpectralField& u) {
    return apply_symbol(u, SymbolSpec::leray());
}

inline Trajectory leray_project(const Trajectory& traj) {
    std::vector<SpectralField> snaps;
    snaps.reserve(traj.nodes());
    for (std::size_t m = 0; m < traj.nodes(); ++m) snaps.push_back(leray_project(traj.snapshot(m)));
    return Trajectory(traj.times(), std::move(snaps));
}

inline double divergence_defect(const SpectralField& u) {
    const double scale = u.max_abs();
    if (scale == 0.0) return 0.0;
    return apply_symbol(u, SymbolSpec::divergence()).max_abs() / scale;
}

namespace detail {

/// Forward transform of a pointwise product of two physical sample arrays,
/// dealiased by the 2/3 rule (with band-limited factors the product is
/// alias-free, so truncation is the only loss).
inline SpectralField product_spectrum(const std::vector<double>& a, const std::vector<double>& b,
                                      const Grid& grid) {
    std::vector<double> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
    SpectralField s = to_spectral(std::span<const double>(prod), grid);
    s.dealias();
    return s;
}

} // namespace detail

/// P div(u (x) v) in one shot: physical tensor products, spectral divergence
/// row, Leray projection.
inline SpectralField nse_nonlinearity(const SpectralField& u, const SpectralField& v) {
    const Grid& grid = u.grid();
    const int d = grid.dim();
    if (u.components() != d || v.components() != d)
        throw component_error("nse_nonlinearity: vector fields required");
    if (u.grid() != v.grid()) throw dimension_error("nse_nonlinearity: grid mismatch");

    auto up = to_physical_all(u);
    auto vp = to_physical_all(v);
    SpectralField w(grid, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            SpectralField tij = detail::product_spectrum(up[static_cast<std::size_t>(i)],
                                                         vp[static_cast<std::size_t>(j)], grid);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double xij = grid.frequency(k)[static_cast<std::size_t>(j)];
                w.at(i, k) += std::complex<double>(0.0, xij) * tij.at(0, k);
            }
        }
    }
    w.enforce_zero_mode();
    return leray_project(w);
}

/// div(u grad (-Delta)^{-1} v), directly or through the symmetric tensor
/// form -div div(G_u (x) G_v - <G_u, G_v> I / 2); the two agree for u = v.
inline SpectralField ks_nonlinearity(const SpectralField& u, const SpectralField& v,
                                     KsForm form) {
    const Grid& grid = u.grid();
    const int d = grid.dim();
    if (u.components() != 1 || v.components() != 1)
        throw component_error("ks_nonlinearity: scalar fields required");
    if (u.grid() != v.grid()) throw dimension_error("ks_nonlinearity: grid mismatch");
    if (u.zero_mode_policy() != ZeroMode::forced_zero ||
        v.zero_mode_policy() != ZeroMode::forced_zero || u.at(0, 0) != 0.0 || v.at(0, 0) != 0.0)
        throw zero_mode_error("ks_nonlinearity: inputs must be mean-zero");

    SpectralField out(grid, 1);
    if (form == KsForm::direct) {
        SpectralField grad_phi = gradient_field(apply_symbol(v, SymbolSpec::inverse_neg_laplacian()));
        auto up = to_physical(u);
        for (int axis = 0; axis < d; ++axis) {
            SpectralField flux =
                detail::product_spectrum(up, to_physical(grad_phi, axis), grid);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                if (grid.on_nyquist(k)) continue;
                const double xia = grid.frequency(k)[static_cast<std::size_t>(axis)];
                out.at(0, k) += std::complex<double>(0.0, xia) * flux.at(0, k);
            }
        }
    } else {
        SpectralField gu = gradient_field(apply_symbol(u, SymbolSpec::inverse_neg_laplacian()));
        SpectralField gv = gradient_field(apply_symbol(v, SymbolSpec::inverse_neg_laplacian()));
        auto gup = to_physical_all(gu);
        auto gvp = to_physical_all(gv);
        // trace term <G_u, G_v>
        std::vector<double> dot(grid.size(), 0.0);
        for (int k = 0; k < d; ++k)
            for (std::size_t i = 0; i < grid.size(); ++i)
                dot[i] += gup[static_cast<std::size_t>(k)][i] * gvp[static_cast<std::size_t>(k)][i];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                std::vector<double> tij(grid.size());
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    tij[k] = gup[static_cast<std::size_t>(i)][k] *
                             gvp[static_cast<std::size_t>(j)][k];
                    if (i == j) tij[k] -= 0.5 * dot[k];
                }
                SpectralField that = to_spectral(std::span<const double>(tij), grid);
                that.dealias();
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    auto xi = grid.frequency(k);
                    out.at(0, k) += xi[static_cast<std::size_t>(i)] *
                                    xi[static_cast<std::size_t>(j)] * that.at(0, k);
                }
            }
    }
    out.enforce_zero_mode();
    return out;
}

inline Trajectory bilinear_integrand(SystemKind sys, const Trajectory& u, const Trajectory& v,
                                     KsForm form = KsForm::direct) {
    if (u.times() != v.times()) throw dimension_error("bilinear_integrand: node sets differ");
    std::vector<SpectralField> snaps;
    snaps.reserve(u.nodes());
    for (std::size_t m = 0; m < u.nodes(); ++m)
        snaps.push_back(sys == SystemKind::nse
                            ? nse_nonlinearity(u.snapshot(m), v.snapshot(m))
                            : ks_nonlinearity(u.snapshot(m), v.snapshot(m), form));
    return Trajectory(u.times(), std::move(snaps));
}

/// Whole-trajectory Duhamel image of the bilinear term.
inline Trajectory bilinear_duhamel(SystemKind sys, const Trajectory& u, const Trajectory& v,
                                   double alpha, KsForm form = KsForm::direct) {
    return duhamel_trajectory(bilinear_integrand(sys, u, v, form), alpha);
}

/// B1(u, v)(t): Duhamel image of P div(u (x) v) at one time.
inline SpectralField nse_bilinear(const Trajectory& u, const Trajectory& v, double t,
                                  double alpha) {
    if (!u.covers(t)) throw coverage_error("nse_bilinear: trajectories do not cover [0, t]");
    for (std::size_t m = 0; m < u.nodes(); ++m)
        if (divergence_defect(u.snapshot(m)) > 1e-8 || divergence_defect(v.snapshot(m)) > 1e-8)
            throw parameter_error("nse_bilinear: inputs must be divergence-free");
    return duhamel(bilinear_integrand(SystemKind::nse, u, v), t, alpha);
}

/// B2(u, v)(t): Duhamel image of div(u grad (-Delta)^{-1} v) at one time.
inline SpectralField ks_bilinear(const Trajectory& u, const Trajectory& v, double t, double alpha,
                                 KsForm form = KsForm::direct) {
    if (!u.covers(t)) throw coverage_error("ks_bilinear: trajectories do not cover [0, t]");
    return duhamel(bilinear_integrand(SystemKind::keller_segel, u, v, form), t, alpha);
}

} // namespace vfb

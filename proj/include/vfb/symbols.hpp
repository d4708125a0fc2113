#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "vfb/field.hpp"
#include "vfb/report.hpp"

namespace vfb {

/// Fourier multipliers used throughout: powers of |xi|, derivatives, Riesz
/// transforms, the fractional heat factor and the Leray projection.
struct SymbolSpec {
    enum class Kind {
        fractional_laplacian, // |xi|^alpha
        inverse_neg_laplacian, // |xi|^-2
        gradient,             // i*xi_axis
        divergence,           // sum_axis i*xi_axis (vector -> scalar)
        riesz,                // -i*xi_axis/|xi|
        heat_multiplier,      // e^{-t |xi|^alpha}
        leray                 // delta_ij - xi_i xi_j / |xi|^2
    };

    Kind kind;
    double alpha = 0.0;
    double t = 0.0;
    int axis = 0;

    static SymbolSpec fractional_laplacian(double alpha) {
        if (alpha == 0.0 || alpha < -2.0 || alpha > 2.0)
            throw parameter_error("fractional_laplacian: alpha must be in [-2,0) or (0,2]");
        return {Kind::fractional_laplacian, alpha, 0.0, 0};
    }
    static SymbolSpec inverse_neg_laplacian() { return {Kind::inverse_neg_laplacian, 0.0, 0.0, 0}; }
    static SymbolSpec gradient(int axis) { return {Kind::gradient, 0.0, 0.0, axis}; }
    static SymbolSpec divergence() { return {Kind::divergence, 0.0, 0.0, 0}; }
    static SymbolSpec riesz(int axis) { return {Kind::riesz, 0.0, 0.0, axis}; }
    static SymbolSpec heat_multiplier(double t, double alpha) {
        if (!(alpha > 0.0) || alpha > 2.0)
            throw parameter_error("heat_multiplier: alpha must be in (0,2]");
        if (t < 0.0) throw parameter_error("heat_multiplier: t must be nonnegative");
        return {Kind::heat_multiplier, alpha, t, 0};
    }
    static SymbolSpec leray() { return {Kind::leray, 0.0, 0.0, 0}; }

    /// Singular at xi = 0, hence only defined on fields with a pinned zero mode.
    bool singular_at_origin() const {
        switch (kind) {
            case Kind::inverse_neg_laplacian:
            case Kind::riesz:
                return true;
            case Kind::fractional_laplacian:
                return alpha < 0.0;
            default:
                return false;
        }
    }

    /// Odd symbols carry no consistent sign on the self-conjugate Nyquist
    /// rows; those rows are zeroed so real fields stay real.
    bool odd() const {
        return kind == Kind::gradient || kind == Kind::divergence || kind == Kind::riesz;
    }
};

namespace detail {

inline std::complex<double> scalar_symbol_value(const SymbolSpec& sym,
                                                const std::array<double, 3>& xi,
                                                double r) {
    using Kind = SymbolSpec::Kind;
    switch (sym.kind) {
        case Kind::fractional_laplacian:
            return r == 0.0 ? 0.0 : std::pow(r, sym.alpha);
        case Kind::inverse_neg_laplacian:
            return r == 0.0 ? 0.0 : 1.0 / (r * r);
        case Kind::gradient:
            return std::complex<double>(0.0, xi[static_cast<std::size_t>(sym.axis)]);
        case Kind::riesz:
            return r == 0.0 ? 0.0
                            : std::complex<double>(0.0, -xi[static_cast<std::size_t>(sym.axis)] / r);
        case Kind::heat_multiplier:
            return std::exp(-sym.t * std::pow(r, sym.alpha));
        default:
            throw parameter_error("scalar_symbol_value: not a scalar symbol");
    }
}

} // namespace detail

/// Pointwise multiplication of the coefficient array by the symbol.
/// Divergence maps vector fields to scalars; Leray acts on vector fields.
inline SpectralField apply_symbol(const SpectralField& field, const SymbolSpec& sym) {
    const Grid& grid = field.grid();
    using Kind = SymbolSpec::Kind;

    if (sym.singular_at_origin() && field.zero_mode_policy() != ZeroMode::forced_zero)
        throw zero_mode_error("apply_symbol: singular symbol requires a forced-zero zero mode");

    if (sym.kind == Kind::leray) {
        if (field.components() != grid.dim())
            throw component_error("apply_symbol: Leray projection needs a vector field");
        SpectralField out(grid, field.components(), field.zero_mode_policy());
        const int d = grid.dim();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto xi = grid.frequency(i);
            double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            if (r2 == 0.0) {
                for (int c = 0; c < d; ++c) out.at(c, i) = field.at(c, i);
                continue;
            }
            std::complex<double> dot = 0.0;
            for (int c = 0; c < d; ++c) dot += xi[static_cast<std::size_t>(c)] * field.at(c, i);
            for (int c = 0; c < d; ++c)
                out.at(c, i) = field.at(c, i) - xi[static_cast<std::size_t>(c)] * dot / r2;
        }
        out.enforce_zero_mode();
        return out;
    }

    if (sym.kind == Kind::divergence) {
        if (field.components() != grid.dim())
            throw component_error("apply_symbol: divergence needs a vector field");
        SpectralField out(grid, 1, field.zero_mode_policy());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid.on_nyquist(i)) continue;
            auto xi = grid.frequency(i);
            std::complex<double> s = 0.0;
            for (int c = 0; c < grid.dim(); ++c)
                s += std::complex<double>(0.0, xi[static_cast<std::size_t>(c)]) * field.at(c, i);
            out.at(0, i) = s;
        }
        out.enforce_zero_mode();
        return out;
    }

    if (sym.kind == Kind::gradient || sym.kind == Kind::riesz) {
        if (sym.axis < 0 || sym.axis >= grid.dim())
            throw parameter_error("apply_symbol: axis out of range");
    }

    SpectralField out(grid, field.components(), field.zero_mode_policy());
    const bool odd = sym.odd();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (odd && grid.on_nyquist(i)) continue;
        auto xi = grid.frequency(i);
        double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        std::complex<double> m = detail::scalar_symbol_value(sym, xi, r);
        for (int c = 0; c < field.components(); ++c) out.at(c, i) = m * field.at(c, i);
    }
    out.enforce_zero_mode();
    return out;
}

/// Gradient of a scalar field as a vector field.
inline SpectralField gradient_field(const SpectralField& field) {
    if (field.components() != 1)
        throw component_error("gradient_field: expected a scalar field");
    const Grid& grid = field.grid();
    SpectralField out(grid, grid.dim(), field.zero_mode_policy());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.on_nyquist(i)) continue;
        auto xi = grid.frequency(i);
        for (int c = 0; c < grid.dim(); ++c)
            out.at(c, i) =
                std::complex<double>(0.0, xi[static_cast<std::size_t>(c)]) * field.at(0, i);
    }
    out.enforce_zero_mode();
    return out;
}

/// Max relative deviation between propagating by t1+t2 and composing t1, t2.
inline EstimateReport semigroup_composition_check(const SpectralField& field, double t1,
                                                  double t2, double alpha) {
    if (t1 < 0.0 || t2 < 0.0)
        throw parameter_error("semigroup_composition_check: times must be nonnegative");
    SpectralField whole = apply_symbol(field, SymbolSpec::heat_multiplier(t1 + t2, alpha));
    SpectralField split = apply_symbol(apply_symbol(field, SymbolSpec::heat_multiplier(t1, alpha)),
                                       SymbolSpec::heat_multiplier(t2, alpha));
    double e = 0.0;
    const double ref = std::max(field.max_abs(), 1e-300);
    for (int c = 0; c < field.components(); ++c)
        for (std::size_t i = 0; i < field.grid().size(); ++i)
            e = std::max(e, std::abs(whole.at(c, i) - split.at(c, i)) / ref);
    EstimateReport r = EstimateReport::deviation("semigroup-composition", e, 1e-13);
    r.metadata["t1"] = t1;
    r.metadata["t2"] = t2;
    r.metadata["alpha"] = alpha;
    return r;
}

} // namespace vfb

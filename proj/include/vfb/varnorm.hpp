#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "vfb/exponent.hpp"
#include "vfb/fft.hpp"
#include "vfb/field.hpp"
#include "vfb/report.hpp"
#include "vfb/symbols.hpp"

namespace vfb {

/// Modular rho_p(f) = sum |f_i|^{p_i} * cell_measure.
inline double modular(std::span<const double> values, std::span<const double> p,
                      double cell_measure) {
    if (values.size() != p.size())
        throw dimension_error("modular: value and exponent arrays differ in size");
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = std::abs(values[i]);
        if (v != 0.0) s += std::pow(v, p[i]);
    }
    return s * cell_measure;
}

inline double modular(const std::vector<double>& values, const ExponentField& p) {
    return modular(std::span<const double>(values), std::span<const double>(p.values()),
                   p.cell_measure());
}

inline double modular(const SpectralField& f, const ExponentField& p) {
    if (f.grid() != p.grid()) throw dimension_error("modular: grid mismatch");
    return modular(f.magnitude(), p);
}

namespace detail {

/// Luxemburg norm: the unique lambda with rho_p(f/lambda) = 1 for f != 0.
/// The bracket comes from the constant-exponent norms at p_minus and p_plus;
/// Newton steps run inside the bracket with bisection as fallback, and the
/// iteration cap is 200.
inline double luxemburg_norm(std::span<const double> values, std::span<const double> p,
                             double cell_measure) {
    if (values.size() != p.size())
        throw dimension_error("var_norm: value and exponent arrays differ in size");

    std::vector<double> logv;
    std::vector<double> pv;
    logv.reserve(values.size());
    pv.reserve(values.size());
    double p_lo = std::numeric_limits<double>::infinity(), p_hi = 1.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = std::abs(values[i]);
        if (v == 0.0) continue;
        logv.push_back(std::log(v));
        pv.push_back(p[i]);
        p_lo = std::min(p_lo, p[i]);
        p_hi = std::max(p_hi, p[i]);
    }
    if (logv.empty()) return 0.0;

    // g(mu) = rho(f/e^mu), decreasing in mu; g'(mu) = -sum p_i * term_i.
    const auto eval = [&](double mu, double* deriv) {
        double s = 0.0, ds = 0.0;
        for (std::size_t i = 0; i < logv.size(); ++i) {
            const double term = std::exp(pv[i] * (logv[i] - mu));
            s += term;
            ds += pv[i] * term;
        }
        if (deriv) *deriv = -ds * cell_measure;
        return s * cell_measure;
    };

    // Classical norms at the extreme exponents bracket the root.
    const auto classical = [&](double q) {
        double s = 0.0;
        for (std::size_t i = 0; i < logv.size(); ++i) s += std::exp(q * logv[i]);
        return std::log(s * cell_measure) / q;
    };
    double mu_a = classical(p_lo), mu_b = classical(p_hi);
    double lo = std::min(mu_a, mu_b) - 1.0;
    double hi = std::max(mu_a, mu_b) + 1.0;
    int guard = 0;
    while (eval(hi, nullptr) > 1.0 && guard++ < 200) { lo = hi; hi += 2.0; }
    while (eval(lo, nullptr) < 1.0 && guard++ < 200) { hi = lo; lo -= 2.0; }

    double mu = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double deriv;
        const double g = eval(mu, &deriv) - 1.0;
        if (g > 0.0) lo = mu; else hi = mu;
        if (hi - lo < 1e-14) break;
        double step = deriv != 0.0 && std::isfinite(g) ? mu - g / deriv
                                                       : std::numeric_limits<double>::quiet_NaN();
        mu = (std::isfinite(step) && step > lo && step < hi) ? step : 0.5 * (lo + hi);
    }
    return std::exp(0.5 * (lo + hi));
}

} // namespace detail

/// Variable-exponent Lebesgue norm inf{lambda > 0 : rho_p(f/lambda) <= 1}.
inline double var_norm(std::span<const double> values, std::span<const double> p,
                       double cell_measure) {
    return detail::luxemburg_norm(values, p, cell_measure);
}

inline double var_norm(const std::vector<double>& values, const ExponentField& p) {
    return var_norm(std::span<const double>(values), std::span<const double>(p.values()),
                    p.cell_measure());
}

inline double var_norm(const SpectralField& f, const ExponentField& p) {
    if (f.grid() != p.grid()) throw dimension_error("var_norm: grid mismatch");
    return var_norm(f.magnitude(), p);
}

/// Empirical Holder inequality: |fg| in the combined exponent against the
/// product of the factor norms. The sharp constant for this norm is 2.
inline EstimateReport holder_check(const std::vector<double>& f, const std::vector<double>& g,
                                   const ExponentField& p1, const ExponentField& p2) {
    if (f.size() != g.size() || f.size() != p1.grid().size())
        throw dimension_error("holder_check: array sizes do not match the lattice");
    ExponentField p = ExponentField::holder_combination(p1, p2);
    std::vector<double> fg(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) fg[i] = f[i] * g[i];
    const double lhs = var_norm(fg, p);
    const double rhs = var_norm(f, p1) * var_norm(g, p2);
    EstimateReport r = EstimateReport::against_bound("holder-product", lhs, rhs, 2.0, 1e-12);
    r.metadata["p1"] = p1.metadata();
    r.metadata["p2"] = p2.metadata();
    return r;
}

/// Mixed Lebesgue-sequence modular, in the r_plus-finite simplification
///   sum_j || |f_j|^{r(.)} ||_{p(.)/r(.)}.
inline double mixed_sequence_modular(const std::vector<std::vector<double>>& blocks,
                                     const ExponentField& p, const ExponentField& r) {
    if (!(r.p_minus() >= 1.0))
        throw exponent_range_error("mixed_sequence_modular: r_minus must be at least 1");
    ExponentField q = ExponentField::ratio(p, r);
    double total = 0.0;
    std::vector<double> powered(p.grid().size());
    for (const auto& block : blocks) {
        if (block.size() != p.grid().size())
            throw dimension_error("mixed_sequence_modular: block does not match lattice");
        for (std::size_t i = 0; i < block.size(); ++i)
            powered[i] = std::pow(std::abs(block[i]), r[i]);
        total += var_norm(powered, q);
    }
    return total;
}

/// Hardy-Littlewood maximal function with centered lattice balls of radius
/// m*h, m = 0..N/2, on the periodic box. Ball averages are evaluated by
/// circular convolution with the ball indicator.
inline std::vector<double> maximal_function(const std::vector<double>& f, const Grid& grid) {
    if (f.size() != grid.size())
        throw dimension_error("maximal_function: sample array does not match grid");
    const int n = grid.points_per_axis();
    const std::size_t size = grid.size();

    std::vector<std::complex<double>> fhat(size);
    for (std::size_t i = 0; i < size; ++i) fhat[i] = std::abs(f[i]);
    detail::dft_forward(fhat.data(), grid);

    std::vector<double> out(size, 0.0);
    for (std::size_t i = 0; i < size; ++i) out[i] = std::abs(f[i]); // radius-0 ball

    std::vector<int> axis_dist2(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        const int d = std::min(m, n - m);
        axis_dist2[static_cast<std::size_t>(m)] = d * d;
    }

    std::vector<std::complex<double>> ind(size);
    for (int radius = 1; radius <= n / 2; ++radius) {
        const int r2 = radius * radius;
        std::size_t count = 0;
        for (std::size_t i = 0; i < size; ++i) {
            auto m = grid.unflatten(i);
            int d2 = 0;
            for (int a = 0; a < grid.dim(); ++a)
                d2 += axis_dist2[static_cast<std::size_t>(m[static_cast<std::size_t>(a)])];
            if (d2 <= r2) { ind[i] = 1.0; ++count; } else ind[i] = 0.0;
        }
        detail::dft_forward(ind.data(), grid);
        for (std::size_t i = 0; i < size; ++i) ind[i] *= fhat[i];
        detail::dft_backward(ind.data(), grid);
        const double scale = 1.0 / (static_cast<double>(count) * static_cast<double>(size));
        for (std::size_t i = 0; i < size; ++i)
            out[i] = std::max(out[i], ind[i].real() * scale);
    }
    return out;
}

/// Ratio ||R_axis f|| / ||f|| in the variable norm, for mean-zero samples.
inline EstimateReport riesz_boundedness_check(const std::vector<double>& f,
                                              const ExponentField& p, int axis) {
    const Grid& grid = p.grid();
    if (f.size() != grid.size())
        throw dimension_error("riesz_boundedness_check: sample array does not match grid");
    double max_abs = 0.0;
    for (double v : f) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0.0)
        throw parameter_error("riesz_boundedness_check: ratio undefined for zero input");

    SpectralField fh = to_spectral(std::span<const double>(f), grid);
    fh.zero_nyquist(); // the Riesz symbol drops the Nyquist rows anyway
    std::vector<double> rf = to_physical(apply_symbol(fh, SymbolSpec::riesz(axis)));
    std::vector<double> f0 = to_physical(fh); // mean-zero representative
    const double lhs = var_norm(rf, p);
    const double rhs = var_norm(f0, p);
    EstimateReport r = EstimateReport::against_bound("riesz-boundedness", lhs, rhs,
                                                     std::numeric_limits<double>::infinity());
    r.metadata["axis"] = axis;
    r.metadata["p"] = p.metadata();
    return r;
}

} // namespace vfb

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "vfb/dyadic.hpp"
#include "vfb/exponent.hpp"
#include "vfb/report.hpp"
#include "vfb/trajectory.hpp"
#include "vfb/varnorm.hpp"

namespace vfb {

constexpr double infinite_exponent = std::numeric_limits<double>::infinity();

/// Fourier-Besov space parameters: regularity s(.), integrability p(.),
/// constant summability r in [1, inf].
struct FBSpaceSpec {
    RegularityField s;
    ExponentField p;
    double r;

    FBSpaceSpec(RegularityField s_, ExponentField p_, double r_)
        : s(std::move(s_)), p(std::move(p_)), r(r_) {
        if (!(r >= 1.0)) throw parameter_error("FBSpaceSpec: r must be at least 1");
        if (p.domain() != ExponentDomain::frequency)
            throw parameter_error("FBSpaceSpec: p must be sampled on the frequency lattice");
    }

    /// Constant-exponent space; p0 = 1 is admissible here (the strict
    /// p > 1 class only constrains the variable-exponent machinery).
    static FBSpaceSpec constant(double s0, double p0, double r, const Grid& grid) {
        return FBSpaceSpec(RegularityField::constant(s0, grid),
                           ExponentField::constant_summability(p0, grid), r);
    }

    FBSpaceSpec with_regularity_shift(double delta) const {
        return FBSpaceSpec(s.shifted(delta), p, r);
    }

    nlohmann::ordered_json metadata() const {
        nlohmann::ordered_json j;
        j["s_minus"] = s.s_minus();
        j["s_plus"] = s.s_plus();
        j["p"] = p.metadata();
        j["r"] = std::isfinite(r) ? nlohmann::ordered_json(r) : nlohmann::ordered_json("inf");
        return j;
    }
};

namespace detail {

/// Per-shell weights 2^{j s(xi)} phi_j(xi) and exponents on the shell support.
struct ShellWeights {
    std::vector<std::vector<double>> weight;
    std::vector<std::vector<double>> p_vals;
};

inline ShellWeights make_shell_weights(const DyadicPartition& part, const FBSpaceSpec& spec) {
    ShellWeights w;
    const int m = part.shells();
    w.weight.resize(static_cast<std::size_t>(m));
    w.p_vals.resize(static_cast<std::size_t>(m));
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
        const auto& sup = part.support(j);
        const auto& mask = part.phi_mask(j);
        auto& wt = w.weight[static_cast<std::size_t>(j - part.j_min())];
        auto& pv = w.p_vals[static_cast<std::size_t>(j - part.j_min())];
        wt.reserve(sup.size());
        pv.reserve(sup.size());
        for (std::size_t i : sup) {
            wt.push_back(std::exp2(static_cast<double>(j) * spec.s[i]) * mask[i]);
            pv.push_back(spec.p[i]);
        }
    }
    return w;
}

inline double lr_combine(const std::vector<double>& a, double r) {
    if (!std::isfinite(r)) {
        double m = 0.0;
        for (double v : a) m = std::max(m, v);
        return m;
    }
    double s = 0.0;
    for (double v : a)
        if (v > 0.0) s += std::pow(v, r);
    return std::pow(s, 1.0 / r);
}

inline void require_mean_zero(const SpectralField& f, const char* who) {
    for (int c = 0; c < f.components(); ++c)
        if (f.at(c, 0) != 0.0)
            throw zero_mode_error(std::string(who) + ": field must be mean-zero");
}

/// Fraction of L2 energy sitting where the partition does not sum to one.
inline void require_resolved(const SpectralField& f, const DyadicPartition& part,
                             const char* who) {
    double outside = 0.0, total = 0.0;
    for (int c = 0; c < f.components(); ++c)
        for (std::size_t i = 1; i < f.grid().size(); ++i) {
            const double e = std::norm(f.at(c, i));
            total += e;
            if (std::abs(part.coverage(i) - 1.0) > 1e-9) outside += e;
        }
    if (total > 0.0 && outside > 1e-10 * total)
        throw resolution_error(std::string(who) +
                               ": field carries energy outside the partition range");
}

} // namespace detail

/// Fourier-Besov norm: per shell the variable Lebesgue norm of
/// 2^{j s(.)} phi_j |f^|, then l^r over shells. Vector fields enter through
/// the pointwise Euclidean magnitude of their coefficients.
inline double fb_norm(const SpectralField& field, const FBSpaceSpec& spec,
                      const DyadicPartition& part) {
    if (field.grid() != part.grid() || field.grid() != spec.p.grid())
        throw dimension_error("fb_norm: grid mismatch");
    detail::require_mean_zero(field, "fb_norm");
    detail::require_resolved(field, part, "fb_norm");

    const auto mag = field.magnitude();
    const auto w = detail::make_shell_weights(part, spec);
    const double measure = field.grid().cell_volume_frequency();

    std::vector<double> a(static_cast<std::size_t>(part.shells()), 0.0);
    std::vector<double> vals;
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
        const std::size_t jj = static_cast<std::size_t>(j - part.j_min());
        const auto& sup = part.support(j);
        vals.resize(sup.size());
        for (std::size_t k = 0; k < sup.size(); ++k) vals[k] = w.weight[jj][k] * mag[sup[k]];
        a[jj] = var_norm(std::span<const double>(vals), std::span<const double>(w.p_vals[jj]),
                         measure);
    }
    return detail::lr_combine(a, spec.r);
}

/// Chemin-Lerner norm: the time-L^rho norm is taken inside each shell
/// (composite trapezoid over the trajectory's nodes, max for rho = inf)
/// before the l^r sum over shells. The returned quadrature error is the
/// Richardson difference against halved nodes.
struct CheminLernerResult {
    double value = 0.0;
    double quadrature_error = 0.0;
    operator double() const { return value; }
};

namespace detail {

inline double time_lp(const std::vector<double>& t, const std::vector<double>& b, double rho,
                      std::size_t stride) {
    if (!std::isfinite(rho)) {
        double m = 0.0;
        for (std::size_t i = 0; i < b.size(); i += stride) m = std::max(m, b[i]);
        return m;
    }
    double s = 0.0;
    std::size_t prev = 0;
    for (std::size_t i = stride; i < b.size(); i += stride) {
        const double dt = t[i] - t[prev];
        s += 0.5 * dt * (std::pow(b[prev], rho) + std::pow(b[i], rho));
        prev = i;
    }
    return std::pow(s, 1.0 / rho);
}

} // namespace detail

inline CheminLernerResult chemin_lerner_norm(const Trajectory& traj, double rho,
                                             const FBSpaceSpec& spec,
                                             const DyadicPartition& part) {
    if (traj.grid() != part.grid() || traj.grid() != spec.p.grid())
        throw dimension_error("chemin_lerner_norm: grid mismatch");
    if (!(rho >= 1.0)) throw parameter_error("chemin_lerner_norm: rho must be at least 1");
    if (std::isfinite(rho) && traj.nodes() < 2)
        throw quadrature_error("chemin_lerner_norm: finite rho needs at least two nodes");

    const auto w = detail::make_shell_weights(part, spec);
    const double measure = traj.grid().cell_volume_frequency();
    const std::size_t m = traj.nodes();

    // b[j][node]
    std::vector<std::vector<double>> b(static_cast<std::size_t>(part.shells()),
                                       std::vector<double>(m, 0.0));
    std::vector<double> vals;
    for (std::size_t node = 0; node < m; ++node) {
        const SpectralField& snap = traj.snapshot(node);
        detail::require_mean_zero(snap, "chemin_lerner_norm");
        detail::require_resolved(snap, part, "chemin_lerner_norm");
        const auto mag = snap.magnitude();
        for (int j = part.j_min(); j <= part.j_max(); ++j) {
            const std::size_t jj = static_cast<std::size_t>(j - part.j_min());
            const auto& sup = part.support(j);
            vals.resize(sup.size());
            for (std::size_t k = 0; k < sup.size(); ++k)
                vals[k] = w.weight[jj][k] * mag[sup[k]];
            b[jj][node] = var_norm(std::span<const double>(vals),
                                   std::span<const double>(w.p_vals[jj]), measure);
        }
    }

    std::vector<double> a(b.size()), a_half(b.size());
    for (std::size_t jj = 0; jj < b.size(); ++jj) {
        a[jj] = detail::time_lp(traj.times(), b[jj], rho, 1);
        a_half[jj] = (std::isfinite(rho) && m >= 5 && m % 2 == 1)
                         ? detail::time_lp(traj.times(), b[jj], rho, 2)
                         : a[jj];
    }
    CheminLernerResult res;
    res.value = detail::lr_combine(a, spec.r);
    res.quadrature_error = std::abs(detail::lr_combine(a_half, spec.r) - res.value);
    return res;
}

/// Pointwise product of two scalar fields in physical space, dealiased and
/// projected mean-zero.
inline SpectralField pointwise_product(const SpectralField& a, const SpectralField& b) {
    if (a.grid() != b.grid()) throw dimension_error("pointwise_product: grid mismatch");
    if (a.components() != 1 || b.components() != 1)
        throw component_error("pointwise_product: expected scalar fields");
    std::vector<double> fa = to_physical(a);
    std::vector<double> fb = to_physical(b);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    SpectralField prod = to_spectral(std::span<const double>(fa), a.grid());
    prod.dealias();
    return prod;
}

/// Lemma-style embedding ratio between a higher and a lower space with
/// constant exponents: spec_lo must carry s - n(1/p1 - 1/p2).
inline EstimateReport embedding_check(const SpectralField& field, const FBSpaceSpec& spec_hi,
                                      const FBSpaceSpec& spec_lo, const DyadicPartition& part) {
    if (!spec_hi.p.is_constant() || !spec_lo.p.is_constant() || !spec_hi.s.is_constant() ||
        !spec_lo.s.is_constant())
        throw parameter_error("embedding_check: constant exponents required");
    const double p1 = spec_lo.p.p_minus(), p2 = spec_hi.p.p_minus();
    const double r1 = spec_lo.r, r2 = spec_hi.r;
    if (!(p1 <= p2) || !(r1 <= r2))
        throw parameter_error("embedding_check: need p1 <= p2 and r1 <= r2");
    const double n = field.grid().dim();
    const double expected = spec_hi.s.s_minus() - n * (1.0 / p1 - 1.0 / p2);
    if (std::abs(spec_lo.s.s_minus() - expected) > 1e-12)
        throw parameter_error("embedding_check: lower regularity must be s - n(1/p1 - 1/p2)");

    const double hi = fb_norm(field, spec_hi, part);
    const double lo = fb_norm(field, spec_lo, part);
    EstimateReport r = EstimateReport::against_bound("embedding", lo, hi,
                                                     std::numeric_limits<double>::infinity());
    r.metadata["p1"] = p1;
    r.metadata["p2"] = p2;
    r.metadata["r1"] = r1;
    r.metadata["r2"] = r2;
    return r;
}

/// Interpolation inequality between regularities s1 < s2 at theta in (0,1).
/// For r = 1 the l^1 Holder argument makes the constant exactly 1.
inline EstimateReport interpolation_check(const SpectralField& field, double s1, double s2,
                                          double theta, const ExponentField& p, double r,
                                          const DyadicPartition& part) {
    if (!(theta > 0.0 && theta < 1.0))
        throw parameter_error("interpolation_check: theta must lie in (0,1)");
    if (!(s1 < s2)) throw parameter_error("interpolation_check: need s1 < s2");
    const Grid& g = field.grid();
    const double smid = s1 * theta + s2 * (1.0 - theta);
    const double lhs = fb_norm(field, FBSpaceSpec(RegularityField::constant(smid, g), p, r), part);
    const double n1 = fb_norm(field, FBSpaceSpec(RegularityField::constant(s1, g), p, r), part);
    const double n2 = fb_norm(field, FBSpaceSpec(RegularityField::constant(s2, g), p, r), part);
    const double rhs = std::pow(n1, theta) * std::pow(n2, 1.0 - theta);
    const double bound = r == 1.0 ? 1.0 : std::numeric_limits<double>::infinity();
    EstimateReport rep = EstimateReport::against_bound("interpolation", lhs, rhs, bound, 1e-10);
    rep.metadata["s1"] = s1;
    rep.metadata["s2"] = s2;
    rep.metadata["theta"] = theta;
    return rep;
}

enum class ProductEstimateKind { symmetric, asymmetric };

struct ProductEstimateParams {
    double s1 = 0.0; // symmetric: the common regularity s; asymmetric: s1
    double s2 = 0.0; // asymmetric only
    double p = 0.0;  // symmetric target integrability
    double p1 = 0.0;
    double p2 = 0.0;
};

/// Product estimates in the l^1 Fourier-Besov scale. The symmetric form
/// bounds ||uv||_{s,p,1} by the cross terms at (p1, p2) with
/// 1 + 1/p = 1/p1 + 1/p2; the asymmetric form bounds the product at
/// s1 + s2 - n(1 - 1/p2) in (p1, 1).
inline EstimateReport product_estimate_check(ProductEstimateKind kind, const SpectralField& u,
                                             const SpectralField& v,
                                             const ProductEstimateParams& prm,
                                             const DyadicPartition& part) {
    const Grid& g = u.grid();
    const double n = g.dim();
    SpectralField uv = pointwise_product(u, v);

    if (kind == ProductEstimateKind::symmetric) {
        if (std::abs(1.0 + 1.0 / prm.p - 1.0 / prm.p1 - 1.0 / prm.p2) > 1e-12)
            throw parameter_error("product_estimate_check: need 1 + 1/p = 1/p1 + 1/p2");
        if (!(prm.s1 > 0.0)) throw parameter_error("product_estimate_check: need s > 0");
        const double lhs = fb_norm(uv, FBSpaceSpec::constant(prm.s1, prm.p, 1.0, g), part);
        const double rhs =
            fb_norm(u, FBSpaceSpec::constant(prm.s1, prm.p1, 1.0, g), part) *
                fb_norm(v, FBSpaceSpec::constant(0.0, prm.p2, 1.0, g), part) +
            fb_norm(u, FBSpaceSpec::constant(0.0, prm.p2, 1.0, g), part) *
                fb_norm(v, FBSpaceSpec::constant(prm.s1, prm.p1, 1.0, g), part);
        EstimateReport rep = EstimateReport::against_bound(
            "product-symmetric", lhs, rhs, std::numeric_limits<double>::infinity());
        rep.metadata["s"] = prm.s1;
        rep.metadata["p"] = prm.p;
        rep.metadata["p1"] = prm.p1;
        rep.metadata["p2"] = prm.p2;
        return rep;
    }

    if (!(prm.s1 <= n * std::min(1.0 - 1.0 / prm.p1, 1.0 - 1.0 / prm.p2)) ||
        !(prm.s2 <= n * (1.0 - 1.0 / prm.p2)) ||
        !(prm.s1 + prm.s2 > std::max(0.0, n * (1.0 - 1.0 / prm.p1 - 1.0 / prm.p2))))
        throw parameter_error("product_estimate_check: regularity constraints violated");
    const double starget = prm.s1 + prm.s2 - n * (1.0 - 1.0 / prm.p2);
    const double lhs = fb_norm(uv, FBSpaceSpec::constant(starget, prm.p1, 1.0, g), part);
    const double rhs = fb_norm(u, FBSpaceSpec::constant(prm.s1, prm.p1, 1.0, g), part) *
                       fb_norm(v, FBSpaceSpec::constant(prm.s2, prm.p2, 1.0, g), part);
    EstimateReport rep = EstimateReport::against_bound(
        "product-asymmetric", lhs, rhs, std::numeric_limits<double>::infinity());
    rep.metadata["s1"] = prm.s1;
    rep.metadata["s2"] = prm.s2;
    rep.metadata["p1"] = prm.p1;
    rep.metadata["p2"] = prm.p2;
    return rep;
}

/// Two-sided gradient equivalence: the norms of u at regularity s and of
/// grad u at s-1 agree up to the shell radii, so the empirical constant
/// stays below 4 on both sides.
inline EstimateReport gradient_equivalence_check(const SpectralField& u, const FBSpaceSpec& spec,
                                                 const DyadicPartition& part) {
    if (u.components() != 1)
        throw component_error("gradient_equivalence_check: expected a scalar field");
    const double nu = fb_norm(u, spec, part);
    const double ng = fb_norm(gradient_field(u), spec.with_regularity_shift(-1.0), part);
    const double ratio = ng / nu;
    EstimateReport rep;
    rep.label = "gradient-equivalence";
    rep.lhs = ng;
    rep.rhs = nu;
    rep.ratio = std::max(ratio, 1.0 / ratio);
    rep.tolerance = 0.0;
    rep.pass = rep.ratio <= 4.0;
    return rep;
}

} // namespace vfb

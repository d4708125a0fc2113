#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <json.hpp>

#include "vfb/grid.hpp"

namespace vfb {

/// Which coordinate of the lattice an exponent function is sampled over.
enum class ExponentDomain { frequency, physical };

/// A sampled exponent function p(.) >= 1 on the lattice with cached bounds
/// and a declared value at infinity. Regularity exponents s(.) are a
/// different animal (they may be negative) and are handled by RegularityField.
class ExponentField {
public:
    static constexpr double cap = 64.0;

    /// Lebesgue exponent: strictly above 1 everywhere.
    static ExponentField constant(double p0, const Grid& grid,
                                  ExponentDomain domain = ExponentDomain::frequency) {
        validate_value(p0, true);
        return ExponentField(grid, domain, std::vector<double>(grid.size(), p0), p0);
    }

    /// 1/p(x) = 1/p_inf - a / log(e + |x|), clipped into (1, cap].
    /// Saturates the decay condition with constant a wherever unclipped.
    static ExponentField decay_family(double p_inf, double a, const Grid& grid,
                                      ExponentDomain domain = ExponentDomain::frequency) {
        validate_value(p_inf, true);
        if (a < 0.0) throw exponent_range_error("decay_family: a must be nonnegative");
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double r = domain == ExponentDomain::frequency ? grid.frequency_radius(i)
                                                                 : grid.coordinate_radius(i);
            const double inv = 1.0 / p_inf - a / std::log(std::numbers::e + r);
            v[i] = inv > 1.0 / cap ? 1.0 / inv : cap;
        }
        ExponentField f(grid, domain, std::move(v), p_inf);
        if (!(f.p_minus() > 1.0))
            throw exponent_range_error("decay_family: resulting p_minus is not above 1");
        return f;
    }

    static ExponentField custom(std::vector<double> values, const Grid& grid,
                                ExponentDomain domain = ExponentDomain::frequency,
                                double p_inf = 0.0) {
        if (values.size() != grid.size())
            throw dimension_error("ExponentField: sample array does not match grid");
        for (double p : values) validate_value(p, true);
        if (p_inf == 0.0) {
            std::size_t far = 0;
            double rmax = -1.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double r = domain == ExponentDomain::frequency ? grid.frequency_radius(i)
                                                                     : grid.coordinate_radius(i);
                if (r > rmax) { rmax = r; far = i; }
            }
            p_inf = values[far];
        }
        return ExponentField(grid, domain, std::move(values), p_inf);
    }

    /// Summability exponent r(.): values of exactly 1 are allowed.
    static ExponentField summability(std::vector<double> values, const Grid& grid,
                                     ExponentDomain domain = ExponentDomain::frequency) {
        if (values.size() != grid.size())
            throw dimension_error("ExponentField: sample array does not match grid");
        for (double p : values) validate_value(p, false);
        double p_inf = values.back();
        return ExponentField(grid, domain, std::move(values), p_inf);
    }

    static ExponentField constant_summability(double r0, const Grid& grid,
                                              ExponentDomain domain = ExponentDomain::frequency) {
        validate_value(r0, false);
        return ExponentField(grid, domain, std::vector<double>(grid.size(), r0), r0);
    }

    const Grid& grid() const { return grid_; }
    ExponentDomain domain() const { return domain_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double p_minus() const { return p_minus_; }
    double p_plus() const { return p_plus_; }
    double p_infinity() const { return p_inf_; }
    bool is_constant() const { return p_minus_ == p_plus_; }

    /// Lattice measure matching the sampling domain.
    double cell_measure() const {
        return domain_ == ExponentDomain::frequency ? grid_.cell_volume_frequency()
                                                    : grid_.cell_volume_physical();
    }

    double radius(std::size_t i) const {
        return domain_ == ExponentDomain::frequency ? grid_.frequency_radius(i)
                                                    : grid_.coordinate_radius(i);
    }

    std::array<double, 3> point(std::size_t i) const {
        return domain_ == ExponentDomain::frequency ? grid_.frequency(i) : grid_.coordinate(i);
    }

    /// Pointwise 1/p = 1/p1 + 1/p2 (Lebesgue-conjugate combination).
    static ExponentField holder_combination(const ExponentField& p1, const ExponentField& p2) {
        if (p1.grid() != p2.grid() || p1.domain() != p2.domain())
            throw dimension_error("holder_combination: exponent fields live on different lattices");
        std::vector<double> v(p1.grid().size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double inv = 1.0 / p1[i] + 1.0 / p2[i];
            if (!(inv < 1.0))
                throw exponent_range_error(
                    "holder_combination: combined exponent leaves the valid range");
            v[i] = 1.0 / inv;
        }
        double p_inf = 1.0 / (1.0 / p1.p_infinity() + 1.0 / p2.p_infinity());
        return ExponentField(p1.grid(), p1.domain(), std::move(v), p_inf);
    }

    /// Pointwise ratio p/r for the mixed sequence modular; must stay >= 1.
    static ExponentField ratio(const ExponentField& p, const ExponentField& r) {
        if (p.grid() != r.grid() || p.domain() != r.domain())
            throw dimension_error("ExponentField::ratio: lattice mismatch");
        std::vector<double> v(p.grid().size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = p[i] / r[i];
            if (v[i] < 1.0)
                throw exponent_range_error("ExponentField::ratio: exponent ratio below 1");
        }
        return ExponentField(p.grid(), p.domain(), std::move(v), p.p_infinity() / r.p_infinity());
    }

    nlohmann::ordered_json metadata() const {
        nlohmann::ordered_json j;
        j["p_minus"] = p_minus_;
        j["p_plus"] = p_plus_;
        j["p_infinity"] = p_inf_;
        j["domain"] = domain_ == ExponentDomain::frequency ? "frequency" : "physical";
        return j;
    }

private:
    ExponentField(const Grid& grid, ExponentDomain domain, std::vector<double> values,
                  double p_inf)
        : grid_(grid), domain_(domain), values_(std::move(values)), p_inf_(p_inf) {
        auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
        p_minus_ = *lo;
        p_plus_ = *hi;
    }

    static void validate_value(double p, bool strict) {
        if (strict ? !(p > 1.0) : !(p >= 1.0))
            throw exponent_range_error("ExponentField: exponent value out of range");
        if (p > cap) throw exponent_range_error("ExponentField: exponent exceeds the cap of 64");
    }

    Grid grid_;
    ExponentDomain domain_;
    std::vector<double> values_;
    double p_inf_;
    double p_minus_ = 0.0;
    double p_plus_ = 0.0;
};

/// Bounded regularity exponent s(.) on the frequency lattice; may be negative.
class RegularityField {
public:
    static RegularityField constant(double s0, const Grid& grid) {
        return RegularityField(grid, std::vector<double>(grid.size(), s0));
    }

    /// s(xi) = s_inf + a / log(e + |xi|): log-Holder with decay constant a.
    static RegularityField decay_family(double s_inf, double a, const Grid& grid) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            v[i] = s_inf + a / std::log(std::numbers::e + grid.frequency_radius(i));
        return RegularityField(grid, std::move(v));
    }

    static RegularityField custom(std::vector<double> values, const Grid& grid) {
        if (values.size() != grid.size())
            throw dimension_error("RegularityField: sample array does not match grid");
        return RegularityField(grid, std::move(values));
    }

    const Grid& grid() const { return grid_; }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    bool is_constant() const { return s_minus_ == s_plus_; }
    double s_minus() const { return s_minus_; }
    double s_plus() const { return s_plus_; }

    RegularityField shifted(double delta) const {
        std::vector<double> v = values_;
        for (double& s : v) s += delta;
        return RegularityField(grid_, std::move(v));
    }

private:
    RegularityField(const Grid& grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
        s_minus_ = *lo;
        s_plus_ = *hi;
    }

    Grid grid_;
    std::vector<double> values_;
    double s_minus_ = 0.0;
    double s_plus_ = 0.0;
};

/// Best empirical log-Holder constants of 1/p over sampled lattice pairs.
struct LogHolderReport {
    double c_local = 0.0;
    double c_decay = 0.0;
    std::size_t sample_count = 0;
};

inline LogHolderReport log_holder_constants(const ExponentField& p,
                                            std::size_t pair_budget = 1'000'000,
                                            std::uint64_t seed = 0x5eed) {
    LogHolderReport rep;
    const std::size_t n = p.grid().size();
    const auto pair_value = [&](std::size_t i, std::size_t j) {
        auto a = p.point(i);
        auto b = p.point(j);
        const double dx = std::sqrt((a[0] - b[0]) * (a[0] - b[0]) +
                                    (a[1] - b[1]) * (a[1] - b[1]) +
                                    (a[2] - b[2]) * (a[2] - b[2]));
        if (dx == 0.0) return 0.0;
        return std::abs(1.0 / p[i] - 1.0 / p[j]) * std::log(std::numbers::e + 1.0 / dx);
    };

    if (n * (n - 1) / 2 <= pair_budget) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                rep.c_local = std::max(rep.c_local, pair_value(i, j));
                ++rep.sample_count;
            }
    } else {
        std::mt19937_64 eng(seed);
        for (std::size_t s = 0; s < pair_budget; ++s) {
            std::size_t i = static_cast<std::size_t>(eng() % n);
            std::size_t j = static_cast<std::size_t>(eng() % n);
            if (i == j) continue;
            rep.c_local = std::max(rep.c_local, pair_value(i, j));
            ++rep.sample_count;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double r = p.radius(i);
        rep.c_decay = std::max(rep.c_decay, std::abs(1.0 / p[i] - 1.0 / p.p_infinity()) *
                                                std::log(std::numbers::e + r));
    }
    return rep;
}

inline ExponentField make_exponent_constant(double p0, const Grid& grid,
                                            ExponentDomain domain = ExponentDomain::frequency) {
    return ExponentField::constant(p0, grid, domain);
}

} // namespace vfb

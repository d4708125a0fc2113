#pragma once

#include <cmath>
#include <vector>

#include <json.hpp>

#include "vfb/field.hpp"
#include "vfb/grid.hpp"

namespace vfb {

/// Radial cutoff profile: chi(r) = 1 for r <= 3/4, 0 for r >= 4/3, joined by
/// the smoothstep built from exp(-1/x) mollification. The transition is
/// sampled once on a dense table and linearly interpolated, so every mask in
/// the program evaluates the identical function and telescoping sums cancel
/// exactly.
class DyadicProfile {
public:
    static constexpr double inner = 0.75;      // chi == 1 inside
    static constexpr double outer = 4.0 / 3.0; // chi == 0 outside

    static double chi(double r) {
        if (r <= inner) return 1.0;
        if (r >= outer) return 0.0;
        const auto& tab = table();
        const double s = (r - inner) / (outer - inner) * (tab.size() - 1);
        const std::size_t i0 = std::min(static_cast<std::size_t>(s), tab.size() - 2);
        const double f = s - static_cast<double>(i0);
        return tab[i0] * (1.0 - f) + tab[i0 + 1] * f;
    }

    /// phi(r) = chi(r/2) - chi(r); supported in 3/4 <= r <= 8/3.
    static double phi(double r) { return chi(0.5 * r) - chi(r); }

    static const std::vector<double>& table() {
        static const std::vector<double> tab = build_table();
        return tab;
    }

private:
    static std::vector<double> build_table() {
        const std::size_t n = 1 << 14;
        std::vector<double> tab(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double x = 1.0 - static_cast<double>(i) / static_cast<double>(n);
            tab[i] = smooth_step(x);
        }
        tab.front() = 1.0;
        tab.back() = 0.0;
        return tab;
    }

    static double smooth_step(double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const double a = std::exp(-1.0 / x);
        const double b = std::exp(-1.0 / (1.0 - x));
        return a / (a + b);
    }
};

/// Dyadic partition of the frequency lattice: per-shell masks phi_j and
/// cumulative low-frequency masks chi_j.
///
/// The shell range is tied to the lattice: j_min is the lowest shell whose
/// inner edge (3/4)*2^j sits at or below the smallest nonzero frequency, and
/// j_max the analogue for the largest lattice frequency. All profile mass
/// from shells below j_min is folded into the lowest mask, so the masks sum
/// to one at every nonzero lattice point and chi_j equals the partial sum of
/// the masks below j exactly.
class DyadicPartition {
public:
    static DyadicPartition build(const Grid& grid) {
        const int lo = edge_index(grid.min_frequency_radius());
        const int hi = edge_index(grid.max_frequency_radius());
        return DyadicPartition(grid, lo, hi, true);
    }

    /// Restricted range without the folded bottom shell. Intended for
    /// experiments that need frequency content outside the covered band.
    static DyadicPartition build_range(const Grid& grid, int j_lo, int j_hi) {
        return DyadicPartition(grid, j_lo, j_hi, false);
    }

    const Grid& grid() const { return grid_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int shells() const { return j_max_ - j_min_ + 1; }

    const std::vector<double>& phi_mask(int j) const {
        check_block_index(j);
        return phi_[static_cast<std::size_t>(j - j_min_)];
    }
    const std::vector<double>& chi_mask(int j) const {
        if (j < j_min_ || j > j_max_ + 1)
            throw index_error("DyadicPartition: cutoff index out of range");
        return chi_[static_cast<std::size_t>(j - j_min_)];
    }

    /// Lattice points where phi_j is nonzero.
    const std::vector<std::size_t>& support(int j) const {
        check_block_index(j);
        return support_[static_cast<std::size_t>(j - j_min_)];
    }

    /// Sum of all shell masks at one lattice point.
    double coverage(std::size_t flat) const {
        double s = 0.0;
        for (const auto& mask : phi_) s += mask[flat];
        return s;
    }

    SpectralField block(const SpectralField& field, int j) const {
        check_field(field);
        const auto& mask = phi_mask(j);
        SpectralField out(field.grid(), field.components(), field.zero_mode_policy());
        for (int c = 0; c < field.components(); ++c)
            for (std::size_t i : support(j)) out.at(c, i) = mask[i] * field.at(c, i);
        return out;
    }

    SpectralField low_cutoff(const SpectralField& field, int j) const {
        check_field(field);
        const auto& mask = chi_mask(j);
        SpectralField out(field.grid(), field.components(), field.zero_mode_policy());
        for (int c = 0; c < field.components(); ++c)
            for (std::size_t i = 0; i < grid_.size(); ++i)
                out.at(c, i) = mask[i] * field.at(c, i);
        out.enforce_zero_mode();
        return out;
    }

    /// Shell index whose dyadic band contains radius r (inner-edge rule).
    static int edge_index(double r) {
        return static_cast<int>(std::floor(std::log2(r * 4.0 / 3.0)));
    }

    nlohmann::ordered_json metadata() const {
        nlohmann::ordered_json j;
        j["j_min"] = j_min_;
        j["j_max"] = j_max_;
        j["profile_inner"] = DyadicProfile::inner;
        j["profile_outer"] = DyadicProfile::outer;
        j["profile_samples"] = DyadicProfile::table().size();
        return j;
    }

private:
    DyadicPartition(const Grid& grid, int j_lo, int j_hi, bool fold_bottom)
        : grid_(grid), j_min_(j_lo), j_max_(j_hi) {
        if (shells() < 3)
            throw resolution_error("DyadicPartition: grid too coarse to host 3 shells");
        phi_.resize(static_cast<std::size_t>(shells()));
        chi_.resize(static_cast<std::size_t>(shells()) + 1);
        support_.resize(static_cast<std::size_t>(shells()));

        for (int j = j_min_; j <= j_max_; ++j) {
            auto& mask = phi_[static_cast<std::size_t>(j - j_min_)];
            mask.assign(grid.size(), 0.0);
            for (std::size_t i = 1; i < grid.size(); ++i) {
                const double r = grid.frequency_radius(i);
                const double scaled = std::ldexp(r, -j);
                mask[i] = (fold_bottom && j == j_min_) ? DyadicProfile::chi(0.5 * scaled)
                                                       : DyadicProfile::phi(scaled);
                if (mask[i] != 0.0)
                    support_[static_cast<std::size_t>(j - j_min_)].push_back(i);
            }
        }
        // chi_j as exact partial sums of the shell masks below j.
        for (int j = j_min_; j <= j_max_ + 1; ++j) {
            auto& mask = chi_[static_cast<std::size_t>(j - j_min_)];
            mask.assign(grid.size(), 0.0);
            mask[0] = 1.0;
            if (j > j_min_) {
                const auto& prev = chi_[static_cast<std::size_t>(j - 1 - j_min_)];
                const auto& shell = phi_[static_cast<std::size_t>(j - 1 - j_min_)];
                for (std::size_t i = 1; i < grid.size(); ++i) mask[i] = prev[i] + shell[i];
            }
        }
    }

    void check_block_index(int j) const {
        if (j < j_min_ || j > j_max_)
            throw index_error("DyadicPartition: shell index out of range");
    }
    void check_field(const SpectralField& field) const {
        if (field.grid() != grid_)
            throw dimension_error("DyadicPartition: field grid does not match partition");
    }

    Grid grid_;
    int j_min_;
    int j_max_;
    std::vector<std::vector<double>> phi_;
    std::vector<std::vector<double>> chi_;
    std::vector<std::vector<std::size_t>> support_;
};

inline DyadicPartition build_partition(const Grid& grid) { return DyadicPartition::build(grid); }

} // namespace vfb

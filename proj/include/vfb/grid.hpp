#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "vfb/errors.hpp"

namespace vfb {

/// Periodic box [-pi*L, pi*L]^dim sampled on N points per axis, with the
/// dual frequency lattice xi = k/L, k in {-N/2, ..., N/2-1} per axis.
///
/// Indices are stored in transform order: axis index m in [0, N) maps to the
/// signed wavenumber k = m for m < N/2 and k = m - N otherwise.
class Grid {
public:
    Grid(int dim, int points_per_axis, double box_half_width)
        : dim_(dim), n_(points_per_axis), box_(box_half_width) {
        if (dim < 1 || dim > 3)
            throw dimension_error("Grid: dim must be 1, 2 or 3");
        if (n_ < 8 || (n_ & (n_ - 1)) != 0)
            throw dimension_error("Grid: points_per_axis must be a power of two >= 8");
        if (!(box_ > 0.0))
            throw dimension_error("Grid: box_half_width must be positive");
        size_ = 1;
        for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_);
    }

    int dim() const { return dim_; }
    int points_per_axis() const { return n_; }
    double box_half_width() const { return box_; }
    std::size_t size() const { return size_; }

    /// Physical mesh spacing 2*pi*L/N.
    double spacing() const { return 2.0 * std::numbers::pi * box_ / n_; }
    /// Frequency lattice spacing 1/L.
    double freq_spacing() const { return 1.0 / box_; }
    /// Physical cell measure h^dim.
    double cell_volume_physical() const { return std::pow(spacing(), dim_); }
    /// Frequency cell measure (1/L)^dim.
    double cell_volume_frequency() const { return std::pow(freq_spacing(), dim_); }

    /// Signed wavenumber integer on one axis for transform-order index m.
    int wavenumber(int m) const { return m < n_ / 2 ? m : m - n_; }
    /// Transform-order index for a signed wavenumber.
    int index_of_wavenumber(int k) const { return k >= 0 ? k : k + n_; }

    /// Decompose a flat index into per-axis transform-order indices.
    std::array<int, 3> unflatten(std::size_t flat) const {
        std::array<int, 3> m{0, 0, 0};
        for (int a = dim_ - 1; a >= 0; --a) {
            m[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(n_));
            flat /= static_cast<std::size_t>(n_);
        }
        return m;
    }

    std::size_t flatten(const std::array<int, 3>& m) const {
        std::size_t flat = 0;
        for (int a = 0; a < dim_; ++a)
            flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(m[static_cast<std::size_t>(a)]);
        return flat;
    }

    /// Flat index of the mirrored lattice point (-k mod N per axis).
    std::size_t conjugate_index(std::size_t flat) const {
        auto m = unflatten(flat);
        for (int a = 0; a < dim_; ++a) {
            int& mi = m[static_cast<std::size_t>(a)];
            mi = (n_ - mi) % n_;
        }
        return flatten(m);
    }

    /// True if the point is its own mirror (every axis index is 0 or N/2).
    bool self_conjugate(std::size_t flat) const {
        auto m = unflatten(flat);
        for (int a = 0; a < dim_; ++a) {
            int mi = m[static_cast<std::size_t>(a)];
            if (mi != 0 && mi != n_ / 2) return false;
        }
        return true;
    }

    /// True if any axis carries the Nyquist wavenumber -N/2.
    bool on_nyquist(std::size_t flat) const {
        auto m = unflatten(flat);
        for (int a = 0; a < dim_; ++a)
            if (m[static_cast<std::size_t>(a)] == n_ / 2) return true;
        return false;
    }

    /// Frequency vector xi = k/L at a flat index.
    std::array<double, 3> frequency(std::size_t flat) const {
        auto m = unflatten(flat);
        std::array<double, 3> xi{0.0, 0.0, 0.0};
        for (int a = 0; a < dim_; ++a)
            xi[static_cast<std::size_t>(a)] = wavenumber(m[static_cast<std::size_t>(a)]) / box_;
        return xi;
    }

    double frequency_radius(std::size_t flat) const {
        auto xi = frequency(flat);
        return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    }

    /// Physical coordinates x = -pi*L + j*h at a flat index.
    std::array<double, 3> coordinate(std::size_t flat) const {
        auto m = unflatten(flat);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        const double h = spacing();
        for (int a = 0; a < dim_; ++a)
            x[static_cast<std::size_t>(a)] = -std::numbers::pi * box_ + h * m[static_cast<std::size_t>(a)];
        return x;
    }

    double coordinate_radius(std::size_t flat) const {
        auto x = coordinate(flat);
        return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    }

    /// Smallest nonzero frequency radius, 1/L.
    double min_frequency_radius() const { return 1.0 / box_; }
    /// Largest frequency radius on the lattice (corner of the cube).
    double max_frequency_radius() const {
        return std::sqrt(static_cast<double>(dim_)) * (n_ / 2) / box_;
    }
    /// Largest per-axis wavenumber kept by the 2/3 dealiasing rule.
    int dealias_limit() const { return n_ / 3; }

    bool operator==(const Grid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && box_ == other.box_;
    }
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    int dim_;
    int n_;
    double box_;
    std::size_t size_;
};

} // namespace vfb

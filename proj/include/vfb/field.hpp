#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "vfb/fft.hpp"
#include "vfb/grid.hpp"

namespace vfb {

enum class ZeroMode { forced_zero, free_mode };

/// Fourier coefficients of a real field on the periodic box, one coefficient
/// array per component. The continuum transform realized here is
///   c(xi_k) = (2*pi)^{-d/2} * h^d * sum_j f(x_j) e^{-i x_j . xi_k},
/// so frequency-side integrals become lattice sums weighted by (1/L)^d and
/// Parseval holds exactly against the physical lattice measure h^d.
class SpectralField {
public:
    SpectralField(Grid grid, int components, ZeroMode policy = ZeroMode::forced_zero)
        : grid_(grid), components_(components), policy_(policy),
          c_(static_cast<std::size_t>(components) * grid.size()) {
        if (components < 1) throw component_error("SpectralField: components must be >= 1");
    }

    static SpectralField zeros(const Grid& grid, int components = 1,
                               ZeroMode policy = ZeroMode::forced_zero) {
        return SpectralField(grid, components, policy);
    }

    const Grid& grid() const { return grid_; }
    int components() const { return components_; }
    ZeroMode zero_mode_policy() const { return policy_; }

    std::complex<double>& at(int comp, std::size_t flat) {
        return c_[static_cast<std::size_t>(comp) * grid_.size() + flat];
    }
    const std::complex<double>& at(int comp, std::size_t flat) const {
        return c_[static_cast<std::size_t>(comp) * grid_.size() + flat];
    }

    std::span<std::complex<double>> component(int comp) {
        return {c_.data() + static_cast<std::size_t>(comp) * grid_.size(), grid_.size()};
    }
    std::span<const std::complex<double>> component(int comp) const {
        return {c_.data() + static_cast<std::size_t>(comp) * grid_.size(), grid_.size()};
    }

    /// Pointwise Euclidean magnitude across components.
    std::vector<double> magnitude() const {
        std::vector<double> mag(grid_.size(), 0.0);
        for (int c = 0; c < components_; ++c)
            for (std::size_t i = 0; i < grid_.size(); ++i)
                mag[i] += std::norm(at(c, i));
        for (double& v : mag) v = std::sqrt(v);
        return mag;
    }

    /// Frequency-side L2 norm: (sum |c|^2 * (1/L)^d)^{1/2}, all components.
    double l2_norm() const {
        double s = 0.0;
        for (const auto& z : c_) s += std::norm(z);
        return std::sqrt(s * grid_.cell_volume_frequency());
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : c_) m = std::max(m, std::abs(z));
        return m;
    }

    /// Enforce c(-k) = conj(c(k)); self-conjugate points become real.
    void symmetrize_hermitian() {
        for (int c = 0; c < components_; ++c) {
            for (std::size_t i = 0; i < grid_.size(); ++i) {
                std::size_t j = grid_.conjugate_index(i);
                if (j < i) continue;
                if (i == j) {
                    at(c, i) = std::complex<double>(at(c, i).real(), 0.0);
                } else {
                    std::complex<double> avg = 0.5 * (at(c, i) + std::conj(at(c, j)));
                    at(c, i) = avg;
                    at(c, j) = std::conj(avg);
                }
            }
        }
        enforce_zero_mode();
    }

    /// Largest deviation from Hermitian symmetry, absolute.
    double hermitian_defect() const {
        double d = 0.0;
        for (int c = 0; c < components_; ++c)
            for (std::size_t i = 0; i < grid_.size(); ++i) {
                std::size_t j = grid_.conjugate_index(i);
                d = std::max(d, std::abs(at(c, i) - std::conj(at(c, j))));
            }
        return d;
    }

    void enforce_zero_mode() {
        if (policy_ != ZeroMode::forced_zero) return;
        for (int c = 0; c < components_; ++c) at(c, 0) = 0.0;
    }

    /// Zero every coefficient on a Nyquist row.
    void zero_nyquist() {
        for (std::size_t i = 0; i < grid_.size(); ++i)
            if (grid_.on_nyquist(i))
                for (int c = 0; c < components_; ++c) at(c, i) = 0.0;
    }

    /// Zero every mode with any axis wavenumber beyond the 2/3 limit
    /// (this includes the Nyquist rows).
    void dealias() {
        const int kmax = grid_.dealias_limit();
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            auto m = grid_.unflatten(i);
            bool keep = true;
            for (int a = 0; a < grid_.dim(); ++a)
                if (std::abs(grid_.wavenumber(m[static_cast<std::size_t>(a)])) > kmax) keep = false;
            if (!keep)
                for (int c = 0; c < components_; ++c) at(c, i) = 0.0;
        }
    }

    bool is_band_limited() const {
        const int kmax = grid_.dealias_limit();
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            auto m = grid_.unflatten(i);
            for (int a = 0; a < grid_.dim(); ++a)
                if (std::abs(grid_.wavenumber(m[static_cast<std::size_t>(a)])) > kmax)
                    for (int c = 0; c < components_; ++c)
                        if (at(c, i) != 0.0) return false;
        }
        return true;
    }

    SpectralField& operator+=(const SpectralField& other) {
        check_compatible(other);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& other) {
        check_compatible(other);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& z : c_) z *= s;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

private:
    void check_compatible(const SpectralField& other) const {
        if (grid_ != other.grid_ || components_ != other.components_)
            throw dimension_error("SpectralField: grid or component mismatch");
    }

    Grid grid_;
    int components_;
    ZeroMode policy_;
    std::vector<std::complex<double>> c_;
};

namespace detail {

inline int phase_parity(const Grid& grid, std::size_t flat) {
    auto m = grid.unflatten(flat);
    int s = 0;
    for (int a = 0; a < grid.dim(); ++a) s += m[static_cast<std::size_t>(a)];
    return (s & 1) ? -1 : 1;
}

} // namespace detail

/// Forward transform of real samples (one span per component, each of grid
/// size, in row-major physical order).
inline SpectralField to_spectral(std::span<const double> samples, const Grid& grid,
                                 ZeroMode policy = ZeroMode::forced_zero) {
    if (samples.size() != grid.size())
        throw dimension_error("to_spectral: sample array does not match grid");
    SpectralField out(grid, 1, policy);
    std::vector<std::complex<double>> buf(samples.begin(), samples.end());
    detail::dft_forward(buf.data(), grid);
    const double scale =
        std::pow(2.0 * std::numbers::pi, -0.5 * grid.dim()) * grid.cell_volume_physical();
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.at(0, i) = scale * static_cast<double>(detail::phase_parity(grid, i)) * buf[i];
    out.symmetrize_hermitian();
    return out;
}

inline SpectralField to_spectral(const std::vector<std::vector<double>>& components,
                                 const Grid& grid, ZeroMode policy = ZeroMode::forced_zero) {
    SpectralField out(grid, static_cast<int>(components.size()), policy);
    for (std::size_t c = 0; c < components.size(); ++c) {
        SpectralField one = to_spectral(std::span<const double>(components[c]), grid, policy);
        std::copy(one.component(0).begin(), one.component(0).end(),
                  out.component(static_cast<int>(c)).begin());
    }
    return out;
}

/// Inverse transform of one component back to real samples. The imaginary
/// residue must stay below 1e-12 of the field's physical magnitude.
inline std::vector<double> to_physical(const SpectralField& field, int comp = 0) {
    const Grid& grid = field.grid();
    std::vector<std::complex<double>> buf(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        buf[i] = static_cast<double>(detail::phase_parity(grid, i)) * field.at(comp, i);
    detail::dft_backward(buf.data(), grid);
    const double scale = std::pow(2.0 * std::numbers::pi, -0.5 * grid.dim()) *
                         grid.cell_volume_frequency();
    double max_re = 0.0, max_im = 0.0;
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = scale * buf[i].real();
        max_re = std::max(max_re, std::abs(out[i]));
        max_im = std::max(max_im, std::abs(scale * buf[i].imag()));
    }
    if (max_im > 1e-12 * std::max(max_re, 1e-300))
        throw symmetry_error("to_physical: field is not Hermitian-symmetric");
    return out;
}

inline std::vector<std::vector<double>> to_physical_all(const SpectralField& field) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(field.components()));
    for (int c = 0; c < field.components(); ++c) out.push_back(to_physical(field, c));
    return out;
}

/// Physical-side L2 norm of real samples: (sum f^2 * h^d)^{1/2}.
inline double physical_l2_norm(std::span<const double> samples, const Grid& grid) {
    double s = 0.0;
    for (double v : samples) s += v * v;
    return std::sqrt(s * grid.cell_volume_physical());
}

} // namespace vfb

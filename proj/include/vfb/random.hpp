#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "vfb/dyadic.hpp"
#include "vfb/field.hpp"
#include "vfb/symbols.hpp"
#include "vfb/trajectory.hpp"

namespace vfb {

/// Deterministic generator with hand-rolled distributions, so streams are
/// reproducible independently of the standard library in use.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Derive an independent stream for a sample index.
    Rng fork(std::uint64_t salt) const {
        std::uint64_t h = 0xcbf29ce484222325ull ^ seed_base_;
        h = (h ^ salt) * 0x100000001b3ull;
        h = (h ^ (salt >> 32)) * 0x100000001b3ull;
        return Rng(h);
    }

    static Rng seeded(std::uint64_t seed) {
        Rng r(seed);
        r.seed_base_ = seed;
        return r;
    }

private:
    std::mt19937_64 eng_;
    std::uint64_t seed_base_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Band-limited random field: Gaussian coefficients inside the dealiased
/// ball with one log-uniform amplitude per dyadic shell, Hermitian-symmetric
/// and mean-zero; divergence-free on request.
inline SpectralField random_band_limited_field(const Grid& grid, int components, Rng& rng,
                                               bool divergence_free = false,
                                               double amp_lo = 1e-2, double amp_hi = 1.0) {
    SpectralField f(grid, components);
    const int kmax = grid.dealias_limit();
    const int j_lo = DyadicPartition::edge_index(grid.min_frequency_radius());
    const int j_hi = DyadicPartition::edge_index(grid.max_frequency_radius());
    std::vector<double> shell_amp(static_cast<std::size_t>(j_hi - j_lo + 1));
    const double lo = std::log(amp_lo), hi = std::log(amp_hi);
    for (double& a : shell_amp) a = std::exp(rng.uniform(lo, hi));

    for (std::size_t i = 1; i < grid.size(); ++i) {
        auto m = grid.unflatten(i);
        bool keep = true;
        for (int a = 0; a < grid.dim(); ++a)
            if (std::abs(grid.wavenumber(m[static_cast<std::size_t>(a)])) > kmax) keep = false;
        if (!keep) continue;
        const int j = std::clamp(DyadicPartition::edge_index(grid.frequency_radius(i)), j_lo, j_hi);
        const double amp = shell_amp[static_cast<std::size_t>(j - j_lo)];
        for (int c = 0; c < components; ++c)
            f.at(c, i) = amp * std::complex<double>(rng.normal(), rng.normal());
    }
    f.symmetrize_hermitian();
    f.dealias();
    if (divergence_free) {
        if (components != grid.dim())
            throw component_error("random_band_limited_field: divergence-free needs a vector field");
        f = apply_symbol(f, SymbolSpec::leray());
    }
    return f;
}

/// Heat-flow trajectory seeded with a random band-limited field.
inline Trajectory random_heat_trajectory(const Grid& grid, int components, Rng& rng,
                                         std::vector<double> times, double alpha,
                                         bool divergence_free = false) {
    SpectralField u0 = random_band_limited_field(grid, components, rng, divergence_free);
    std::vector<SpectralField> snaps;
    snaps.reserve(times.size());
    for (double t : times) snaps.push_back(apply_symbol(u0, SymbolSpec::heat_multiplier(t, alpha)));
    return Trajectory(std::move(times), std::move(snaps));
}

} // namespace vfb

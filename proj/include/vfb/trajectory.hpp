#pragma once

#include <cmath>
#include <vector>

#include "vfb/field.hpp"

namespace vfb {

/// Strictly increasing time nodes with one spectral field per node.
class Trajectory {
public:
    Trajectory(std::vector<double> times, std::vector<SpectralField> snapshots)
        : times_(std::move(times)), snaps_(std::move(snapshots)) {
        if (times_.empty() || times_.size() != snaps_.size())
            throw dimension_error("Trajectory: node and snapshot counts differ");
        for (std::size_t i = 0; i + 1 < times_.size(); ++i)
            if (!(times_[i] < times_[i + 1]))
                throw dimension_error("Trajectory: time nodes must be strictly increasing");
        for (const auto& s : snaps_)
            if (s.grid() != snaps_.front().grid() ||
                s.components() != snaps_.front().components())
                throw dimension_error("Trajectory: snapshots disagree on grid or components");
    }

    static Trajectory constant(const SpectralField& field, std::vector<double> times) {
        std::vector<SpectralField> snaps(times.size(), field);
        return Trajectory(std::move(times), std::move(snaps));
    }

    std::size_t nodes() const { return times_.size(); }
    double time(std::size_t i) const { return times_[i]; }
    const std::vector<double>& times() const { return times_; }
    double horizon() const { return times_.back(); }
    const SpectralField& snapshot(std::size_t i) const { return snaps_[i]; }
    SpectralField& snapshot(std::size_t i) { return snaps_[i]; }
    const Grid& grid() const { return snaps_.front().grid(); }
    int components() const { return snaps_.front().components(); }

    bool covers(double t) const {
        return times_.front() <= t + 1e-15 && t <= times_.back() + 1e-15;
    }

    /// Nodes up to and including T (used for monotonicity-in-T checks).
    Trajectory truncated(double T) const {
        std::vector<double> times;
        std::vector<SpectralField> snaps;
        for (std::size_t i = 0; i < nodes(); ++i) {
            if (times_[i] > T + 1e-15) break;
            times.push_back(times_[i]);
            snaps.push_back(snaps_[i]);
        }
        return Trajectory(std::move(times), std::move(snaps));
    }

    Trajectory& operator+=(const Trajectory& other) {
        check_compatible(other);
        for (std::size_t i = 0; i < nodes(); ++i) snaps_[i] += other.snaps_[i];
        return *this;
    }
    Trajectory& operator-=(const Trajectory& other) {
        check_compatible(other);
        for (std::size_t i = 0; i < nodes(); ++i) snaps_[i] -= other.snaps_[i];
        return *this;
    }
    Trajectory& operator*=(double c) {
        for (auto& s : snaps_) s *= c;
        return *this;
    }
    friend Trajectory operator+(Trajectory a, const Trajectory& b) { return a += b; }
    friend Trajectory operator-(Trajectory a, const Trajectory& b) { return a -= b; }
    friend Trajectory operator*(double c, Trajectory a) { return a *= c; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& s : snaps_) m = std::max(m, s.max_abs());
        return m;
    }

private:
    void check_compatible(const Trajectory& other) const {
        if (times_ != other.times_)
            throw dimension_error("Trajectory: node sets differ");
    }

    std::vector<double> times_;
    std::vector<SpectralField> snaps_;
};

/// Uniform nodes 0 = t_0 < ... < t_M = T.
inline std::vector<double> uniform_nodes(double T, std::size_t intervals) {
    if (!(T > 0.0) || intervals == 0)
        throw quadrature_error("uniform_nodes: need T > 0 and at least one interval");
    std::vector<double> t(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        t[i] = T * static_cast<double>(i) / static_cast<double>(intervals);
    return t;
}

/// Power-graded nodes t_i = T (i/M)^gamma, clustered near zero. The heat
/// kernel drains the high shells almost immediately, so time quadrature
/// needs most of its nodes there.
inline std::vector<double> graded_nodes(double T, std::size_t intervals, double gamma = 3.0) {
    if (!(T > 0.0) || intervals == 0)
        throw quadrature_error("graded_nodes: need T > 0 and at least one interval");
    std::vector<double> t(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        t[i] = T * std::pow(static_cast<double>(i) / static_cast<double>(intervals), gamma);
    return t;
}

} // namespace vfb

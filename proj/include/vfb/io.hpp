#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vfb/field.hpp"
#include "vfb/trajectory.hpp"

namespace vfb {

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Field snapshot: header row with the grid metadata, then one CSV row
/// (component, k0, k1, k2, re, im) per stored coefficient. Zeros are
/// skipped; the loader restores them.
inline void save_field_csv(const SpectralField& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw error("save_field_csv: cannot open " + path.string());
    const Grid& g = field.grid();
    out << "dim,points,box,components,zero_mode\n";
    out << g.dim() << ',' << g.points_per_axis() << ',' << detail::format_double(g.box_half_width())
        << ',' << field.components() << ','
        << (field.zero_mode_policy() == ZeroMode::forced_zero ? "forced_zero" : "free") << '\n';
    out << "component,k0,k1,k2,re,im\n";
    for (int c = 0; c < field.components(); ++c)
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::complex<double> z = field.at(c, i);
            if (z == 0.0) continue;
            auto m = g.unflatten(i);
            out << c << ',' << g.wavenumber(m[0]) << ',' << (g.dim() > 1 ? g.wavenumber(m[1]) : 0)
                << ',' << (g.dim() > 2 ? g.wavenumber(m[2]) : 0) << ','
                << detail::format_double(z.real()) << ',' << detail::format_double(z.imag())
                << '\n';
        }
    if (!out) throw error("save_field_csv: write failed for " + path.string());
}

inline SpectralField load_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw error("load_field_csv: cannot open " + path.string());
    std::string line;
    std::getline(in, line); // header names
    std::getline(in, line);
    std::istringstream hdr(line);
    int dim = 0, points = 0, components = 0;
    double box = 0.0;
    std::string policy;
    char comma;
    hdr >> dim >> comma >> points >> comma >> box >> comma >> components >> comma;
    std::getline(hdr, policy);
    Grid g(dim, points, box);
    SpectralField f(g, components,
                    policy == "forced_zero" ? ZeroMode::forced_zero : ZeroMode::free_mode);
    std::getline(in, line); // column names
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        int c = 0, k0 = 0, k1 = 0, k2 = 0;
        double re = 0.0, im = 0.0;
        row >> c >> comma >> k0 >> comma >> k1 >> comma >> k2 >> comma >> re >> comma >> im;
        std::array<int, 3> m{g.index_of_wavenumber(k0),
                             dim > 1 ? g.index_of_wavenumber(k1) : 0,
                             dim > 2 ? g.index_of_wavenumber(k2) : 0};
        f.at(c, g.flatten(m)) = {re, im};
    }
    f.enforce_zero_mode();
    return f;
}

/// Trajectory snapshots as per-node field files plus a node index.
inline void save_trajectory_csv(const Trajectory& traj, const std::filesystem::path& dir,
                                const std::string& stem) {
    std::filesystem::create_directories(dir);
    std::ofstream times(dir / (stem + "_times.csv"));
    times << "node,t\n";
    for (std::size_t m = 0; m < traj.nodes(); ++m) {
        times << m << ',' << detail::format_double(traj.time(m)) << '\n';
        char name[64];
        std::snprintf(name, sizeof name, "%s_%04zu.csv", stem.c_str(), m);
        save_field_csv(traj.snapshot(m), dir / name);
    }
}

} // namespace vfb

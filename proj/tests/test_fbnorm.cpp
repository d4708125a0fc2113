#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vfb/fbnorm.hpp"
#include "vfb/symbols.hpp"

using namespace vfb;

namespace {

double uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

SpectralField random_field(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    SpectralField f(grid, 1);
    for (std::size_t i = 0; i < grid.size(); ++i)
        f.at(0, i) = {2.0 * uniform(eng) - 1.0, 2.0 * uniform(eng) - 1.0};
    f.symmetrize_hermitian();
    f.dealias();
    return f;
}

// Field with both +/-k coefficients set to c (one cosine mode).
SpectralField mode_pair(const Grid& grid, int k, double c) {
    SpectralField f(grid, 1);
    f.at(0, grid.flatten({grid.index_of_wavenumber(k), 0, 0})) = c;
    f.at(0, grid.flatten({grid.index_of_wavenumber(-k), 0, 0})) = c;
    return f;
}

// Pure 60-iteration bisection Luxemburg norm, independent of the library.
double bisect_norm(const std::vector<double>& values, const std::vector<double>& p, double w) {
    auto mod = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            double v = std::abs(values[i]);
            if (v != 0.0) s += std::pow(v / lambda, p[i]);
        }
        return s * w;
    };
    bool all_zero = true;
    for (double v : values)
        if (v != 0.0) all_zero = false;
    if (all_zero) return 0.0;
    double lo = 1e-30, hi = 1e3;
    while (mod(hi) > 1.0) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
        double mid = std::sqrt(lo * hi);
        (mod(mid) > 1.0 ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

} // namespace

TEST_CASE("single-shell field reduces to one weighted shell norm") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField f = mode_pair(g, 11, 0.8); // radius 11 sits only in shell 3
    const double s0 = 0.7, p0 = 2.5;
    FBSpaceSpec spec = FBSpaceSpec::constant(s0, p0, 1.5, g);

    CHECK(part.phi_mask(3)[g.flatten({11, 0, 0})] == 1.0);
    double expected = std::exp2(3.0 * s0) *
                      std::pow(2.0 * std::pow(0.8, p0) * g.cell_volume_frequency(), 1.0 / p0);
    CHECK(fb_norm(f, spec, part) == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("s=0, p=2, r=2 norm matches the direct shell-sum oracle") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField f = random_field(g, 3);
    FBSpaceSpec spec = FBSpaceSpec::constant(0.0, 2.0, 2.0, g);

    auto mag = f.magnitude();
    double oracle = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        double q = 0.0;
        for (int j = part.j_min(); j <= part.j_max(); ++j)
            q += part.phi_mask(j)[i] * part.phi_mask(j)[i];
        oracle += mag[i] * mag[i] * q;
    }
    oracle = std::sqrt(oracle * g.cell_volume_frequency());
    CHECK(fb_norm(f, spec, part) == Catch::Approx(oracle).epsilon(1e-10));

    // shells overlap only pairwise, so the l2 recombination stays within
    // a factor sqrt(2) of the plain L2 norm
    double l2 = f.l2_norm();
    CHECK(fb_norm(f, spec, part) <= l2 * (1.0 + 1e-10));
    CHECK(fb_norm(f, spec, part) >= l2 / std::sqrt(2.0) * (1.0 - 1e-10));
}

TEST_CASE("variable-exponent norm matches a from-scratch shell loop") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField f = random_field(g, 7);
    RegularityField s = RegularityField::decay_family(0.5, 0.1, g);
    ExponentField p = ExponentField::decay_family(3.0, 0.05, g);
    FBSpaceSpec spec(s, p, 1.0);

    auto mag = f.magnitude();
    double oracle = 0.0;
    for (int j = part.j_min(); j <= part.j_max(); ++j) {
        std::vector<double> vals, pv;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double w = part.phi_mask(j)[i];
            if (w == 0.0) continue;
            vals.push_back(std::exp2(j * s[i]) * w * mag[i]);
            pv.push_back(p[i]);
        }
        oracle += bisect_norm(vals, pv, g.cell_volume_frequency());
    }
    CHECK(fb_norm(f, spec, part) == Catch::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("fb norm preconditions") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    FBSpaceSpec spec = FBSpaceSpec::constant(0.0, 2.0, 1.0, g);

    SpectralField with_mean(g, 1, ZeroMode::free_mode);
    with_mean.at(0, 0) = 1.0;
    CHECK_THROWS_AS(fb_norm(with_mean, spec, part), zero_mode_error);

    DyadicPartition narrow = DyadicPartition::build_range(g, 1, 4);
    SpectralField low = mode_pair(g, 1, 1.0); // radius 1 not covered by shells 1..4
    CHECK_THROWS_AS(fb_norm(low, spec, narrow), resolution_error);
}

TEST_CASE("fb norm homogeneity and triangle inequality") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    FBSpaceSpec spec(RegularityField::constant(0.3, g), ExponentField::decay_family(3.0, 0.05, g),
                     1.0);
    std::mt19937_64 eng(11);
    for (int k = 0; k < 20; ++k) {
        SpectralField f = random_field(g, eng());
        SpectralField h = random_field(g, eng());
        double c = 4.0 * (uniform(eng) - 0.5);
        double nf = fb_norm(f, spec, part), nh = fb_norm(h, spec, part);
        CHECK(fb_norm(c * f, spec, part) == Catch::Approx(std::abs(c) * nf).margin(1e-12));
        CHECK(fb_norm(f + h, spec, part) <= nf + nh + 1e-10);
    }
}

TEST_CASE("chemin-lerner norm of a constant trajectory") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField f = random_field(g, 13);
    FBSpaceSpec spec = FBSpaceSpec::constant(0.5, 2.0, 1.0, g);
    const double T = 2.0;
    Trajectory traj = Trajectory::constant(f, uniform_nodes(T, 8));

    double snap = fb_norm(f, spec, part);
    CHECK(chemin_lerner_norm(traj, infinite_exponent, spec, part).value ==
          Catch::Approx(snap).epsilon(1e-14));
    for (double rho : {1.0, 2.0, 3.0})
        CHECK(chemin_lerner_norm(traj, rho, spec, part).value ==
              Catch::Approx(std::pow(T, 1.0 / rho) * snap).epsilon(1e-12));
}

TEST_CASE("chemin-lerner norm of a decaying single mode has a closed form") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField u0 = mode_pair(g, 1, 1.0); // |xi| = 1, alpha = 2 gives e^{-t}
    const double T = 40.0;
    auto times = graded_nodes(T, 8192, 3.0);
    std::vector<SpectralField> snaps;
    snaps.reserve(times.size());
    for (double t : times) snaps.push_back(apply_symbol(u0, SymbolSpec::heat_multiplier(t, 2.0)));
    Trajectory traj(times, std::move(snaps));

    FBSpaceSpec spec = FBSpaceSpec::constant(0.0, 2.0, 1.0, g);
    double snap0 = fb_norm(u0, spec, part);
    CheminLernerResult res = chemin_lerner_norm(traj, 1.0, spec, part);
    double expected = snap0 * (1.0 - std::exp(-T));
    CHECK(res.value == Catch::Approx(expected).epsilon(1e-6));
    CHECK(res.quadrature_error <= 1e-4 * res.value);
}

TEST_CASE("chemin-lerner norm grows with the horizon") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField u0 = random_field(g, 17);
    auto times = uniform_nodes(4.0, 16);
    std::vector<SpectralField> snaps;
    for (double t : times) snaps.push_back(apply_symbol(u0, SymbolSpec::heat_multiplier(t, 1.5)));
    Trajectory traj(times, std::move(snaps));
    FBSpaceSpec spec = FBSpaceSpec::constant(0.2, 2.0, 1.0, g);

    double prev = 0.0;
    for (double T : {1.0, 2.0, 4.0}) {
        double v = chemin_lerner_norm(traj.truncated(T), 1.0, spec, part).value;
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("chemin-lerner quadrature preconditions") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField f = random_field(g, 19);
    FBSpaceSpec spec = FBSpaceSpec::constant(0.0, 2.0, 1.0, g);
    Trajectory single({0.0}, {f});
    CHECK_THROWS_AS(chemin_lerner_norm(single, 1.0, spec, part), quadrature_error);
    CHECK(chemin_lerner_norm(single, infinite_exponent, spec, part).value ==
          Catch::Approx(fb_norm(f, spec, part)));
}

TEST_CASE("embedding check: identical spaces give ratio one") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField f = random_field(g, 23);
    FBSpaceSpec spec = FBSpaceSpec::constant(0.5, 2.0, 1.0, g);
    EstimateReport r = embedding_check(f, spec, spec, part);
    CHECK(r.ratio == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("embedding check: single-shell closed form") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField f = mode_pair(g, 11, 0.8);
    const double s = 0.5, p1 = 1.0, p2 = 2.0;
    FBSpaceSpec hi = FBSpaceSpec::constant(s, p2, 1.0, g);
    FBSpaceSpec lo = FBSpaceSpec::constant(s - 1.0 * (1.0 / p1 - 1.0 / p2), p1, 1.0, g);

    EstimateReport r = embedding_check(f, hi, lo, part);
    // two cells of value 0.8: L1 = 2*0.8*w, L2 = sqrt(2*0.64*w)
    const double w = g.cell_volume_frequency();
    const double l1 = 2.0 * 0.8 * w, l2 = std::sqrt(2.0 * 0.64 * w);
    const double expected = std::exp2(3.0 * (lo.s.s_minus() - s)) * l1 / l2;
    CHECK(r.ratio == Catch::Approx(expected).epsilon(1e-10));
}

TEST_CASE("embedding check: random sweep stays bounded") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    FBSpaceSpec hi = FBSpaceSpec::constant(0.5, 2.0, 1.0, g);
    FBSpaceSpec lo = FBSpaceSpec::constant(0.0, 1.0, 1.0, g); // s - n(1/p1 - 1/p2)
    std::mt19937_64 eng(29);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k)
        worst = std::max(worst, embedding_check(random_field(g, eng()), hi, lo, part).ratio);
    CHECK(std::isfinite(worst));
    CHECK(worst > 0.0);
    CHECK_THROWS_AS(embedding_check(random_field(g, 1), lo, hi, part), parameter_error);
}

TEST_CASE("interpolation is exact on a single shell and ratio <= 1 at r = 1") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    ExponentField p2 = ExponentField::constant(2.0, g);

    EstimateReport single =
        interpolation_check(mode_pair(g, 11, 0.8), 0.0, 1.0, 0.5, p2, 1.0, part);
    CHECK(single.ratio == Catch::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 eng(31);
    for (int k = 0; k < 20; ++k) {
        SpectralField f = random_field(g, eng());
        EstimateReport r = interpolation_check(f, 0.0, 1.0, 0.5, p2, 1.0, part);
        CHECK(r.ratio <= 1.0 + 1e-10);
        EstimateReport edge = interpolation_check(f, 0.0, 1.0, 0.999, p2, 1.0, part);
        CHECK(edge.ratio == Catch::Approx(1.0).margin(1e-3));
    }
    CHECK_THROWS_AS(interpolation_check(random_field(g, 1), 0.0, 1.0, 1.5, p2, 1.0, part),
                    parameter_error);
    CHECK_THROWS_AS(interpolation_check(random_field(g, 1), 1.0, 0.0, 0.5, p2, 1.0, part),
                    parameter_error);
}

TEST_CASE("pointwise product against the direct convolution oracle") {
    Grid g(1, 64, 1.0);
    SpectralField u = random_field(g, 37);
    SpectralField v = mode_pair(g, 2, 0.5); // low mode

    SpectralField uv = pointwise_product(u, v);

    // coefficient-space convolution under this normalization:
    //   (u v)^(k) = (2 pi)^{-d/2} (1/L)^d sum_m u^(m) v^(k - m)
    const double conv_scale =
        std::pow(2.0 * std::numbers::pi, -0.5 * g.dim()) * g.cell_volume_frequency();
    SpectralField oracle(g, 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
        int k = g.wavenumber(g.unflatten(i)[0]);
        if (std::abs(k) > g.dealias_limit() || k == 0) continue;
        std::complex<double> s = 0.0;
        for (int dk : {2, -2}) { // modes of v, both with coefficient 0.5
            int m = k - dk;
            if (m < -g.points_per_axis() / 2 || m >= g.points_per_axis() / 2) continue;
            s += 0.5 * u.at(0, g.flatten({g.index_of_wavenumber(m), 0, 0}));
        }
        oracle.at(0, i) = conv_scale * s;
    }
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(uv.at(0, i) - oracle.at(0, i)));
    CHECK(err <= 1e-12 * uv.max_abs());
}

TEST_CASE("product estimate: squared single mode keeps only the doubled mode") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField u = mode_pair(g, 3, 1.0);
    SpectralField uv = pointwise_product(u, u);
    for (std::size_t i = 0; i < g.size(); ++i) {
        int k = g.wavenumber(g.unflatten(i)[0]);
        if (std::abs(k) == 6)
            CHECK(std::abs(uv.at(0, i)) > 0.0);
        else
            CHECK(std::abs(uv.at(0, i)) <= 1e-14);
    }
    ProductEstimateParams prm;
    prm.s1 = 0.5;
    prm.p = 2.0; // 1 + 1/2 = 1/1 + 1/2
    prm.p1 = 1.0;
    prm.p2 = 2.0;
    EstimateReport rep = product_estimate_check(ProductEstimateKind::symmetric, u, u, prm, part);
    CHECK(std::isfinite(rep.ratio));
    CHECK(rep.ratio > 0.0);
}

TEST_CASE("product estimates: zero factor passes trivially, constraints enforced") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    SpectralField u = random_field(g, 41);
    SpectralField zero = SpectralField::zeros(g);

    ProductEstimateParams prm;
    prm.s1 = 0.5;
    prm.p = 2.0;
    prm.p1 = 1.0;
    prm.p2 = 2.0;
    EstimateReport rep =
        product_estimate_check(ProductEstimateKind::symmetric, u, zero, prm, part);
    CHECK(rep.trivial);
    CHECK(rep.pass);

    ProductEstimateParams bad = prm;
    bad.p = 4.0; // 1 + 1/4 != 1/1 + 1/2
    CHECK_THROWS_AS(product_estimate_check(ProductEstimateKind::symmetric, u, u, bad, part),
                    parameter_error);

    ProductEstimateParams asym;
    asym.s1 = 0.25;
    asym.s2 = 0.25;
    asym.p1 = 2.0;
    asym.p2 = 2.0;
    EstimateReport arep =
        product_estimate_check(ProductEstimateKind::asymmetric, u, random_field(g, 43), asym, part);
    CHECK(std::isfinite(arep.ratio));

    ProductEstimateParams abad = asym;
    abad.s1 = 2.0; // violates s1 <= n min(1 - 1/p1, 1 - 1/p2) = 1/2
    CHECK_THROWS_AS(product_estimate_check(ProductEstimateKind::asymmetric, u, u, abad, part),
                    parameter_error);
}

TEST_CASE("gradient equivalence constant stays under 4") {
    Grid g(1, 64, 1.0);
    DyadicPartition part = build_partition(g);
    FBSpaceSpec spec = FBSpaceSpec::constant(0.5, 2.0, 1.0, g);

    // single mode: exact ratio |xi| 2^{-j}
    EstimateReport single = gradient_equivalence_check(mode_pair(g, 11, 1.0), spec, part);
    CHECK(single.lhs / single.rhs == Catch::Approx(11.0 / 8.0).epsilon(1e-12));

    std::mt19937_64 eng(47);
    for (int k = 0; k < 20; ++k) {
        EstimateReport r = gradient_equivalence_check(random_field(g, eng()), spec, part);
        CHECK(r.ratio <= 4.0);
        CHECK(r.pass);
    }
}

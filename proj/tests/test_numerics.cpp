#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "pqt/fourier.hpp"
#include "pqt/grid.hpp"
#include "pqt/hamiltonian.hpp"
#include "pqt/observables.hpp"
#include "pqt/packet.hpp"
#include "pqt/random_stream.hpp"
#include "pqt/wavefunction.hpp"

using namespace pqt;

namespace {

WaveFunction random_state(const Grid& grid, std::uint64_t seed) {
    RandomStream rng(seed, 0);
    WaveFunction psi(grid);
    for (auto& a : psi.amp()) a = {rng.normal(), rng.normal()};
    return normalize(psi);
}

}  // namespace

TEST_CASE("grid momentum lattice is the DFT conjugate") {
    Grid g = Grid::line(64, -8.0, 0.25);
    const Axis& ax = g.axis(0);
    double dk = 2.0 * std::numbers::pi / (64 * 0.25);
    CHECK(ax.dk() == doctest::Approx(dk).epsilon(1e-14));
    CHECK(ax.k(0) == doctest::Approx(0.0));
    CHECK(ax.k(1) == doctest::Approx(dk).epsilon(1e-14));
    // Negative branch for bins >= n/2.
    CHECK(ax.k(63) == doctest::Approx(-dk).epsilon(1e-14));
    CHECK(g.cell_volume() == doctest::Approx(0.25));
}

TEST_CASE("grid validation") {
    CHECK_THROWS(Grid::line(6, 0.0, 0.1));    // < 8 points
    CHECK_THROWS(Grid::line(48, 0.0, 0.1));   // not a power of two
    CHECK_THROWS(Grid::line(64, 0.0, -0.1));  // dx <= 0
}

TEST_CASE("inner product: normalization, linearity, Gaussian overlap") {
    Grid g = Grid::line(256, -16.0, 0.125);
    WaveFunction psi = gaussian_packet(g, 0.0, 1.0, 1.0);

    cplx self = inner_product(psi, psi);
    CHECK(std::abs(self - cplx{1.0, 0.0}) < 1e-10);

    WaveFunction ipsi = cplx{0.0, 1.0} * psi;
    CHECK(std::abs(inner_product(psi, ipsi) - cplx{0.0, 1.0}) < 1e-12);

    // Two real Gaussians offset by dx0: |<g1|g2>| = exp(-dx0^2/(8 sigma^2)).
    double sigma = 1.5, dx0 = 2.0;
    WaveFunction g1 = gaussian_packet(g, -1.0, 0.0, sigma);
    WaveFunction g2 = gaussian_packet(g, -1.0 + dx0, 0.0, sigma);
    double expected = std::exp(-dx0 * dx0 / (8.0 * sigma * sigma));
    CHECK(std::abs(inner_product(g1, g2)) == doctest::Approx(expected).epsilon(1e-8));

    // Conjugate symmetry on random states.
    WaveFunction a = random_state(g, 11), b = random_state(g, 12);
    cplx ab = inner_product(a, b), ba = inner_product(b, a);
    CHECK(ab == std::conj(ba));

    Grid other = Grid::line(128, -16.0, 0.25);
    CHECK_THROWS(inner_product(a, WaveFunction(other)));
}

TEST_CASE("normalize") {
    Grid g = Grid::line(64, -8.0, 0.25);
    WaveFunction psi = gaussian_packet(g, 0.0, 0.5, 1.0);

    WaveFunction same = normalize(psi);
    for (std::size_t i = 0; i < psi.size(); ++i)
        CHECK(std::abs(same[i] - psi[i]) < 1e-12);

    WaveFunction scaled = cplx{3.0, 0.0} * psi;
    WaveFunction back = normalize(scaled);
    for (std::size_t i = 0; i < psi.size(); ++i)
        CHECK(std::abs(back[i] - psi[i]) < 1e-12);

    WaveFunction zero(g);
    CHECK_THROWS_WITH_AS(normalize(zero), doctest::Contains("null state"),
                         std::runtime_error);
}

TEST_CASE("momentum transform: round trip, plane wave, Gaussian width, Parseval") {
    Grid g = Grid::line(128, -16.0, 0.25);
    WaveFunction psi = random_state(g, 7);

    WaveFunction round =
        momentum_transform(momentum_transform(psi, FourierDirection::Forward),
                           FourierDirection::Inverse);
    double max_err = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        max_err = std::max(max_err, std::abs(round[i] - psi[i]));
    CHECK(max_err < 1e-12);

    // Parseval.
    WaveFunction hat = momentum_transform(psi, FourierDirection::Forward);
    CHECK(norm(hat) == doctest::Approx(norm(psi)).epsilon(1e-12));

    // Lattice plane wave e^{i k_j x} concentrates in a single bin.
    int j = 5;
    WaveFunction plane(g);
    for (int i = 0; i < 128; ++i) {
        double x = g.axis(0).x(i);
        plane[static_cast<std::size_t>(i)] =
            std::polar(1.0, g.axis(0).k(j) * x);
    }
    plane = normalize(plane);
    WaveFunction phat = momentum_transform(plane, FourierDirection::Forward);
    double in_bin = std::norm(phat[static_cast<std::size_t>(j)]) * g.cell_volume();
    CHECK(in_bin == doctest::Approx(1.0).epsilon(1e-10));

    // Gaussian transforms to a Gaussian of width 1/(2 sigma) in k.
    double sigma = 1.0;
    WaveFunction gauss = gaussian_packet(g, 0.0, 0.0, sigma);
    WaveFunction ghat = momentum_transform(gauss, FourierDirection::Forward);
    double sk = 0.5 / sigma;
    // Second moment of |ghat|^2 normalized by its own mass.
    double mass = 0.0, m2 = 0.0;
    for (int i = 0; i < 128; ++i) {
        double w = std::norm(ghat[static_cast<std::size_t>(i)]);
        mass += w;
        m2 += g.axis(0).k(i) * g.axis(0).k(i) * w;
    }
    CHECK(m2 / mass == doctest::Approx(sk * sk).epsilon(1e-2));
}

TEST_CASE("gaussian packet moments and diagnostics") {
    Grid g = Grid::line(256, -16.0, 0.125);
    double x0 = -2.0, p0 = 1.5, sigma = 1.0;
    WaveFunction psi = gaussian_packet(g, x0, p0, sigma);

    CHECK(std::abs(norm(psi) - 1.0) < 1e-10);
    CHECK(std::fabs(position_expectation(psi) - x0) <= g.axis(0).dx);
    CHECK(std::fabs(momentum_expectation(psi) - p0) <= g.axis(0).dk());
    CHECK(position_variance(psi) == doctest::Approx(sigma * sigma).epsilon(0.01));

    // p0 = 0: real nonnegative up to a global phase.
    WaveFunction real_packet = gaussian_packet(g, 0.0, 0.0, sigma);
    cplx phase = real_packet[128] / std::abs(real_packet[128]);
    for (std::size_t i = 120; i < 136; ++i) {
        cplx v = real_packet[i] / phase;
        CHECK(std::abs(v.imag()) < 1e-12);
        CHECK(v.real() >= 0.0);
    }
    CHECK(std::fabs(momentum_expectation(real_packet)) <= g.axis(0).dk());

    // Under-resolved width and leaking tails are rejected.
    CHECK_THROWS(gaussian_packet(g, 0.0, 0.0, 0.2));
    CHECK_THROWS(gaussian_packet(g, -15.9, 0.0, 1.0));
}

TEST_CASE("position density: normalization, phase invariance, marginals") {
    Grid g = Grid::line(128, -8.0, 0.125);
    WaveFunction psi = random_state(g, 3);

    auto dens = position_density(psi);
    double total = 0.0;
    for (double d : dens) total += d;
    total *= g.cell_volume();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

    WaveFunction rotated = std::polar(1.0, 0.731) * psi;
    auto dens2 = position_density(rotated);
    double max_err = 0.0;
    for (std::size_t i = 0; i < dens.size(); ++i)
        max_err = std::max(max_err, std::fabs(dens[i] - dens2[i]));
    CHECK(max_err < 1e-14);

    // 2D product state: marginal over r returns |f(R)|^2.
    Grid gr = Grid::line(64, -8.0, 0.25);
    WaveFunction f = gaussian_packet(gr, 1.0, 0.0, 1.0);
    WaveFunction h = gaussian_packet(gr, -1.0, 0.5, 1.2);
    WaveFunction prod = product_state(f, h);
    auto marg = position_density(prod, 0);
    auto dens_f = position_density(f);
    for (std::size_t i = 0; i < marg.size(); ++i)
        CHECK(std::fabs(marg[i] - dens_f[i]) < 1e-12);
}

TEST_CASE("observable expectations") {
    Grid g = Grid::line(256, -32.0, 0.25);
    double sigma = 2.0, p0 = 1.0, mass = 1.5;
    WaveFunction psi = gaussian_packet(g, 0.0, p0, sigma);

    GridHamiltonian h_free = GridHamiltonian::single_particle(
        mass, std::vector<double>(g.size(), 0.0), g);
    double expected = 1.0 / (8.0 * sigma * sigma * mass) + p0 * p0 / (2.0 * mass);
    CHECK(h_free.energy_expectation(psi) == doctest::Approx(expected).epsilon(0.01));

    CHECK(boundary_mass(psi) < 1e-10);
    CHECK_NOTHROW(check_boundary_guard(psi, 1e-6));
    // A packet hugging the wall is rejected at construction; a state
    // placed there by hand trips the running guard.
    CHECK_THROWS(gaussian_packet(g, -29.0, 0.0, 1.0));
    WaveFunction edge(g);
    edge[std::size_t{1}] = 1.0;
    edge = normalize(edge);
    CHECK(boundary_mass(edge) > 0.5);
    CHECK_THROWS(check_boundary_guard(edge, 1e-12));
}

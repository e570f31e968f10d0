#include "pqt/sphere_toy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pqt {

namespace {
double distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}
}  // namespace

void SphereToyConfig::validate() const {
    if (spheres.size() < 2)
        throw std::invalid_argument("sphere toy: need at least two spheres");
    if (!(growth_rate > 0.0))
        throw std::invalid_argument("sphere toy: growth rate must be positive");
    if (!(r_min > 0.0)) throw std::invalid_argument("sphere toy: r_min must be positive");
    if (relocation == Relocation::RadialPower && !(exponent > -3.0))
        throw std::invalid_argument("sphere toy: radial exponent must exceed -3");
    for (const auto& s : spheres)
        if (s.radius < 0.0)
            throw std::invalid_argument("sphere toy: negative initial radius");
    for (std::size_t i = 0; i < spheres.size(); ++i)
        for (std::size_t j = i + 1; j < spheres.size(); ++j)
            if (!(distance(spheres[i].center, spheres[j].center) >
                  spheres[i].radius + spheres[j].radius))
                throw std::invalid_argument("sphere toy: spheres not initially disjoint");
}

std::array<double, 3> sample_in_ball(const std::array<double, 3>& center, double radius,
                                     SphereToyConfig::Relocation relocation,
                                     double exponent, RandomStream& stream) {
    // Isotropic direction from three normals; radius from the inverse
    // CDF of the radial profile (uniform ball: rho^2; power p: rho^(2+p)).
    std::array<double, 3> dir{};
    double len = 0.0;
    do {
        dir = {stream.normal(), stream.normal(), stream.normal()};
        len = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    } while (!(len > 1e-12));
    double p = relocation == SphereToyConfig::Relocation::Uniform ? 0.0 : exponent;
    double rho = radius * std::pow(stream.uniform(), 1.0 / (3.0 + p));
    return {center[0] + rho * dir[0] / len, center[1] + rho * dir[1] / len,
            center[2] + rho * dir[2] / len};
}

std::vector<SphereEvent> run_sphere_toy(const SphereToyConfig& cfg, double horizon,
                                        RandomStream& stream) {
    cfg.validate();
    if (!(horizon > 0.0))
        throw std::invalid_argument("sphere toy: horizon must be positive");

    auto spheres = cfg.spheres;
    const double v = cfg.growth_rate;
    double now = 0.0;
    std::vector<SphereEvent> events;

    // Between events every radius grows at the same rate, so the next
    // contact is always the pair minimizing the closed-form time; a
    // full scan per event is the queue, made trivial.
    for (;;) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < spheres.size(); ++i)
            for (std::size_t j = i + 1; j < spheres.size(); ++j) {
                double gap = distance(spheres[i].center, spheres[j].center) -
                             spheres[i].radius - spheres[j].radius;
                // Overlapping after a relocation means immediate contact.
                double t = now + std::max(0.0, gap) / (2.0 * v);
                if (t < best) {
                    best = t;
                    bi = i;
                    bj = j;
                }
            }
        if (!(best <= horizon)) break;

        double elapsed = best - now;
        for (auto& s : spheres) s.radius += v * elapsed;
        now = best;

        SphereEvent ev;
        ev.t = now;
        ev.i = bi;
        ev.j = bj;
        ev.radius_at_contact_i = spheres[bi].radius;
        ev.radius_at_contact_j = spheres[bj].radius;
        ev.new_center_i = sample_in_ball(spheres[bi].center, spheres[bi].radius,
                                         cfg.relocation, cfg.exponent, stream);
        ev.new_center_j = sample_in_ball(spheres[bj].center, spheres[bj].radius,
                                         cfg.relocation, cfg.exponent, stream);
        spheres[bi].center = ev.new_center_i;
        spheres[bi].radius = cfg.r_min;
        spheres[bj].center = ev.new_center_j;
        spheres[bj].radius = cfg.r_min;
        events.push_back(ev);
        if (events.size() > 10'000'000)
            throw std::runtime_error("sphere toy: runaway contact cascade");
    }
    return events;
}

}  // namespace pqt

#pragma once

#include <array>
#include <vector>

#include "pqt/random_stream.hpp"

namespace pqt {

/// Spheres with fixed centers whose radii all grow at a common rate v.
/// When two surfaces touch, both spheres collapse to minute spheres of
/// radius r_min whose new centers are drawn inside the respective
/// pre-collapse balls from the relocation density.
struct SphereToyConfig {
    struct Sphere {
        std::array<double, 3> center{0.0, 0.0, 0.0};
        double radius = 0.0;
    };
    enum class Relocation { Uniform, RadialPower };

    std::vector<Sphere> spheres;
    double growth_rate = 1.0;
    double r_min = 1e-3;
    Relocation relocation = Relocation::Uniform;
    /// RadialPower: density proportional to rho^exponent inside the ball.
    double exponent = 0.0;

    void validate() const;
};

struct SphereEvent {
    double t = 0.0;
    std::size_t i = 0, j = 0;
    std::array<double, 3> new_center_i{}, new_center_j{};
    double radius_at_contact_i = 0.0, radius_at_contact_j = 0.0;
};

/// Event-driven run to the horizon. Contact of pair (i,j) happens at
/// t = (|x_i - x_j| - r_i - r_j)/(2v) from the current instant; the
/// earliest pending contact fires, both partners relocate and restart
/// at r_min, and contact times of affected pairs are recomputed.
std::vector<SphereEvent> run_sphere_toy(const SphereToyConfig& cfg, double horizon,
                                        RandomStream& stream);

/// A point drawn from the relocation density inside a ball.
std::array<double, 3> sample_in_ball(const std::array<double, 3>& center, double radius,
                                     SphereToyConfig::Relocation relocation,
                                     double exponent, RandomStream& stream);

}  // namespace pqt

#include "pqt/potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace pqt {

double PotentialTerm::operator()(double x) const {
    switch (family) {
        case Family::Zero:
            return 0.0;
        case Family::GaussianWell:
        case Family::GaussianBarrier:
            return v0 * std::exp(-x * x / (2.0 * width * width));
        case Family::PoschlTeller: {
            double c = std::cosh(alpha * x);
            return v0 / (c * c);
        }
    }
    return 0.0;
}

void PotentialTerm::validate(double dx) const {
    switch (family) {
        case Family::Zero:
            return;
        case Family::GaussianWell:
            if (!(v0 < 0.0)) throw std::invalid_argument("gaussian_well: depth must be negative");
            break;
        case Family::GaussianBarrier:
            if (!(v0 > 0.0)) throw std::invalid_argument("gaussian_barrier: height must be positive");
            break;
        case Family::PoschlTeller:
            if (!(v0 < 0.0)) throw std::invalid_argument("poschl_teller: v0 must be negative");
            if (!(alpha > 0.0)) throw std::invalid_argument("poschl_teller: alpha must be positive");
            if (dx > 0.0 && !(1.0 / alpha > 2.0 * dx))
                throw std::invalid_argument("poschl_teller: width 1/alpha must exceed 2*dx");
            return;
    }
    if (!(width > 0.0)) throw std::invalid_argument("potential: width must be positive");
    if (dx > 0.0 && !(width > 2.0 * dx))
        throw std::invalid_argument("potential: width must exceed 2*dx on this grid");
}

PotentialTerm PotentialTerm::gaussian_well(double depth, double width) {
    PotentialTerm p{Family::GaussianWell, depth, width, 1.0};
    p.validate(0.0);
    return p;
}

PotentialTerm PotentialTerm::gaussian_barrier(double height, double width) {
    PotentialTerm p{Family::GaussianBarrier, height, width, 1.0};
    p.validate(0.0);
    return p;
}

PotentialTerm PotentialTerm::poschl_teller(double v0, double alpha) {
    PotentialTerm p{Family::PoschlTeller, v0, 1.0, alpha};
    p.validate(0.0);
    return p;
}

PotentialTerm PotentialTerm::parse(const std::string& family, double v0, double width,
                                   double alpha) {
    if (family == "zero") return zero();
    if (family == "gaussian_well") return gaussian_well(v0, width);
    if (family == "gaussian_barrier") return gaussian_barrier(v0, width);
    if (family == "poschl_teller") return poschl_teller(v0, alpha);
    throw std::invalid_argument("unknown potential family: " + family);
}

std::string PotentialTerm::family_name() const {
    switch (family) {
        case Family::Zero: return "zero";
        case Family::GaussianWell: return "gaussian_well";
        case Family::GaussianBarrier: return "gaussian_barrier";
        case Family::PoschlTeller: return "poschl_teller";
    }
    return "zero";
}

}  // namespace pqt

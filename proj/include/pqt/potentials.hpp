#pragma once

#include <string>

namespace pqt {

/// One pair potential, parametrized by family:
///   zero
///   gaussian_well     v0 < 0, width w:    v0 * exp(-x^2 / (2 w^2))
///   gaussian_barrier  v0 > 0, width w:    v0 * exp(-x^2 / (2 w^2))
///   poschl_teller     v0 < 0, alpha:      v0 * sech^2(alpha x)
struct PotentialTerm {
    enum class Family { Zero, GaussianWell, GaussianBarrier, PoschlTeller };

    Family family = Family::Zero;
    double v0 = 0.0;
    double width = 1.0;   // gaussian families
    double alpha = 1.0;   // poschl_teller

    double operator()(double x) const;
    void validate(double dx) const;

    static PotentialTerm zero() { return {}; }
    static PotentialTerm gaussian_well(double depth, double width);
    static PotentialTerm gaussian_barrier(double height, double width);
    static PotentialTerm poschl_teller(double v0, double alpha);

    static PotentialTerm parse(const std::string& family, double v0, double width,
                               double alpha);
    std::string family_name() const;
};

/// The three pair potentials of the a/b/c system.
struct PotentialSet {
    PotentialTerm v_ab;
    PotentialTerm v_bc;
    PotentialTerm v_ac;
};

}  // namespace pqt

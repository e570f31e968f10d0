#include "pqt/decomposition.hpp"

namespace pqt {

ChannelDecomposition decompose(const WaveFunction& big_phi, const BoundProjector& p_b,
                               double p_min, double t) {
    require_normalized(big_phi);
    ChannelDecomposition out;
    out.t = t;

    WaveFunction bound = p_b.apply(big_phi);
    WaveFunction rest = big_phi - bound;
    out.c_b = norm(bound);
    out.c_a = norm(rest);
    if (out.c_b * out.c_b >= p_min) {
        double inv = 1.0 / out.c_b;
        for (cplx& v : bound.amp()) v *= inv;
        out.phi_b = std::move(bound);
    }
    if (out.c_a * out.c_a >= p_min) {
        double inv = 1.0 / out.c_a;
        for (cplx& v : rest.amp()) v *= inv;
        out.phi_a = std::move(rest);
    }
    return out;
}

}  // namespace pqt

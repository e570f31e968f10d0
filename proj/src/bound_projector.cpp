#include "pqt/bound_projector.hpp"

#include <stdexcept>

namespace pqt {

BoundProjector::BoundProjector(WaveFunction phi_bc) : phi_bc_(std::move(phi_bc)) {
    if (phi_bc_.grid().dims() != 1)
        throw std::invalid_argument("bound_projector: phi_bc must live on the 1D r axis");
    require_normalized(phi_bc_);
}

void BoundProjector::check_grid(const WaveFunction& big_phi) const {
    if (big_phi.grid().dims() != 2)
        throw std::invalid_argument("bound_projector: expects a 2D (R,r) state");
    const Axis& r = big_phi.grid().axis(1);
    const Axis& own = phi_bc_.grid().axis(0);
    if (r.n != own.n || r.dx != own.dx || r.x_min != own.x_min)
        throw std::invalid_argument("bound_projector: r-axis mismatch");
}

std::vector<cplx> BoundProjector::chi(const WaveFunction& big_phi) const {
    check_grid(big_phi);
    int n0 = big_phi.grid().axis(0).n;
    int n1 = big_phi.grid().axis(1).n;
    double dr = big_phi.grid().axis(1).dx;
    std::vector<cplx> out(n0, cplx{0.0, 0.0});
    for (int i = 0; i < n0; ++i) {
        cplx acc{0.0, 0.0};
        const cplx* row = big_phi.amp().data() + static_cast<std::size_t>(i) * n1;
        for (int j = 0; j < n1; ++j) acc += std::conj(phi_bc_[j]) * row[j];
        out[i] = acc * dr;
    }
    return out;
}

WaveFunction BoundProjector::apply(const WaveFunction& big_phi) const {
    return embed(chi(big_phi), big_phi);
}

WaveFunction BoundProjector::embed(const std::vector<cplx>& chi,
                                   const WaveFunction& like) const {
    check_grid(like);
    WaveFunction out(like.grid(), like.labels());
    int n0 = like.grid().axis(0).n;
    int n1 = like.grid().axis(1).n;
    if (chi.size() != static_cast<std::size_t>(n0))
        throw std::invalid_argument("bound_projector: chi length mismatch");
    for (int i = 0; i < n0; ++i) {
        cplx c = chi[i];
        cplx* row = out.amp().data() + static_cast<std::size_t>(i) * n1;
        for (int j = 0; j < n1; ++j) row[j] = c * phi_bc_[j];
    }
    return out;
}

}  // namespace pqt

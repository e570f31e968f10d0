#include "pqt/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace pqt {

namespace {

// Plans are created with FFTW_ESTIMATE so algorithm choice depends only
// on the shape; results are then reproducible run to run and across
// thread counts. FFTW_UNALIGNED lets one plan serve arbitrary buffers.
class PlanCache {
  public:
    fftw_plan get(int n0, int n1, int sign) {
        std::scoped_lock lock(mu_);
        auto key = std::make_tuple(n0, n1, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<cplx> scratch(static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1));
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan p = (n1 > 0)
            ? fftw_plan_dft_2d(n0, n1, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
            : fftw_plan_dft_1d(n0, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

  private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void fft_inplace(std::vector<cplx>& data, const Grid& grid, FourierDirection dir) {
    int n0 = grid.axis(0).n;
    int n1 = grid.dims() == 2 ? grid.axis(1).n : 0;
    int sign = dir == FourierDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = cache().get(n0, n1, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
    double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
    for (cplx& v : data) v *= scale;
}

WaveFunction momentum_transform(const WaveFunction& psi, FourierDirection dir) {
    WaveFunction out = psi;
    fft_inplace(out.amp(), psi.grid(), dir);
    return out;
}

}  // namespace pqt

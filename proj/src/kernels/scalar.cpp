#include "spotsched/kernels/kernels.hpp"

namespace spotsched::kernels::scalar {

RowBest scan_pairs(double c_left, double o_left, double target, std::span<const double> c,
                   std::span<const double> o) {
    RowBest best;
    const double num = target - c_left;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double denom = c[j] - c_left;
        if (!(denom > 0.0)) continue;
        const double m = num / denom;
        const double obj = o_left + m * (o[j] - o_left);
        if (obj > best.objective) {
            best.objective = obj;
            best.index = j;
        }
    }
    return best;
}

std::uint64_t count_le(std::span<const double> a, std::span<const double> b) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a[i] <= b[i] ? 1 : 0;
    return n;
}

}  // namespace spotsched::kernels::scalar

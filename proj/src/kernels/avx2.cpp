#include "spotsched/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SPOTSCHED_HAVE_X86 1
#include <immintrin.h>
#endif

namespace spotsched::kernels::avx2 {

#ifdef SPOTSCHED_HAVE_X86

__attribute__((target("avx2"))) RowBest scan_pairs(double c_left, double o_left, double target,
                                                   std::span<const double> c,
                                                   std::span<const double> o) {
    constexpr std::size_t kLanes = 4;
    const std::size_t n = c.size();
    const std::size_t rounds = n / kLanes;

    const __m256d vc_left = _mm256_set1_pd(c_left);
    const __m256d vo_left = _mm256_set1_pd(o_left);
    const __m256d vnum = _mm256_set1_pd(target - c_left);
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d vneg_inf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    const __m256d vstep = _mm256_set1_pd(static_cast<double>(kLanes));

    __m256d best = vneg_inf;
    __m256d best_idx = _mm256_set1_pd(-1.0);
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);

    for (std::size_t r = 0; r < rounds; ++r) {
        const __m256d vc = _mm256_loadu_pd(c.data() + r * kLanes);
        const __m256d vo = _mm256_loadu_pd(o.data() + r * kLanes);
        const __m256d denom = _mm256_sub_pd(vc, vc_left);
        const __m256d valid = _mm256_cmp_pd(denom, vzero, _CMP_GT_OQ);
        const __m256d m = _mm256_div_pd(vnum, denom);
        __m256d obj = _mm256_add_pd(vo_left, _mm256_mul_pd(m, _mm256_sub_pd(vo, vo_left)));
        obj = _mm256_blendv_pd(vneg_inf, obj, valid);
        const __m256d better = _mm256_cmp_pd(obj, best, _CMP_GT_OQ);
        best = _mm256_blendv_pd(best, obj, better);
        best_idx = _mm256_blendv_pd(best_idx, idx, better);
        idx = _mm256_add_pd(idx, vstep);
    }

    alignas(32) double lane_best[kLanes];
    alignas(32) double lane_idx[kLanes];
    _mm256_store_pd(lane_best, best);
    _mm256_store_pd(lane_idx, best_idx);

    RowBest out;
    for (std::size_t l = 0; l < kLanes; ++l) {
        if (lane_idx[l] < 0.0) continue;
        const auto li = static_cast<std::size_t>(lane_idx[l]);
        if (lane_best[l] > out.objective || (lane_best[l] == out.objective && li < out.index)) {
            out.objective = lane_best[l];
            out.index = li;
        }
    }

    const double num = target - c_left;
    for (std::size_t j = rounds * kLanes; j < n; ++j) {
        const double denom = c[j] - c_left;
        if (!(denom > 0.0)) continue;
        const double m = num / denom;
        const double obj = o_left + m * (o[j] - o_left);
        if (obj > out.objective) {
            out.objective = obj;
            out.index = j;
        }
    }
    return out;
}

__attribute__((target("avx2,popcnt"))) std::uint64_t count_le(std::span<const double> a,
                                                              std::span<const double> b) {
    constexpr std::size_t kLanes = 4;
    const std::size_t rounds = a.size() / kLanes;
    std::uint64_t n = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
        const __m256d va = _mm256_loadu_pd(a.data() + r * kLanes);
        const __m256d vb = _mm256_loadu_pd(b.data() + r * kLanes);
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(va, vb, _CMP_LE_OQ));
        n += static_cast<std::uint64_t>(_mm_popcnt_u32(static_cast<unsigned>(mask)));
    }
    for (std::size_t i = rounds * kLanes; i < a.size(); ++i) n += a[i] <= b[i] ? 1 : 0;
    return n;
}

#else

RowBest scan_pairs(double c_left, double o_left, double target, std::span<const double> c,
                   std::span<const double> o) {
    return scalar::scan_pairs(c_left, o_left, target, c, o);
}

std::uint64_t count_le(std::span<const double> a, std::span<const double> b) {
    return scalar::count_le(a, b);
}

#endif

}  // namespace spotsched::kernels::avx2

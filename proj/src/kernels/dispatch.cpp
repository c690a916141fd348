#include "spotsched/kernels/kernels.hpp"

#include <cstdlib>

namespace spotsched::kernels {

bool avx2_supported() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
    return false;
#endif
}

const char* isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

Isa active_isa() noexcept {
    static const Isa isa = [] {
        if (std::getenv("SPOTSCHED_FORCE_SCALAR") != nullptr) return Isa::Scalar;
        return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
    }();
    return isa;
}

namespace {

struct Table {
    ScanPairsFn scan_pairs;
    CountLeFn count_le;
};

const Table& table() {
    static const Table t = active_isa() == Isa::Avx2
                               ? Table{&avx2::scan_pairs, &avx2::count_le}
                               : Table{&scalar::scan_pairs, &scalar::count_le};
    return t;
}

}  // namespace

RowBest scan_pairs(double c_left, double o_left, double target, std::span<const double> c,
                   std::span<const double> o) {
    return table().scan_pairs(c_left, o_left, target, c, o);
}

std::uint64_t count_le(std::span<const double> a, std::span<const double> b) {
    return table().count_le(a, b);
}

}  // namespace spotsched::kernels

#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference in
// kernels::scalar and, on x86-64, an AVX2 variant in kernels::avx2. The
// unqualified entry points dispatch once at first use to the widest variant
// the CPU supports. Variants are required to be bit-identical: no FMA, same
// operation order, first-index tie breaking.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

namespace spotsched::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa) noexcept;

/// Best variant supported by this CPU. Setting SPOTSCHED_FORCE_SCALAR in the
/// environment pins dispatch to the scalar reference.
Isa active_isa() noexcept;

bool avx2_supported() noexcept;

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

struct RowBest {
    double objective = -std::numeric_limits<double>::infinity();
    std::size_t index = kNoIndex;
};

/// Two-atom LP row scan. With the left atom fixed at constraint value
/// `c_left` and objective value `o_left`, every right atom j gets the mass
///   m_j = (target - c_left) / (c[j] - c_left)
/// that makes the mixture hit `target`, and the mixture objective
///   o_left + m_j * (o[j] - o_left).
/// Entries with c[j] <= c_left are skipped. Returns the first argmax.
/// Callers guarantee c_left <= target <= c[j].
using ScanPairsFn = RowBest (*)(double c_left, double o_left, double target,
                                std::span<const double> c, std::span<const double> o);

/// Number of indices with a[i] <= b[i]. Spans must have equal length.
using CountLeFn = std::uint64_t (*)(std::span<const double> a, std::span<const double> b);

namespace scalar {
RowBest scan_pairs(double c_left, double o_left, double target, std::span<const double> c,
                   std::span<const double> o);
std::uint64_t count_le(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

namespace avx2 {
// Only callable when avx2_supported(); otherwise these fall back to scalar.
RowBest scan_pairs(double c_left, double o_left, double target, std::span<const double> c,
                   std::span<const double> o);
std::uint64_t count_le(std::span<const double> a, std::span<const double> b);
}  // namespace avx2

RowBest scan_pairs(double c_left, double o_left, double target, std::span<const double> c,
                   std::span<const double> o);
std::uint64_t count_le(std::span<const double> a, std::span<const double> b);

}  // namespace spotsched::kernels

#pragma once

#include <cstddef>
#include <span>

namespace service_rag::kernels {

// Cosine kernels over row-major float matrices. Dot products and norms
// accumulate in long double; the final ratio is clamped into [-1, 1].
//
// The parallel scan distributes rows across OpenMP threads but evaluates each
// row with the same arithmetic as the serial reference, so both produce
// bit-identical output.

long double dot(std::span<const float> a, std::span<const float> b) noexcept;
long double squared_norm(std::span<const float> v) noexcept;

/// dot / sqrt(sq_norm_a * sq_norm_b), clamped. Both norms must be nonzero.
double cosine_from_parts(long double dot, long double sq_norm_a, long double sq_norm_b) noexcept;

/// out[i] = squared_norm(row i).
void squared_norms(std::span<const float> rows, std::size_t dim, std::span<long double> out);

/// out[i] = cosine(row i, query). Serial reference implementation.
void cosine_scan_serial(std::span<const float> rows, std::size_t dim, std::span<const long double> row_sq_norms,
                        std::span<const float> query, std::span<double> out);

/// OpenMP version of cosine_scan_serial.
void cosine_scan(std::span<const float> rows, std::size_t dim, std::span<const long double> row_sq_norms,
                 std::span<const float> query, std::span<double> out);

/// Rows below which the scan stays on the calling thread.
inline constexpr std::size_t kParallelMinWork = 1 << 14;

}  // namespace service_rag::kernels

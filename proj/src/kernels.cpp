#include "service_rag/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>

namespace service_rag::kernels {

long double dot(std::span<const float> a, std::span<const float> b) noexcept {
    assert(a.size() == b.size());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
    }
    return acc;
}

long double squared_norm(std::span<const float> v) noexcept { return dot(v, v); }

double cosine_from_parts(long double dot, long double sq_norm_a, long double sq_norm_b) noexcept {
    // sqrt(x*x) == x in IEEE arithmetic, which makes cosine(a, a) exactly 1.
    const long double sim = dot / std::sqrt(sq_norm_a * sq_norm_b);
    return static_cast<double>(std::clamp(sim, -1.0L, 1.0L));
}

void squared_norms(std::span<const float> rows, std::size_t dim, std::span<long double> out) {
    const auto n = static_cast<std::int64_t>(out.size());
    assert(rows.size() == out.size() * dim);
#pragma omp parallel for schedule(static) if (rows.size() >= kParallelMinWork)
    for (std::int64_t i = 0; i < n; ++i) {
        out[i] = squared_norm(rows.subspan(static_cast<std::size_t>(i) * dim, dim));
    }
}

void cosine_scan_serial(std::span<const float> rows, std::size_t dim, std::span<const long double> row_sq_norms,
                        std::span<const float> query, std::span<double> out) {
    assert(query.size() == dim && row_sq_norms.size() == out.size() && rows.size() == out.size() * dim);
    const long double q_norm = squared_norm(query);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = cosine_from_parts(dot(rows.subspan(i * dim, dim), query), row_sq_norms[i], q_norm);
    }
}

void cosine_scan(std::span<const float> rows, std::size_t dim, std::span<const long double> row_sq_norms,
                 std::span<const float> query, std::span<double> out) {
    assert(query.size() == dim && row_sq_norms.size() == out.size() && rows.size() == out.size() * dim);
    const long double q_norm = squared_norm(query);
    const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) if (rows.size() >= kParallelMinWork)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto row = rows.subspan(static_cast<std::size_t>(i) * dim, dim);
        out[i] = cosine_from_parts(dot(row, query), row_sq_norms[i], q_norm);
    }
}

}  // namespace service_rag::kernels

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace service_rag {

/// A fixed-dimension vector labelled with the model that produced it.
struct Embedding {
    std::vector<float> values;
    std::string model_id;

    std::size_t dim() const noexcept { return values.size(); }
    std::span<const float> view() const noexcept { return values; }

    bool operator==(const Embedding&) const = default;
};

/// Throws InputError if empty or any value is non-finite.
void validate_embedding(const Embedding& e);

/// dot(a,b) / (|a| |b|), clamped into [-1, 1].
/// Throws DimensionMismatchError or ZeroNormError.
double cosine_similarity(std::span<const float> a, std::span<const float> b);
double cosine_similarity(const Embedding& a, const Embedding& b);

/// 1 - cosine_similarity, in [0, 2].
double cosine_distance(std::span<const float> a, std::span<const float> b);
double cosine_distance(const Embedding& a, const Embedding& b);

inline double similarity_to_distance(double similarity) noexcept { return 1.0 - similarity; }

}  // namespace service_rag

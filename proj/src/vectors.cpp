#include "service_rag/vectors.hpp"

#include <cmath>

#include "service_rag/errors.hpp"
#include "service_rag/kernels.hpp"

namespace service_rag {

void validate_embedding(const Embedding& e) {
    if (e.values.empty()) throw InputError("embedding has dimension 0");
    for (float v : e.values) {
        if (!std::isfinite(v)) throw InputError("embedding contains a non-finite value");
    }
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatchError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                     std::to_string(b.size()));
    }
    const long double na = kernels::squared_norm(a);
    const long double nb = kernels::squared_norm(b);
    if (na == 0.0L || nb == 0.0L) throw ZeroNormError("cosine similarity of a zero vector is undefined");
    return kernels::cosine_from_parts(kernels::dot(a, b), na, nb);
}

double cosine_similarity(const Embedding& a, const Embedding& b) { return cosine_similarity(a.view(), b.view()); }

double cosine_distance(std::span<const float> a, std::span<const float> b) {
    return similarity_to_distance(cosine_similarity(a, b));
}

double cosine_distance(const Embedding& a, const Embedding& b) { return cosine_distance(a.view(), b.view()); }

}  // namespace service_rag

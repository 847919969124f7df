#include "service_rag/embedding_cache.hpp"

#include <fstream>
#include <iterator>

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "service_rag/binary_io.hpp"
#include "service_rag/errors.hpp"
#include "service_rag/fs_util.hpp"

namespace service_rag {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'S', 'R', 'V', '1'};

std::string sanitize_component(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '-' || c == '_';
        if (!ok) c = '_';
    }
    if (out.empty() || out == "." || out == "..") out = "_" + out;
    return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::internal, "SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

EmbeddingCache::EmbeddingCache(fs::path root) : root_(std::move(root)) {}

fs::path EmbeddingCache::entry_path(std::string_view model_id, std::string_view text) const {
    return root_ / sanitize_component(model_id) / (sha256_hex(text) + ".vec");
}

std::optional<Embedding> EmbeddingCache::get(std::string_view model_id, std::string_view text) const {
    const auto path = entry_path(model_id, text);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    try {
        ByteReader r(bytes);
        if (r.take(4) != std::string_view(kMagic, 4)) throw CorruptIndexError("bad magic");
        const auto dim = r.u32();
        if (dim == 0) throw CorruptIndexError("zero dimension");
        Embedding e;
        e.model_id = std::string(model_id);
        e.values.resize(dim);
        for (auto& v : e.values) v = r.f32();
        if (!r.at_end()) throw CorruptIndexError("trailing bytes");
        validate_embedding(e);
        return e;
    } catch (const InputError& err) {
        spdlog::warn("ignoring corrupt cache entry {}: {}", path.string(), err.what());
        return std::nullopt;
    }
}

void EmbeddingCache::put(std::string_view model_id, std::string_view text, const Embedding& embedding) const {
    const auto path = entry_path(model_id, text);
    ByteWriter w;
    w.bytes(std::string_view(kMagic, 4));
    w.u32(static_cast<std::uint32_t>(embedding.dim()));
    for (float v : embedding.values) w.f32(v);

    write_file_atomic(path, w.data());
}

}  // namespace service_rag

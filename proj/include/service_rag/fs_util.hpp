#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace service_rag {

/// Writes to a sibling temp file, then renames over `path`. A failure never
/// leaves a partially written `path` behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Whole file as bytes. Throws InputError naming the path.
std::string read_file_bytes(const std::filesystem::path& path);

}  // namespace service_rag

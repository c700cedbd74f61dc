#pragma once

#include <string>
#include <string_view>

namespace notestd {

// Lowercase hex SHA-256 digest of the bytes.
std::string sha256_hex(std::string_view bytes);

// Digest of a file's contents. Throws Error(IoError) when unreadable.
std::string sha256_file(const std::string& path);

} // namespace notestd

#pragma once

#include <string>
#include <string_view>

namespace dyadscope {

// SHA-256, hex-encoded. Used to pin input files in run manifests.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file_hex(const std::string& path);

}  // namespace dyadscope

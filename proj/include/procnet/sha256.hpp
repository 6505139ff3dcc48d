#pragma once

#include <cstdint>
#include <string>

namespace procnet {

// SHA-256 (FIPS 180-4). Used for cache keys and artifact digests.
std::string sha256_hex(const std::string& data);

}  // namespace procnet

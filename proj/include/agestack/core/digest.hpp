#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace agestack::core {

using Sha256 = std::array<std::uint8_t, 32>;

Sha256 sha256(std::string_view data);
Sha256 hmac_sha256(std::string_view key, std::string_view data);

std::string to_hex(std::string_view bytes);
std::string to_hex(const Sha256& digest);

inline std::string sha256_hex(std::string_view data) { return to_hex(sha256(data)); }

std::string base64_encode(std::string_view bytes);

}  // namespace agestack::core

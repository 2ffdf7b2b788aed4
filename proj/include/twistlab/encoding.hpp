#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace twistlab {

std::string base64_encode(const void* data, std::size_t size);
std::vector<unsigned char> base64_decode(std::string_view text);
std::string sha256_hex(std::string_view data);

} // namespace twistlab

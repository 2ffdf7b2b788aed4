#include "twistlab/encoding.hpp"

#include <openssl/evp.h>

#include <cstdio>

#include "twistlab/error.hpp"

namespace twistlab {

std::string base64_encode(const void* data, std::size_t size) {
    std::string out(4 * ((size + 2) / 3), '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            static_cast<const unsigned char*>(data), static_cast<int>(size));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) throw DomainError("base64 payload has invalid length");
    std::vector<unsigned char> out(3 * (text.size() / 4));
    int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                            static_cast<int>(text.size()));
    if (n < 0) throw DomainError("base64 payload is malformed");
    // EVP_DecodeBlock keeps the bytes produced by '=' padding; drop them.
    std::size_t pad = 0;
    if (!text.empty() && text.back() == '=') ++pad;
    if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

} // namespace twistlab

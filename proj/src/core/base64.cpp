#include "segedit/core/base64.hpp"
#include "segedit/core/error.hpp"

#include <openssl/evp.h>

namespace segedit {

std::string base64_encode(std::span<uint8_t const> bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), int(bytes.size()));
    out.resize(std::size_t(n));
    return out;
}

std::vector<uint8_t> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) {
        throw ImageFormatError("base64 length is not a multiple of 4");
    }
    std::vector<uint8_t> out(3 * (text.size() / 4));
    int n = EVP_DecodeBlock(out.data(), reinterpret_cast<unsigned char const*>(text.data()), int(text.size()));
    if (n < 0) {
        throw ImageFormatError("malformed base64 payload");
    }
    // EVP_DecodeBlock counts padding as zero bytes.
    std::size_t pad = 0;
    if (!text.empty() && text.back() == '=') {
        ++pad;
        if (text.size() > 1 && text[text.size() - 2] == '=') {
            ++pad;
        }
    }
    out.resize(std::size_t(n) - pad);
    return out;
}

} // namespace segedit

#include "sbomaudit/checksum.hpp"

#include <openssl/evp.h>

#include <array>
#include <cctype>

namespace sbomaudit {

namespace {

const EVP_MD* evp_for(ChecksumAlgo algo) {
    switch (algo) {
        case ChecksumAlgo::md5: return EVP_md5();
        case ChecksumAlgo::sha1: return EVP_sha1();
        case ChecksumAlgo::sha256: return EVP_sha256();
        case ChecksumAlgo::sha512: return EVP_sha512();
    }
    return nullptr;
}

bool is_hex(std::string_view token) {
    for (char c : token) {
        if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
    }
    return !token.empty();
}

bool known_digest_length(std::size_t n) {
    for (auto algo : all_checksum_algos) {
        if (n == digest_hex_length(algo)) return true;
    }
    return false;
}

}  // namespace

std::string compute_digest(std::span<const std::uint8_t> data, ChecksumAlgo algo) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &length, evp_for(algo), nullptr) != 1) {
        fail(ErrorKind::io_error, "digest computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0f]);
    }
    return out;
}

std::string compute_digest(std::string_view data, ChecksumAlgo algo) {
    return compute_digest(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()),
        algo);
}

std::string parse_sidecar(std::string_view text) {
    std::size_t begin = 0;
    while (begin < text.size() && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    std::size_t end = begin;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    std::string token = to_lower(text.substr(begin, end - begin));
    if (!is_hex(token) || !known_digest_length(token.size())) {
        fail(ErrorKind::malformed_sidecar,
             "sidecar token is not a digest: \"" + std::string(text.substr(0, 64)) + "\"");
    }
    return token;
}

VerificationResult verify(std::span<const std::uint8_t> data, std::string_view sidecar_text,
                          ChecksumAlgo algo) {
    std::string expected = parse_sidecar(sidecar_text);
    if (expected.size() != digest_hex_length(algo)) {
        fail(ErrorKind::malformed_sidecar,
             "sidecar digest length " + std::to_string(expected.size()) + " does not match " +
                 std::string(to_string(algo)));
    }
    std::string actual = compute_digest(data, algo);
    auto status = expected == actual ? VerificationStatus::ok : VerificationStatus::mismatch;
    return VerificationResult{algo, std::move(expected), std::move(actual), status};
}

VerificationResult verify(std::string_view data, std::string_view sidecar_text, ChecksumAlgo algo) {
    return verify(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()),
        sidecar_text, algo);
}

}  // namespace sbomaudit

#include "beap/fingerprint.hpp"

#include <openssl/evp.h>

#include <array>

#include "beap/errors.hpp"

namespace beap {

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw FingerprintError("SHA-256 computation failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

StateFingerprint fingerprint(const Observation& obs) {
    return {sha256_hex(canonical_serialization(obs))};
}

StateFingerprint fingerprint_canonical(const std::string& bytes) {
    observation_from_canonical(bytes);  // validates
    return {sha256_hex(bytes)};
}

StateFingerprint child_fingerprint(const StateFingerprint& parent, const ActionSpec& action,
                                   const StateFingerprint& obs_digest) {
    return {sha256_hex(parent.digest + "|" + action_key(action) + "|" + obs_digest.digest)};
}

}  // namespace beap

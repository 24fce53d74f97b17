#pragma once

#include <compare>
#include <functional>
#include <string>

#include "beap/action.hpp"
#include "beap/observation.hpp"

namespace beap {

// Opaque state identity. For tree nodes this is path-qualified (see
// child_fingerprint); for raw observations it is the content digest alone.
struct StateFingerprint {
    std::string digest;

    bool empty() const { return digest.empty(); }
    friend auto operator<=>(const StateFingerprint&, const StateFingerprint&) = default;
};

// Lowercase hex SHA-256 of the input bytes.
std::string sha256_hex(const std::string& bytes);

// Digest of an observation's canonical serialization. Deterministic and pure;
// the canonical empty observation {"elements":[],"page":"","typed":""} hashes to
// f0fc29762a6ca7167e7da15ba67a36d4bbfee41c86374316f638bf2e42618dbc.
StateFingerprint fingerprint(const Observation& obs);

// Same, but from pre-serialized canonical bytes; throws FingerprintError when the
// bytes are not a canonical observation serialization.
StateFingerprint fingerprint_canonical(const std::string& bytes);

// Path-qualified node identity: the same page configuration reached along a
// different tree path gets a different node id, keeping the search tree a tree.
StateFingerprint child_fingerprint(const StateFingerprint& parent, const ActionSpec& action,
                                   const StateFingerprint& obs_digest);

}  // namespace beap

template <>
struct std::hash<beap::StateFingerprint> {
    size_t operator()(const beap::StateFingerprint& f) const noexcept {
        return std::hash<std::string>{}(f.digest);
    }
};

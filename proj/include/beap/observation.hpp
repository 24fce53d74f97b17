#pragma once

#include <compare>
#include <string>
#include <vector>

namespace beap {

// What the agent sees: the current page, its visible elements, and the side
// effects accumulated so far (text typed). Pure function of environment state.
struct Observation {
    std::string page;
    std::vector<std::string> elements;
    std::string typed;

    friend auto operator<=>(const Observation&, const Observation&) = default;
};

// Deterministic key-sorted compact JSON; elements sorted. This is the byte
// string that fingerprints are computed over.
std::string canonical_serialization(const Observation& obs);

// Inverse of canonical_serialization; rejects anything that does not round-trip
// to the exact same bytes.
Observation observation_from_canonical(const std::string& bytes);

}  // namespace beap

#pragma once

#include <stdexcept>
#include <string>

namespace beap {

// Base for every library error so callers can catch the whole family.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FingerprintError : Error { using Error::Error; };
struct StateNotInTree : Error { using Error::Error; };
struct IllegalAction : Error { using Error::Error; };
struct NondeterminismDetected : Error { using Error::Error; };
struct EmptyFailurePath : Error { using Error::Error; };
struct NotAnAncestor : Error { using Error::Error; };
struct GenParamError : Error { using Error::Error; };
struct IrreversibleAction : Error { using Error::Error; };
struct CheckpointError : Error { using Error::Error; };
struct EnvError : Error { using Error::Error; };
struct PlanMonotonicityViolation : Error { using Error::Error; };
struct BacktrackIrrecoverable : Error { using Error::Error; };
struct EpisodePolicyError : Error { using Error::Error; };
struct PolicyTimeout : Error { using Error::Error; };
struct PolicyProtocolError : Error { using Error::Error; };
struct PolicyEndpointError : Error { using Error::Error; };
struct ReplayWorldMismatch : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace beap

#pragma once

#include <string>

#include "beap/errors.hpp"

namespace beap {

// Tracker verdict in normal mode.
enum class ExecStatus { Continue, Backtrack, Fail, Done };

// Tracker verdict in backtrack mode.
enum class BackStatus { Recovered, NotRecovered };

// Trajectory step mode.
enum class Mode { Normal, Backtrack };

// Episode terminal outcome.
enum class Outcome { Done, Fail, BudgetExhausted };

inline std::string to_string(ExecStatus s) {
    switch (s) {
        case ExecStatus::Continue: return "CONTINUE";
        case ExecStatus::Backtrack: return "BACKTRACK";
        case ExecStatus::Fail: return "FAIL";
        case ExecStatus::Done: return "DONE";
    }
    return "?";
}

inline std::string to_string(BackStatus s) {
    return s == BackStatus::Recovered ? "RECOVERED" : "NOT_RECOVERED";
}

inline std::string to_string(Mode m) { return m == Mode::Normal ? "NORMAL" : "BACKTRACK"; }

inline std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Done: return "DONE";
        case Outcome::Fail: return "FAIL";
        case Outcome::BudgetExhausted: return "BUDGET_EXHAUSTED";
    }
    return "?";
}

inline ExecStatus exec_status_from_string(const std::string& s) {
    if (s == "CONTINUE") return ExecStatus::Continue;
    if (s == "BACKTRACK") return ExecStatus::Backtrack;
    if (s == "FAIL") return ExecStatus::Fail;
    if (s == "DONE") return ExecStatus::Done;
    throw Error("unknown exec status: " + s);
}

inline Outcome outcome_from_string(const std::string& s) {
    if (s == "DONE") return Outcome::Done;
    if (s == "FAIL") return Outcome::Fail;
    if (s == "BUDGET_EXHAUSTED") return Outcome::BudgetExhausted;
    throw Error("unknown outcome: " + s);
}

}  // namespace beap

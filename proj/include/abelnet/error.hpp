#pragma once

#include <stdexcept>
#include <string>

namespace abelnet {

enum class Errc {
    UnknownLetter,
    InvalidSpec,
    IllegalInput,
    NotLocallyIrreducible,
    NotCritical,
    NotStronglyConnected,
    NotAgentNetwork,
    NotLocallyRecurrent,
    BadWitnessVector,
    RuleNotApplicable,
    OrbitCapExceeded,
    PreconditionViolated,
    ParseError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::UnknownLetter: return "UnknownLetter";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::IllegalInput: return "IllegalInput";
    case Errc::NotLocallyIrreducible: return "NotLocallyIrreducible";
    case Errc::NotCritical: return "NotCritical";
    case Errc::NotStronglyConnected: return "NotStronglyConnected";
    case Errc::NotAgentNetwork: return "NotAgentNetwork";
    case Errc::NotLocallyRecurrent: return "NotLocallyRecurrent";
    case Errc::BadWitnessVector: return "BadWitnessVector";
    case Errc::RuleNotApplicable: return "RuleNotApplicable";
    case Errc::OrbitCapExceeded: return "OrbitCapExceeded";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace abelnet

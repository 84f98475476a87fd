#pragma once

#include <stdexcept>
#include <string>

namespace pillai3 {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// realball
struct DivisorStraddlesZero : Error {
    DivisorStraddlesZero() : Error("divisor interval contains zero") {}
};
struct DomainError : Error {
    using Error::Error;
};
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what = "precision cap reached") : Error(what) {}
};

// contfrac
struct RationalTerminated : Error {
    RationalTerminated() : Error("continued fraction terminated before reaching target") {}
};
struct IndexBeyondCertified : Error {
    IndexBeyondCertified() : Error("index beyond certified continued-fraction prefix") {}
};

// baker
struct HypothesisFailed : Error {
    using Error::Error;
};
struct NonConvergence : Error {
    using Error::Error;
};
struct CoefficientUnderivable : Error {
    using Error::Error;
};

// dpreduce
struct EpsilonNonPositive : Error {
    explicit EpsilonNonPositive(unsigned attempts)
        : Error("epsilon not certified positive after " + std::to_string(attempts) + " convergents"),
          attempts(attempts) {}
    unsigned attempts;
};
struct MuNearZero : Error {
    MuNearZero() : Error("mu interval contains zero; reduction inapplicable") {}
};

// search
struct UnclassifiedSolution : Error {
    using Error::Error;
};

}  // namespace pillai3

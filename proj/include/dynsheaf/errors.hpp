#pragma once

#include <stdexcept>
#include <string>

namespace dynsheaf {

// Base for all failures raised by the library. `code()` is a stable
// machine-readable tag; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define DYNSHEAF_ERROR(Name)                                        \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& msg) : Error(#Name, msg) {} \
    }

DYNSHEAF_ERROR(NonConvergence);
DYNSHEAF_ERROR(AmbiguousRank);
DYNSHEAF_ERROR(OverdeterminedInconsistent);
DYNSHEAF_ERROR(DegreeZero);
DYNSHEAF_ERROR(DegreeCap);
DYNSHEAF_ERROR(RamificationDegreeMismatch);
DYNSHEAF_ERROR(NotStabilized);
DYNSHEAF_ERROR(SingularMobius);
DYNSHEAF_ERROR(ClusterAmbiguity);
DYNSHEAF_ERROR(QMaxExceeded);
DYNSHEAF_ERROR(JetOrderInsufficient);
DYNSHEAF_ERROR(FiberDegreeMismatch);
DYNSHEAF_ERROR(SuperattractingPresent);
DYNSHEAF_ERROR(DeltaMismatch);
DYNSHEAF_ERROR(PreconditionViolation);
DYNSHEAF_ERROR(CaseUndetermined);
DYNSHEAF_ERROR(CriticalBasePoint);
DYNSHEAF_ERROR(BasisOverflow);
DYNSHEAF_ERROR(NearCriticalSample);
DYNSHEAF_ERROR(DimensionMismatch);
DYNSHEAF_ERROR(Unclassified);
DYNSHEAF_ERROR(SyntaxError);
DYNSHEAF_ERROR(NonRationalExpression);

#undef DYNSHEAF_ERROR

} // namespace dynsheaf

#pragma once

#include <stdexcept>
#include <string>

namespace pid {

// Base class for all library errors. `name()` is the stable identifier
// printed by the CLI on stderr; `what()` starts with the same name.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(detail.empty() ? name : name + ": " + detail),
          name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define PID_DEFINE_ERROR(Type)                                   \
    class Type : public Error {                                  \
    public:                                                      \
        explicit Type(const std::string& detail = {})            \
            : Error(#Type, detail) {}                            \
    }

PID_DEFINE_ERROR(NegativeMass);
PID_DEFINE_ERROR(MassNotOne);
PID_DEFINE_ERROR(DimensionMismatch);
PID_DEFINE_ERROR(AlphabetMismatch);
PID_DEFINE_ERROR(NullSupport);
PID_DEFINE_ERROR(NotConverged);
PID_DEFINE_ERROR(LpFailure);
PID_DEFINE_ERROR(InfeasibleSupport);
PID_DEFINE_ERROR(TooLarge);
PID_DEFINE_ERROR(AlphabetTooLarge);
PID_DEFINE_ERROR(ConsistencyViolation);
PID_DEFINE_ERROR(ParseError);
PID_DEFINE_ERROR(FileNotFound);

#undef PID_DEFINE_ERROR

}  // namespace pid

#pragma once

#include <stdexcept>
#include <string>

namespace riswpt {

enum class Err {
    ZeroDistance,
    NonpositiveDistance,
    LengthMismatch,
    TauOutOfRange,
    IndexOutOfRange,
    VelocityExceedsMax,
    EmptyBatch,
    ShapeMismatch,
    IntractableGrid,
    EmptyInput,
    ConfigParse,
    BatchIdentity,
    Io,
};

const char* err_name(Err e);

class SimError : public std::runtime_error {
public:
    SimError(Err code, const std::string& msg)
        : std::runtime_error(std::string(err_name(code)) + ": " + msg),
          code_(code) {}

    Err code() const { return code_; }

private:
    Err code_;
};

}  // namespace riswpt

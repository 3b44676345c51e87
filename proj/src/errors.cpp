#include "riswpt/errors.hpp"

namespace riswpt {

const char* err_name(Err e) {
    switch (e) {
        case Err::ZeroDistance: return "ZeroDistance";
        case Err::NonpositiveDistance: return "NonpositiveDistance";
        case Err::LengthMismatch: return "LengthMismatch";
        case Err::TauOutOfRange: return "TauOutOfRange";
        case Err::IndexOutOfRange: return "IndexOutOfRange";
        case Err::VelocityExceedsMax: return "VelocityExceedsMax";
        case Err::EmptyBatch: return "EmptyBatch";
        case Err::ShapeMismatch: return "ShapeMismatch";
        case Err::IntractableGrid: return "IntractableGrid";
        case Err::EmptyInput: return "EmptyInput";
        case Err::ConfigParse: return "ConfigParse";
        case Err::BatchIdentity: return "BatchIdentity";
        case Err::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace riswpt

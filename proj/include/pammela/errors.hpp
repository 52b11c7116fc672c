#pragma once

#include <stdexcept>
#include <string>

namespace pammela {

// Error classes double as CLI exit codes (see README).
enum class ErrorClass {
    FormatError          = 2,
    ConsistencyViolation = 3,
    UniverseOverflow     = 4,
    EmptyComplement      = 5,
    InvalidClusterMap    = 6,
    UnknownValue         = 7,
    DuplicateValue       = 8,
    WidthMismatch        = 9,
    MissingTruth         = 10,
    EmptyCounts          = 11,
    EmptyLog             = 12,
    EmptyPartition       = 13,
    InfeasibleCounts     = 14,
    InvalidSpec          = 15,
    EmptyDataset         = 16,
    IoError              = 17,
};

const char* to_string(ErrorClass cls);

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& msg)
        : std::runtime_error(std::string(to_string(cls)) + ": " + msg), cls_(cls) {}

    ErrorClass cls() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

[[noreturn]] inline void raise(ErrorClass cls, const std::string& msg) {
    throw Error(cls, msg);
}

inline const char* to_string(ErrorClass cls) {
    switch (cls) {
        case ErrorClass::FormatError:          return "FormatError";
        case ErrorClass::ConsistencyViolation: return "ConsistencyViolation";
        case ErrorClass::UniverseOverflow:     return "UniverseOverflow";
        case ErrorClass::EmptyComplement:      return "EmptyComplement";
        case ErrorClass::InvalidClusterMap:    return "InvalidClusterMap";
        case ErrorClass::UnknownValue:         return "UnknownValue";
        case ErrorClass::DuplicateValue:       return "DuplicateValue";
        case ErrorClass::WidthMismatch:        return "WidthMismatch";
        case ErrorClass::MissingTruth:         return "MissingTruth";
        case ErrorClass::EmptyCounts:          return "EmptyCounts";
        case ErrorClass::EmptyLog:             return "EmptyLog";
        case ErrorClass::EmptyPartition:       return "EmptyPartition";
        case ErrorClass::InfeasibleCounts:     return "InfeasibleCounts";
        case ErrorClass::InvalidSpec:          return "InvalidSpec";
        case ErrorClass::EmptyDataset:         return "EmptyDataset";
        case ErrorClass::IoError:              return "IoError";
    }
    return "Error";
}

} // namespace pammela

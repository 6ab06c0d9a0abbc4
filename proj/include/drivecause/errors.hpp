#pragma once

#include <stdexcept>
#include <string>

namespace drivecause {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- model construction / simulation ---
struct CycleDetectedError : Error { using Error::Error; };
struct UnboundVariableError : Error { using Error::Error; };
struct DuplicateVariableError : Error { using Error::Error; };
struct MissingInitialValueError : Error { using Error::Error; };
struct NoSuchVariableError : Error { using Error::Error; };
struct NumericOverflowError : Error { using Error::Error; };

// --- agents / planning ---
struct OffMapError : Error { using Error::Error; };
struct AllCandidatesDivergedError : Error { using Error::Error; };

// --- reward learning ---
struct EmptyHypotheticalSetError : Error { using Error::Error; };

// --- causal engine ---
struct TrackTooShortError : Error { using Error::Error; };
struct PlanningFailedError : Error { using Error::Error; };

// --- data ingestion ---
struct MalformedRecordError : Error { using Error::Error; };
struct MissingColumnError : Error { using Error::Error; };
struct UnknownTemplateError : Error { using Error::Error; };
struct UnlabelledSceneError : Error { using Error::Error; };

// --- evaluation ---
struct EdgeOutsideAgentSetError : Error { using Error::Error; };

// --- configuration ---
struct ConfigError : Error { using Error::Error; };

}  // namespace drivecause

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dnl {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dataset file could not be parsed (bad arity, bad number, missing header, ...).
class LoadError : public Error {
public:
    using Error::Error;
};

/// The same (fp_id, mac) pair appeared more than once in an observations file.
class DuplicateObservationError : public LoadError {
public:
    using LoadError::LoadError;
};

/// An observation row references an fp_id with no fingerprint row.
class OrphanObservationError : public LoadError {
public:
    using LoadError::LoadError;
};

/// A caller violated a documented precondition (shape mismatch, bad node id, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Fewer candidates than the requested neighborhood size.
class InsufficientCandidatesError : public Error {
public:
    InsufficientCandidatesError(std::size_t available, std::size_t requested)
        : Error("insufficient candidates: have " + std::to_string(available) +
                ", need " + std::to_string(requested)),
          available(available),
          requested(requested) {}

    std::size_t available;
    std::size_t requested;
};

/// Checkpoint file is malformed, truncated, or shape-inconsistent.
class CheckpointError : public Error {
public:
    using Error::Error;
};

/// Every run of a training sweep aborted (non-finite losses).
class TrainingFailure : public Error {
public:
    using Error::Error;
};

/// Synthetic map generation could not satisfy its own constraints.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Filesystem write/read failure on an output artifact.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace dnl

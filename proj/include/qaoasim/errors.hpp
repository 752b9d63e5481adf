// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace qaoa {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument values (wrong bitstring length, mismatched bases, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Requested sizes exceed what this build materializes (e.g. 2^n vectors).
struct CapacityError : Error {
    using Error::Error;
};

/// Input data is structurally valid but has bad values (non-finite cost, ...).
struct DataError : Error {
    using Error::Error;
};

/// A file failed to parse or failed an integrity check.
struct FormatError : Error {
    using Error::Error;
};

/// A loaded artifact does not match the requesting context (wrong n, k, kind).
struct CompatibilityError : Error {
    using Error::Error;
};

/// The local optimizer hit a non-finite objective or otherwise aborted.
struct OptimizerError : Error {
    using Error::Error;
};

}  // namespace qaoa

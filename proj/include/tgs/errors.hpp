// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tgs {

/// Base of every error raised by the library. Each subclass corresponds to one
/// named failure mode so callers can catch exactly what they can recover from.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TGS_DEFINE_ERROR(Name, Base)      \
  class Name : public Base {              \
   public:                                \
    using Base::Base;                     \
  };

// geometry
TGS_DEFINE_ERROR(EmptyCurve, Error)
TGS_DEFINE_ERROR(EmptyProjection, Error)
TGS_DEFINE_ERROR(DegenerateCurve, Error)

// world
TGS_DEFINE_ERROR(ParseError, Error)
TGS_DEFINE_ERROR(PoseOutOfBounds, Error)
TGS_DEFINE_ERROR(ActionLimitExceeded, Error)
TGS_DEFINE_ERROR(IoError, Error)

/// Invariant violation in a loaded document. `field()` names the offending
/// field using dotted paths, e.g. "camera.cx" or "reference_path".
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// trajgen
TGS_DEFINE_ERROR(TooFewBeams, Error)
TGS_DEFINE_ERROR(DimensionMismatch, Error)
TGS_DEFINE_ERROR(NoFreeSpace, Error)
TGS_DEFINE_ERROR(MissingWeights, Error)

// selection
TGS_DEFINE_ERROR(EmptyBatch, Error)
TGS_DEFINE_ERROR(NothingVisible, Error)
TGS_DEFINE_ERROR(EmptyTemplate, Error)

/// Raised by a selection backend; the pipeline answers any of these with the
/// fallback policy instead of aborting the episode.
TGS_DEFINE_ERROR(SelectionError, Error)
TGS_DEFINE_ERROR(Unparseable, SelectionError)
TGS_DEFINE_ERROR(InvalidChoice, SelectionError)
TGS_DEFINE_ERROR(BackendUnavailable, SelectionError)
TGS_DEFINE_ERROR(FixtureExhausted, SelectionError)

// eval
TGS_DEFINE_ERROR(UnknownVariant, Error)
TGS_DEFINE_ERROR(NoScenarios, Error)

#undef TGS_DEFINE_ERROR

}  // namespace tgs

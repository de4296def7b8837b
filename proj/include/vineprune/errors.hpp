#pragma once

#include <stdexcept>
#include <string>

namespace vineprune {

// Base class for all pipeline errors. Subclasses mirror the failure
// categories surfaced to callers; catching Error is enough for "anything
// this library can throw".
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A COCO category name has no mapping to a grapevine organ class.
struct ClassMapError : Error {
    using Error::Error;
};

// Degenerate or unusable polygon geometry in an annotation.
struct GeometryError : Error {
    using Error::Error;
};

// Caller misuse that needs a different invocation, e.g. a multi-image
// COCO file without an image selector.
struct UsageError : Error {
    using Error::Error;
};

// Raster dimensions disagree between scene inputs.
struct DimensionError : Error {
    using Error::Error;
};

// Bad key, value or range in the pipeline configuration.
struct ConfigError : Error {
    using Error::Error;
};

// No usable depth at or around a queried pixel.
struct DepthError : Error {
    using Error::Error;
};

// The scene contains no main cordon, so no model can be rooted.
struct EmptyModelError : Error {
    using Error::Error;
};

// A per-region assessment was requested on an item it cannot apply to.
struct AssessmentError : Error {
    using Error::Error;
};

// Two coincident points where a segment was required.
struct DegenerateSegment : Error {
    using Error::Error;
};

// A pruning point could not be moved onto its organ or onto valid depth.
struct CorrectionError : Error {
    using Error::Error;
};

// A synthetic scene spec that cannot be drawn on its canvas.
struct SpecError : Error {
    using Error::Error;
};

// Model comparison over mismatched instance-ID universes.
struct ScoringError : Error {
    using Error::Error;
};

} // namespace vineprune

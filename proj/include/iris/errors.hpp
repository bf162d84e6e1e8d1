// Copyright 2026 The iris-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRIS_ERRORS_HPP_
#define IRIS_ERRORS_HPP_

#include <stdexcept>

namespace iris {

// Base class for every error the library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric argument violated its domain (negative depth, zero pixels, ...).
struct DomainError : Error {
  using Error::Error;
};

// A lookup fell outside a sampled span; the message names the valid span.
struct RangeError : Error {
  using Error::Error;
};

// Structured input failed validation (overlapping regions, bad plan, ...).
struct ValidationError : Error {
  using Error::Error;
};

// A file could not be parsed; the message carries a line or byte position.
struct ParseError : Error {
  using Error::Error;
};

// Mutually inconsistent settings (tile larger than image, pitch too coarse).
struct ConfigError : Error {
  using Error::Error;
};

// Metadata mismatch between two images (microns per pixel, dimensions).
struct UnitError : Error {
  using Error::Error;
};

// Not enough overlap between images to search for an offset.
struct CoverageError : Error {
  using Error::Error;
};

// Input too degenerate to process (e.g. a constant image).
struct DegenerateInputError : Error {
  using Error::Error;
};

// A pairwise registration during stitching scored too low to trust.
struct StitchError : Error {
  using Error::Error;
};

}  // namespace iris

#endif  // IRIS_ERRORS_HPP_

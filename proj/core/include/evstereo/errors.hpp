// Copyright 2026 The evstereo Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evstereo {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. `line()` is 1-based for text formats; `offset()` is
/// the byte offset of the offending record for binary formats.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset);

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t line_;
  std::size_t offset_;
};

/// A well-formed record whose content violates a domain constraint
/// (e.g. pixel coordinate outside the sensor).
class RecordError : public ParseError {
public:
  using ParseError::ParseError;
};

/// Time went backwards: an event or a sample predates a pixel's last update.
class OrderingError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Value outside the domain of a mathematical operation (e.g. zero depth).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Hand-eye input without two independent rotation axes.
class DegenerateConfigurationError : public Error {
public:
  using Error::Error;
};

/// Invalid synthetic scene description.
class SpecError : public Error {
public:
  using Error::Error;
};

/// A metric was asked for over zero jointly valid pixels.
class EmptyEvaluationError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace evstereo

// Copyright 2026 The udds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace udds {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside its documented range (alpha, q, partition count...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A value cannot be indexed by a log-bucketed store (zero, negative, NaN).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A delete targeted a bucket that does not hold the item.
class UnderflowError : public Error {
 public:
  using Error::Error;
};

/// A counter would exceed 2^64 - 1.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// The operation is not legal in the sketch's current state.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Two sketches cannot be merged. field() names the first mismatch.
class IncompatibleError : public Error {
 public:
  IncompatibleError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Serialized bytes do not start with a recognised envelope.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Serialized bytes are well framed but violate a sketch invariant.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// Serialized bytes are shorter (or longer) than the envelope declares.
class LengthError : public Error {
 public:
  using Error::Error;
};

/// Inputs to an evaluation disagree with each other (e.g. item counts).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace udds

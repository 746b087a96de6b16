// Copyright 2026 The phasespace Authors
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

#include <stdexcept>
#include <string>

namespace phasespace {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The traciality system for the requested ordering has no solution.
class DegenerateKernel : public Error {
 public:
  DegenerateKernel(int dim, int ordering, const std::string& what)
      : Error(what), dim_(dim), ordering_(ordering) {}
  int dim() const { return dim_; }
  int ordering() const { return ordering_; }

 private:
  int dim_;
  int ordering_;
};

class InvalidRotation : public Error {
 public:
  using Error::Error;
};

/// A positive-P kernel was evaluated at (or too close to) 1 + psi*phi = 0.
class PoleError : public Error {
 public:
  PoleError(int site, const std::string& what) : Error(what), site_(site) {}
  /// Zero-based site index, or -1 for a single-site kernel.
  int site() const { return site_; }

 private:
  int site_;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Refusal to build a dense object beyond the exact-oracle size limit.
class OracleScaleError : public Error {
 public:
  using Error::Error;
};

/// No nonnegative discrete expansion was found for a kernel.
class ExpansionFailure : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  SamplingError(int site, const std::string& what) : Error(what), site_(site) {}
  int site() const { return site_; }

 private:
  int site_;
};

/// Exact integration left the physical state space beyond tolerance.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace phasespace

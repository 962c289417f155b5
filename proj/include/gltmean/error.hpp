// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gltmean {

enum class Errc {
  invalid_argument,
  size_mismatch,
  non_finite,
  not_hpd,
  non_convergence,
  construction,
  config,
  io,
};

const char* errc_name(Errc code) noexcept;

/// Single exception type for the library; `code()` classifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised when a fractional or negative power meets an eigenvalue below the
/// admissible floor.
class NotHpdError : public Error {
 public:
  NotHpdError(const std::string& what, long double eigenvalue)
      : Error(Errc::not_hpd, what), eigenvalue_(eigenvalue) {}
  long double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  long double eigenvalue_;
};

}  // namespace gltmean

// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dynbc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidSize : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class RankDeficientL : public Error {
 public:
  using Error::Error;
};

class LambdaInSpectrum : public Error {
 public:
  using Error::Error;
};

class WrongCase : public Error {
 public:
  using Error::Error;
};

class UnknownCut : public Error {
 public:
  using Error::Error;
};

class BoundsMissing : public Error {
 public:
  using Error::Error;
};

class PremiseViolated : public Error {
 public:
  using Error::Error;
};

class BlockMapMismatch : public Error {
 public:
  using Error::Error;
};

class NonConvergedValidation : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class IncompatibleScenarios : public Error {
 public:
  using Error::Error;
};

}  // namespace dynbc

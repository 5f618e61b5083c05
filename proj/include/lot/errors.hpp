#pragma once

#include <stdexcept>
#include <string>

namespace lot {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class NonCausalPathError : public Error {
 public:
  using Error::Error;
};

class NonCausalPairError : public Error {
 public:
  using Error::Error;
};

class NotTotallyTimelikeError : public Error {
 public:
  using Error::Error;
};

class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

class NotAMapError : public Error {
 public:
  using Error::Error;
};

class AllLevelsVanishError : public Error {
 public:
  using Error::Error;
};

class MarginalMismatchError : public Error {
 public:
  using Error::Error;
};

class SizeGuardError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lot

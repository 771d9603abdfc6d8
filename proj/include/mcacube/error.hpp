#pragma once

#include <stdexcept>
#include <string>

namespace mcacube {

  // Malformed or unusable input (files, schema, shapes, arguments).
  class InputError : public std::runtime_error {
  public:
    explicit InputError(std::string const& what) : std::runtime_error(what) {}
  };

  // The numbers cannot be produced: solver failure, zero baseline, ...
  class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(std::string const& what) : std::runtime_error(what) {}
  };

} // namespace mcacube

#pragma once

#include <stdexcept>
#include <string>

namespace spinframe {

/// Raised when an iterative routine fails to converge or a sampler exhausts
/// its proposal budget. Domain and argument errors use std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinframe

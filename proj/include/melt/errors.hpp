#pragma once

#include <stdexcept>
#include <string>

namespace melt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// malformed or inconsistent distribution parameters
struct InvalidSpec : Error {
  using Error::Error;
};

// Mellin argument outside the finiteness strip
struct OutOfDomain : Error {
  using Error::Error;
};

// adaptive integration ran out of panel budget before reaching tolerance
struct QuadratureFailure : Error {
  using Error::Error;
};

// law has no density (atoms, grid data) where one is required
struct DensityUnavailable : Error {
  using Error::Error;
};

// no exact or numeric sampling route for this node
struct SamplerUnavailable : Error {
  using Error::Error;
};

}  // namespace melt

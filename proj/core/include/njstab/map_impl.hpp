#pragma once

// Internal polymorphic core of AlgebraMap. Not part of the installed API
// surface contract, but exposed so the corrector can define its own kind.

#include <string>

#include "njstab/algebra.hpp"

namespace njstab::detail {

struct MapImpl {
  int dim;
  std::string label;

  MapImpl(int d, std::string l) : dim(d), label(std::move(l)) {}
  virtual ~MapImpl() = default;

  /// Raw evaluation; argument dimension already checked by the caller.
  virtual Element eval(const Element& x) const = 0;
};

}  // namespace njstab::detail

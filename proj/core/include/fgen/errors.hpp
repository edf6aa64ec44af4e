#ifndef FGEN_ERRORS_HPP
#define FGEN_ERRORS_HPP

#include <stdexcept>

namespace fgen {

/// A configured resource cap (enumeration size, vertex-pair budget, tuple
/// size, cycle count) would be exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fgen

#endif

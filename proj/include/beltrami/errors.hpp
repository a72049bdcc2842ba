#pragma once

#include <stdexcept>
#include <string>

namespace beltrami {

/// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or unparseable configuration. CLI exit code 2.
class config_error : public error {
public:
  using error::error;
};

/// An iteration exhausted its budget without meeting its tolerance. CLI exit code 3.
class convergence_error : public error {
public:
  using error::error;
};

/// A runtime guard tripped: support leaked past its bound, a region touched the
/// boundary, image domains collided, a sampled value went non-finite. CLI exit code 4.
class invariant_error : public error {
public:
  using error::error;
};

} // namespace beltrami

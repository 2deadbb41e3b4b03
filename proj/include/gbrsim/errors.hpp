#pragma once

#include <stdexcept>
#include <string>

namespace gbr {

/// Bad caller input (non-positive radius, empty station list, malformed JSON...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A node asked to route a message has no admissible next hop.
class RoutingFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// generated != delivered + queued at a checkpoint.
class ConservationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gbr

#pragma once

#include <stdexcept>
#include <string>

namespace odoforge {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct BackendMismatch : Error {
  explicit BackendMismatch(const std::string& msg) : Error(msg) {}
};

struct LevelOutOfRange : Error {
  explicit LevelOutOfRange(const std::string& msg) : Error(msg) {}
};

struct FormatError : Error {
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

struct ChainInvalid : Error {
  explicit ChainInvalid(const std::string& msg) : Error(msg) {}
};

// Raised by the greedy ratio-thinning when the chain runs out of depth
// before the first admissible index (or a requested plan length) is reached.
struct DepthExhausted : Error {
  int deepest;
  DepthExhausted(const std::string& msg, int deepest_reached)
      : Error(msg), deepest(deepest_reached) {}
};

struct PlanMismatch : Error {
  explicit PlanMismatch(const std::string& msg) : Error(msg) {}
};

struct PartitionViolation : Error {
  explicit PartitionViolation(const std::string& msg) : Error(msg) {}
};

struct FiberMismatch : Error {
  explicit FiberMismatch(const std::string& msg) : Error(msg) {}
};

struct EnumerationTooLarge : Error {
  explicit EnumerationTooLarge(const std::string& msg) : Error(msg) {}
};

}  // namespace odoforge

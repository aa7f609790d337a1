#pragma once

#include <stdexcept>
#include <string>

namespace webreorg {

// A single log line that could not be parsed. what() carries the offending
// line content.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or malformed input sources (files, intermediate stage outputs).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration: unknown keys, out-of-range values, bad enum spellings.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Cross-stage state mismatch, e.g. applying a stale plan whose edges already
// exist in the graph.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace webreorg

#pragma once

#include <stdexcept>
#include <string>

namespace sta {

/// Invalid or out-of-range configuration input. Messages carry the
/// offending key path (e.g. "protocol.s").
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical contract could not be met: quadrature tolerance not reached,
/// Fock truncation breached, density positivity lost, singular design system.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure; message includes the path.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sta

#ifndef PERIODAX_ERROR_HPP
#define PERIODAX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace periodax {

/// Invalid input: a precondition on a config, signal or weight sequence.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Failure while running an otherwise valid computation (capacity, budget, missing data).
class RuntimeFault : public std::runtime_error {
public:
  explicit RuntimeFault(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace periodax

#endif  // PERIODAX_ERROR_HPP

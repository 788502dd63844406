#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace buyerdyn {

// Input outside the domain of a map or rule (a <= 0, x outside [0,1],
// Ratio rule at p = 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Result escaped [0,1] by more than round-off; indicates a broken family.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A domain error raised while advancing an orbit, tagged with the step index
// at which it happened (the error occurred computing state t+1 from state t).
class DynamicsError : public std::runtime_error {
 public:
  DynamicsError(std::size_t time, const std::string& what)
      : std::runtime_error("t=" + std::to_string(time) + ": " + what), time_(time) {}

  std::size_t time() const noexcept { return time_; }

 private:
  std::size_t time_;
};

// Malformed configuration; key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : "key '" + key + "': " + what),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace buyerdyn

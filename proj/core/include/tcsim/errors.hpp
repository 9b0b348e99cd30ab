#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tcsim {

/// Step-size control gave up; carries the last accepted time.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_tau)
      : std::runtime_error(what + " (last good tau = " + std::to_string(last_tau) + ")"),
        last_tau_(last_tau) {}
  [[nodiscard]] double last_tau() const noexcept { return last_tau_; }

 private:
  double last_tau_;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigenvector matching broke down away from a flagged crossing.
class TrackingError : public std::runtime_error {
 public:
  TrackingError(const std::string& what, double tau)
      : std::runtime_error(what + " at tau = " + std::to_string(tau)), tau_(tau) {}
  [[nodiscard]] double tau() const noexcept { return tau_; }

 private:
  double tau_;
};

/// Chirp root-finding failed; reports the attainable phase range.
class NoRootError : public std::runtime_error {
 public:
  NoRootError(const std::string& what, double phase_lo, double phase_hi)
      : std::runtime_error(what), lo_(phase_lo), hi_(phase_hi) {}
  [[nodiscard]] double phase_lo() const noexcept { return lo_; }
  [[nodiscard]] double phase_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Malformed or invalid experiment configuration. line() is 0 when the
/// problem is not tied to a line of input.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string field = {})
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        field_(std::move(field)) {}
  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace tcsim

#pragma once

#include <stdexcept>
#include <string>

namespace atomlens {

// Invalid or inconsistent user input (config files, domain-type invariants).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A quadrature failed its order-doubling convergence test.
class QuadratureError : public std::runtime_error {
  public:
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Failure writing an output artifact.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Nonlinear fit failures; degenerate data is reported distinctly from
// non-convergence.
class FitError : public std::runtime_error {
  public:
    enum class Reason { non_convergence, degenerate_data };

    FitError(Reason reason, const std::string& what)
        : std::runtime_error(what), reason_(reason) {}

    Reason reason() const { return reason_; }

  private:
    Reason reason_;
};

}  // namespace atomlens

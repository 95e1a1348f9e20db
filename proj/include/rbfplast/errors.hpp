#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rbfplast {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// Thrown by iterative methods that exhaust their iteration budget. Carries the
// best iterate seen so the caller can inspect or continue from it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best, double residual, int iterations)
      : Error(what), best_(std::move(best)), residual_(residual), iterations_(iterations) {}

  const std::vector<double>& best_iterate() const { return best_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  std::vector<double> best_;
  double residual_;
  int iterations_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbfplast

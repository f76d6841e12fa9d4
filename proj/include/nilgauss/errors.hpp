#pragma once

#include <stdexcept>
#include <string>

namespace nilgauss {

/// A function evaluated to a non-finite value (or threw) at a sampled point.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double u, double v)
      : std::runtime_error(what), u_(u), v_(v) {}

  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }

 private:
  double u_;
  double v_;
};

/// A disk-valued quantity was asked for at |g| >= 1.
class OutOfDiskError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// X_u x X_v vanishes (below the immersion threshold) at a sample.
class DegenerateImmersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Gauss map failed one of the checks required before integration.
/// `check()` names the failed check; (u, v) is the worst node.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(std::string check, const std::string& what, double u, double v, double value)
      : std::runtime_error(what), check_(std::move(check)), u_(u), v_(v), value_(value) {}

  const std::string& check() const noexcept { return check_; }
  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }
  double value() const noexcept { return value_; }

 private:
  std::string check_;
  double u_;
  double v_;
  double value_;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path) : std::runtime_error(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace nilgauss

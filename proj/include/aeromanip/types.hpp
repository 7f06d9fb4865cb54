#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace aeromanip {

using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;

inline constexpr int kNumJoints = 5;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// One or more physical/structural invariants of a model do not hold.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

class NoFeasibleBranch : public Error {
 public:
  using Error::Error;
};

class KinematicSingularity : public Error {
 public:
  KinematicSingularity(const std::string& what, double sigma_min)
      : Error(what), sigma_min_(sigma_min) {}
  double sigma_min() const { return sigma_min_; }

 private:
  double sigma_min_;
};

class AttitudeSingularity : public Error {
 public:
  using Error::Error;
};

class GimbalProximity : public Error {
 public:
  using Error::Error;
};

class DegenerateThrust : public Error {
 public:
  using Error::Error;
};

class AsinDomain : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace aeromanip

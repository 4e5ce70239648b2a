#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geoflow {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// det g fell to or below the immersion threshold at some grid point.
class DegenerateMetricError : public Error {
 public:
  DegenerateMetricError(std::size_t point, double det)
      : Error("degenerate metric at point " + std::to_string(point) +
              " (det g = " + std::to_string(det) + ")"),
        point_(point),
        det_(det) {}
  std::size_t point() const noexcept { return point_; }
  double det() const noexcept { return det_; }

 private:
  std::size_t point_;
  double det_;
};

class StepRejectedError : public Error {
 public:
  using Error::Error;
};

/// The map-graph surface stopped projecting diffeomorphically onto the first factor.
class GraphConditionError : public Error {
 public:
  using Error::Error;
};

class PastExtinctionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ProbeTimeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedAmbientError : public Error {
 public:
  using Error::Error;
};

class FitFailureError : public Error {
 public:
  using Error::Error;
};

class NonSymplecticJacobianError : public Error {
 public:
  using Error::Error;
};

class NotLagrangianError : public Error {
 public:
  using Error::Error;
};

class NonpositiveEtaError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Config parse failure; key() names the offending key (empty if the line had none).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class CorruptTrackError : public Error {
 public:
  using Error::Error;
};

}  // namespace geoflow

#pragma once

#include <stdexcept>
#include <string>

namespace levysim {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The requested set reaches into a region where the jump measure is not integrable.
class NonIntegrable : public Error {
  public:
    using Error::Error;
};

/// The jump measure carries no mass anywhere, so no sector survives.
class EmptyPartition : public Error {
  public:
    using Error::Error;
};

/// A time argument lies beyond the horizon of the sample path.
class HorizonExceeded : public Error {
  public:
    using Error::Error;
};

/// A perturbation size falls outside the support covered by the partition.
class UnsupportedJumpSize : public Error {
  public:
    using Error::Error;
};

/// Perturbations with v = 0 are undefined (the quotient divides by v).
class ZeroJump : public Error {
  public:
    using Error::Error;
};

/// Scalar-expression evaluation hit an undefined operation (e.g. division by zero).
/// Carries the location of the offending node inside the tree.
class DomainError : public Error {
  public:
    DomainError(const std::string& msg, std::string location)
        : Error(msg + " at " + location), location_(std::move(location)) {}

    const std::string& location() const { return location_; }

  private:
    std::string location_;
};

/// Difference-operator calculus requires a pure-jump triplet (sigma = 0).
class SigmaNotZero : public Error {
  public:
    using Error::Error;
};

/// The shift-quotient operator is only defined on cylindrical functionals.
class NotCylindrical : public Error {
  public:
    using Error::Error;
};

/// A pathwise identity exceeded its tolerance; carries the offending sample.
class ToleranceExceeded : public Error {
  public:
    ToleranceExceeded(const std::string& msg, std::string omega_json, double r, double v)
        : Error(msg), omega_json_(std::move(omega_json)), r_(r), v_(v) {}

    const std::string& omega_json() const { return omega_json_; }
    double r() const { return r_; }
    double v() const { return v_; }

  private:
    std::string omega_json_;
    double r_ = 0.0;
    double v_ = 0.0;
};

/// Boxes passed to a multiple integral are not pairwise disjoint.
class OverlappingBoxes : public Error {
  public:
    using Error::Error;
};

/// A coefficient estimate was requested over a box with m(B) = 0.
class ZeroMeasureBox : public Error {
  public:
    using Error::Error;
};

/// The two transfer-test backends do not share the same Levy triplet.
class BackendMismatch : public Error {
  public:
    using Error::Error;
};

/// Experiment configuration failed schema validation.
class ConfigInvalid : public Error {
  public:
    using Error::Error;
};

}  // namespace levysim

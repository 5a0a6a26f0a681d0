#pragma once

#include <stdexcept>
#include <string>

namespace vortex {

class VortexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration outside the domain of validity: collisions, vortex outside
// the disk, image-point coincidences.
class DomainError : public VortexError {
 public:
  using VortexError::VortexError;
};

class SingularInputError : public VortexError {
 public:
  using VortexError::VortexError;
};

class PreconditionError : public VortexError {
 public:
  using VortexError::VortexError;
};

class NotResonantError : public VortexError {
 public:
  using VortexError::VortexError;
};

class NotFoundError : public VortexError {
 public:
  using VortexError::VortexError;
};

// A double eigenvalue cannot seed a Lyapunov family directly; the caller has
// to go through the circulation perturbation first.
class MustPerturbError : public VortexError {
 public:
  using VortexError::VortexError;
};

class ConvergenceError : public VortexError {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : VortexError(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class SingularJacobianError : public VortexError {
 public:
  SingularJacobianError(const std::string& what, double rcond)
      : VortexError(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

}  // namespace vortex

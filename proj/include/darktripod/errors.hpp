#pragma once

#include <stdexcept>

namespace darktripod {

/// A physically meaningful evaluation that has no finite answer: poles of the
/// susceptibility, branch cuts of the refractive index, the infinite group
/// velocity threshold.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Time integration produced non-finite values.
class IntegrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A steady state was requested but the integrator did not settle.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace darktripod

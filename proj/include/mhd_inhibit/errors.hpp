#pragma once

#include <stdexcept>
#include <string>

namespace mhdi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition or argument-range violation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Deformation gradient not invertible at some node.
class SingularDeformation : public Error {
public:
    using Error::Error;
};

/// Parameterization Jacobi matrix lost rank at a quadrature node.
class DegenerateSurface : public Error {
public:
    using Error::Error;
};

/// A particle trajectory left the vertical extent of the slab.
class TrajectoryExit : public Error {
public:
    using Error::Error;
};

/// No destabilizing test field found within the search budget.
class WitnessNotFound : public Error {
public:
    using Error::Error;
};

}  // namespace mhdi

#pragma once

#include <stdexcept>
#include <string>

namespace longwave {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid caller input (bad dimensions, out-of-range parameters, malformed data).
class UserError : public Error {
public:
  using Error::Error;
};

// A numerical procedure failed (residual too large, divergence, degeneracy).
class NumericalError : public Error {
public:
  using Error::Error;
};

// filters
class NumericalResidual : public NumericalError { public: using NumericalError::NumericalError; };
class FactorizationFailed : public NumericalError { public: using NumericalError::NumericalError; };
class DegenerateDenominator : public NumericalError { public: using NumericalError::NumericalError; };

// transform
class InputTooShort : public UserError { public: using UserError::UserError; };
class NonFiniteInput : public UserError { public: using UserError::UserError; };

// scalogram
class EmptyPyramid : public UserError { public: using UserError::UserError; };
class DegenerateScale : public NumericalError { public: using NumericalError::NumericalError; };

// whittle
class DomainError : public UserError { public: using UserError::UserError; };
class EmptyScales : public UserError { public: using UserError::UserError; };
class OptimizerDidNotConverge : public NumericalError { public: using NumericalError::NumericalError; };

// asymptotics
class SeriesNotConverged : public NumericalError { public: using NumericalError::NumericalError; };

// simulate
class InvalidD : public UserError { public: using UserError::UserError; };
class NonPsdSigma : public UserError { public: using UserError::UserError; };
class NonPsdSpectrum : public NumericalError { public: using NumericalError::NumericalError; };

// montecarlo
class AllReplicationsFailed : public NumericalError { public: using NumericalError::NumericalError; };

// connectivity
class DimensionMismatch : public UserError { public: using UserError::UserError; };

}  // namespace longwave

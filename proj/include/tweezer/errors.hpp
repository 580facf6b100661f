#pragma once

#include <stdexcept>
#include <string>

namespace tweezer {

/// Failure classes, mapped one-to-one onto CLI exit codes.
enum class ErrorKind {
  Config = 2,
  Numeric = 3,
  RegimeBreakdown = 4,
  Model = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define TWEEZER_DEFINE_ERROR(Name, Kind)                                     \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

// numerics
TWEEZER_DEFINE_ERROR(PoleError, Numeric)
TWEEZER_DEFINE_ERROR(ConvergenceError, Numeric)
TWEEZER_DEFINE_ERROR(DegenerateParameterError, Numeric)
TWEEZER_DEFINE_ERROR(NonConvergenceError, Numeric)
TWEEZER_DEFINE_ERROR(ToleranceError, Numeric)
TWEEZER_DEFINE_ERROR(DivergenceError, Numeric)
TWEEZER_DEFINE_ERROR(SingularJacobianError, Numeric)

// morse
TWEEZER_DEFINE_ERROR(MultiBoundStateError, Model)
TWEEZER_DEFINE_ERROR(NoBoundStateError, Model)
TWEEZER_DEFINE_ERROR(DomainError, Model)
TWEEZER_DEFINE_ERROR(RealificationError, Numeric)

// fit
TWEEZER_DEFINE_ERROR(FitDivergenceError, Numeric)
TWEEZER_DEFINE_ERROR(AcausalFitError, Numeric)

// optimizer
TWEEZER_DEFINE_ERROR(ZeroLambdaError, Model)
TWEEZER_DEFINE_ERROR(MultiplePoleError, Numeric)
TWEEZER_DEFINE_ERROR(ZeroAccelerationError, Model)
TWEEZER_DEFINE_ERROR(DegenerateInputError, Model)

// survival
TWEEZER_DEFINE_ERROR(StepSizeError, Numeric)
TWEEZER_DEFINE_ERROR(RegimeBreakdownError, RegimeBreakdown)

// cli
TWEEZER_DEFINE_ERROR(ConfigError, Config)

#undef TWEEZER_DEFINE_ERROR

}  // namespace tweezer

#ifndef REPARAM_ERRORS_HPP
#define REPARAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace reparam {

// Root of all library errors. The CLI maps these to exit code 3;
// anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define REPARAM_ERROR_TYPE(Name)                                     \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name, what) {}   \
  }

REPARAM_ERROR_TYPE(DomainError);
REPARAM_ERROR_TYPE(DimensionMismatch);
REPARAM_ERROR_TYPE(NonFiniteIntegrand);
REPARAM_ERROR_TYPE(MaxDepthExceeded);
REPARAM_ERROR_TYPE(NoSignChange);
REPARAM_ERROR_TYPE(MaxIterations);
REPARAM_ERROR_TYPE(NotFactorized);
REPARAM_ERROR_TYPE(SingularCoordinates);
REPARAM_ERROR_TYPE(ScoreBelowBound);
REPARAM_ERROR_TYPE(PointOutsideCodomain);
REPARAM_ERROR_TYPE(OutsideBackgroundSupport);
REPARAM_ERROR_TYPE(DimensionTooLow);
REPARAM_ERROR_TYPE(PointsCoincide);
REPARAM_ERROR_TYPE(BallOutsideDomain);

#undef REPARAM_ERROR_TYPE

}  // namespace reparam

#endif  // REPARAM_ERRORS_HPP

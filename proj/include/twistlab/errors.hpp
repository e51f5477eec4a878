#pragma once

/*! @file errors.hpp
    @brief Exception taxonomy.  Each named failure mode in the module
           contracts maps to one type here. */

#include <stdexcept>
#include <string>

namespace twistlab {

struct Error : std::runtime_error {
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

#define TWISTLAB_ERROR(Name)                                  \
  struct Name : Error {                                       \
    explicit Name(const std::string &msg) : Error(#Name ": " + msg) {} \
  }

TWISTLAB_ERROR(InvalidParams);
TWISTLAB_ERROR(InfeasibleLaw);
TWISTLAB_ERROR(DomainError);
TWISTLAB_ERROR(OutOfDomain);
TWISTLAB_ERROR(InfeasibleState);
TWISTLAB_ERROR(InfeasibleStart);
TWISTLAB_ERROR(BoundViolated);
TWISTLAB_ERROR(LineSearchStalled);
TWISTLAB_ERROR(OriginOnCurve);
TWISTLAB_ERROR(UnwrapAmbiguous);
TWISTLAB_ERROR(TooFewRadii);
TWISTLAB_ERROR(HypothesisViolated);
TWISTLAB_ERROR(ProfileOrderViolated);

#undef TWISTLAB_ERROR

}  // namespace twistlab

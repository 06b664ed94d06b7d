#pragma once

#include <stdexcept>
#include <string>

namespace shs6v {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SHS6V_ERROR(Name) \
  struct Name : Error { using Error::Error; }

SHS6V_ERROR(DivisionByZero);
SHS6V_ERROR(ParameterError);
SHS6V_ERROR(StochasticityError);
SHS6V_ERROR(WindowOverflow);
SHS6V_ERROR(WindowUnderflow);
SHS6V_ERROR(TruncationError);
SHS6V_ERROR(StateSpaceTooLarge);
SHS6V_ERROR(BracketError);
SHS6V_ERROR(DegenerateTilt);
SHS6V_ERROR(QuadratureNotConverged);
SHS6V_ERROR(PoleOnContour);
SHS6V_ERROR(KernelMismatch);
SHS6V_ERROR(IOError);

#undef SHS6V_ERROR

}  // namespace shs6v

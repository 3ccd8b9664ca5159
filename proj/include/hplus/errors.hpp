#pragma once

#include <stdexcept>
#include <string>

namespace hplus {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HPLUS_ERROR(Name)                                  \
    class Name : public Error {                            \
    public:                                                \
        explicit Name(const std::string& what)             \
            : Error(std::string(#Name ": ") + what) {}     \
    }

HPLUS_ERROR(InvalidArgument);
HPLUS_ERROR(SearchExhausted);
HPLUS_ERROR(NotInSubgroup);
HPLUS_ERROR(ShapeMismatch);
HPLUS_ERROR(ZeroPolynomial);
HPLUS_ERROR(NotSubideal);
HPLUS_ERROR(OracleMismatch);
HPLUS_ERROR(FactorizationIncomplete);
HPLUS_ERROR(BudgetExhausted);
HPLUS_ERROR(MCapReached);
HPLUS_ERROR(DegenerateUnit);
HPLUS_ERROR(PrecisionInsufficient);
HPLUS_ERROR(RoundingAmbiguous);
HPLUS_ERROR(DivisionFailed);
HPLUS_ERROR(ParseError);

#undef HPLUS_ERROR

}  // namespace hplus

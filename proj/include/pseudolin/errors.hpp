#pragma once

#include <stdexcept>
#include <string>

namespace pseudolin {

// Every domain failure derives from Error; the CLI maps ParseError to exit
// status 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PSEUDOLIN_DEFINE_ERROR(Name)                         \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what) : Error(what) {}  \
  }

PSEUDOLIN_DEFINE_ERROR(SingularCurve);
PSEUDOLIN_DEFINE_ERROR(NotOnCurve);
PSEUDOLIN_DEFINE_ERROR(InfinityPoint);
PSEUDOLIN_DEFINE_ERROR(BadReduction);
PSEUDOLIN_DEFINE_ERROR(PrecisionOverflow);
PSEUDOLIN_DEFINE_ERROR(InconclusivePrecision);
PSEUDOLIN_DEFINE_ERROR(InvalidSubgroup);
PSEUDOLIN_DEFINE_ERROR(NoGoodPrime);
PSEUDOLIN_DEFINE_ERROR(NotFound);
PSEUDOLIN_DEFINE_ERROR(RankExhausted);
PSEUDOLIN_DEFINE_ERROR(PreconditionViolated);
PSEUDOLIN_DEFINE_ERROR(ParseError);

#undef PSEUDOLIN_DEFINE_ERROR

}  // namespace pseudolin

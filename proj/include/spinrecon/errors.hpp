#pragma once

#include <stdexcept>
#include <string>

namespace spinrecon {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDirection : Error { using Error::Error; };
struct InvalidSampleGrid : Error { using Error::Error; };
struct InvalidPhases : Error { using Error::Error; };
struct SpinMismatch : Error { using Error::Error; };
struct ZeroState : Error { using Error::Error; };
struct EmptyRecombination : Error { using Error::Error; };
struct DimensionTooLarge : Error { using Error::Error; };
struct InvalidArity : Error { using Error::Error; };
struct OrthogonalToSymmetric : Error { using Error::Error; };
struct CoplanarAxes : Error { using Error::Error; };
struct InvalidShotCount : Error { using Error::Error; };
struct OracleTooExpensive : Error { using Error::Error; };

}  // namespace spinrecon

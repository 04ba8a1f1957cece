#pragma once

#include <stdexcept>
#include <string>

namespace lew {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph construction
struct NonStochastic : Error { using Error::Error; };
struct Unreachable : Error { using Error::Error; };
struct WrongGraphKind : Error { using Error::Error; };

// Linear solves
struct SingularSystem : Error { using Error::Error; };
struct TargetNotBoundary : Error { using Error::Error; };
struct SeamUndefined : Error { using Error::Error; };

// Kernels / identities / quadrature
struct DomainError : Error { using Error::Error; };
struct Nonconvergent : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct NonIntegrable : Error { using Error::Error; };

}  // namespace lew

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "sepkit/factorization.hpp"
#include "sepkit/separability.hpp"

namespace sepkit::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 2,
  kExitNotFound = 3,
  kExitInternal = 4,
};

// Runs one command. args excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// The three-qubit example: (a|11> + b|12> + c|21> + d|22>) (x) (alpha|1> + beta|2>)
// in one-based labels, normalized, viewed under {1,2}|{3} and {1}|{2,3}.
struct FactorizationDemo {
  FactorStructure structure;
  State state;
  CoefficientMatrix split_a;  // factors 0,1 / 2
  CoefficientMatrix split_b;  // factor 0 / 1,2
  SeparabilityVerdict verdict_a;
  SeparabilityVerdict verdict_b;
};

FactorizationDemo factorization_demo(double a = 1.0, double b = 0.0, double c = 0.0,
                                     double d = 1.0, double alpha = 0.7071067811865476,
                                     double beta = 0.7071067811865476);

}  // namespace sepkit::cli

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nwidth/bodies.hpp"

namespace nwidth {

// Named verification suites behind `verify`. Each returns one report per check family;
// the suite passes iff every report passes.
//   inclusions     vertex certificates for the V_k and cube inclusions
//   interpolation  Hoelder interpolation inequality on seeded samples
//   boundaries     continuity of the case formulas at their regime boundaries
//   reductions     k = 1 / k = m reductions, ball sandwich, monotonicity in n and k
//   duality        gauge / support consistency of every body family
std::vector<CertificateReport> run_suite(const std::string& suite, long samples, std::uint64_t seed,
                                         double lambda_shift = 0.0);

const std::vector<std::string>& suite_names();

}  // namespace nwidth

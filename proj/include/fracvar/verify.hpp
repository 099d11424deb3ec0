#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracvar {

struct VerifyCase {
    std::string name;
    double tolerance = 0.0;
    double defect = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<VerifyCase> cases;
    bool pass = false;
};

/// Seeded invariant batteries runnable from the CLI and the acceptance suite:
///   ibp              discrete integration-by-parts transpose identity
///   kernel           decay of the derivative of (x-a)^{alpha-1} samples
///   limit            alpha -> 1 classical-derivative limit
///   noether-identity nodewise S = N1 - sum_j R_j xi_j
///   gradcheck        directional derivative vs residual pairing
/// Throws std::invalid_argument for an unknown suite name.
VerifyReport run_verify(const std::string& suite, std::uint64_t seed);

std::vector<std::string> verify_suites();

}  // namespace fracvar

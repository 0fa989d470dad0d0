#pragma once

// Self-check suites run by `cmfield verify`.

#include "cmfield/bignum.hpp"

#include <string>
#include <vector>

namespace cmf {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// identities, frobenius, forms, paper-example, all.
const std::vector<std::string>& verify_suites();

/// Throws InvalidArgument for an unknown suite name.
std::vector<CheckResult> run_verify_suite(const std::string& suite, Bits prec);

/// Coefficients (low to high) of the degree-16 minimal polynomial for d_K = -20, N = 12.
const std::vector<std::string>& reference_polynomial_d20_n12();

} // namespace cmf

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stk {

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string details;
};

/// Machine-readable command report. Serialization is deterministic: given
/// the same input bytes, seed and flags, two runs emit identical JSON.
struct Report {
    std::string command;
    std::string input_digest;
    std::uint64_t seed = 0;
    double tol = 0.0;
    int samples = 0;
    std::vector<CheckResult> checks;

    void add(std::string name, bool pass, double residual, std::string details = "");
    bool all_pass() const;
    std::string to_json() const;
};

/// FNV-1a (64-bit) digest of a byte string, as fixed-width hex.
std::string fnv1a_hex(const std::string& bytes);

} // namespace stk

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace twistlab {

struct VerifyLine {
    std::string suite;
    std::string check;
    std::string detail;
    bool pass = false;
};

// region, laguerre, kernel, corners, rings, routes, windowed, oscillatory, resolvent.
const std::vector<std::string>& verify_suites();

// Runs one suite, or every suite for "all". Output depends only on the suite,
// the seed and the thread count; no timings are recorded.
std::vector<VerifyLine> run_verify(const std::string& suite, std::uint64_t seed);

// One "PASS|FAIL suite.check detail" line per entry.
std::string format_verify(const std::vector<VerifyLine>& lines);

} // namespace twistlab

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smc::acceptance {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
};

struct Result {
    int id = 0;
    std::string name;
    bool passed = false;  ///< statistical / numerical condition
    double seconds = 0.0;
    double time_limit_s = 0.0;
    std::string detail;

    bool within_time() const { return seconds <= time_limit_s; }
    bool ok() const { return passed && within_time(); }
};

std::span<const Criterion> criteria();

/// Runs one criterion. Unknown ids throw InvalidArgument.
Result run(int id, std::uint64_t seed = kDefaultSeed);

/// "PASS  criterion 4 (paris-correctness) ..." style line.
std::string format_line(const Result& result);

/// Criteria exercised by `smc <command> --check`.
std::vector<int> criteria_for_command(std::string_view command);

}  // namespace smc::acceptance

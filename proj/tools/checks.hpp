#pragma once

// Randomized property suites behind `prism check`.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace prism::cli {

struct Tally {
    std::map<std::string, std::pair<long, long>> counts;  // property -> (passed, failed)

    void record(const std::string& property, bool ok);
    long passed() const;
    long failed() const;
};

const std::vector<std::string>& suite_names();
// throws std::invalid_argument for unknown suites
Tally run_suite(const std::string& suite, int trials, std::uint64_t seed);

}  // namespace prism::cli

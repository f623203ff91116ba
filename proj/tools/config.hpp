#pragma once

// Job configuration: INI-style text, canonical serialization, validation.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prism/envelope.hpp"

namespace prism::cli {

// A rejected configuration; rule is a stable identifier for scripts.
struct ConfigError : std::invalid_argument {
    std::string rule;
    ConfigError(std::string rule_, const std::string& what) : std::invalid_argument(what), rule(std::move(rule_)) {}
};

using Polynomial = std::vector<i64>;     // little-endian
using RelationSet = std::vector<Polynomial>;  // empty: c = 0

struct JobConfig {
    u64 p = 3;
    int M = 4;
    Polynomial eisenstein{-3, 1};
    std::vector<RelationSet> relations{RelationSet{{0, 1}}};
    int i_min = 0;
    int i_max = 0;
    int prec_z = 60;
    int delta_depth = 3;
    int degree = 6;
    int jmax = 0;  // 0: automatic
    int jobs = 1;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out;

    bool operator==(const JobConfig&) const = default;
};

// "z - 3", "z^2+3z", "3z^2 - 1" or a little-endian list "-3,1" / "[-3, 1]"
Polynomial parse_polynomial(const std::string& text);
// "none" or "" for c = 0, otherwise polynomials separated by ';'
RelationSet parse_relation_set(const std::string& text);
std::string format_polynomial(const Polynomial& f);  // little-endian list
std::string format_relation_set(const RelationSet& s);
// human form, e.g. "z^2 - 3"
std::string pretty_polynomial(const Polynomial& f);

JobConfig parse_config(const std::string& text);
std::string serialize_config(const JobConfig& c);
// FNV-1a 64 over the canonical serialization, hex
std::string config_hash(const JobConfig& c);

// throws ConfigError naming the violated rule
void validate(const JobConfig& c);
// validated presentations, one per relation set
std::vector<QrspPresentation> presentations(const JobConfig& c);

}  // namespace prism::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "jmbell/report.hpp"

namespace jmbell {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int unverified = 1; // check-compat: something not certified
inline constexpr int invalid = 2;
inline constexpr int trivial = 3;
inline constexpr int parse = 4;
inline constexpr int numerical = 5;
} // namespace exit_code

enum class OutputFormat { Text, Json };

struct RunConfig {
    std::string input;
    std::optional<double> q0_squared; // overrides the file; unset = default
    std::optional<double> epsilon;    // overrides the file; unset = auto
    double tol = 1e-7;                // PSD tolerance; marginal tolerance is tol / 10
    std::size_t max_iter = 200000;
    std::uint64_t seed = 1;
    std::uint64_t shots = 0; // 0 disables sampling
    std::size_t materialize_limit = kDefaultMaterializeLimit;
    std::size_t compat_limit = 1024;
    OutputFormat format = OutputFormat::Text;
};

RealizeReport build_realize_report(const StructureInput &input, const RunConfig &config,
                                   std::ostream &err);

int cmd_validate(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_decompose(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_realize(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_check_compat(const RunConfig &config, std::ostream &out, std::ostream &err);

} // namespace jmbell

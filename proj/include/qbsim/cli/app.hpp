// app.hpp: command dispatch shared by the qbsim executable and its tests

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbsim::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_validation = 2;
inline constexpr int exit_invariant = 3;

struct Request {
    // "validate", "run", a scenario name, or "reproduce"
    std::string command;
    std::string config_path;  // optional for scenario commands
    std::vector<std::string> overrides;  // "section.key=value"
    std::string out_dir;  // overrides output.dir without touching the config
    std::string figure;   // reproduce only
};

int execute(const Request& request, std::ostream& out, std::ostream& err);

} // namespace qbsim::cli

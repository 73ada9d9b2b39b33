#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace brokenline {

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

// Parses "1.2", "45deg" (degrees) into radians.
double parse_angle(const std::string& s);

// Validates a raw config (subcommand + keys), rejects unknown keys, fills defaults.
// The result is what reports embed; feeding it back reproduces them.
nlohmann::ordered_json resolve_config(const nlohmann::json& raw);

// Executes a resolved config, returns the artifact text. Throws on error.
std::string execute(const nlohmann::ordered_json& config, int threads = 1);

// Full command line front end; returns the exit code (0 ok, 2 invalid parameters, 3 non-convergence).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace brokenline

#pragma once

// Batch front end: subcommands, config overrides, JSON/CSV outputs and run manifests.

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace diskspec::cli {

enum ExitCode { kOk = 0, kValidation = 2, kNumerical = 3 };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// What a subcommand hands back to the driver.
struct CommandOutput {
  nlohmann::ordered_json results;
  Table table;
  /// Unconverged or flagged data; any entry turns the exit code into 3.
  std::vector<std::string> flags;
};

using Parameters = std::map<std::string, std::string>;

/// Formats with 17 significant digits.
std::string num(double v);
nlohmann::ordered_json complex_json(double re, double im);

/// Serialises with every floating-point value at 17 significant digits.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

/// Parses "a", "a+bi", "a-bi", "bi" or "a,b".
bool parse_complex(const std::string& text, double& re, double& im);

/// Runs one subcommand with its resolved parameters.
CommandOutput dispatch(const std::string& command, const Parameters& params);

int run(int argc, const char* const* argv);

}  // namespace diskspec::cli

#include "diskspec/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "diskspec/core.hpp"

namespace diskspec::cli {

namespace {

struct OptionSpec {
  const char* name;
  const char* fallback;
  const char* help;
};

struct CommandSpec {
  const char* name;
  const char* help;
  std::vector<OptionSpec> options;
};

const std::vector<CommandSpec>& command_table() {
  static const std::vector<CommandSpec> table = {
      {"catalog", "List catalog maps with class flags and certificates", {}},
      {"means",
       "Integral means M_tau[phi'](r_k) on r_k = 1 - 2^-k",
       {{"map", "koebe", "Map spec name[:k=v,...]"},
        {"tau", "2", "Exponent (a, a+bi or a,b)"},
        {"kmin", "1", "First dyadic level"},
        {"kmax", "16", "Last dyadic level"}}},
      {"spectrum",
       "Fitted spectrum exponent over a dyadic window",
       {{"map", "koebe", "Map spec"}, {"tau", "2", "Exponent"}, {"klo", "10", "First level"}, {"khi", "18", "Last level"}}},
      {"bergman",
       "Truncation ladder of the weighted Bergman integral",
       {{"map", "koebe", "Map spec"}, {"tau", "2", "Exponent"}, {"alpha", "4.2", "Weight exponent"}, {"kmax", "20", "Levels"}}},
      {"verify",
       "Identity checks: prop31, prop32, special, lemma33, kernels, reproducing",
       {{"identity", "prop31", "Which check"},
        {"map", "halfsquare", "Map spec"},
        {"pairs", "100", "Number of random pairs"},
        {"seed", "7", "Pair generator seed"},
        {"max-radius", "0.8", "Radius bound for random pairs"},
        {"kmin", "4", "special: first level of z = 1 - 2^-k"},
        {"kmax", "16", "special: last level"},
        {"density", "16", "lemma33: base angle count"},
        {"refinements", "4", "lemma33: angle doublings"},
        {"zeta", "0.5", "reproducing: upper limit"}}},
      {"grunsky",
       "Truncated Grunsky matrix and its norm",
       {{"map", "koebe", "Map spec"},
        {"N", "32", "Truncation order"},
        {"rho", "auto", "Sampling radius or 'auto'"},
        {"action-n", "-1", "If >= 0, also run the action crosscheck for this n"}}},
      {"mz",
       "Exponential integrability ladder of the Marcinkiewicz-Zygmund integral",
       {{"map", "halfsquare", "Map spec"},
        {"kappa", "0.3", "kappa in (0,1)"},
        {"gamma", "0.1,1,10", "Comma-separated gamma grid"},
        {"kmax", "12", "Ladder levels"},
        {"angles", "64", "Outer angles per circle"}}},
      {"jm-scan",
       "Complex-tau scan of beta_hat(2 - tau) against the local envelope",
       {{"map", "becker_lacunary", "Map spec"}, {"klo", "10", "First level"}, {"khi", "18", "Last level"}}},
      {"gamma-asymptotic",
       "Ratio of the Gamma-kernel integral to log(1/(1-|z|^2))",
       {{"theta", "0.5", "theta > -1/2"}, {"kmin", "10", "First level"}, {"kmax", "18", "Last level"}}},
      {"combinators",
       "Makarov and Binder universal-spectrum combinators",
       {{"bb", "0", "Value of B_b"}, {"t", "2", "Real parameter (Makarov)"}, {"tau", "1", "Complex parameter (Binder)"}}},
  };
  return table;
}

const CommandSpec* find_command(const std::string& name) {
  for (const auto& c : command_table())
    if (name == c.name) return &c;
  return nullptr;
}

Parameters read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  Parameters out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config: expected key=value, got '" + line + "'");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string csv_text(const Table& t, char sep, bool header_comment) {
  std::ostringstream os;
  if (!t.header.empty()) {
    if (header_comment) os << "# ";
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? std::string(1, sep) : "") << t.header[i];
    os << '\n';
  }
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? std::string(1, sep) : "") << row[i];
    os << '\n';
  }
  return os.str();
}

nlohmann::ordered_json manifest_json(const std::string& command, const Parameters& params) {
  nlohmann::ordered_json m;
  m["command"] = command;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  m["parameters"] = p;
  m["catalog_version"] = "1";
  m["quadrature"] = {{"circle_tol", 1e-10},
                     {"circle_min_nodes", 256},
                     {"circle_max_nodes", 1 << 20},
                     {"centered_tol", 1e-11},
                     {"centered_panel_order", 16},
                     {"graded_levels", 24},
                     {"graded_panel_order", 16}};
  const auto seed = params.find("seed");
  m["seed"] = seed == params.end() ? 0 : std::stoll(seed->second);
  return m;
}

void dump_value(const nlohmann::ordered_json& j, std::ostringstream& os, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(std::size_t(indent * (depth + 1)), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(std::size_t(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << '{' << nl;
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ',' << nl;
      first = false;
      os << pad << nlohmann::ordered_json(it.key()).dump() << (indent > 0 ? ": " : ":");
      dump_value(it.value(), os, indent, depth + 1);
    }
    os << nl << pad_close << '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    os << '[' << nl;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << ',' << nl;
      os << pad;
      dump_value(j[i], os, indent, depth + 1);
    }
    os << nl << pad_close << ']';
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v)) {
      os << num(v);
    } else {
      os << "null";
    }
  } else {
    os << j.dump();
  }
}

int run_command(const std::string& command, const Parameters& params, const std::filesystem::path& out_dir,
                const std::string& plot_path, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  CommandOutput output;
  try {
    output = dispatch(command, params);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    output.flags.push_back(std::string("numerical failure: ") + e.what());
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(out_dir);
  const nlohmann::ordered_json manifest = manifest_json(command, params);
  nlohmann::ordered_json doc;
  doc["manifest"] = manifest;
  doc["results"] = output.results.is_null() ? nlohmann::ordered_json::object() : output.results;
  doc["flags"] = output.flags;
  write_text(out_dir / "results.json", dump_json(doc) + "\n");
  write_text(out_dir / "results.csv", csv_text(output.table, ',', false));
  nlohmann::ordered_json full = manifest;
  full["threads"] = threads;
  full["wall_time"] = wall;
  write_text(out_dir / "manifest.json", dump_json(full) + "\n");
  if (!plot_path.empty()) write_text(plot_path, csv_text(output.table, ' ', true));

  std::cout << dump_json(doc["results"]) << '\n';
  for (const auto& f : output.flags) std::cerr << "flag: " << f << '\n';
  return output.flags.empty() ? kOk : kNumerical;
}

}  // namespace

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json complex_json(double re, double im) { return {{"re", re}, {"im", im}}; }

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
  std::ostringstream os;
  dump_value(j, os, indent, 0);
  return os.str();
}

bool parse_complex(const std::string& text, double& re, double& im) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) return false;
  auto full_number = [](const std::string& t, double& v) {
    if (t.empty()) return false;
    std::size_t used = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      return false;
    }
    return used == t.size();
  };
  if (const auto comma = s.find(','); comma != std::string::npos)
    return full_number(s.substr(0, comma), re) && full_number(s.substr(comma + 1), im);
  if (s.back() != 'i' && s.back() != 'j') {
    im = 0.0;
    return full_number(s, re);
  }
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  std::string imag_part = split == std::string::npos ? s : s.substr(split);
  if (imag_part.empty() || imag_part == "+" || imag_part == "-") imag_part += "1";
  if (!full_number(imag_part, im)) return false;
  if (split == std::string::npos) {
    re = 0.0;
    return true;
  }
  return full_number(s.substr(0, split), re);
}

int run(int argc, const char* const* argv) {
  CLI::App app{"disk_spectra: integral means spectra and transferred Cauchy transforms on the unit disk"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_dir = "out", config_path, plot_path;
  int threads = 0;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--config", config_path, "key=value overrides for subcommand defaults");
  app.add_option("--threads", threads, "Parallel width (default: DISK_SPECTRA_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--emit-plot-data", plot_path, "Write whitespace-separated columns to this path");

  std::map<std::string, Parameters> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> handles;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : command_table()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    subs[cmd.name] = sub;
    for (const auto& opt : cmd.options) {
      values[cmd.name][opt.name] = opt.fallback;
      handles[cmd.name][opt.name] =
          sub->add_option(std::string("--") + opt.name, values[cmd.name][opt.name], opt.help)->capture_default_str();
    }
  }
  std::string manifest_path;
  CLI::App* replay = app.add_subcommand("replay", "Re-run a manifest.json");
  replay->add_option("--manifest", manifest_path, "Manifest to replay")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  if (threads > 0) set_thread_count(threads);
  const int width = thread_count();

  try {
    if (replay->parsed()) {
      std::ifstream in(manifest_path);
      if (!in) throw DomainError("cannot read manifest '" + manifest_path + "'");
      const auto m = nlohmann::json::parse(in, nullptr, false);
      if (m.is_discarded() || !m.contains("command") || !m.contains("parameters"))
        throw DomainError("malformed manifest '" + manifest_path + "'");
      Parameters params;
      for (auto it = m["parameters"].begin(); it != m["parameters"].end(); ++it)
        params[it.key()] = it.value().get<std::string>();
      const std::string command = m["command"].get<std::string>();
      if (!find_command(command)) throw DomainError("manifest names unknown command '" + command + "'");
      return run_command(command, params, out_dir, plot_path, width);
    }
    std::string command;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) command = name;
    Parameters params = values[command];
    if (!config_path.empty()) {
      for (const auto& [k, v] : read_config(config_path)) {
        auto h = handles[command].find(k);
        if (h == handles[command].end()) throw DomainError("config key '" + k + "' is not an option of " + command);
        if (h->second->count() == 0) params[k] = v;
      }
    }
    return run_command(command, params, out_dir, plot_path, width);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
}

}  // namespace diskspec::cli

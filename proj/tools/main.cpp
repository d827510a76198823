// rnlw: command-line driver over the C API.
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli_common.hpp"

namespace {

using cli::json;
namespace fs = std::filesystem;

enum class Kind { Number, Integer, List, Bool, String };

struct Override {
  std::string flag;  // without dashes; also the parameter key with '-' -> '_'
  Kind kind;
  std::string help;
  std::string value;
};

std::string key_of(const std::string& flag) {
  std::string k = flag;
  for (char& c : k)
    if (c == '-') c = '_';
  return k;
}

json convert(const Override& o) {
  const std::string path = "--" + o.flag;
  try {
    switch (o.kind) {
      case Kind::Number: {
        std::size_t used = 0;
        double v = std::stod(o.value, &used);
        if (used != o.value.size()) throw std::invalid_argument("trailing text");
        return v;
      }
      case Kind::Integer: {
        std::size_t used = 0;
        long long v = std::stoll(o.value, &used);
        if (used != o.value.size()) throw std::invalid_argument("trailing text");
        return v;
      }
      case Kind::List: {
        json arr = json::array();
        std::stringstream ss(o.value);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) arr.push_back(std::stod(item));
        return arr;
      }
      case Kind::Bool:
        if (o.value == "true" || o.value == "1") return true;
        if (o.value == "false" || o.value == "0") return false;
        throw std::invalid_argument("expected true or false");
      case Kind::String:
        return o.value;
    }
  } catch (const std::exception&) {
  }
  throw cli::ValidationError(path + ": cannot parse '" + o.value + "'");
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw cli::ValidationError("--config: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw cli::ValidationError("config.command: missing (empty config)");
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw cli::ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
}

const char* status_name(int code) {
  switch (code) {
    case cli::kOk: return "ok";
    case cli::kValidation: return "validation_error";
    case cli::kVerification: return "verification_failed";
    default: return "error";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial nonlinear wave toolkit"};
  app.set_version_flag("--version", rnlw_version());
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path, out_dir, tol;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON experiment config");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized suites");
  app.add_option("--out", out_dir, "output directory");
  auto* tol_opt = app.add_option("--tol", tol, "verification tolerance");

  std::map<std::string, std::vector<Override>> overrides{
      {"simulate",
       {{"p", Kind::Number, "nonlinearity exponent", ""},
        {"sign", Kind::String, "focusing or defocusing", ""},
        {"amp", Kind::Number, "Gaussian amplitude", ""},
        {"width", Kind::Number, "Gaussian width", ""},
        {"vel", Kind::Number, "velocity amplitude", ""},
        {"r-max", Kind::Number, "outer radius", ""},
        {"n", Kind::Integer, "grid nodes", ""},
        {"cfl", Kind::Number, "Courant ratio", ""},
        {"scheme", Kind::String, "leapfrog or characteristics", ""},
        {"t-final", Kind::Number, "final time", ""},
        {"snapshot-every", Kind::Number, "snapshot spacing", ""},
        {"blowup-threshold", Kind::Number, "sup-norm blow-up level", ""},
        {"norm-cap", Kind::Number, "critical norm cap for classify", ""},
        {"morawetz-R", Kind::Number, "radius for the Morawetz report", ""},
        {"save-trajectory", Kind::Bool, "write all snapshots", ""}}},
      {"soliton",
       {{"p", Kind::Number, "nonlinearity exponent", ""},
        {"R", Kind::Number, "tail radius (0 = default)", ""},
        {"r-min", Kind::Number, "inner radius (0 = default)", ""},
        {"explicit", Kind::Bool, "explicit family instead of construction", ""},
        {"lambda", Kind::Number, "scale of the p = 5 family", ""},
        {"vr-R", Kind::List, "radii for V_R norms (comma separated)", ""}}},
      {"norms",
       {{"s", Kind::List, "Sobolev exponents (comma separated)", ""},
        {"pair", Kind::Bool, "norm of (u, u_t)", ""},
        {"amp", Kind::Number, "Gaussian amplitude", ""},
        {"width", Kind::Number, "Gaussian width", ""},
        {"vel", Kind::Number, "velocity amplitude", ""},
        {"r-max", Kind::Number, "outer radius", ""},
        {"n", Kind::Integer, "grid nodes", ""},
        {"field", Kind::String, "field CSV (r,u,ut) instead of a Gaussian", ""}}},
      {"verify",
       {{"n", Kind::Integer, "number of random cases", ""},
        {"nodes", Kind::Integer, "grid nodes (reduction)", ""},
        {"p", Kind::List, "exponents (ladder, constants)", ""},
        {"c", Kind::Number, "constant (recurrence)", ""},
        {"omega", Kind::Number, "decay exponent (recurrence)", ""}}},
      {"ladder",
       {{"p", Kind::Number, "nonlinearity exponent", ""},
        {"beta0", Kind::Number, "starting exponent", ""}}},
      {"channel",
       {{"amp", Kind::Number, "bump amplitude", ""},
        {"vel", Kind::Number, "velocity amplitude", ""},
        {"center", Kind::Number, "bump center", ""},
        {"width", Kind::Number, "bump half-width", ""},
        {"R", Kind::Number, "channel radius", ""},
        {"times", Kind::List, "check times (comma separated)", ""},
        {"r-max", Kind::Number, "outer radius", ""},
        {"n", Kind::Integer, "grid nodes", ""}}},
      {"sweep",
       {{"axis", Kind::String, "swept parameter of the base config", ""},
        {"values", Kind::List, "axis values (comma separated)", ""}}},
  };
  const std::set<std::string> takes_tol{"soliton", "verify", "channel"};

  std::map<std::string, CLI::App*> subs;
  std::string verify_target;
  for (auto& [name, list] : overrides) {
    CLI::App* sub = app.add_subcommand(name, "run " + name);
    for (auto& o : list) sub->add_option("--" + o.flag, o.value, o.help);
    if (name == "verify")
      sub->add_option("target", verify_target,
                      "channel | reduction | ladder | constants | recurrence");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kValidation;
  }

  json config;
  fs::path out;
  int code = cli::kOk;
  cli::Outcome outcome;
  const std::string started = utc_now();
  try {
    config = config_path.empty() ? json::object() : read_config(config_path);
    if (!config.is_object()) throw cli::ValidationError("config: expected a table");
    std::string chosen;
    for (auto& [name, sub] : subs)
      if (sub->parsed()) chosen = name;
    if (!chosen.empty()) {
      if (config.contains("command") && config["command"] != chosen)
        throw cli::ValidationError("config.command: '" + config["command"].dump() +
                                   "' conflicts with subcommand '" + chosen + "'");
      config["command"] = chosen;
      if (!config.contains("parameters")) config["parameters"] = json::object();
      if (!config["parameters"].is_object())
        throw cli::ValidationError("config.parameters: expected a table");
      for (const auto& o : overrides.at(chosen))
        if (subs[chosen]->count("--" + o.flag) > 0)
          config["parameters"][key_of(o.flag)] = convert(o);
      if (chosen == "verify" && !verify_target.empty())
        config["parameters"]["target"] = verify_target;
    }
    if (tol_opt->count() > 0) {
      const std::string cmd = config.value("command", "");
      if (!takes_tol.count(cmd)) throw cli::ValidationError("--tol: not used by '" + cmd + "'");
      config["parameters"]["tol"] = convert({"tol", Kind::Number, "", tol});
    }
    if (seed_opt->count() > 0) config["seed"] = seed;
    if (!out_dir.empty()) config["output_dir"] = out_dir;
    if (config.contains("output_dir") && !config["output_dir"].is_string())
      throw cli::ValidationError("config.output_dir: expected a path");
    out = config.value("output_dir", std::string("rnlw_out"));
    fs::create_directories(out);
    outcome = cli::run_command(config, out);
    code = outcome.exit;
  } catch (const cli::ValidationError& e) {
    code = cli::kValidation;
    outcome.message = e.what();
  } catch (const cli::LibraryError& e) {
    code = cli::kRuntime;
    outcome.message = e.what();
  } catch (const std::exception& e) {
    code = cli::kRuntime;
    outcome.message = e.what();
  }

  if (!outcome.message.empty()) std::cerr << "rnlw: " << outcome.message << "\n";
  if (!out.empty() && fs::is_directory(out)) {
    json rec{{"tool", "rnlw"},
             {"version", rnlw_version()},
             {"command", config.value("command", "")},
             {"config", config},
             {"config_hash", cli::config_hash(config)},
             {"seed", config.value("seed", std::uint64_t{0})},
             {"started", started},
             {"finished", utc_now()},
             {"status", status_name(code)},
             {"exit_code", code},
             {"artifacts", outcome.artifacts},
             {"message", outcome.message}};
    try {
      cli::write_text(out / "run.json", rec.dump(2));
    } catch (const std::exception& e) {
      std::cerr << "rnlw: " << e.what() << "\n";
    }
  }
  return code;
}

#include "cli_common.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

namespace cli {

void check(rnlw_status st, const char* call) {
  if (st == RNLW_OK) return;
  const std::string msg = std::string(call) + ": " + rnlw_last_error();
  if (st == RNLW_ERR_INVALID_ARGUMENT) throw ValidationError(msg);
  throw LibraryError(st, msg);
}

std::string take(char* s) {
  if (!s) return {};
  std::string out(s);
  rnlw_string_free(s);
  return out;
}

void require_field(bool ok, const std::string& path, const std::string& why) {
  if (!ok) throw ValidationError(path + ": " + why);
}

const json* Params::get(const std::string& key) const {
  if (!j_.is_object()) return nullptr;
  auto it = j_.find(key);
  return it == j_.end() ? nullptr : &*it;
}

double Params::number(const std::string& key, double def) const {
  const json* v = get(key);
  if (!v) return def;
  require_field(v->is_number(), field(key), "expected a number");
  double x = v->get<double>();
  require_field(std::isfinite(x), field(key), "must be finite");
  return x;
}

double Params::number(const std::string& key) const {
  require_field(get(key) != nullptr, field(key), "missing");
  return number(key, 0.0);
}

std::int64_t Params::integer(const std::string& key, std::int64_t def) const {
  const json* v = get(key);
  if (!v) return def;
  require_field(v->is_number_integer(), field(key), "expected an integer");
  return v->get<std::int64_t>();
}

std::string Params::string(const std::string& key, const std::string& def) const {
  const json* v = get(key);
  if (!v) return def;
  require_field(v->is_string(), field(key), "expected a string");
  return v->get<std::string>();
}

bool Params::boolean(const std::string& key, bool def) const {
  const json* v = get(key);
  if (!v) return def;
  require_field(v->is_boolean(), field(key), "expected true or false");
  return v->get<bool>();
}

std::vector<double> Params::numbers(const std::string& key,
                                    const std::vector<double>& def) const {
  const json* v = get(key);
  if (!v) return def;
  if (v->is_number()) return {number(key, 0.0)};
  require_field(v->is_array(), field(key), "expected a number or a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const json& e = (*v)[i];
    const std::string path = field(key) + "[" + std::to_string(i) + "]";
    require_field(e.is_number(), path, "expected a number");
    out.push_back(e.get<double>());
  }
  return out;
}

void Params::only(const std::vector<std::string>& keys) const {
  if (j_.is_null()) return;
  require_field(j_.is_object(), path_, "expected a table of parameters");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j_.begin(); it != j_.end(); ++it)
    require_field(allowed.count(it.key()) > 0, field(it.key()), "unknown parameter");
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw LibraryError(RNLW_ERR_IO, "cannot write " + p.string());
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
}

std::string config_hash(const json& config) {
  json keyed = config;
  if (keyed.is_object()) keyed.erase("output_dir");
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : keyed.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

unsigned thread_count() {
  if (const char* env = std::getenv("RNLW_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

Outcome run_command(const json& config, const fs::path& out) {
  require_field(config.is_object(), "config", "expected a table");
  require_field(config.contains("command"), "config.command", "missing");
  require_field(config["command"].is_string(), "config.command", "expected a string");
  const std::string cmd = config["command"].get<std::string>();
  json params = config.contains("parameters") ? config["parameters"] : json::object();
  require_field(params.is_object(), "config.parameters", "expected a table");
  std::uint64_t seed = 0;
  if (config.contains("seed")) {
    require_field(config["seed"].is_number_unsigned() || config["seed"].is_number_integer(),
                  "config.seed", "expected a nonnegative integer");
    require_field(config["seed"].get<std::int64_t>() >= 0 || config["seed"].is_number_unsigned(),
                  "config.seed", "expected a nonnegative integer");
    seed = config["seed"].get<std::uint64_t>();
  }
  Params p(params, "config.parameters");
  fs::create_directories(out);
  if (cmd == "simulate") return cmd_simulate(p, seed, out);
  if (cmd == "soliton") return cmd_soliton(p, seed, out);
  if (cmd == "norms") return cmd_norms(p, seed, out);
  if (cmd == "verify") return cmd_verify(p, seed, out);
  if (cmd == "ladder") return cmd_ladder(p, seed, out);
  if (cmd == "channel") return cmd_channel(p, seed, out);
  if (cmd == "sweep") return cmd_sweep(p, seed, out);
  throw ValidationError("config.command: unknown command '" + cmd + "'");
}

}  // namespace cli

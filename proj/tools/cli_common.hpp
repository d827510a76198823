#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnlw/rnlw.h"

namespace cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

enum Exit { kOk = 0, kValidation = 1, kVerification = 2, kRuntime = 3 };

/// Bad input, reported with the offending field path.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A failed call into the library.
struct LibraryError : std::runtime_error {
  rnlw_status status;
  LibraryError(rnlw_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(rnlw_status st, const char* call);
/// Takes ownership of a string returned by the library.
std::string take(char* s);

struct FieldDeleter {
  void operator()(rnlw_field* f) const { rnlw_field_free(f); }
};
struct GridDeleter {
  void operator()(rnlw_grid* g) const { rnlw_grid_free(g); }
};
struct TrajDeleter {
  void operator()(rnlw_trajectory* t) const { rnlw_trajectory_free(t); }
};
struct ProfileDeleter {
  void operator()(rnlw_profile* p) const { rnlw_profile_free(p); }
};
using Field = std::unique_ptr<rnlw_field, FieldDeleter>;
using Grid = std::unique_ptr<rnlw_grid, GridDeleter>;
using Traj = std::unique_ptr<rnlw_trajectory, TrajDeleter>;
using Profile = std::unique_ptr<rnlw_profile, ProfileDeleter>;

/// Parameter subtree with its path for error messages ("parameters.p").
class Params {
 public:
  Params(json j, std::string path) : j_(std::move(j)), path_(std::move(path)) {}

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  double number(const std::string& key, double def) const;
  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t def) const;
  std::string string(const std::string& key, const std::string& def) const;
  bool boolean(const std::string& key, bool def) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& def) const;
  /// Rejects keys outside the allowed set.
  void only(const std::vector<std::string>& keys) const;
  std::string field(const std::string& key) const { return path_ + "." + key; }
  const json& raw() const { return j_; }

 private:
  const json* get(const std::string& key) const;
  json j_;
  std::string path_;
};

void require_field(bool ok, const std::string& path, const std::string& why);

/// Shortest round-trip decimal form; identical inputs give identical text.
std::string fmt(double v);

struct Outcome {
  int exit = kOk;
  std::vector<std::string> artifacts;  // relative to the output directory
  /// Scalar results keyed by name, merged into sweep summaries.
  std::map<std::string, std::string> summary;
  std::string message;
};

void write_text(const fs::path& p, const std::string& text);

/// FNV-1a over the canonical dump, output_dir excluded.
std::string config_hash(const json& config);

/// Thread count from RNLW_THREADS, else the hardware concurrency.
unsigned thread_count();

/// Dispatch one command; config = {command, parameters, seed, output_dir}.
Outcome run_command(const json& config, const fs::path& out);

Outcome cmd_simulate(const Params& p, std::uint64_t seed, const fs::path& out);
Outcome cmd_soliton(const Params& p, std::uint64_t seed, const fs::path& out);
Outcome cmd_norms(const Params& p, std::uint64_t seed, const fs::path& out);
Outcome cmd_verify(const Params& p, std::uint64_t seed, const fs::path& out);
Outcome cmd_ladder(const Params& p, std::uint64_t seed, const fs::path& out);
Outcome cmd_channel(const Params& p, std::uint64_t seed, const fs::path& out);
Outcome cmd_sweep(const Params& p, std::uint64_t seed, const fs::path& out);

}  // namespace cli

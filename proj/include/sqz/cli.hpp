#pragma once

#include <map>
#include <string>
#include <vector>

#include "sqz/errors.hpp"

namespace sqz::cli {

// Exit statuses.
constexpr int kOk = 0;
constexpr int kParseError = 2;
constexpr int kScenarioError = 3;
constexpr int kNumericalError = 4;

class ParseError : public Error {
 public:
  using Error::Error;
};

struct KeySpec {
  std::string key;
  std::string type;  // int, real, bool, text, int-list, real-list
  std::string fallback;
  std::string doc;
};

// Every accepted configuration key with its type and default.
const std::vector<KeySpec>& config_reference();

class Config {
 public:
  // Flat "key = value" lines; '#' starts a comment. Unknown keys are rejected.
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool given(const std::string& key) const { return values_.count(key) > 0; }
  std::string text(const std::string& key) const;
  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

  // Effective values of every key, defaults included, in reference order.
  std::vector<std::pair<std::string, std::string>> echo() const;

 private:
  std::string raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

// Accepts decimals plus pi forms: pi, pi/4, 2*pi, 3*pi/4.
double parse_real(const std::string& s);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// 17 significant digits, '.' radix; non-finite values print as nan/inf.
std::string format_real(double v);
std::string csv_text(const Table& t);
std::string json_text(const Table& t);
std::string sha256_hex(const std::string& bytes);

struct FileEntry {
  std::string name;
  std::size_t rows = 0, columns = 0;
  std::string sha256;
};

class Writer {
 public:
  Writer(std::string dir, std::string format);
  // Writes name.csv or name.json and records it for the manifest.
  void write(const std::string& name, const Table& t);
  const std::vector<FileEntry>& files() const { return files_; }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_, format_;
  std::vector<FileEntry> files_;
};

void write_manifest(const Writer& w, const std::string& command, const Config& cfg, double wall_seconds, int threads);

const std::vector<std::string>& commands();

// Runs one command; returns the exit status. Diagnostics go to stderr.
int run(const std::string& command, const std::string& config_path, const std::string& out_dir, int threads,
        const std::string& format);

// Grid, truncation, memory and runtime checks without computation.
std::vector<std::string> validate(const Config& cfg);

}  // namespace sqz::cli

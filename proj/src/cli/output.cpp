#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <Eigen/Core>
#include <json.hpp>
#include <sstream>

#include "sqz/cli.hpp"

#ifndef SQZ_VERSION
#define SQZ_VERSION "1.0.0"
#endif

namespace sqz::cli {

namespace {
// Bumped whenever a column is added, removed or renamed.
constexpr int kSchemaVersion = 1;
}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string csv_text(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_real(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string json_text(const Table& t) {
  nlohmann::ordered_json j;
  j["columns"] = t.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::json::array();
    for (double v : row) {
      if (std::isfinite(v))
        r.push_back(v);
      else
        r.push_back(nullptr);
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump() + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

Writer::Writer(std::string dir, std::string format) : dir_(std::move(dir)), format_(std::move(format)) {
  if (format_ != "csv" && format_ != "json") throw ParseError("format must be csv or json, got '" + format_ + "'");
  std::filesystem::create_directories(dir_);
}

void Writer::write(const std::string& name, const Table& t) {
  const std::string body = format_ == "csv" ? csv_text(t) : json_text(t);
  const std::string file = name + "." + format_;
  std::ofstream out(std::filesystem::path(dir_) / file, std::ios::binary);
  if (!out) throw Error("cannot write " + file);
  out << body;
  files_.push_back({file, t.rows.size(), t.columns.size(), sha256_hex(body)});
}

void write_manifest(const Writer& w, const std::string& command, const Config& cfg, double wall_seconds, int threads) {
  nlohmann::ordered_json j;
  j["command"] = command;
  nlohmann::ordered_json conf;
  for (const auto& [k, v] : cfg.echo()) conf[k] = v;
  j["config"] = conf;
  j["versions"] = {{"sqz", SQZ_VERSION},
                   {"schema", kSchemaVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  j["threads"] = threads;
  j["wall_seconds"] = wall_seconds;
  auto files = nlohmann::json::array();
  for (const auto& f : w.files())
    files.push_back({{"name", f.name}, {"rows", f.rows}, {"columns", f.columns}, {"sha256", f.sha256}});
  j["files"] = files;
  std::ofstream out(std::filesystem::path(w.dir()) / "manifest.json");
  if (!out) throw Error("cannot write manifest.json");
  out << j.dump(2) << "\n";
}

}  // namespace sqz::cli

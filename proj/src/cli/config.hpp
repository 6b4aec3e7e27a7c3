#pragma once

// JSON experiment descriptors: a strict schema reader (unknown keys are
// errors, reported with their path) and parsers for the shared pieces.

#include "mshimura/curve.hpp"
#include "mshimura/heisenberg.hpp"
#include "mshimura/lattice.hpp"

#include <json.hpp>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

namespace mshimura::cli {

using Json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Reads the members of one JSON object; finish() rejects keys never asked for.
class Reader {
 public:
  Reader(const Json& j, std::string path);

  bool has(const std::string& key);
  /// Throws ConfigError if missing.
  const Json& at(const std::string& key);
  std::string path(const std::string& key) const { return path_ + "." + key; }
  const std::string& path() const { return path_; }
  void finish() const;

  long long integer(const std::string& key, long long lo, long long hi);
  long long integer(const std::string& key, long long lo, long long hi, long long fallback);
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  bool boolean(const std::string& key, bool fallback);

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Json load_config(const std::string& file);

Rat parse_rational(const Json& j, const std::string& path);
GaussRat parse_gauss(const Json& j, const std::string& path);
RatVec parse_rat_vector(const Json& j, const std::string& path);
RatMat parse_rat_matrix(const Json& j, const std::string& path);
IntVec parse_int_vector(const Json& j, const std::string& path);
ParamCurve parse_curve(const Json& j, const std::string& path);
DatumPtr parse_datum(const Json& j, const std::string& path);
const Json& array(const Json& j, const std::string& path);

/// FNV-1a over the compact dump of the config.
std::uint64_t config_hash(const Json& j);

Json to_json(const Rat& x);
Json to_json(const RatVec& v);
Json to_json(const RatMat& m);
Json to_json(const Lattice& l);

}  // namespace mshimura::cli

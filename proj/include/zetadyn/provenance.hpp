#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "zetadyn/mp.hpp"

namespace zetadyn::io {

struct MissingInput : Error {
  explicit MissingInput(const std::string& path) : Error("missing input: " + path) {}
};
struct StaleInput : Error {
  explicit StaleInput(const std::string& path)
      : Error("stale input (config hash mismatch): " + path) {}
};

inline constexpr const char* kToolVersion = "zetadyn 0.1.0";

/// FNV-1a, the stable content hash used across manifests and file headers.
std::uint64_t fnv1a(std::string_view data);
std::string hash_hex(std::uint64_t h);
std::uint64_t file_hash(const std::string& path);

/// Per-run provenance: the canonical config string, its hash, and the hashes
/// of every input and output a stage touched. Serialized as JSON next to the
/// outputs so that expensive runs are auditable and cacheable.
class Manifest {
 public:
  Manifest() = default;
  Manifest(std::string config_canonical);

  const std::string& config_hash() const { return config_hash_; }
  void record_input(const std::string& path);
  void record_output(const std::string& path);

  /// Throws MissingInput / StaleInput unless the file exists and matches the
  /// hash recorded by the producing stage.
  void require_input(const std::string& path, const Manifest& producer) const;

  void save(const std::string& path) const;
  static Manifest load(const std::string& path);

  const std::map<std::string, std::string>& outputs() const { return outputs_; }

 private:
  std::string config_;
  std::string config_hash_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

}  // namespace zetadyn::io

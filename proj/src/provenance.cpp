#include "zetadyn/provenance.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace zetadyn::io {

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[h & 0xF];
    h >>= 4;
  }
  return s;
}

std::uint64_t file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a(ss.str());
}

Manifest::Manifest(std::string config_canonical)
    : config_(std::move(config_canonical)), config_hash_(hash_hex(fnv1a(config_))) {}

namespace {
// manifests key files by name so that identical runs in different
// directories serialize identically
std::string key_of(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}
}  // namespace

void Manifest::record_input(const std::string& path) {
  inputs_[key_of(path)] = hash_hex(file_hash(path));
}
void Manifest::record_output(const std::string& path) {
  outputs_[key_of(path)] = hash_hex(file_hash(path));
}

void Manifest::require_input(const std::string& path, const Manifest& producer) const {
  if (!std::filesystem::exists(path)) throw MissingInput(path);
  auto it = producer.outputs_.find(key_of(path));
  if (it == producer.outputs_.end()) throw MissingInput(path + " (not a recorded output)");
  if (config_hash_ != producer.config_hash_) throw StaleInput(path);
  if (hash_hex(file_hash(path)) != it->second) throw StaleInput(path);
}

void Manifest::save(const std::string& path) const {
  nlohmann::ordered_json j;
  j["tool"] = kToolVersion;
  j["config"] = config_;
  j["config_hash"] = config_hash_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  std::ofstream out(path);
  if (!out) throw Error("Manifest::save: cannot open " + path);
  out << j.dump(2) << "\n";
}

Manifest Manifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInput(path);
  nlohmann::json j;
  in >> j;
  Manifest m;
  m.config_ = j.value("config", "");
  m.config_hash_ = j.value("config_hash", "");
  m.inputs_ = j.value("inputs", std::map<std::string, std::string>{});
  m.outputs_ = j.value("outputs", std::map<std::string, std::string>{});
  return m;
}

}  // namespace zetadyn::io

#include "ironq/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ironq/version.hpp"

namespace ironq {

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string file_digest_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("digest: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(content.data(), content.size())));
  return out;
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write: cannot open '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write: failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("write: rename to '" + path + "' failed");
  }
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["argv"] = argv;
  j["config"] = config;
  j["seed"] = seed;
  j["version"] = version.empty() ? kVersion : version;
  nlohmann::json digests = nlohmann::json::array();
  for (const auto& [path, digest] : input_digests) {
    digests.push_back({{"path", path}, {"fnv1a64", digest}});
  }
  j["input_digests"] = digests;
  j["created_at"] = created_at;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.value("command", std::string());
  if (j.contains("argv")) m.argv = j.at("argv").get<std::vector<std::string>>();
  if (j.contains("config")) m.config = j.at("config");
  m.seed = j.value("seed", std::uint64_t{0});
  m.version = j.value("version", std::string());
  if (j.contains("input_digests")) {
    for (const auto& d : j.at("input_digests")) {
      m.input_digests.emplace_back(d.value("path", ""), d.value("fnv1a64", ""));
    }
  }
  m.created_at = j.value("created_at", std::string());
  return m;
}

}  // namespace ironq

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace ironq {

// Everything needed to reproduce a CLI run. Written next to every command's
// outputs; the outputs themselves carry no timestamps, so a rerun from the
// manifest's argv is byte-identical.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::pair<std::string, std::string>> input_digests;  // path, fnv1a64
  std::string created_at;  // ISO-8601 UTC

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string file_digest_hex(const std::string& path);
std::string utc_timestamp_now();

// Write via a temp file in the same directory plus rename.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace ironq

#ifndef EPIGRAPH_MANIFEST_HPP
#define EPIGRAPH_MANIFEST_HPP

// Dataset manifest: image paths plus closed-vocabulary material and
// background labels.

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "epigraph/dataset.hpp"
#include "epigraph/errors.hpp"

namespace epigraph {

struct ManifestEntry {
  std::filesystem::path path;  // resolved against the manifest's directory
  std::string image_id;
  Material material = Material::Stone;
  Background background = Background::Regular;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

/// Parses and validates a manifest JSON file. Duplicate ids, labels outside
/// the closed vocabularies, and unresolvable image paths are rejected with a
/// ManifestParseError naming the offending entry.
inline DatasetManifest parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestParseError("cannot open manifest: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ManifestParseError(std::string("manifest is not valid JSON: ") +
                             e.what());
  }

  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    throw ManifestParseError("manifest must be an object with an 'entries' array");

  const std::filesystem::path base = path.parent_path();
  DatasetManifest manifest;
  std::set<std::string> seen_ids;
  std::size_t index = 0;
  for (const auto& e : j["entries"]) {
    const std::string where = "entries[" + std::to_string(index++) + "]";
    if (!e.is_object())
      throw ManifestParseError(where + ": entry must be an object");
    for (const char* field : {"path", "image_id", "material", "background"})
      if (!e.contains(field) || !e[field].is_string())
        throw ManifestParseError(where + ": missing string field '" +
                                 field + "'");

    ManifestEntry entry;
    entry.image_id = e["image_id"].get<std::string>();
    if (entry.image_id.empty())
      throw ManifestParseError(where + ": image_id must be non-empty");
    if (!seen_ids.insert(entry.image_id).second)
      throw ManifestParseError(where + ": duplicate image_id '" +
                               entry.image_id + "'");
    try {
      entry.material = parse_material(e["material"].get<std::string>());
      entry.background = parse_background(e["background"].get<std::string>());
    } catch (const std::invalid_argument& ex) {
      throw ManifestParseError(where + ": " + ex.what());
    }

    std::filesystem::path p = e["path"].get<std::string>();
    if (p.is_relative()) p = base / p;
    std::error_code ec;
    if (!std::filesystem::exists(p, ec) || ec)
      throw ManifestParseError(where + ": image path not resolvable: " +
                               p.string());
    entry.path = p;
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

/// Writes entries with paths relative to the manifest location when possible.
inline void write_manifest(const DatasetManifest& manifest,
                           const std::filesystem::path& path) {
  const std::filesystem::path base = path.parent_path();
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : manifest.entries) {
    std::filesystem::path rel = e.path.lexically_proximate(base);
    entries.push_back({{"path", rel.generic_string()},
                       {"image_id", e.image_id},
                       {"material", to_string(e.material)},
                       {"background", to_string(e.background)}});
  }
  nlohmann::json j{{"entries", entries}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed on " + path.string());
}

}  // namespace epigraph

#endif  // EPIGRAPH_MANIFEST_HPP

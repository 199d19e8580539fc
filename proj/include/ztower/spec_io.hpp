#pragma once

// JSON tower-spec files: parsing with field-path errors and canonical output.

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "ztower/planar.hpp"
#include "ztower/tower.hpp"

namespace ztower {

struct SpecFile {
  TowerSpec spec;
  std::optional<RotationSystem> rotation;
  std::optional<std::size_t> outer_face;

  bool has_embedding() const { return rotation.has_value(); }
  /// Throws SpecError("embedding", ...) when no rotation system is present.
  Embedding embedding() const;
};

/// Edge {id, from, to, voltage} becomes darts 2k (named id) and 2k+1 (named
/// id~). Throws SpecError carrying the offending field path.
SpecFile parse_spec(const nlohmann::json& j);
SpecFile parse_spec_text(const std::string& text);
SpecFile load_spec(const std::string& path);

/// Sorted keys, voltages written out in full, unramified vertices omitted from
/// inertia.
nlohmann::json spec_to_json(const SpecFile& s);
std::string canonical_dump(const nlohmann::json& j);

/// Edge list of a graph as [{from, id, to}], one record per even dart.
nlohmann::json graph_to_json(const Graph& g);

}  // namespace ztower

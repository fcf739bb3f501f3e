#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sgce/ged.hpp"

namespace sgce {

nlohmann::json edit_path_to_json(const EditPath& path);
EditPath edit_path_from_json(const nlohmann::json& j);

// Edit graph in Graphviz DOT: inserted items green, deleted red, substituted
// blue, unchanged black.
std::string edit_path_to_dot(const EditPath& path);

// Header row: "id" then instance ids; one row per graph; absent cells empty.
// Values use round-trip precision.
std::string ged_matrix_to_csv(const GedMatrix& m);
GedMatrix ged_matrix_from_csv(std::string_view text);

// Binary cache keyed by a content hash. `read` returns nullopt when the file is
// missing or carries a different key.
void write_ged_cache(const std::filesystem::path& file, const GedMatrix& m, std::uint64_t key);
std::optional<GedMatrix> read_ged_cache(const std::filesystem::path& file, std::uint64_t key);

}  // namespace sgce

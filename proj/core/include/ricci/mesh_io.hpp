#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ricci/mesh.hpp"

namespace ricci {

enum class MeshFormat { OFF, OBJ };

/// Reads an OFF or OBJ surface. Edge reference lengths are the Euclidean
/// distances between vertex coordinates; the coordinates are not retained.
/// Polygons with more than three sides are fan-triangulated.
///
/// OFF files written by `write_off` carry `#@` annotation lines with the exact
/// intrinsic gluing and lengths; when present they take precedence over the
/// coordinates, so meshes without an embedding survive a round trip.
IntrinsicMesh load_mesh(std::istream& source, MeshFormat format);
IntrinsicMesh load_mesh_file(const std::string& path);

/// Picks the format from the file extension (.off / .obj, case-insensitive).
MeshFormat format_from_path(std::string_view path);

/// Writes an OFF file with placeholder coordinates and intrinsic annotations.
/// Each entry of `header_comments` becomes one `# ` comment line after the
/// OFF keyword.
void write_off(const IntrinsicMesh& mesh, std::ostream& out,
               const std::vector<std::string>& header_comments = {});

}  // namespace ricci

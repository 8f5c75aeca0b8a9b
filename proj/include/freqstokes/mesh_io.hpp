#pragma once

#include <string>

#include "freqstokes/mesh.hpp"

namespace freqstokes {

/// Neutral mesh format: JSON with fields `dimension` (2|3), `nodes` (array of
/// [x,y(,z)]), `elements` (array of 0-based index arrays), `patches` (object
/// mapping name -> array of facet index arrays). write/read round-trips the
/// mesh bit-exactly in node order, element order and patch content.
Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);

Mesh mesh_from_json_string(const std::string& text, const std::string& context = "<string>");
std::string mesh_to_json_string(const Mesh& mesh);

} // namespace freqstokes

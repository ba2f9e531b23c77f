#pragma once

#include "wlseno/mesh.hpp"

#include <string>

namespace wlseno {

// ASCII mesh format:
//   dim nv ne
//   nv lines of dim coordinates
//   ne lines of dim+1 vertex ids (1-based)
//   optional lines: facet <elem> <local> <tag>   (1-based elem and local facet)
// '#' starts a comment; blank lines are skipped.
struct MeshFile {
    int dim = 0;
    std::vector<Point> xyz;
    std::vector<int> conn; // 0-based
    std::vector<std::pair<int, int>> boundary_tags;
};

MeshFile read_mesh_file(const std::string& path);

// Parses and builds in one step; periodic pairs are resolved against the
// file's facet tags.
AhfMesh load_mesh(const std::string& path, const std::vector<PeriodicPair>& periodic = {});

void write_mesh_file(const std::string& path, const AhfMesh& mesh);

} // namespace wlseno

#include "wlseno/mesh_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wlseno {

namespace {

// next content line with comments stripped; false at EOF
bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c)))
                return true;
    }
    return false;
}

} // namespace

MeshFile read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open mesh file: " + path);

    MeshFile mf;
    std::string line;
    if (!next_line(in, line))
        throw std::runtime_error("mesh file empty: " + path);
    std::istringstream hdr(line);
    int nv = 0, ne = 0;
    if (!(hdr >> mf.dim >> nv >> ne) || mf.dim < 1 || mf.dim > 3 || nv <= 0 || ne <= 0)
        throw std::runtime_error("bad mesh header: " + path);

    mf.xyz.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        if (!next_line(in, line))
            throw std::runtime_error("mesh file truncated in vertices: " + path);
        std::istringstream ls(line);
        Point p{};
        for (int d = 0; d < mf.dim; ++d)
            if (!(ls >> p[d]))
                throw std::runtime_error("bad vertex line: " + line);
        mf.xyz.push_back(p);
    }

    const int nvpe = mf.dim + 1;
    mf.conn.reserve(static_cast<size_t>(ne) * nvpe);
    for (int e = 0; e < ne; ++e) {
        if (!next_line(in, line))
            throw std::runtime_error("mesh file truncated in elements: " + path);
        std::istringstream ls(line);
        for (int k = 0; k < nvpe; ++k) {
            int id = 0;
            if (!(ls >> id) || id < 1 || id > nv)
                throw std::runtime_error("bad element line: " + line);
            mf.conn.push_back(id - 1);
        }
    }

    while (next_line(in, line)) {
        std::istringstream ls(line);
        std::string kw;
        int elem = 0, local = 0, tag = 0;
        if (!(ls >> kw >> elem >> local >> tag) || kw != "facet" || elem < 1 || elem > ne ||
            local < 1 || local > nvpe)
            throw std::runtime_error("bad facet tag line: " + line);
        mf.boundary_tags.emplace_back((elem - 1) * nvpe + (local - 1), tag);
    }
    return mf;
}

AhfMesh load_mesh(const std::string& path, const std::vector<PeriodicPair>& periodic) {
    MeshFile mf = read_mesh_file(path);
    return build_mesh(mf.dim, std::move(mf.xyz), std::move(mf.conn), mf.boundary_tags, periodic);
}

void write_mesh_file(const std::string& path, const AhfMesh& mesh) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write mesh file: " + path);
    out.precision(17);
    out << mesh.dim << ' ' << mesh.n_verts() << ' ' << mesh.n_elems() << '\n';
    for (const auto& p : mesh.xyz) {
        for (int d = 0; d < mesh.dim; ++d)
            out << (d ? " " : "") << p[d];
        out << '\n';
    }
    const int nvpe = mesh.nv_per_elem();
    for (int e = 0; e < mesh.n_elems(); ++e) {
        for (int k = 0; k < nvpe; ++k)
            out << (k ? " " : "") << mesh.elem(e)[k] + 1;
        out << '\n';
    }
    for (int h = 0; h < mesh.n_half_facets(); ++h)
        if (mesh.facet_tag[h] != tag_none)
            out << "facet " << mesh.hf_elem(h) + 1 << ' ' << mesh.hf_local(h) + 1 << ' '
                << mesh.facet_tag[h] << '\n';
}

} // namespace wlseno

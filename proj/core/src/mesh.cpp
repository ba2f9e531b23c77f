#include "wlseno/mesh.hpp"
#include "wlseno/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace wlseno {

namespace {

double det3(const Point& a, const Point& b, const Point& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

Point sub(const Point& a, const Point& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

double signed_measure(int dim, const Point* v[4]) {
    if (dim == 1)
        return (*v[1])[0] - (*v[0])[0];
    if (dim == 2) {
        Point e1 = sub(*v[1], *v[0]), e2 = sub(*v[2], *v[0]);
        return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]);
    }
    Point e1 = sub(*v[1], *v[0]), e2 = sub(*v[2], *v[0]), e3 = sub(*v[3], *v[0]);
    return det3(e1, e2, e3) / 6.0;
}

// key quantizing a point for periodic facet matching
struct QKey {
    std::int64_t a, b, c;
    bool operator==(const QKey& o) const { return a == o.a && b == o.b && c == o.c; }
};
struct QKeyHash {
    size_t operator()(const QKey& k) const {
        size_t h = std::hash<std::int64_t>()(k.a);
        h ^= std::hash<std::int64_t>()(k.b) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= std::hash<std::int64_t>()(k.c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

QKey quantize(const Point& p, double scale) {
    auto q = [&](double x) { return static_cast<std::int64_t>(std::llround(x / scale)); };
    return {q(p[0]), q(p[1]), q(p[2])};
}

// situated-cell dedup key using exact shift bit patterns
struct SitKey {
    int cell;
    std::uint64_t s0, s1, s2;
    bool operator==(const SitKey& o) const {
        return cell == o.cell && s0 == o.s0 && s1 == o.s1 && s2 == o.s2;
    }
};
struct SitKeyHash {
    size_t operator()(const SitKey& k) const {
        size_t h = std::hash<int>()(k.cell);
        h ^= std::hash<std::uint64_t>()(k.s0) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= std::hash<std::uint64_t>()(k.s1) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= std::hash<std::uint64_t>()(k.s2) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

std::uint64_t dbits(double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof(u));
    return u;
}

SitKey sit_key(const SituatedCell& sc) {
    return {sc.cell, dbits(sc.shift[0]), dbits(sc.shift[1]), dbits(sc.shift[2])};
}

Point add(const Point& a, const Point& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

} // namespace

void AhfMesh::facet_verts(int e, int f, int out[3]) const {
    const int* ev = elem(e);
    int k = 0;
    for (int i = 0; i <= dim; ++i)
        if (i != f)
            out[k++] = ev[i];
}

double AhfMesh::facet_measure(int e, int f) const {
    if (dim == 1)
        return 1.0;
    int fv[3];
    facet_verts(e, f, fv);
    if (dim == 2) {
        Point d = sub(xyz[fv[1]], xyz[fv[0]]);
        return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    }
    Point e1 = sub(xyz[fv[1]], xyz[fv[0]]), e2 = sub(xyz[fv[2]], xyz[fv[0]]);
    Point cr = {e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                e1[0] * e2[1] - e1[1] * e2[0]};
    return 0.5 * std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
}

Point AhfMesh::facet_centroid(int e, int f) const {
    int fv[3];
    facet_verts(e, f, fv);
    Point c{};
    for (int i = 0; i < dim; ++i)
        c = add(c, xyz[fv[i]]);
    for (double& x : c)
        x /= dim;
    return c;
}

Point AhfMesh::facet_normal(int e, int f) const {
    Point n{};
    if (dim == 1) {
        n = {1.0, 0.0, 0.0};
    } else if (dim == 2) {
        int fv[3];
        facet_verts(e, f, fv);
        Point d = sub(xyz[fv[1]], xyz[fv[0]]);
        double len = std::sqrt(d[0] * d[0] + d[1] * d[1]);
        n = {d[1] / len, -d[0] / len, 0.0};
    } else {
        int fv[3];
        facet_verts(e, f, fv);
        Point e1 = sub(xyz[fv[1]], xyz[fv[0]]), e2 = sub(xyz[fv[2]], xyz[fv[0]]);
        Point cr = {e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                    e1[0] * e2[1] - e1[1] * e2[0]};
        double len = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
        n = {cr[0] / len, cr[1] / len, cr[2] / len};
    }
    // orient outward: positive component along centroid -> facet direction
    Point d = sub(facet_centroid(e, f), centroid[e]);
    if (n[0] * d[0] + n[1] * d[1] + n[2] * d[2] < 0.0)
        for (double& x : n)
            x = -x;
    return n;
}

double AhfMesh::inradius(int e) const {
    double surf = 0.0;
    for (int f = 0; f <= dim; ++f)
        surf += facet_measure(e, f);
    return dim * measure[e] / surf;
}

double AhfMesh::max_edge_length(int e) const {
    const int* ev = elem(e);
    double m = 0.0;
    for (int i = 0; i <= dim; ++i)
        for (int j = i + 1; j <= dim; ++j) {
            Point d = sub(xyz[ev[i]], xyz[ev[j]]);
            m = std::max(m, std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]));
        }
    return m;
}

double AhfMesh::mean_edge_length(int e) const {
    const int* ev = elem(e);
    double s = 0.0;
    int cnt = 0;
    for (int i = 0; i <= dim; ++i)
        for (int j = i + 1; j <= dim; ++j) {
            Point d = sub(xyz[ev[i]], xyz[ev[j]]);
            s += std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            ++cnt;
        }
    return s / cnt;
}

AhfMesh build_mesh(int dim, std::vector<Point> xyz, std::vector<int> conn,
                   const std::vector<std::pair<int, int>>& boundary_tags,
                   const std::vector<PeriodicPair>& periodic) {
    if (dim < 1 || dim > 3)
        throw std::runtime_error("build_mesh: dim must be 1..3");
    const int nvpe = dim + 1;
    if (conn.size() % nvpe != 0)
        throw std::runtime_error("build_mesh: connectivity size not a multiple of dim+1");
    const int ne = static_cast<int>(conn.size()) / nvpe;
    const int nv = static_cast<int>(xyz.size());

    AhfMesh m;
    m.dim = dim;
    m.xyz = std::move(xyz);
    m.conn = std::move(conn);
    for (int i : m.conn)
        if (i < 0 || i >= nv)
            throw std::runtime_error("build_mesh: vertex id out of range");

    m.measure.resize(ne);
    m.centroid.resize(ne);
    for (int e = 0; e < ne; ++e) {
        int* ev = m.conn.data() + e * nvpe;
        const Point* v[4];
        for (int i = 0; i < nvpe; ++i)
            v[i] = &m.xyz[ev[i]];
        double s = signed_measure(dim, v);
        if (s < 0.0) {
            std::swap(ev[0], ev[1]);
            std::swap(v[0], v[1]);
            s = -s;
        }
        if (s == 0.0)
            throw std::runtime_error("build_mesh: degenerate element " + std::to_string(e));
        m.measure[e] = s;
        Point c{};
        for (int i = 0; i < nvpe; ++i)
            c = add(c, *v[i]);
        for (double& x : c)
            x /= nvpe;
        m.centroid[e] = c;
    }

    const int nhf = ne * nvpe;
    m.sibling.assign(nhf, -1);
    m.facet_tag.assign(nhf, tag_none);
    m.facet_shift.assign(nhf, Point{});
    m.facet_vperm.assign(nhf, {std::int8_t(-1), std::int8_t(-1), std::int8_t(-1)});

    // sibling pairing via sorted-vertex facet hashing
    {
        struct FKey {
            int a, b, c;
            bool operator==(const FKey& o) const { return a == o.a && b == o.b && c == o.c; }
        };
        struct FKeyHash {
            size_t operator()(const FKey& k) const {
                size_t h = std::hash<int>()(k.a);
                h ^= std::hash<int>()(k.b) + 0x9e3779b9u + (h << 6) + (h >> 2);
                h ^= std::hash<int>()(k.c) + 0x9e3779b9u + (h << 6) + (h >> 2);
                return h;
            }
        };
        std::unordered_map<FKey, int, FKeyHash> open;
        open.reserve(nhf);
        for (int e = 0; e < ne; ++e)
            for (int f = 0; f < nvpe; ++f) {
                int fv[3] = {-1, -1, -1};
                m.facet_verts(e, f, fv);
                int s[3] = {fv[0], fv[1], fv[2]};
                std::sort(s, s + 3);
                FKey key{s[0], s[1], s[2]};
                int h = m.hf_id(e, f);
                auto it = open.find(key);
                if (it == open.end()) {
                    open.emplace(key, h);
                } else if (it->second == -2) {
                    throw std::runtime_error("build_mesh: non-manifold facet");
                } else {
                    m.sibling[h] = it->second;
                    m.sibling[it->second] = h;
                    it->second = -2;
                }
            }
    }

    m.anchor.assign(nv, -1);
    for (int e = 0; e < ne; ++e)
        for (int lv = 0; lv < nvpe; ++lv) {
            int v = m.elem(e)[lv];
            if (m.anchor[v] < 0)
                m.anchor[v] = m.hf_id(e, (lv + 1) % nvpe); // a facet containing v
        }

    for (auto [h, tag] : boundary_tags) {
        if (h < 0 || h >= nhf)
            throw std::runtime_error("build_mesh: tag on invalid half-facet");
        m.facet_tag[h] = tag;
    }

    // periodic linking: match lo-tagged boundary facets to hi-tagged ones under the shift
    double scale = 1e-30;
    for (const auto& p : m.xyz)
        for (double x : p)
            scale = std::max(scale, std::abs(x));
    const double qtol = scale * 1e-9;

    for (const auto& pp : periodic) {
        std::unordered_map<QKey, int, QKeyHash> hi;
        for (int h = 0; h < nhf; ++h)
            if (m.sibling[h] < 0 && m.facet_tag[h] == pp.tag_hi)
                hi.emplace(quantize(m.facet_centroid(m.hf_elem(h), m.hf_local(h)), qtol), h);
        for (int h = 0; h < nhf; ++h) {
            if (!(m.sibling[h] < 0 && m.facet_tag[h] == pp.tag_lo))
                continue;
            Point c = add(m.facet_centroid(m.hf_elem(h), m.hf_local(h)), pp.shift);
            QKey k0 = quantize(c, qtol);
            auto it = hi.find(k0);
            // a coordinate sitting on a quantization-bucket edge may round
            // either way; probe the adjacent buckets before giving up
            for (std::int64_t da = -1; da <= 1 && it == hi.end(); ++da)
                for (std::int64_t db = -1; db <= 1 && it == hi.end(); ++db)
                    for (std::int64_t dc = -1; dc <= 1 && it == hi.end(); ++dc)
                        it = hi.find(QKey{k0.a + da, k0.b + db, k0.c + dc});
            if (it == hi.end())
                throw std::runtime_error("build_mesh: unmatched periodic facet");
            int h2 = it->second;
            hi.erase(it);
            m.sibling[h] = h2;
            m.sibling[h2] = h;
            m.facet_shift[h] = {-pp.shift[0], -pp.shift[1], -pp.shift[2]};
            m.facet_shift[h2] = pp.shift;
            // facet-vertex correspondence by shifted coordinates
            int fa[3] = {-1, -1, -1}, fb[3] = {-1, -1, -1};
            m.facet_verts(m.hf_elem(h), m.hf_local(h), fa);
            m.facet_verts(m.hf_elem(h2), m.hf_local(h2), fb);
            for (int i = 0; i < dim; ++i) {
                Point a = add(m.xyz[fa[i]], pp.shift);
                int found = -1;
                for (int j = 0; j < dim; ++j) {
                    Point d = sub(a, m.xyz[fb[j]]);
                    if (std::abs(d[0]) <= qtol && std::abs(d[1]) <= qtol && std::abs(d[2]) <= qtol)
                        found = j;
                }
                if (found < 0)
                    throw std::runtime_error("build_mesh: periodic facet vertices do not align");
                m.facet_vperm[h][i] = static_cast<std::int8_t>(found);
                m.facet_vperm[h2][found] = static_cast<std::int8_t>(i);
            }
        }
        // verify no hi facet was left unmatched
        for (int h = 0; h < nhf; ++h)
            if (m.sibling[h] < 0 && m.facet_tag[h] == pp.tag_hi)
                throw std::runtime_error("build_mesh: unmatched periodic facet (hi side)");
    }

    return m;
}

namespace {

// local vertex index of the vertex tracked as facet-vertex position i on hf h,
// after crossing to the sibling side
int cross_vertex(const AhfMesh& m, int h, int i) {
    int h2 = m.sibling[h];
    int e2 = m.hf_elem(h2), f2 = m.hf_local(h2);
    int fv2[3] = {-1, -1, -1};
    m.facet_verts(e2, f2, fv2);
    int j;
    if (m.facet_vperm[h][0] >= 0) {
        j = m.facet_vperm[h][i];
    } else {
        // plain interior facet: match by global vertex id
        int e = m.hf_elem(h), f = m.hf_local(h);
        int fv[3] = {-1, -1, -1};
        m.facet_verts(e, f, fv);
        int vid = fv[i];
        j = -1;
        for (int t = 0; t < m.dim; ++t)
            if (fv2[t] == vid)
                j = t;
        if (j < 0)
            throw std::runtime_error("ring query: sibling facet lost a vertex");
    }
    int vid2 = fv2[j];
    const int* ev2 = m.elem(e2);
    for (int lv = 0; lv <= m.dim; ++lv)
        if (ev2[lv] == vid2)
            return lv;
    throw std::runtime_error("ring query: vertex not in sibling element");
}

// position of local vertex lv within facet f's ascending-local-order vertex list
int pos_in_facet(int dim, int f, int lv) {
    int k = 0;
    for (int i = 0; i <= dim; ++i) {
        if (i == f)
            continue;
        if (i == lv)
            return k;
        ++k;
    }
    return -1;
}

constexpr int star_cap = 512;

// cells sharing the vertex held at local index lv of situated cell sc
void vertex_star(const AhfMesh& m, SituatedCell sc, int lv, std::vector<SituatedCell>& out) {
    struct Node {
        SituatedCell sc;
        int lv;
    };
    std::unordered_set<SitKey, SitKeyHash> seen;
    std::vector<Node> stack{{sc, lv}};
    seen.insert(sit_key(sc));
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        out.push_back(nd.sc);
        for (int f = 0; f <= m.dim; ++f) {
            if (f == nd.lv)
                continue; // facet must contain the vertex
            int h = m.hf_id(nd.sc.cell, f);
            int h2 = m.sibling[h];
            if (h2 < 0)
                continue;
            SituatedCell nb{m.hf_elem(h2), add(nd.sc.shift, m.facet_shift[h])};
            if (!seen.insert(sit_key(nb)).second)
                continue;
            int lv2 = cross_vertex(m, h, pos_in_facet(m.dim, f, nd.lv));
            if (seen.size() > star_cap)
                throw std::runtime_error("ring query: vertex star does not close (degenerate periodic mesh)");
            stack.push_back({nb, lv2});
        }
    }
}

// 3-D: cells sharing the edge held at local indices (la, lb) of situated cell sc
void edge_star(const AhfMesh& m, SituatedCell sc, int la, int lb, std::vector<SituatedCell>& out) {
    struct Node {
        SituatedCell sc;
        int la, lb;
    };
    std::unordered_set<SitKey, SitKeyHash> seen;
    std::vector<Node> stack{{sc, la, lb}};
    seen.insert(sit_key(sc));
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        out.push_back(nd.sc);
        for (int f = 0; f <= m.dim; ++f) {
            if (f == nd.la || f == nd.lb)
                continue; // facet must contain both edge endpoints
            int h = m.hf_id(nd.sc.cell, f);
            int h2 = m.sibling[h];
            if (h2 < 0)
                continue;
            SituatedCell nb{m.hf_elem(h2), add(nd.sc.shift, m.facet_shift[h])};
            if (!seen.insert(sit_key(nb)).second)
                continue;
            int la2 = cross_vertex(m, h, pos_in_facet(m.dim, f, nd.la));
            int lb2 = cross_vertex(m, h, pos_in_facet(m.dim, f, nd.lb));
            if (seen.size() > star_cap)
                throw std::runtime_error("ring query: edge star does not close (degenerate periodic mesh)");
            stack.push_back({nb, la2, lb2});
        }
    }
}

struct SitSet {
    std::vector<SituatedCell> items;
    std::unordered_set<SitKey, SitKeyHash> keys;

    bool insert(const SituatedCell& sc) {
        if (!keys.insert(sit_key(sc)).second)
            return false;
        items.push_back(sc);
        return true;
    }
};

void expand_faces(const AhfMesh& m, const std::vector<SituatedCell>& from, SitSet& into) {
    for (const auto& sc : from)
        for (int f = 0; f <= m.dim; ++f) {
            int h2 = m.sibling[m.hf_id(sc.cell, f)];
            if (h2 < 0)
                continue;
            into.insert({m.hf_elem(h2), add(sc.shift, m.facet_shift[m.hf_id(sc.cell, f)])});
        }
}

void expand_edges(const AhfMesh& m, const std::vector<SituatedCell>& from, SitSet& into) {
    std::vector<SituatedCell> tmp;
    for (const auto& sc : from)
        for (int a = 0; a <= m.dim; ++a)
            for (int b = a + 1; b <= m.dim; ++b) {
                tmp.clear();
                edge_star(m, sc, a, b, tmp);
                for (const auto& s : tmp)
                    into.insert(s);
            }
}

void expand_vertices(const AhfMesh& m, const std::vector<SituatedCell>& from, SitSet& into) {
    std::vector<SituatedCell> tmp;
    for (const auto& sc : from)
        for (int lv = 0; lv <= m.dim; ++lv) {
            tmp.clear();
            vertex_star(m, sc, lv, tmp);
            for (const auto& s : tmp)
                into.insert(s);
        }
}

bool sit_less(const SituatedCell& a, const SituatedCell& b) {
    if (a.cell != b.cell)
        return a.cell < b.cell;
    return a.shift < b.shift;
}

Stencil finalize(int center, SitSet& set, int depth_sixths, bool saturated) {
    Stencil st;
    st.center = center;
    st.depth_sixths = depth_sixths;
    st.saturated = saturated;
    SituatedCell cc{center, {}};
    std::vector<SituatedCell> rest;
    rest.reserve(set.items.size());
    for (const auto& sc : set.items)
        if (!(sc == cc))
            rest.push_back(sc);
    std::sort(rest.begin(), rest.end(), sit_less);
    st.members.reserve(rest.size() + 1);
    st.members.push_back(cc);
    st.members.insert(st.members.end(), rest.begin(), rest.end());
    return st;
}

} // namespace

Stencil ring_neighbors(const AhfMesh& mesh, int cell, int depth_sixths) {
    if (cell < 0 || cell >= mesh.n_elems())
        throw std::invalid_argument("ring_neighbors: cell out of range");
    const int ints = depth_sixths / 6;
    const int frac = depth_sixths % 6;
    bool ok = false;
    if (mesh.dim == 1)
        ok = frac == 0;
    else if (mesh.dim == 2)
        ok = frac == 0 || frac == 3;
    else
        ok = frac == 0 || frac == 2 || frac == 4;
    if (!ok || depth_sixths <= 0)
        throw std::invalid_argument("ring_neighbors: unsupported depth for this dimension");

    SitSet set;
    set.insert({cell, {}});
    for (int k = 0; k < ints; ++k) {
        std::vector<SituatedCell> cur = set.items;
        if (mesh.dim == 1)
            expand_faces(mesh, cur, set);
        else
            expand_vertices(mesh, cur, set);
    }
    if (frac != 0) {
        std::vector<SituatedCell> cur = set.items;
        if (frac == 3 || frac == 2)
            expand_faces(mesh, cur, set); // 2-D half ring or 3-D third ring
        else
            expand_edges(mesh, cur, set); // 3-D two-thirds ring
    }
    return finalize(cell, set, depth_sixths, false);
}

Stencil line_stencil(const AhfMesh& mesh, int cell, int left, int n) {
    if (mesh.dim != 1)
        throw std::invalid_argument("line_stencil: 1-D meshes only");
    if (n < 1 || left < 0 || left >= n)
        throw std::invalid_argument("line_stencil: need 0 <= left < n");
    // walk outward through the two facets; facet on the lower-coordinate side
    // is the one whose centroid is left of the cell centroid
    auto walk = [&](int dir_facet, int maxn, std::vector<SituatedCell>& out) {
        SituatedCell cur{cell, {}};
        int came_from = -1;
        for (int k = 0; k < maxn; ++k) {
            int f = -1;
            for (int ff = 0; ff <= 1; ++ff) {
                if (mesh.hf_id(cur.cell, ff) == came_from)
                    continue;
                // pick the facet pointing the requested way
                double dx = mesh.facet_centroid(cur.cell, ff)[0] - mesh.centroid[cur.cell][0];
                if ((dir_facet == 0 && dx > 0.0) || (dir_facet == 1 && dx < 0.0))
                    f = ff;
            }
            if (f < 0)
                break;
            int h = mesh.hf_id(cur.cell, f);
            int h2 = mesh.sibling[h];
            if (h2 < 0)
                break;
            cur = {mesh.hf_elem(h2), add(cur.shift, mesh.facet_shift[h])};
            came_from = h2;
            out.push_back(cur);
        }
    };
    std::vector<SituatedCell> lefts, rights;
    walk(1, n - 1, lefts);
    walk(0, n - 1, rights);

    int nl = std::min<int>(left, lefts.size());
    int nr = std::min<int>(n - 1 - nl, rights.size());
    nl = std::min<int>(n - 1 - nr, lefts.size());
    bool saturated = nl + nr + 1 < n;

    SitSet set;
    set.insert({cell, {}});
    for (int i = 0; i < nl; ++i)
        set.insert(lefts[i]);
    for (int i = 0; i < nr; ++i)
        set.insert(rights[i]);
    return finalize(cell, set, 6 * std::max(nl, nr), saturated);
}

Stencil stencil_for_degree(const AhfMesh& mesh, int cell, int degree, double target_mult,
                           int depth_cap_sixths) {
    const int m = n_poly_coeffs(mesh.dim, degree);
    if (mesh.dim == 1) {
        const int n = 2 * static_cast<int>(0.75 * m) + 1;
        return line_stencil(mesh, cell, n / 2, n);
    }
    const double target = target_mult * m;
    const int step = mesh.dim == 2 ? 3 : 2;
    Stencil best;
    int prev_count = 0;
    for (int depth = step; depth <= depth_cap_sixths; depth += step) {
        best = ring_neighbors(mesh, cell, depth);
        int count = static_cast<int>(best.members.size());
        if (count >= target)
            return best;
        if (count == prev_count && count >= mesh.n_elems())
            break; // whole mesh reached
        prev_count = count;
    }
    best.saturated = true;
    return best;
}

} // namespace wlseno

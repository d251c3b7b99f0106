#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "field.hpp"
#include "tangle.hpp"

namespace skein {

// ---------------------------------------------------------------------------
// Boundary cycles of a pair of matchings with the same endpoints.
//
// A cobordism from tangle s to tangle t (same nb/nt) has side boundary lines
// at every tangle endpoint; the closed boundary curves of the surface are the
// cycles that alternate s-arcs and t-arcs through shared endpoints, plus one
// curve for each circle piece of s or t.
// ---------------------------------------------------------------------------
struct ArcCycles {
    int ncycles = 0;
    std::vector<int> cycle_of_s_arc; // s arc id -> cycle id
    std::vector<int> cycle_of_t_arc;
};

inline ArcCycles arc_cycles(const FlatTangle& s, const FlatTangle& t) {
    assert(s.nb == t.nb && s.nt == t.nt);
    ArcCycles r;
    r.cycle_of_s_arc.assign(s.narcs(), -1);
    r.cycle_of_t_arc.assign(t.narcs(), -1);
    auto sa = s.arc_of_point(), ta = t.arc_of_point();
    std::vector<bool> seen(s.points(), false);
    for (int p0 = 0; p0 < s.points(); ++p0) {
        if (seen[p0]) continue;
        int p = p0;
        do {
            seen[p] = true;
            r.cycle_of_s_arc[sa[p]] = r.ncycles;
            p = s.match[p];
            seen[p] = true;
            r.cycle_of_t_arc[ta[p]] = r.ncycles;
            p = t.match[p];
        } while (p != p0);
        ++r.ncycles;
    }
    return r;
}

// ---------------------------------------------------------------------------
// CobShape: a connected-component partition of the pieces of src and tgt,
// with a dot count per component. Pieces are indexed src first (0 ..
// src.npieces()-1) then tgt (offset by src.npieces()). Every component is
// genus zero with Euler characteristic 2 - b (b = its boundary curves);
// positive genus and multiple dots are evaluated away on the fly, so they
// never appear in a stored shape.
//
// The partition is always coarser than the boundary closure: the src arc and
// tgt arc at a given endpoint share a side boundary line, hence a component.
// ---------------------------------------------------------------------------
struct CobShape {
    FlatTangle src, tgt;
    std::vector<int> comp;      // size src.npieces() + tgt.npieces()
    std::vector<uint8_t> dots;  // per component

    int ncomp() const { return static_cast<int>(dots.size()); }
    int src_pieces() const { return src.npieces(); }
    int comp_of_src(int piece) const { return comp[piece]; }
    int comp_of_tgt(int piece) const { return comp[src.npieces() + piece]; }

    bool operator==(const CobShape& o) const {
        return src == o.src && tgt == o.tgt && comp == o.comp && dots == o.dots;
    }
    auto operator<=>(const CobShape& o) const {
        if (auto c = src <=> o.src; c != 0) return c;
        if (auto c = tgt <=> o.tgt; c != 0) return c;
        if (auto c = comp <=> o.comp; c != 0) return c;
        return dots <=> o.dots;
    }

    // Renumber components in order of first appearance along the piece list.
    void canonicalize() {
        std::vector<int> relab(dots.size(), -1);
        int next = 0;
        for (int& c : comp) {
            if (relab[c] < 0) relab[c] = next++;
            c = relab[c];
        }
        std::vector<uint8_t> nd(next);
        for (size_t old = 0; old < relab.size(); ++old)
            if (relab[old] >= 0) nd[relab[old]] = dots[old];
        dots = std::move(nd);
    }
};

// Boundary-curve count of each component.
inline std::vector<int> component_boundary_counts(const CobShape& c) {
    std::vector<int> b(c.ncomp(), 0);
    auto cyc = arc_cycles(c.src, c.tgt);
    // one curve per arc-cycle; attribute it via any of its arcs
    std::vector<int> comp_of_cycle(cyc.ncycles, -1);
    for (int a = 0; a < c.src.narcs(); ++a) {
        int& cc = comp_of_cycle[cyc.cycle_of_s_arc[a]];
        assert(cc < 0 || cc == c.comp_of_src(a));
        cc = c.comp_of_src(a);
    }
    for (int a = 0; a < c.tgt.narcs(); ++a) {
        int& cc = comp_of_cycle[cyc.cycle_of_t_arc[a]];
        assert(cc < 0 || cc == c.comp_of_tgt(a));
        cc = c.comp_of_tgt(a);
    }
    for (int k = 0; k < cyc.ncycles; ++k) ++b[comp_of_cycle[k]];
    // one curve per circle piece
    for (int k = 0; k < c.src.circles; ++k) ++b[c.comp_of_src(c.src.narcs() + k)];
    for (int k = 0; k < c.tgt.circles; ++k) ++b[c.comp_of_tgt(c.tgt.narcs() + k)];
    return b;
}

// deg_raw = -chi + e/2 + 2 * dots, with chi = sum(2 - b) over components and
// e the number of tangle endpoints. An identity cobordism has raw degree 0,
// a saddle +1, a birth or death -1, and each dot adds +2.
inline int raw_degree(const CobShape& c) {
    auto b = component_boundary_counts(c);
    int deg = (c.src.nb + c.src.nt) / 2;
    for (int k = 0; k < c.ncomp(); ++k) deg += b[k] - 2 + 2 * c.dots[k];
    return deg;
}

// --- basic shapes ----------------------------------------------------------

inline CobShape identity_shape(const FlatTangle& t) {
    CobShape c;
    c.src = c.tgt = t;
    int n = t.npieces();
    c.comp.resize(2 * n);
    for (int i = 0; i < n; ++i) c.comp[i] = c.comp[n + i] = i;
    c.dots.assign(n, 0);
    return c;
}

// The cobordism between two matchings in which every component is as small as
// the boundary closure allows (each arc-cycle one disk, each circle piece its
// own disk). For tangles differing by a single re-matching this is the
// saddle; with a circle added or removed it is a birth or death.
inline CobShape min_shape(const FlatTangle& s, const FlatTangle& t) {
    CobShape c;
    c.src = s;
    c.tgt = t;
    auto cyc = arc_cycles(s, t);
    int n = cyc.ncycles;
    c.comp.resize(s.npieces() + t.npieces());
    for (int a = 0; a < s.narcs(); ++a) c.comp[a] = cyc.cycle_of_s_arc[a];
    for (int k = 0; k < s.circles; ++k) c.comp[s.narcs() + k] = n++;
    for (int a = 0; a < t.narcs(); ++a) c.comp[s.npieces() + a] = cyc.cycle_of_t_arc[a];
    for (int k = 0; k < t.circles; ++k) c.comp[s.npieces() + t.narcs() + k] = n++;
    c.dots.assign(n, 0);
    c.canonicalize();
    return c;
}

inline FlatTangle drop_circle(const FlatTangle& t, int which) {
    assert(which >= 0 && which < t.circles);
    FlatTangle r = t;
    r.circles -= 1;
    return r;
}

// tangle-with-circle => tangle-without (death of circle `which`), or its
// reverse (birth). All other pieces map across by identity.
inline CobShape death_shape(const FlatTangle& t, int which, bool dotted) {
    FlatTangle small = drop_circle(t, which);
    CobShape c;
    c.src = t;
    c.tgt = small;
    int ns = t.npieces();
    c.comp.assign(ns + small.npieces(), -1);
    int next = 0;
    for (int a = 0; a < t.narcs(); ++a) {
        c.comp[a] = next;
        c.comp[ns + a] = next;
        ++next;
    }
    int dying = -1;
    for (int k = 0; k < t.circles; ++k) {
        int piece = t.narcs() + k;
        if (k == which) {
            dying = next;
            c.comp[piece] = next++;
            continue;
        }
        int tk = k < which ? k : k - 1;
        c.comp[piece] = next;
        c.comp[ns + small.narcs() + tk] = next;
        ++next;
    }
    c.dots.assign(next, 0);
    if (dotted) c.dots[dying] = 1;
    c.canonicalize();
    return c;
}

inline CobShape birth_shape(const FlatTangle& t, int which, bool dotted) {
    CobShape d = death_shape(t, which, dotted);
    CobShape c;
    c.src = d.tgt;
    c.tgt = d.src;
    int ns = c.src.npieces(), nt = c.tgt.npieces();
    c.comp.resize(ns + nt);
    for (int i = 0; i < ns; ++i) c.comp[i] = d.comp[nt + i];
    for (int i = 0; i < nt; ++i) c.comp[ns + i] = d.comp[i];
    c.dots = d.dots;
    c.canonicalize();
    return c;
}

// ---------------------------------------------------------------------------
// Linear combinations and composition.
// ---------------------------------------------------------------------------
namespace detail {
// Neck-cutting expansion: rewrite a shape as a sum of shapes in which every
// component is a single boundary cycle (a disk) carrying at most one dot.
// A genus-0 component with b >= 2 cycles and d dots expands as
//   d = 0: sum over the b ways to leave exactly one of its cycles undotted
//   d = 1: all b cycles dotted
//   d >= 2: zero.
template <class F>
void expand_disk_terms(const CobShape& shape, const F& coeff,
                       std::vector<std::pair<CobShape, F>>& out) {
    auto cyc = arc_cycles(shape.src, shape.tgt);
    int ncyc = cyc.ncycles + shape.src.circles + shape.tgt.circles;
    std::vector<int> cycle_of_piece(shape.comp.size());
    {
        int na_s = shape.src.narcs(), np_s = shape.src.npieces();
        for (int a = 0; a < na_s; ++a) cycle_of_piece[a] = cyc.cycle_of_s_arc[a];
        for (int k = 0; k < shape.src.circles; ++k)
            cycle_of_piece[na_s + k] = cyc.ncycles + k;
        for (int a = 0; a < shape.tgt.narcs(); ++a)
            cycle_of_piece[np_s + a] = cyc.cycle_of_t_arc[a];
        for (int k = 0; k < shape.tgt.circles; ++k)
            cycle_of_piece[np_s + shape.tgt.narcs() + k] = cyc.ncycles + shape.src.circles + k;
    }
    // cycles of each component
    std::vector<std::vector<int>> cycles_of_comp(shape.ncomp());
    {
        std::vector<int> comp_of_cycle(ncyc, -1);
        for (size_t p = 0; p < shape.comp.size(); ++p) comp_of_cycle[cycle_of_piece[p]] = shape.comp[p];
        for (int c = 0; c < ncyc; ++c) cycles_of_comp[comp_of_cycle[c]].push_back(c);
    }

    bool disk_only = true;
    for (int c = 0; c < shape.ncomp(); ++c) {
        if (shape.dots[c] >= 2) return; // zero
        if (cycles_of_comp[c].size() >= 2) disk_only = false;
    }
    if (disk_only) {
        CobShape s = shape;
        s.canonicalize();
        out.push_back({std::move(s), coeff});
        return;
    }

    // per-component alternatives: dot assignment per cycle
    std::vector<std::vector<std::vector<uint8_t>>> alts(shape.ncomp());
    for (int c = 0; c < shape.ncomp(); ++c) {
        size_t b = cycles_of_comp[c].size();
        if (b == 1) {
            alts[c] = {{shape.dots[c]}};
        } else if (shape.dots[c] == 0) {
            for (size_t skip = 0; skip < b; ++skip) {
                std::vector<uint8_t> a(b, 1);
                a[skip] = 0;
                alts[c].push_back(std::move(a));
            }
        } else {
            alts[c] = {std::vector<uint8_t>(b, 1)};
        }
    }
    std::vector<size_t> pick(shape.ncomp(), 0);
    while (true) {
        CobShape s;
        s.src = shape.src;
        s.tgt = shape.tgt;
        s.comp.resize(shape.comp.size());
        for (size_t p = 0; p < shape.comp.size(); ++p) s.comp[p] = cycle_of_piece[p];
        s.dots.assign(ncyc, 0);
        for (int c = 0; c < shape.ncomp(); ++c)
            for (size_t i = 0; i < cycles_of_comp[c].size(); ++i)
                s.dots[cycles_of_comp[c][i]] = alts[c][pick[c]][i];
        s.canonicalize();
        out.push_back({std::move(s), coeff});
        int c = 0;
        for (; c < shape.ncomp(); ++c) {
            if (++pick[c] < alts[c].size()) break;
            pick[c] = 0;
        }
        if (c == shape.ncomp()) break;
    }
}
} // namespace detail

template <class F>
struct CobLin {
    std::vector<std::pair<CobShape, F>> terms; // sorted by shape, no zeros

    bool is_zero() const { return terms.empty(); }

    void normalize() {
        std::vector<std::pair<CobShape, F>> expanded;
        for (auto& [shape, coeff] : terms)
            if (!skein::is_zero(coeff)) detail::expand_disk_terms(shape, coeff, expanded);
        std::sort(expanded.begin(), expanded.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<CobShape, F>> out;
        for (auto& t : expanded) {
            if (!out.empty() && out.back().first == t.first)
                out.back().second = out.back().second + t.second;
            else
                out.push_back(std::move(t));
        }
        std::erase_if(out, [](const auto& t) { return skein::is_zero(t.second); });
        terms = std::move(out);
    }

    CobLin& operator+=(const CobLin& o) {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        normalize();
        return *this;
    }
    CobLin operator+(const CobLin& o) const {
        CobLin r = *this;
        r += o;
        return r;
    }
    CobLin operator-() const {
        CobLin r = *this;
        for (auto& t : r.terms) t.second = -t.second;
        return r;
    }
    CobLin operator-(const CobLin& o) const { return *this + (-o); }
    CobLin operator*(const F& s) const {
        CobLin r = *this;
        for (auto& t : r.terms) t.second = t.second * s;
        r.normalize();
        return r;
    }
    bool operator==(const CobLin& o) const { return terms == o.terms; }
};

template <class F>
CobLin<F> cob_term(CobShape shape, F coeff = F(1)) {
    CobLin<F> r;
    r.terms.push_back({std::move(shape), std::move(coeff)});
    r.normalize();
    return r;
}

template <class F>
CobLin<F> cob_zero() {
    return {};
}

namespace detail {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Shared tail of both gluing operations. Inputs per merged class: chi, total
// dots; plus the composite boundary data (piece -> class). Applies the genus
// and dot evaluation rules and emits a single shape with a scalar.
template <class F>
struct GlueFinish {
    CobShape shape;
    F scalar = F(1);
};

template <class F>
std::optional<GlueFinish<F>> finish_gluing(FlatTangle src, FlatTangle tgt,
                                           const std::vector<int>& class_of_src_piece,
                                           const std::vector<int>& class_of_tgt_piece,
                                           std::map<int, int>& chi_of_class,
                                           std::map<int, int>& dots_of_class) {
    // boundary-curve count of each class on the composite boundary
    std::map<int, int> b_new;
    for (auto& [cls, chi] : chi_of_class) b_new[cls] = 0;
    auto cyc = arc_cycles(src, tgt);
    std::vector<int> class_of_cycle(cyc.ncycles, -1);
    for (int a = 0; a < src.narcs(); ++a) {
        int& c = class_of_cycle[cyc.cycle_of_s_arc[a]];
        assert(c < 0 || c == class_of_src_piece[a]);
        c = class_of_src_piece[a];
    }
    for (int a = 0; a < tgt.narcs(); ++a) {
        int& c = class_of_cycle[cyc.cycle_of_t_arc[a]];
        assert(c < 0 || c == class_of_tgt_piece[a]);
        c = class_of_tgt_piece[a];
    }
    for (int k = 0; k < cyc.ncycles; ++k) ++b_new[class_of_cycle[k]];
    for (int k = 0; k < src.circles; ++k) ++b_new[class_of_src_piece[src.narcs() + k]];
    for (int k = 0; k < tgt.circles; ++k) ++b_new[class_of_tgt_piece[tgt.narcs() + k]];

    GlueFinish<F> out;
    F two = F(1) + F(1);
    std::map<int, int> comp_of_class;
    int ncomp = 0;
    for (auto& [cls, chi] : chi_of_class) {
        int b = b_new[cls];
        int dots = dots_of_class[cls];
        int genus2 = 2 - chi - b; // = 2g
        assert(genus2 >= 0 && genus2 % 2 == 0);
        int g = genus2 / 2;
        for (int i = 0; i < g; ++i) out.scalar = out.scalar * two;
        dots += g;
        if (b == 0) {
            // closed component: dotted sphere is 1, plain sphere 0, X^2 = 0
            if (dots != 1) return std::nullopt;
            continue;
        }
        if (dots >= 2) return std::nullopt;
        comp_of_class[cls] = ncomp;
        out.shape.dots.push_back(static_cast<uint8_t>(dots));
        ++ncomp;
    }
    if (is_zero(out.scalar)) return std::nullopt;

    out.shape.src = std::move(src);
    out.shape.tgt = std::move(tgt);
    out.shape.comp.resize(class_of_src_piece.size() + class_of_tgt_piece.size());
    for (size_t i = 0; i < class_of_src_piece.size(); ++i)
        out.shape.comp[i] = comp_of_class.at(class_of_src_piece[i]);
    for (size_t i = 0; i < class_of_tgt_piece.size(); ++i)
        out.shape.comp[class_of_src_piece.size() + i] = comp_of_class.at(class_of_tgt_piece[i]);
    out.shape.canonicalize();
    return out;
}

} // namespace detail

// Vertical composition g . f of single shapes (f: A => B, then g: B => C),
// gluing along the middle tangle B. Returns nothing when the result
// evaluates to zero.
template <class F>
std::optional<detail::GlueFinish<F>> compose_shapes(const CobShape& g, const CobShape& f) {
    assert(f.tgt == g.src);
    const FlatTangle& mid = f.tgt;
    int nf = f.ncomp(), ng = g.ncomp();
    detail::Dsu dsu(nf + ng);
    for (int p = 0; p < mid.npieces(); ++p)
        dsu.unite(f.comp_of_tgt(p), nf + g.comp_of_src(p));

    auto bf = component_boundary_counts(f);
    auto bg = component_boundary_counts(g);
    std::map<int, int> chi, dots;
    for (int c = 0; c < nf; ++c) {
        chi[dsu.find(c)] += 2 - bf[c];
        dots[dsu.find(c)] += f.dots[c];
    }
    for (int c = 0; c < ng; ++c) {
        chi[dsu.find(nf + c)] += 2 - bg[c];
        dots[dsu.find(nf + c)] += g.dots[c];
    }
    // glue along middle pieces: each arc costs chi 1, each circle 0
    for (int a = 0; a < mid.narcs(); ++a) chi[dsu.find(f.comp_of_tgt(a))] -= 1;

    std::vector<int> src_cls(f.src.npieces()), tgt_cls(g.tgt.npieces());
    for (int p = 0; p < f.src.npieces(); ++p) src_cls[p] = dsu.find(f.comp_of_src(p));
    for (int p = 0; p < g.tgt.npieces(); ++p) tgt_cls[p] = dsu.find(nf + g.comp_of_tgt(p));
    return detail::finish_gluing<F>(f.src, g.tgt, src_cls, tgt_cls, chi, dots);
}

template <class F>
CobLin<F> compose(const CobLin<F>& g, const CobLin<F>& f) {
    CobLin<F> out;
    for (const auto& [gs, gc] : g.terms)
        for (const auto& [fs, fc] : f.terms)
            if (auto r = compose_shapes<F>(gs, fs))
                out.terms.push_back({std::move(r->shape), r->scalar * gc * fc});
    out.normalize();
    return out;
}

// Planar (side-by-side) composition: f lives over tangles a0 -> a1, g over
// a1 -> a2; the surfaces are glued along the vertical lines at the a1
// boundary points.
template <class F>
std::optional<detail::GlueFinish<F>> stack_shapes(const CobShape& f, const CobShape& g) {
    assert(f.src.nt == g.src.nb && f.tgt.nt == g.tgt.nb);
    int nf = f.ncomp(), ng = g.ncomp();
    detail::Dsu dsu(nf + ng);
    auto fsrc_arc = f.src.arc_of_point();
    auto gsrc_arc = g.src.arc_of_point();
    const int m = f.src.nt;
    for (int p = 0; p < m; ++p)
        dsu.unite(f.comp_of_src(fsrc_arc[f.src.nb + p]), nf + g.comp_of_src(gsrc_arc[p]));

    auto bf = component_boundary_counts(f);
    auto bg = component_boundary_counts(g);
    std::map<int, int> chi, dots;
    for (int c = 0; c < nf; ++c) {
        chi[dsu.find(c)] += 2 - bf[c];
        dots[dsu.find(c)] += f.dots[c];
    }
    for (int c = 0; c < ng; ++c) {
        chi[dsu.find(nf + c)] += 2 - bg[c];
        dots[dsu.find(nf + c)] += g.dots[c];
    }
    for (int p = 0; p < m; ++p)
        chi[dsu.find(f.comp_of_src(fsrc_arc[f.src.nb + p]))] -= 1;

    ComposeResult cs = compose_tangles(f.src, g.src);
    ComposeResult ct = compose_tangles(f.tgt, g.tgt);

    std::vector<int> src_cls(cs.tangle.npieces(), -1), tgt_cls(ct.tangle.npieces(), -1);
    auto assign = [&dsu](std::vector<int>& cls, const std::vector<int>& piece_map,
                         const CobShape& shape, bool is_tgt, int offset) {
        for (size_t p = 0; p < piece_map.size(); ++p) {
            int c = is_tgt ? shape.comp_of_tgt(static_cast<int>(p))
                           : shape.comp_of_src(static_cast<int>(p));
            int cls_id = dsu.find(offset + c);
            assert(cls[piece_map[p]] < 0 || cls[piece_map[p]] == cls_id);
            cls[piece_map[p]] = cls_id;
        }
    };
    assign(src_cls, cs.piece_of_s, f, false, 0);
    assign(src_cls, cs.piece_of_t, g, false, nf);
    assign(tgt_cls, ct.piece_of_s, f, true, 0);
    assign(tgt_cls, ct.piece_of_t, g, true, nf);

    return detail::finish_gluing<F>(cs.tangle, ct.tangle, src_cls, tgt_cls, chi, dots);
}

template <class F>
CobLin<F> stack(const CobLin<F>& f, const CobLin<F>& g) {
    CobLin<F> out;
    for (const auto& [fs, fc] : f.terms)
        for (const auto& [gs, gc] : g.terms)
            if (auto r = stack_shapes<F>(fs, gs))
                out.terms.push_back({std::move(r->shape), r->scalar * fc * gc});
    out.normalize();
    return out;
}

// Is this a single undotted identity term? Returns its coefficient if so.
template <class F>
std::optional<F> identity_coefficient(const CobLin<F>& c) {
    if (c.terms.size() != 1) return std::nullopt;
    const auto& [shape, coeff] = c.terms[0];
    if (shape.src != shape.tgt) return std::nullopt;
    for (uint8_t d : shape.dots)
        if (d) return std::nullopt;
    int n = shape.src.npieces();
    if (shape.ncomp() != n) return std::nullopt;
    for (int i = 0; i < n; ++i)
        if (shape.comp[i] != shape.comp[n + i]) return std::nullopt;
    return coeff;
}

// ---------------------------------------------------------------------------
// Hom-space basis: in disk-only normal form the component partition is always
// the boundary closure, so Hom(s, t) has basis { min_shape with dot subset D }
// over all D, of dimension 2^{#cycles}. Raw degree of a basis element is
// (e/2 - #cycles) + 2|D|.
// ---------------------------------------------------------------------------
inline std::vector<CobShape> hom_shapes(const FlatTangle& s, const FlatTangle& t) {
    CobShape base = min_shape(s, t);
    int n = base.ncomp();
    assert(n < 24);
    std::vector<CobShape> out;
    out.reserve(size_t(1) << n);
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        CobShape c = base;
        for (int p = 0; p < n; ++p) c.dots[p] = (mask >> p) & 1;
        out.push_back(std::move(c));
    }
    return out;
}

inline std::vector<CobShape> hom_shapes_of_degree(const FlatTangle& s, const FlatTangle& t,
                                                  int raw_deg) {
    auto all = hom_shapes(s, t);
    std::erase_if(all, [&](const CobShape& c) { return raw_degree(c) != raw_deg; });
    return all;
}

} // namespace skein

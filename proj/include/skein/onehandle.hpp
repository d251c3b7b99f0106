#pragma once

#include "skein/complex.hpp"
#include "skein/linalg.hpp"
#include "skein/movie.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace skein {

// ===========================================================================
// Bigraded hom spaces between complexes, modulo chain homotopy.
//
// A degree-(dh, dq) element of Hom(A, B) is a matrix of dotted cobordisms
// with entries A_i -> B_j, h_j = h_i + dh, each term of raw degree
// dq + q_i - q_j. The hom differential is D(f) = d_B . f - (-1)^{dh} f . d_A;
// its kernel in degree (0, 0) consists of chain maps, and kernel mod image
// is "maps up to homotopy" in every bidegree.
// ===========================================================================

struct HomCoord {
    int i = 0; // source object
    int j = 0; // target object
    CobShape shape;
};

namespace detail {

struct HomCoordIndex {
    std::map<std::tuple<int, int, CobShape>, int> pos;
    HomCoordIndex() = default;
    explicit HomCoordIndex(const std::vector<HomCoord>& coords) {
        for (size_t n = 0; n < coords.size(); ++n)
            pos.emplace(std::tuple(coords[n].i, coords[n].j, coords[n].shape),
                        static_cast<int>(n));
    }
    int at(int i, int j, const CobShape& s) const {
        auto it = pos.find(std::tuple(i, j, s));
        if (it == pos.end())
            throw std::logic_error("hom coordinate outside the expected degree");
        return it->second;
    }
};

} // namespace detail

template <class F>
std::vector<HomCoord> hom_coords(const Complex<F>& a, const Complex<F>& b, int dh, int dq) {
    std::vector<HomCoord> out;
    for (int i = 0; i < a.nobj(); ++i)
        for (int j = 0; j < b.nobj(); ++j) {
            if (b.objs[j].h != a.objs[i].h + dh) continue;
            int raw = dq + a.objs[i].q - b.objs[j].q;
            if (raw < 0) continue;
            for (auto& s : hom_shapes_of_degree(a.objs[i].tangle, b.objs[j].tangle, raw))
                out.push_back({i, j, s});
        }
    return out;
}

// The hom differential as a matrix from the (dh, dq) coordinates to the
// (dh+1, dq) ones.
template <class F>
Matrix<F> hom_diff(const Complex<F>& a, const Complex<F>& b, int dh,
                   const std::vector<HomCoord>& from, const std::vector<HomCoord>& to) {
    detail::HomCoordIndex idx(to);
    Matrix<F> m(static_cast<int>(to.size()), static_cast<int>(from.size()));
    F sgn = (dh % 2) ? F(1) : F(-1); // the -(-1)^{dh} on f . d_A
    for (size_t n = 0; n < from.size(); ++n) {
        const HomCoord& c = from[n];
        CobLin<F> v = cob_term<F>(c.shape);
        for (auto it = b.d.lower_bound({c.j, 0}); it != b.d.end() && it->first.first == c.j;
             ++it)
            for (auto& [sh, co] : compose(it->second, v).terms)
                m(idx.at(c.i, it->first.second, sh), static_cast<int>(n)) += co;
        for (auto& [ij, dv] : a.d) {
            if (ij.second != c.i) continue;
            for (auto& [sh, co] : compose(v, dv).terms)
                m(idx.at(ij.first, c.j, sh), static_cast<int>(n)) += co * sgn;
        }
    }
    return m;
}

// Hom^{(dh,dq)}(A, B) modulo homotopy. `exact` spans the nullhomotopic maps;
// `basis` extends it to a basis of the closed subspace, so classes are
// coordinate vectors over `basis`.
template <class F>
struct HomModH {
    int dh = 0, dq = 0;
    std::vector<HomCoord> coords;
    detail::HomCoordIndex idx;
    std::vector<std::vector<F>> exact;
    std::vector<std::vector<F>> basis;

    int dim() const { return static_cast<int>(basis.size()); }

    std::vector<F> ambient(const ChainMap<F>& f) const {
        std::vector<F> v(coords.size(), F(0));
        for (auto& [ij, lin] : f.m)
            for (auto& [shape, co] : lin.terms) v[idx.at(ij.first, ij.second, shape)] += co;
        return v;
    }

    ChainMap<F> materialize(const std::vector<F>& cls) const {
        assert(cls.size() == basis.size());
        ChainMap<F> f;
        f.dh = dh;
        f.dq = dq;
        std::map<std::pair<int, int>, CobLin<F>> acc;
        for (size_t n = 0; n < basis.size(); ++n) {
            if (is_zero(cls[n])) continue;
            for (size_t m = 0; m < coords.size(); ++m) {
                if (is_zero(basis[n][m])) continue;
                auto slot = acc.try_emplace({coords[m].i, coords[m].j}, cob_zero<F>()).first;
                slot->second =
                    slot->second + cob_term<F>(coords[m].shape, cls[n] * basis[n][m]);
            }
        }
        for (auto& [ij, lin] : acc) f.set(ij.first, ij.second, std::move(lin));
        return f;
    }

    // Class of a closed ambient vector, as coordinates over `basis`.
    std::vector<F> project(const std::vector<F>& v) const {
        int nc = static_cast<int>(coords.size());
        int ne = static_cast<int>(exact.size());
        int nb = static_cast<int>(basis.size());
        Matrix<F> gen(nc, ne + nb);
        for (int c = 0; c < ne; ++c)
            for (int r = 0; r < nc; ++r) gen(r, c) = exact[c][r];
        for (int c = 0; c < nb; ++c)
            for (int r = 0; r < nc; ++r) gen(r, ne + c) = basis[c][r];
        auto x = solve(gen, v);
        if (!x) throw std::logic_error("projecting a non-closed map");
        return std::vector<F>(x->begin() + ne, x->end());
    }
};

template <class F>
HomModH<F> hom_mod_homotopy(const Complex<F>& a, const Complex<F>& b, int dh, int dq) {
    HomModH<F> r;
    r.dh = dh;
    r.dq = dq;
    r.coords = hom_coords(a, b, dh, dq);
    r.idx = detail::HomCoordIndex(r.coords);
    auto up = hom_coords(a, b, dh + 1, dq);
    auto dn = hom_coords(a, b, dh - 1, dq);
    int n = static_cast<int>(r.coords.size());
    Matrix<F> d0 = hom_diff(a, b, dh, r.coords, up);
    Matrix<F> dm = hom_diff(a, b, dh - 1, dn, r.coords);
    RowSpan<F> sp(n);
    for (int c = 0; c < dm.cols(); ++c) {
        std::vector<F> col(n);
        for (int rr = 0; rr < n; ++rr) col[rr] = dm(rr, c);
        if (sp.insert(col)) r.exact.push_back(std::move(col));
    }
    for (auto& k : kernel_basis(d0))
        if (sp.insert(k)) r.basis.push_back(k);
    return r;
}

// ===========================================================================
// Trace classes: zeroth Hochschild homology of the category of complexes
// over the two-boundary-point 3-ball.
//
// Bidegrees of trace classes are reported with the homological coordinate
// counted so that right-shifting endomorphisms are positive: an entry from
// object i to object j has internal degree dh = h_j - h_i, and the reported
// bidegree is (-dh, dq). The identity class of C_l then sits in (0, 0) and
// the "shift right and dot" class RX_{C_l} in (l, 2l+2).
// ===========================================================================

struct HH0Class {
    std::string label;            // "Id_C0", "RX_C1", ...
    int l = 0;                    // which C_l carries it; -1 for the empty boundary
    std::pair<int, int> bidegree; // reported convention, see above
};

// C_k: the single-arc object in homological degrees 0..k with quantum shifts
// 0, -2, ..., -2k and every differential the dotted identity.
template <class F>
Complex<F> ck_complex(int k) {
    assert(k >= 0);
    Complex<F> c;
    FlatTangle arc = identity_tangle(1);
    for (int i = 0; i <= k; ++i) c.objs.push_back({i, -2 * i, arc});
    CobShape dot = identity_shape(arc);
    dot.dots[0] = 1;
    for (int i = 0; i < k; ++i) c.set_entry(i, i + 1, cob_term<F>(dot));
    return c;
}

namespace detail {

// The four basis classes as explicit chain maps on C_0 and C_1.
template <class F>
struct TraceBasisElement {
    std::string label;
    int l = 0;
    int dh = 0, dq = 0; // internal bidegree of the representative
    ChainMap<F> rep;
};

template <class F>
std::vector<TraceBasisElement<F>> trace_basis_elements() {
    CobShape dot = identity_shape(identity_tangle(1));
    dot.dots[0] = 1;
    std::vector<TraceBasisElement<F>> out;
    out.push_back({"Id_C0", 0, 0, 0, identity_map(ck_complex<F>(0))});
    out.push_back({"Id_C1", 1, 0, 0, identity_map(ck_complex<F>(1))});
    {
        ChainMap<F> rx;
        rx.dq = 2;
        rx.set(0, 0, cob_term<F>(dot));
        out.push_back({"RX_C0", 0, 0, 2, rx});
    }
    {
        // the dot placed on the top slot of C_1, viewed as a map to the
        // right-shifted copy: internally it runs from object 1 to object 0
        ChainMap<F> rx;
        rx.dh = -1;
        rx.dq = 4;
        rx.set(1, 0, cob_term<F>(dot));
        out.push_back({"RX_C1", 1, -1, 4, rx});
    }
    return out;
}

// Cached hom spaces, bidegree supports, and per-bidegree commutator spans
// over a fixed list of complexes.
template <class F>
struct TraceWorld {
    std::vector<const Complex<F>*> obs;

    const HomModH<F>& homs(int a, int b, int dh, int dq) {
        auto key = std::tuple(a, b, dh, dq);
        auto it = homs_.find(key);
        if (it == homs_.end())
            it = homs_.emplace(key, hom_mod_homotopy(*obs[a], *obs[b], dh, dq)).first;
        return it->second;
    }

    // Bidegrees where Hom(A, B) has coordinates at all.
    const std::set<std::pair<int, int>>& support(int a, int b) {
        auto key = std::pair(a, b);
        auto it = support_.find(key);
        if (it != support_.end()) return it->second;
        std::set<std::pair<int, int>> s;
        const Complex<F>& ca = *obs[a];
        const Complex<F>& cb = *obs[b];
        for (int i = 0; i < ca.nobj(); ++i)
            for (int j = 0; j < cb.nobj(); ++j) {
                CobShape base = min_shape(ca.objs[i].tangle, cb.objs[j].tangle);
                int dh = cb.objs[j].h - ca.objs[i].h;
                int raw0 = raw_degree(base);
                for (int extra = 0; extra <= base.ncomp(); ++extra)
                    s.insert({dh, raw0 + 2 * extra - ca.objs[i].q + cb.objs[j].q});
            }
        return support_.emplace(key, std::move(s)).first->second;
    }

    // Direct sum of the endo spaces mod homotopy at one internal bidegree,
    // together with the span of all trace relations f.g - g.f inside it.
    struct Tau {
        std::vector<int> offset;
        int dim = 0;
        RowSpan<F> comm{0};
    };

    const Tau& tau(int dh, int dq) {
        auto it = tau_.find({dh, dq});
        if (it != tau_.end()) return it->second;
        Tau t;
        int nob = static_cast<int>(obs.size());
        for (int a = 0; a < nob; ++a) {
            t.offset.push_back(t.dim);
            t.dim += homs(a, a, dh, dq).dim();
        }
        t.comm = RowSpan<F>(t.dim);
        for (int a = 0; a < nob; ++a)
            for (int b = 0; b < nob; ++b)
                for (auto& d1 : support(a, b)) {
                    std::pair<int, int> d2{dh - d1.first, dq - d1.second};
                    if (!support(b, a).count(d2)) continue;
                    const HomModH<F>& hab = homs(a, b, d1.first, d1.second);
                    const HomModH<F>& hba = homs(b, a, d2.first, d2.second);
                    if (!hab.dim() || !hba.dim()) continue;
                    const HomModH<F>& ea = homs(a, a, dh, dq);
                    const HomModH<F>& eb = homs(b, b, dh, dq);
                    // the cyclic relation is Koszul-signed in the
                    // homological degrees of the two factors
                    F koszul =
                        (d1.first % 2 != 0 && d2.first % 2 != 0) ? F(-1) : F(1);
                    for (int fi = 0; fi < hab.dim(); ++fi) {
                        std::vector<F> uf(hab.dim(), F(0));
                        uf[fi] = F(1);
                        ChainMap<F> fm = hab.materialize(uf);
                        for (int gi = 0; gi < hba.dim(); ++gi) {
                            std::vector<F> ug(hba.dim(), F(0));
                            ug[gi] = F(1);
                            ChainMap<F> gm = hba.materialize(ug);
                            // f after g is an endo of obs[b], g after f of obs[a]
                            auto pb = eb.project(eb.ambient(compose_maps(fm, gm)));
                            auto pa = ea.project(ea.ambient(compose_maps(gm, fm)));
                            std::vector<F> v(t.dim, F(0));
                            for (size_t x = 0; x < pb.size(); ++x)
                                v[t.offset[b] + static_cast<int>(x)] += pb[x];
                            for (size_t x = 0; x < pa.size(); ++x)
                                v[t.offset[a] + static_cast<int>(x)] -= koszul * pa[x];
                            t.comm.insert(std::move(v));
                        }
                    }
                }
        return tau_.emplace(std::pair(dh, dq), std::move(t)).first->second;
    }

    // The endo class of `f` on object `ob`, embedded into the tau space and
    // reduced against the commutator span.
    std::vector<F> reduced_class(int ob, const ChainMap<F>& f) {
        const Tau& t = tau(f.dh, f.dq);
        const HomModH<F>& e = homs(ob, ob, f.dh, f.dq);
        std::vector<F> v(t.dim, F(0));
        auto p = e.project(e.ambient(f));
        for (size_t x = 0; x < p.size(); ++x) v[t.offset[ob] + static_cast<int>(x)] = p[x];
        return t.comm.reduce(std::move(v));
    }

  private:
    std::map<std::tuple<int, int, int, int>, HomModH<F>> homs_;
    std::map<std::pair<int, int>, std::set<std::pair<int, int>>> support_;
    std::map<std::pair<int, int>, Tau> tau_;
};

} // namespace detail

class TraceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coordinates of the trace class of a closed homogeneous endomorphism over
// the basis [Id_C0, Id_C1, RX_C0, RX_C1]. The complex must live over the
// two-point boundary (one bottom, one top point).
template <class F>
std::array<F, 4> trace_class(const Complex<F>& m, const ChainMap<F>& f) {
    for (auto& o : m.objs)
        if (o.tangle.nb != 1 || o.tangle.nt != 1)
            throw std::invalid_argument("trace_class: expected a (1,1)-tangle complex");
    if (!verify_chain_map(m, m, f))
        throw std::invalid_argument("trace_class: not a closed endomorphism");
    Complex<F> c0 = ck_complex<F>(0), c1 = ck_complex<F>(1);
    detail::TraceWorld<F> w;
    w.obs = {&m, &c0, &c1};
    std::vector<F> target = w.reduced_class(0, f);
    int dim = static_cast<int>(target.size());

    auto els = detail::trace_basis_elements<F>();
    std::vector<int> matching;
    std::vector<std::vector<F>> cols;
    for (size_t n = 0; n < els.size(); ++n) {
        auto& e = els[n];
        if (e.dh != f.dh || e.dq != f.dq) continue;
        cols.push_back(w.reduced_class(1 + e.l, e.rep));
        matching.push_back(static_cast<int>(n));
    }
    Matrix<F> gen(dim, static_cast<int>(cols.size()));
    for (int c = 0; c < static_cast<int>(cols.size()); ++c)
        for (int r = 0; r < dim; ++r) gen(r, c) = cols[c][r];
    auto x = solve(gen, target);
    if (!x) throw TraceError("trace class lies outside the Id/RX span");
    std::array<F, 4> out{F(0), F(0), F(0), F(0)};
    for (size_t n = 0; n < matching.size(); ++n) out[matching[n]] = (*x)[n];
    return out;
}

// The trace classes of the p-point 3-ball categories, p in {0, 1}. For p = 1
// the category is generated by C_0 and C_1 and the answer is
// {Id_C0 (0,0), Id_C1 (0,0), RX_C0 (0,2), RX_C1 (1,4)}; this is computed (the
// quotient dimension by the commutator span is verified in every bidegree the
// endo spaces support), not hardcoded.
template <class F>
std::vector<HH0Class> hh0_two_point() {
    Complex<F> c0 = ck_complex<F>(0), c1 = ck_complex<F>(1);
    detail::TraceWorld<F> w;
    w.obs = {&c0, &c1};
    auto els = detail::trace_basis_elements<F>();
    std::map<std::pair<int, int>, std::vector<size_t>> expect;
    for (size_t n = 0; n < els.size(); ++n) expect[{els[n].dh, els[n].dq}].push_back(n);
    std::set<std::pair<int, int>> grid = w.support(0, 0);
    for (auto& d : w.support(1, 1)) grid.insert(d);
    std::vector<HH0Class> out;
    for (auto& [dh, dq] : grid) {
        const auto& t = w.tau(dh, dq);
        int dim = t.dim - t.comm.dim();
        auto it = expect.find({dh, dq});
        int want = it == expect.end() ? 0 : static_cast<int>(it->second.size());
        if (dim != want) throw TraceError("hh0: unexpected trace space dimension");
        if (!want) continue;
        RowSpan<F> check = t.comm;
        for (size_t n : it->second) {
            auto& e = els[n];
            const auto& ee = w.homs(e.l, e.l, dh, dq);
            std::vector<F> v(t.dim, F(0));
            auto pe = ee.project(ee.ambient(e.rep));
            for (size_t x = 0; x < pe.size(); ++x)
                v[t.offset[e.l] + static_cast<int>(x)] = pe[x];
            if (!check.insert(std::move(v)))
                throw TraceError("hh0: a basis class vanishes in the quotient");
            out.push_back({e.label, e.l, {-e.dh, e.dq}});
        }
    }
    std::sort(out.begin(), out.end(), [](const HH0Class& a, const HH0Class& b) {
        return std::tuple(a.bidegree, a.label) < std::tuple(b.bidegree, b.label);
    });
    return out;
}

template <class F>
std::vector<HH0Class> hh0_points(int p) {
    if (p == 1) return hh0_two_point<F>();
    if (p != 0) throw std::invalid_argument("hh0_points: only p in {0, 1} is exact");
    // Empty boundary: one object, scalar endomorphisms, a single identity
    // class. Still computed rather than asserted.
    Complex<F> unit;
    unit.objs.push_back({0, 0, identity_tangle(0)});
    detail::TraceWorld<F> w;
    w.obs = {&unit};
    for (auto& d : w.support(0, 0)) {
        const auto& t = w.tau(d.first, d.second);
        int dim = t.dim - t.comm.dim();
        if (dim != (d == std::pair(0, 0) ? 1 : 0))
            throw TraceError("hh0: unexpected trace space dimension");
    }
    return {{"Id_empty", -1, {0, 0}}};
}

// ===========================================================================
// Decomposition of minimal (1,1)-tangle complexes into C_k blocks.
//
// In a minimal complex every object is the bare arc and every differential
// entry is a multiple of the dotted identity (an identity component would be
// invertible and eliminable). Such a differential preserves the diagonals
// q + 2h = const and is a plain matrix over the field on each one, so the
// complex is a representation of a linear quiver; its interval decomposition
// (computed from composite ranks) is exactly the C_k block structure.
// ===========================================================================

struct CkPattern {
    int k = 0;
    int homShift = 0;
    int qShift = 0;
    int multiplicity = 0;
    friend auto operator<=>(const CkPattern&, const CkPattern&) = default;
};

// Raised when blocks longer than C_1 appear; carries everything that was
// found so the caller can inspect the violation.
class CkPatternError : public std::runtime_error {
  public:
    CkPatternError(const std::string& msg, std::vector<CkPattern> found)
        : std::runtime_error(msg), found_(std::move(found)) {}
    const std::vector<CkPattern>& found() const { return found_; }

  private:
    std::vector<CkPattern> found_;
};

template <class F>
std::vector<CkPattern> decompose_complex_11(const Complex<F>& m) {
    FlatTangle arc = identity_tangle(1);
    CobShape dot = identity_shape(arc);
    dot.dots[0] = 1;
    for (auto& o : m.objs)
        if (!(o.tangle == arc))
            throw std::invalid_argument("decompose_11: objects must be bare arcs");

    std::map<int, std::map<int, std::vector<int>>> diag; // diagonal -> h -> objects
    for (int i = 0; i < m.nobj(); ++i)
        diag[m.objs[i].q + 2 * m.objs[i].h][m.objs[i].h].push_back(i);
    std::map<int, int> slot; // object -> position within its (diagonal, h) group
    for (auto& [c, byh] : diag)
        for (auto& [h, ids] : byh)
            for (size_t n = 0; n < ids.size(); ++n) slot[ids[n]] = static_cast<int>(n);

    std::map<std::pair<int, int>, Matrix<F>> mats; // (diagonal, h) -> M_h
    for (auto& [c, byh] : diag)
        for (auto& [h, ids] : byh) {
            auto next = byh.find(h + 1);
            mats.emplace(std::pair(c, h),
                         Matrix<F>(next == byh.end() ? 0
                                                     : static_cast<int>(next->second.size()),
                                   static_cast<int>(ids.size())));
        }
    for (auto& [ij, v] : m.d) {
        const Obj& a = m.objs[ij.first];
        const Obj& b = m.objs[ij.second];
        F co(0);
        for (auto& [sh, x] : v.terms) {
            if (!(sh == dot))
                throw std::invalid_argument("decompose_11: complex is not minimal");
            co = x;
        }
        int c = a.q + 2 * a.h;
        assert(b.q + 2 * b.h == c && b.h == a.h + 1);
        mats.at({c, a.h})(slot[ij.second], slot[ij.first]) = co;
    }

    std::vector<CkPattern> out;
    int total = 0;
    bool too_long = false;
    for (auto& [c, byh] : diag) {
        int hmin = byh.begin()->first, hmax = byh.rbegin()->first;
        auto dim_at = [&byh](int h) {
            auto it = byh.find(h);
            return it == byh.end() ? 0 : static_cast<int>(it->second.size());
        };
        // r(a,b) = rank of the composite M_{b-1} ... M_a, r(a,a) = dim_a
        std::map<std::pair<int, int>, int> r;
        for (int a = hmin; a <= hmax; ++a) {
            Matrix<F> prod = Matrix<F>::identity(dim_at(a));
            r[{a, a}] = dim_at(a);
            for (int b = a + 1; b <= hmax; ++b) {
                auto it = mats.find({c, b - 1});
                Matrix<F> step =
                    it != mats.end() ? it->second : Matrix<F>(dim_at(b), dim_at(b - 1));
                prod = step * prod;
                r[{a, b}] = rank(prod);
            }
        }
        auto rr = [&](int a, int b) {
            return (a < hmin || b > hmax || a > b) ? 0 : r.at({a, b});
        };
        // multiplicity of the interval [a, b] by inclusion-exclusion on ranks
        for (int a = hmin; a <= hmax; ++a)
            for (int b = a; b <= hmax; ++b) {
                int mult = rr(a, b) - rr(a - 1, b) - rr(a, b + 1) + rr(a - 1, b + 1);
                if (mult < 0) throw std::logic_error("decompose_11: negative multiplicity");
                if (!mult) continue;
                out.push_back({b - a, a, c - 2 * a, mult});
                total += mult * (b - a + 1);
                if (b - a > 1) too_long = true;
            }
    }
    std::sort(out.begin(), out.end());
    if (total != m.nobj())
        throw std::logic_error("decompose_11: blocks do not account for every object");
    if (too_long)
        throw CkPatternError("decompose_11: a block longer than C_1 appeared", out);
    return out;
}

template <class F>
std::vector<CkPattern> decompose_11(const TangleWord& w) {
    auto sc = scan_word<F>(w);
    if (w.bottom.size() != 1 ||
        sc.vw.width_at(static_cast<int>(w.letters.size())) != 1)
        throw std::invalid_argument("decompose_11: expected a (1,1)-tangle");
    return decompose_complex_11(sc.result);
}

// Bigraded dimensions of the closure of a C_k pattern list: closing C_k
// leaves the kernel of the dot action at the left end and its cokernel at
// the right end, one dimension each.
inline BigradedDims ck_closure_table(const std::vector<CkPattern>& pats) {
    BigradedDims t;
    for (auto& p : pats) {
        t.add(p.homShift, p.qShift + 1, p.multiplicity);
        t.add(p.homShift + p.k, p.qShift - 2 * p.k - 1, p.multiplicity);
    }
    return t;
}

// ===========================================================================
// Lefschetz trace of a homology endomorphism of a closed link.
// ===========================================================================

// The Koszul-graded trace sum_i (-1)^{h_i} phi_ii of an endomorphism of a
// minimal closed-link complex (zero differential, empty-tangle objects).
template <class F>
F lefschetz_trace(const Complex<F>& m, const ChainMap<F>& phi) {
    if (!m.d.empty())
        throw std::invalid_argument("lefschetz_trace: complex is not minimal");
    for (auto& o : m.objs)
        if (o.tangle.npieces() != 0)
            throw std::invalid_argument("lefschetz_trace: not a closed link complex");
    if (phi.dh != 0 || phi.dq != 0) return F(0); // graded trace vanishes off (0,0)
    F tr(0);
    for (int i = 0; i < m.nobj(); ++i) {
        const CobLin<F>* e = phi.entry(i, i);
        if (!e) continue;
        assert(e->terms.size() == 1 && e->terms[0].first.ncomp() == 0);
        tr += (m.objs[i].h % 2) ? -e->terms[0].second : e->terms[0].second;
    }
    return tr;
}

// Movie form: the movie must return to its starting word.
template <class F>
F lefschetz_trace(const Movie<F>& mv) {
    const Complex<F>& s = mv.start_complex();
    const Complex<F>& c = mv.complex();
    bool same = s.nobj() == c.nobj();
    for (int i = 0; same && i < s.nobj(); ++i)
        same = s.objs[i].h == c.objs[i].h && s.objs[i].q == c.objs[i].q &&
               s.objs[i].tangle == c.objs[i].tangle;
    if (!same) throw std::invalid_argument("lefschetz_trace: movie is not an endomorphism");
    return lefschetz_trace(c, mv.map());
}

// ===========================================================================
// K_0 lower bounds from powers of the first braid generator.
// ===========================================================================

struct K0Certificate {
    struct Entry {
        int power = 0;
        // (h, q, tangle key) -> object count. Objects of a minimal complex
        // have local endomorphism rings, so isomorphisms of minimal
        // complexes are slotwise and distinct signatures certify
        // non-isomorphism.
        std::map<std::tuple<int, int, std::string>, int> signature;
        int end0_dim = 0; // dim End^{(0,0)} mod homotopy; 1 certifies indecomposable
    };
    int p = 0;
    int braid_power_max = 0;
    std::vector<Entry> entries;
    std::vector<std::pair<int, int>> collisions; // powers not separated
    int bound = 0; // certified lower bound for dim HH0 in bidegree (0,0)
};

// Minimal complexes of the braid words sigma_1^k, k = 0..braid_power_max, on
// p parallel strands. Every entry with a fresh signature and a local
// (1-dimensional) degree-zero endomorphism space contributes an independent
// identity trace class, so `bound` counts them.
template <class F>
K0Certificate k0_lower_bound(int p, int braid_power_max) {
    if (p < 2 || braid_power_max < 0)
        throw std::invalid_argument("k0_lower_bound: need p >= 2 and braidPowerMax >= 0");
    K0Certificate cert;
    cert.p = p;
    cert.braid_power_max = braid_power_max;
    std::vector<Complex<F>> cxs;
    for (int k = 0; k <= braid_power_max; ++k) {
        TangleWord w;
        w.bottom.assign(p, 1);
        for (int n = 0; n < k; ++n) w.letters.push_back(xpos(1));
        Complex<F> c = scan_word<F>(w).result;
        K0Certificate::Entry e;
        e.power = k;
        for (auto& o : c.objs) ++e.signature[{o.h, o.q, o.tangle.key()}];
        e.end0_dim = hom_mod_homotopy(c, c, 0, 0).dim();
        cert.entries.push_back(std::move(e));
        cxs.push_back(std::move(c));
    }
    int bound = 0;
    for (size_t i = 0; i < cert.entries.size(); ++i) {
        if (cert.entries[i].end0_dim != 1) continue;
        bool fresh = true;
        for (size_t j = 0; j < i; ++j) {
            if (cert.entries[j].signature != cert.entries[i].signature) continue;
            // signature tie: complexes can still be non-isomorphic when no
            // degree-(0,0) maps exist at all in one direction
            if (hom_mod_homotopy(cxs[j], cxs[i], 0, 0).dim() == 0 ||
                hom_mod_homotopy(cxs[i], cxs[j], 0, 0).dim() == 0)
                continue;
            cert.collisions.push_back({static_cast<int>(j), static_cast<int>(i)});
            fresh = false;
        }
        if (fresh) ++bound;
    }
    cert.bound = bound;
    return cert;
}

} // namespace skein

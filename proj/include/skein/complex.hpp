#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "bigraded.hpp"
#include "cobordism.hpp"
#include "field.hpp"
#include "word.hpp"

namespace skein {

// An object of a tangle complex: a flat tangle placed in homological height h
// with accumulated q-shift q. Elements of the delooped object (tangle = a
// bare boundary matching) sit in q-degree exactly q.
struct Obj {
    int h = 0;
    int q = 0;
    FlatTangle tangle;
    auto operator<=>(const Obj&) const = default;
};

// A bounded complex over the dotted cobordism category. The differential is
// stored sparsely as (source index, target index) -> morphism; every entry
// raises h by one and has graded degree zero, i.e. each term's raw degree
// equals q(source) - q(target).
template <class F>
struct Complex {
    std::vector<Obj> objs;
    std::map<std::pair<int, int>, CobLin<F>> d;

    int nobj() const { return static_cast<int>(objs.size()); }

    const CobLin<F>* entry(int i, int j) const {
        auto it = d.find({i, j});
        return it == d.end() ? nullptr : &it->second;
    }
    void set_entry(int i, int j, CobLin<F> v) {
        if (v.is_zero())
            d.erase({i, j});
        else
            d[{i, j}] = std::move(v);
    }

    bool verify_degrees() const {
        for (auto& [ij, f] : d) {
            const Obj& a = objs[ij.first];
            const Obj& b = objs[ij.second];
            if (b.h != a.h + 1) return false;
            for (auto& [shape, coeff] : f.terms) {
                if (shape.src != a.tangle || shape.tgt != b.tangle) return false;
                if (raw_degree(shape) - a.q + b.q != 0) return false;
            }
        }
        return true;
    }

    bool verify_d2() const {
        std::map<std::pair<int, int>, CobLin<F>> acc;
        for (auto& [ij, f] : d) {
            auto lo = d.lower_bound({ij.second, 0});
            for (auto it = lo; it != d.end() && it->first.first == ij.second; ++it) {
                auto key = std::make_pair(ij.first, it->first.second);
                auto [slot, fresh] = acc.try_emplace(key, cob_zero<F>());
                slot->second = slot->second + compose(it->second, f);
            }
        }
        for (auto& [ij, v] : acc)
            if (!v.is_zero()) return false;
        return true;
    }

    bool verify() const { return verify_degrees() && verify_d2(); }

    // bidegree -> object count; meaningful once the complex is minimal
    BigradedDims object_table() const {
        BigradedDims t;
        for (const Obj& o : objs) t.add(o.h, o.q, 1);
        return t;
    }

    Complex shifted(int dh, int dq) const {
        Complex r = *this;
        for (Obj& o : r.objs) {
            o.h += dh;
            o.q += dq;
        }
        return r;
    }
};

// A chain map between two complexes, of homological degree dh and graded
// q-degree dq: entries go from source object i to target object j with
// h_j = h_i + dh, and each term satisfies raw - q_i + q_j = dq.
template <class F>
struct ChainMap {
    int dh = 0;
    int dq = 0;
    std::map<std::pair<int, int>, CobLin<F>> m;

    void set(int i, int j, CobLin<F> v) {
        if (v.is_zero())
            m.erase({i, j});
        else
            m[{i, j}] = std::move(v);
    }
    const CobLin<F>* entry(int i, int j) const {
        auto it = m.find({i, j});
        return it == m.end() ? nullptr : &it->second;
    }
    ChainMap operator*(const F& c) const {
        ChainMap r = *this;
        for (auto it = r.m.begin(); it != r.m.end();) {
            it->second = it->second * c;
            it = it->second.is_zero() ? r.m.erase(it) : std::next(it);
        }
        return r;
    }
    ChainMap operator+(const ChainMap& o) const {
        assert(dh == o.dh && dq == o.dq);
        ChainMap r = *this;
        for (auto& [ij, v] : o.m) {
            auto it = r.m.find(ij);
            if (it == r.m.end()) {
                r.m[ij] = v;
            } else {
                it->second = it->second + v;
                if (it->second.is_zero()) r.m.erase(it);
            }
        }
        return r;
    }
    bool operator==(const ChainMap& o) const { return dh == o.dh && dq == o.dq && m == o.m; }
};

template <class F>
ChainMap<F> identity_map(const Complex<F>& c) {
    ChainMap<F> id;
    for (int i = 0; i < c.nobj(); ++i)
        id.m[{i, i}] = cob_term<F>(identity_shape(c.objs[i].tangle));
    return id;
}

// g after f
template <class F>
ChainMap<F> compose_maps(const ChainMap<F>& g, const ChainMap<F>& f) {
    ChainMap<F> r;
    r.dh = f.dh + g.dh;
    r.dq = f.dq + g.dq;
    for (auto& [ij, a] : f.m) {
        auto lo = g.m.lower_bound({ij.second, 0});
        for (auto it = lo; it != g.m.end() && it->first.first == ij.second; ++it) {
            auto key = std::make_pair(ij.first, it->first.second);
            auto slot = r.m.try_emplace(key, cob_zero<F>()).first;
            slot->second = slot->second + compose(it->second, a);
        }
    }
    for (auto it = r.m.begin(); it != r.m.end();)
        it = it->second.is_zero() ? r.m.erase(it) : std::next(it);
    return r;
}

// d_tgt . f = (-1)^{dh} f . d_src, plus the degree bookkeeping
template <class F>
bool verify_chain_map(const Complex<F>& src, const Complex<F>& tgt, const ChainMap<F>& f) {
    for (auto& [ij, v] : f.m) {
        const Obj& a = src.objs[ij.first];
        const Obj& b = tgt.objs[ij.second];
        if (b.h != a.h + f.dh) return false;
        for (auto& [shape, coeff] : v.terms) {
            if (shape.src != a.tangle || shape.tgt != b.tangle) return false;
            if (raw_degree(shape) - a.q + b.q != f.dq) return false;
        }
    }
    std::map<std::pair<int, int>, CobLin<F>> acc;
    auto accumulate = [&acc](int i, int j, CobLin<F> v) {
        auto slot = acc.try_emplace({i, j}, cob_zero<F>()).first;
        slot->second = slot->second + v;
    };
    for (auto& [ij, v] : f.m) {
        auto lo = tgt.d.lower_bound({ij.second, 0});
        for (auto it = lo; it != tgt.d.end() && it->first.first == ij.second; ++it)
            accumulate(ij.first, it->first.second, compose(it->second, v));
    }
    F sgn = (f.dh % 2) ? F(-1) : F(1);
    for (auto& [ij, v] : src.d) {
        auto lo = f.m.lower_bound({ij.second, 0});
        for (auto it = lo; it != f.m.end() && it->first.first == ij.second; ++it)
            accumulate(ij.first, it->first.second, compose(it->second, v) * (-sgn));
    }
    for (auto& [ij, v] : acc)
        if (!v.is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Koszul tensor: glue the tangles of B on top of the tangles of A.
// ---------------------------------------------------------------------------

template <class F>
CobLin<F> identity_lin(const FlatTangle& t) {
    return cob_term<F>(identity_shape(t));
}

template <class F>
Complex<F> stack_complex(const Complex<F>& A, const Complex<F>& B) {
    Complex<F> r;
    const int nB = B.nobj();
    r.objs.reserve(static_cast<size_t>(A.nobj()) * nB);
    for (const Obj& a : A.objs)
        for (const Obj& b : B.objs)
            r.objs.push_back(
                {a.h + b.h, a.q + b.q, compose_tangles(a.tangle, b.tangle).tangle});
    for (auto& [ij, f] : A.d)
        for (int b = 0; b < nB; ++b)
            r.set_entry(ij.first * nB + b, ij.second * nB + b,
                        stack(f, identity_lin<F>(B.objs[b].tangle)));
    for (auto& [ij, g] : B.d)
        for (int a = 0; a < A.nobj(); ++a) {
            CobLin<F> v = stack(identity_lin<F>(A.objs[a].tangle), g);
            if (A.objs[a].h % 2) v = v * F(-1);
            r.set_entry(a * nB + ij.first, a * nB + ij.second, std::move(v));
        }
    return r;
}

// phi tensor psi, with the Koszul sign (-1)^{dh(psi) * h(a)}. The four
// complexes fix the object indexing: phi : A -> A2, psi : B -> B2, and the
// result maps stack_complex(A, B) -> stack_complex(A2, B2).
template <class F>
ChainMap<F> stack_chainmap(const ChainMap<F>& phi, const ChainMap<F>& psi, const Complex<F>& A,
                           const Complex<F>& B, const Complex<F>& A2, const Complex<F>& B2) {
    ChainMap<F> r;
    r.dh = phi.dh + psi.dh;
    r.dq = phi.dq + psi.dq;
    const int nB = B.nobj(), nB2 = B2.nobj();
    for (auto& [aa, f] : phi.m)
        for (auto& [bb, g] : psi.m) {
            CobLin<F> v = stack(f, g);
            if ((psi.dh * A.objs[aa.first].h) % 2) v = v * F(-1);
            if (!v.is_zero())
                r.set(aa.first * nB + bb.first, aa.second * nB2 + bb.second, std::move(v));
        }
    return r;
}

// ---------------------------------------------------------------------------
// Letter complexes.
// ---------------------------------------------------------------------------

// The complex of a single word letter over `width` strands below it. For a
// crossing, `sign` is its orientation sign; the 0-smoothing of x+ is the
// parallel smoothing, of x- the turnback, the differential is the saddle,
// and the (height, shift) placement depends only on the sign:
//   sign +1:  [ smooth0 {-1} --> smooth1 {-2} ]  at heights 0, 1
//   sign -1:  [ smooth0 {+2} --> smooth1 {+1} ]  at heights -1, 0
template <class F>
Complex<F> letter_complex(const Letter& l, int width, int sign) {
    Complex<F> c;
    switch (l.g) {
        case Gen::Cup:
            c.objs.push_back({0, 0, cup_tangle(width, l.pos)});
            return c;
        case Gen::Cap:
            c.objs.push_back({0, 0, cap_tangle(width, l.pos)});
            return c;
        case Gen::XPos:
        case Gen::XNeg: {
            assert(sign == 1 || sign == -1);
            FlatTangle par = identity_tangle(width);
            FlatTangle turn = turnback_tangle(width, l.pos);
            FlatTangle s0 = (l.g == Gen::XPos) ? par : turn;
            FlatTangle s1 = (l.g == Gen::XPos) ? turn : par;
            int h0 = (sign > 0) ? 0 : -1;
            int q0 = (sign > 0) ? -1 : 2;
            int q1 = (sign > 0) ? -2 : 1;
            c.objs.push_back({h0, q0, s0});
            c.objs.push_back({h0 + 1, q1, std::move(s1)});
            c.set_entry(0, 1, cob_term<F>(min_shape(c.objs[0].tangle, c.objs[1].tangle)));
            return c;
        }
    }
    assert(false);
    return c;
}

// ---------------------------------------------------------------------------
// Simplification: deloop every circle, then cancel invertible entries.
// ---------------------------------------------------------------------------

template <class F>
struct Simplified {
    Complex<F> c;
    ChainMap<F> p; // original -> simplified
    ChainMap<F> s; // simplified -> original  (p after s is the identity)
};

namespace detail {

// Working state for one simplification pass, with stable object slots and a
// reverse index of the differential for column access.
template <class F>
struct SimplifyState {
    std::vector<Obj> objs;
    std::vector<char> alive;
    std::map<std::pair<int, int>, CobLin<F>> d;
    std::map<int, std::set<int>> in_of; // target -> sources
    bool track = false;
    std::map<std::pair<int, int>, CobLin<F>> p; // original -> current
    std::map<std::pair<int, int>, CobLin<F>> s; // current -> original

    void d_set(int i, int j, CobLin<F> v) {
        if (v.is_zero()) {
            d.erase({i, j});
            auto it = in_of.find(j);
            if (it != in_of.end()) {
                it->second.erase(i);
                if (it->second.empty()) in_of.erase(it);
            }
        } else {
            d[{i, j}] = std::move(v);
            in_of[j].insert(i);
        }
    }
    void d_add(int i, int j, const CobLin<F>& v) {
        auto it = d.find({i, j});
        if (it == d.end()) {
            d_set(i, j, v);
        } else {
            it->second = it->second + v;
            if (it->second.is_zero()) d_set(i, j, cob_zero<F>());
        }
    }
    std::vector<std::pair<int, CobLin<F>>> row(int i) const {
        std::vector<std::pair<int, CobLin<F>>> r;
        for (auto it = d.lower_bound({i, 0}); it != d.end() && it->first.first == i; ++it)
            r.push_back({it->first.second, it->second});
        return r;
    }
    std::vector<std::pair<int, CobLin<F>>> col(int j) const {
        std::vector<std::pair<int, CobLin<F>>> r;
        auto it = in_of.find(j);
        if (it == in_of.end()) return r;
        for (int i : it->second) r.push_back({i, d.at({i, j})});
        return r;
    }

    // Replace object k (tangle with a circle) by two circle-free copies.
    void deloop(int k) {
        const Obj o = objs[k]; // by value: the push_backs below reallocate
        FlatTangle small = drop_circle(o.tangle, 0);
        int km = static_cast<int>(objs.size());
        int kp = km + 1;
        objs.push_back({o.h, o.q - 1, small});
        objs.push_back({o.h, o.q + 1, small});
        alive.push_back(1);
        alive.push_back(1);

        auto pi_m = cob_term<F>(death_shape(o.tangle, 0, true));
        auto pi_p = cob_term<F>(death_shape(o.tangle, 0, false));
        auto io_m = cob_term<F>(birth_shape(o.tangle, 0, false));
        auto io_p = cob_term<F>(birth_shape(o.tangle, 0, true));

        for (auto& [a, f] : col(k)) {
            d_set(a, km, compose(pi_m, f));
            d_set(a, kp, compose(pi_p, f));
            d_set(a, k, cob_zero<F>());
        }
        for (auto& [b, g] : row(k)) {
            d_set(km, b, compose(g, io_m));
            d_set(kp, b, compose(g, io_p));
            d_set(k, b, cob_zero<F>());
        }
        alive[k] = 0;

        if (track) {
            for (auto it = p.lower_bound({0, 0}); it != p.end();) {
                if (it->first.second == k) {
                    int o2 = it->first.first;
                    CobLin<F> v = it->second;
                    it = p.erase(it);
                    p[{o2, km}] = compose(pi_m, v);
                    p[{o2, kp}] = compose(pi_p, v);
                } else {
                    ++it;
                }
            }
            for (auto it = s.lower_bound({k, 0}); it != s.end() && it->first.first == k;) {
                int o2 = it->first.second;
                CobLin<F> v = it->second;
                it = s.erase(it);
                auto vm = compose(v, io_m);
                auto vp = compose(v, io_p);
                if (!vm.is_zero()) s[{km, o2}] = std::move(vm);
                if (!vp.is_zero()) s[{kp, o2}] = std::move(vp);
            }
        }
    }

    // Cancel the invertible entry i -> j.
    void eliminate(int i, int j, const F& coeff) {
        CobLin<F> inv = cob_term<F>(identity_shape(objs[i].tangle), field_inverse(coeff));
        auto outs = row(i); // i -> b
        auto ins = col(j);  // a -> j
        for (auto& [a, g] : ins) {
            if (a == i) continue;
            CobLin<F> through = compose(inv, g); // a -> i
            for (auto& [b, f] : outs) {
                if (b == j) continue;
                d_add(a, b, compose(f, through) * F(-1));
            }
        }
        if (track) {
            // p: entries landing on j pick up the correction through i
            std::vector<std::pair<int, CobLin<F>>> pj;
            for (auto it = p.begin(); it != p.end();) {
                if (it->first.second == j) {
                    pj.push_back({it->first.first, it->second});
                    it = p.erase(it);
                } else if (it->first.second == i) {
                    it = p.erase(it);
                } else {
                    ++it;
                }
            }
            for (auto& [o2, v] : pj)
                for (auto& [b, f] : outs) {
                    if (b == j) continue;
                    CobLin<F> add = compose(compose(f, inv), v) * F(-1);
                    if (add.is_zero()) continue;
                    auto slot = p.try_emplace({o2, b}, cob_zero<F>()).first;
                    slot->second = slot->second + add;
                    if (slot->second.is_zero()) p.erase({o2, b});
                }
            // s: rows of the sources feeding j pick up the correction
            std::vector<std::pair<int, CobLin<F>>> si;
            for (auto it = s.lower_bound({i, 0}); it != s.end() && it->first.first == i; ++it)
                si.push_back({it->first.second, it->second});
            s.erase(s.lower_bound({i, 0}), s.lower_bound({i + 1, 0}));
            s.erase(s.lower_bound({j, 0}), s.lower_bound({j + 1, 0}));
            for (auto& [a, g] : ins) {
                if (a == i) continue;
                CobLin<F> through = compose(inv, g) * F(-1); // a -> i
                for (auto& [o2, v] : si) {
                    CobLin<F> add = compose(v, through);
                    if (add.is_zero()) continue;
                    auto slot = s.try_emplace({a, o2}, cob_zero<F>()).first;
                    slot->second = slot->second + add;
                    if (slot->second.is_zero()) s.erase({a, o2});
                }
            }
        }
        for (auto& [b, f] : outs) d_set(i, b, cob_zero<F>());
        for (auto& [a, g] : ins) d_set(a, j, cob_zero<F>());
        for (auto& [a, g] : col(i)) d_set(a, i, cob_zero<F>());
        for (auto& [b, f] : row(j)) d_set(j, b, cob_zero<F>());
        alive[i] = alive[j] = 0;
    }
};

} // namespace detail

// Simplify to a minimal representative: deloop every circle, then repeatedly
// cancel entries that are invertible multiples of the identity. When track
// is set, the returned p and s are mutually inverse-up-to-homotopy chain
// equivalences with p . s = id exactly. A seeded rng, if given, picks the
// elimination order at random (the result is equivalent either way).
template <class F>
Simplified<F> simplify(const Complex<F>& input, bool track = false,
                       std::mt19937* rng = nullptr) {
    detail::SimplifyState<F> st;
    st.objs = input.objs;
    st.alive.assign(st.objs.size(), 1);
    st.d = input.d;
    for (auto& [ij, v] : input.d) st.in_of[ij.second].insert(ij.first);
    st.track = track;
    if (track)
        for (int i = 0; i < input.nobj(); ++i) {
            auto id = cob_term<F>(identity_shape(st.objs[i].tangle));
            st.p[{i, i}] = id;
            st.s[{i, i}] = id;
        }

    // deloop until no object carries a circle (new objects are appended and
    // revisited, so nested circles unwind too)
    for (int k = 0; k < static_cast<int>(st.objs.size()); ++k)
        if (st.alive[k] && st.objs[k].tangle.circles > 0) st.deloop(k);

    // Gaussian elimination
    for (;;) {
        std::pair<int, int> pick{-1, -1};
        F coeff{};
        if (rng) {
            std::vector<std::pair<std::pair<int, int>, F>> cands;
            for (auto& [ij, v] : st.d)
                if (auto c = identity_coefficient(v)) cands.push_back({ij, *c});
            if (!cands.empty()) {
                auto& chosen = cands[(*rng)() % cands.size()];
                pick = chosen.first;
                coeff = chosen.second;
            }
        } else {
            for (auto& [ij, v] : st.d)
                if (auto c = identity_coefficient(v)) {
                    pick = ij;
                    coeff = *c;
                    break;
                }
        }
        if (pick.first < 0) break;
        st.eliminate(pick.first, pick.second, coeff);
    }

    // compact and sort canonically
    std::vector<int> keep;
    for (int k = 0; k < static_cast<int>(st.objs.size()); ++k)
        if (st.alive[k]) keep.push_back(k);
    std::stable_sort(keep.begin(), keep.end(),
                     [&st](int a, int b) { return st.objs[a] < st.objs[b]; });
    std::vector<int> new_of(st.objs.size(), -1);
    Simplified<F> out;
    for (size_t n = 0; n < keep.size(); ++n) {
        new_of[keep[n]] = static_cast<int>(n);
        out.c.objs.push_back(st.objs[keep[n]]);
    }
    for (auto& [ij, v] : st.d) {
        assert(new_of[ij.first] >= 0 && new_of[ij.second] >= 0);
        out.c.d[{new_of[ij.first], new_of[ij.second]}] = v;
    }
    if (track) {
        for (auto& [ij, v] : st.p) out.p.m[{ij.first, new_of[ij.second]}] = v;
        for (auto& [ij, v] : st.s) out.s.m[{new_of[ij.first], ij.second}] = v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scanning a word into its simplified complex.
// ---------------------------------------------------------------------------

template <class F>
struct ScanStep {
    Complex<F> before; // stack_complex(prev, letter complex), unsimplified
    ChainMap<F> p;     // before -> after
    ChainMap<F> s;     // after -> before
};

template <class F>
struct Scan {
    ValidatedWord vw;
    Complex<F> result;
    std::vector<Complex<F>> prefix;   // simplified complex after each letter (track only)
    std::vector<ScanStep<F>> steps;   // per-letter transports (track only)
};

template <class F>
Scan<F> scan_word(const TangleWord& w, bool track = false, std::mt19937* rng = nullptr) {
    Scan<F> r;
    r.vw = validate(w);
    Complex<F> cur;
    cur.objs.push_back({0, 0, identity_tangle(static_cast<int>(w.bottom.size()))});
    {
        auto s0 = simplify(cur, false);
        cur = std::move(s0.c);
    }
    for (size_t k = 0; k < w.letters.size(); ++k) {
        Complex<F> letter =
            letter_complex<F>(w.letters[k], r.vw.width_at(static_cast<int>(k)), r.vw.sign[k]);
        Complex<F> big = stack_complex(cur, letter);
        auto simp = simplify(big, track, rng);
        cur = simp.c;
        if (track) {
            r.steps.push_back({std::move(big), std::move(simp.p), std::move(simp.s)});
            r.prefix.push_back(cur);
        }
    }
    r.result = std::move(cur);
    return r;
}

// Homology of a closed diagram: scan, and read the bidegrees off the minimal
// complex (its differential is necessarily zero over a field).
template <class F>
BigradedDims homology_table(const TangleWord& w) {
    auto sc = scan_word<F>(w);
    assert(sc.vw.width_at(static_cast<int>(w.letters.size())) == 0);
    assert(sc.result.d.empty());
    return sc.result.object_table();
}

} // namespace skein

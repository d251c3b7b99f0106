#pragma once

#include <cassert>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "movie.hpp"

namespace skein {

// How many parallel copies to take of each companion component: k_minus
// strands running against the component's orientation and k_plus running
// with it, in canonical component order. At every cup block the reversed
// strands form the outer layers, so strand 1 is outermost.
struct CableSpec {
    std::vector<std::pair<int, int>> per;

    int width(int i) const { return per[i].first + per[i].second; }
};

inline CableSpec identity_cabling(int ncomp) {
    CableSpec s;
    s.per.assign(ncomp, {0, 1});
    return s;
}

namespace detail {

struct CableLayout {
    int ncomp = 0;
    std::vector<int> width, kminus, excess;
    // Letter index of strand t's cup at each component's first cup block.
    // Strand t is the t-th copy counted from the outside there; the copies
    // stay parallel, so this one cup identifies the whole circle.
    std::vector<std::vector<size_t>> strand_cup;
};

// Blow each companion strand up into its cable. A cup at position p becomes
// the nested block cup(P), ..., cup(P+c-1): strand k of the cable gets its
// legs at local positions k and 2c+1-k, so passing through any cup or cap
// reverses the transverse order, which is exactly how parallel copies ride
// an untwisted band. A cap closes the block from the inside out, a crossing
// carries the whole left group over the whole right group. The blackboard
// framing this produces differs from the requested framing by the excess
// framing[i] - self_writhe[i], spent as full twists (s1...s{c-1})^c on the
// right-hand legs of the component's first cup block; on fewer than two
// strands a full twist is invisible and is skipped.
inline std::pair<TangleWord, CableLayout> cable_build(const TangleWord& w, const CableSpec& spec) {
    if (!w.bottom.empty()) throw std::invalid_argument("cable: expected a closed diagram");
    ValidatedWord vw = validate(w);
    if (static_cast<int>(spec.per.size()) != vw.n_components)
        throw std::invalid_argument("cable: need one (k-, k+) pair per component");
    for (auto& [km, kp] : spec.per)
        if (km < 0 || kp < 0) throw std::invalid_argument("cable: cable weights must be >= 0");

    CableLayout lay;
    lay.ncomp = vw.n_components;
    lay.width.resize(lay.ncomp);
    lay.kminus.resize(lay.ncomp);
    lay.excess.resize(lay.ncomp);
    lay.strand_cup.resize(lay.ncomp);
    for (int i = 0; i < lay.ncomp; ++i) {
        lay.width[i] = spec.width(i);
        lay.kminus[i] = spec.per[i].first;
        lay.excess[i] = (w.framing.empty() ? 0 : w.framing[i]) - vw.self_writhe[i];
    }

    TangleWord out;
    std::vector<int> widths; // cable width of each current original strand
    auto base = [&](int pos) {
        int b = 1;
        for (int q = 0; q + 1 < pos; ++q) b += widths[q];
        return b;
    };
    std::vector<bool> seen(lay.ncomp, false);

    for (size_t k = 0; k < w.letters.size(); ++k) {
        const Letter& l = w.letters[k];
        int P = base(l.pos);
        switch (l.g) {
        case Gen::Cup: {
            int i = vw.comp_of_letter[k];
            int c = lay.width[i];
            bool first = !seen[i];
            if (first) {
                seen[i] = true;
                lay.strand_cup[i].resize(c);
                for (int t = 0; t < c; ++t)
                    lay.strand_cup[i][t] = out.letters.size() + static_cast<size_t>(t);
            }
            for (int t = 0; t < c; ++t)
                out.letters.push_back(cup(P + t, t < lay.kminus[i] ? !l.left_up : l.left_up));
            widths.insert(widths.begin() + (l.pos - 1), {c, c});
            if (first && lay.excess[i] != 0 && c >= 2) {
                Gen g = lay.excess[i] > 0 ? Gen::XPos : Gen::XNeg;
                int reps = lay.excess[i] > 0 ? lay.excess[i] : -lay.excess[i];
                for (int r = 0; r < reps; ++r)
                    for (int s = 0; s < c; ++s)
                        for (int j = 1; j < c; ++j)
                            out.letters.push_back({g, P + c + j - 1, false});
            }
            break;
        }
        case Gen::Cap: {
            int c = widths[l.pos - 1];
            assert(widths[l.pos] == c); // a cap joins two strands of one component
            for (int t = c - 1; t >= 0; --t) out.letters.push_back(cap(P + t));
            widths.erase(widths.begin() + (l.pos - 1), widths.begin() + (l.pos + 1));
            break;
        }
        case Gen::XPos:
        case Gen::XNeg: {
            int a = widths[l.pos - 1], b = widths[l.pos];
            for (int t = a; t >= 1; --t)
                for (int j = 0; j < b; ++j) out.letters.push_back({l.g, P + t - 1 + j, false});
            std::swap(widths[l.pos - 1], widths[l.pos]);
            break;
        }
        }
    }
    return {std::move(out), std::move(lay)};
}

inline void require_flat(const TangleWord& w, const char* who) {
    for (const Letter& l : w.letters)
        if (l.g == Gen::XPos || l.g == Gen::XNeg)
            throw std::invalid_argument(std::string(who) +
                                        ": supported only for crossing-free cable words");
}

// A crossing-free closed word scanned twice: folded into its minimal complex
// with the per-letter deloop data retained, and composed without folding into
// the one diagram `full` holding every circle. circle_of_cup traces the arc
// born by each cup letter to its circle index in `full`; that indexing agrees
// with the stacked complex because both run compose_tangles over the letters
// in word order.
template <class F>
struct ClosedScan {
    Complex<F> min;
    std::vector<LetterFold<F>> folds;
    FlatTangle full;
    std::vector<int> circle_of_cup;
};

template <class F>
ClosedScan<F> closed_scan(const TangleWord& w) {
    assert(w.bottom.empty());
    ValidatedWord vw = validate(w);
    ClosedScan<F> r;
    Complex<F> cur;
    cur.objs.push_back({0, 0, identity_tangle(0)});
    r.folds = fold_tracked(cur, w, vw, 0, w.letters.size());
    r.min = std::move(cur);

    r.full = identity_tangle(0);
    r.circle_of_cup.assign(w.letters.size(), -1);
    std::vector<int> piece(w.letters.size(), -1);
    for (size_t k = 0; k < w.letters.size(); ++k) {
        const Letter& l = w.letters[k];
        assert(l.g == Gen::Cup || l.g == Gen::Cap);
        int width = vw.width_at(static_cast<int>(k));
        FlatTangle L = l.g == Gen::Cup ? cup_tangle(width, l.pos) : cap_tangle(width, l.pos);
        auto res = compose_tangles(r.full, L);
        for (size_t j = 0; j < k; ++j)
            if (piece[j] >= 0) piece[j] = res.piece_of_s[piece[j]];
        if (l.g == Gen::Cup) piece[k] = res.piece_of_t[L.arc_of_point()[L.nb + l.pos - 1]];
        r.full = std::move(res.tangle);
    }
    assert(r.full.narcs() == 0);
    for (size_t k = 0; k < w.letters.size(); ++k) r.circle_of_cup[k] = piece[k];
    return r;
}

// Conjugate one cobordism between the full diagrams into the minimal
// complexes: unsimplify the source, apply it on the unique resolution,
// resimplify the target.
template <class F>
ChainMap<F> through_full(const ClosedScan<F>& src, const ClosedScan<F>& tgt, const CobShape& sh,
                         int dq) {
    ChainMap<F> rho;
    rho.dq = dq;
    rho.set(0, 0, cob_term<F>(sh));
    ChainMap<F> S = src.folds.empty() ? identity_map(src.min) : unsimplify_map(src.folds);
    ChainMap<F> P = tgt.folds.empty() ? identity_map(tgt.min) : simplify_map(tgt.folds);
    return compose_maps(P, compose_maps(rho, S));
}

} // namespace detail

inline TangleWord cable(const TangleWord& w, const CableSpec& spec) {
    return detail::cable_build(w, spec).first;
}

// A map between the complexes of two cables of one companion, carried by a
// single cobordism. Both complexes come from the canonical cable words, so
// they are reproducible across calls with the same arguments.
template <class F>
struct CableMap {
    Complex<F> src, tgt;
    ChainMap<F> map;
};

// The annulus map from the level-(k-,k+) cable of component `comp` to its
// level-(k-+1,k++1) cable. The two new copies bound the annulus they were
// pushed off along; sweeping it into the collar leaves identity cylinders
// on the old copies and one bent annulus, carrying `dots` dots, whose whole
// boundary is the new antiparallel pair at the orientation interface. Only
// crossing-free cable words are supported: there the diagram has a unique
// resolution, on which the cobordism acts literally.
template <class F>
CableMap<F> annulus_map(const TangleWord& companion, const CableSpec& level, int comp, int dots) {
    if (dots < 0) throw std::invalid_argument("annulus_map: dots must be >= 0");
    auto [word, lay] = detail::cable_build(companion, level);
    if (comp < 0 || comp >= lay.ncomp)
        throw std::invalid_argument("annulus_map: no such component");
    detail::require_flat(word, "annulus_map");

    CableSpec up = level;
    up.per[comp].first += 1;
    up.per[comp].second += 1;
    auto [tword, tlay] = detail::cable_build(companion, up);
    detail::require_flat(tword, "annulus_map");

    auto s = detail::closed_scan<F>(word);
    auto t = detail::closed_scan<F>(tword);

    CobShape sh;
    sh.src = s.full;
    sh.tgt = t.full;
    sh.comp.assign(static_cast<size_t>(s.full.npieces() + t.full.npieces()), -1);
    int next = 0;
    const int off = s.full.npieces();
    for (int i = 0; i < lay.ncomp; ++i)
        for (int u = 0; u < lay.width[i]; ++u) {
            // the new pair is born between the blocks, at depths k-, k- + 1
            int v = (i == comp && u >= lay.kminus[i]) ? u + 2 : u;
            sh.comp[s.circle_of_cup[lay.strand_cup[i][u]]] = next;
            sh.comp[off + t.circle_of_cup[tlay.strand_cup[i][v]]] = next;
            ++next;
        }
    int band = next++;
    sh.comp[off + t.circle_of_cup[tlay.strand_cup[comp][lay.kminus[comp]]]] = band;
    sh.comp[off + t.circle_of_cup[tlay.strand_cup[comp][lay.kminus[comp] + 1]]] = band;
    sh.dots.assign(static_cast<size_t>(next), 0);
    sh.dots[band] = static_cast<uint8_t>(dots);
    sh.canonicalize();

    ChainMap<F> phi = detail::through_full(s, t, sh, 2 * dots);
    return {std::move(s.min), std::move(t.min), std::move(phi)};
}

// The cable braid group acting on the cable's complex. Rotating the disk
// fiber to swap the adjacent copies j, j+1 traces out crossed cylinders on
// those two circles; everything else rides along as a product. On parallel
// copies the single half-rotation s_j is orientation-preserving and acts as
// that transposition; the action squares to the identity, so s_j and its
// inverse act alike. At the orientation interface j == k- only the full
// rotation s_j^2 preserves orientations, and it acts as the identity.
template <class F>
CableMap<F> braid_generator_map(const TangleWord& companion, const CableSpec& level, int comp,
                                int j) {
    auto [word, lay] = detail::cable_build(companion, level);
    if (comp < 0 || comp >= lay.ncomp)
        throw std::invalid_argument("braid_generator_map: no such component");
    if (j < 1 || j >= lay.width[comp])
        throw std::invalid_argument("braid_generator_map: generator index out of range");
    detail::require_flat(word, "braid_generator_map");

    auto s = detail::closed_scan<F>(word);
    if (j == lay.kminus[comp]) return {s.min, s.min, identity_map(s.min)};

    CobShape sh = identity_shape(s.full);
    int c1 = s.circle_of_cup[lay.strand_cup[comp][j - 1]];
    int c2 = s.circle_of_cup[lay.strand_cup[comp][j]];
    std::swap(sh.comp[s.full.npieces() + c1], sh.comp[s.full.npieces() + c2]);
    sh.canonicalize();

    ChainMap<F> phi = detail::through_full(s, s, sh, 0);
    return {s.min, s.min, std::move(phi)};
}

} // namespace skein

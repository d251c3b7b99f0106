#pragma once

#include <cassert>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "tangle.hpp"

namespace skein {

// Morse-position tangle words. Positions are 1-based; a letter acts on the
// strand positions named. Orientations are tracked as +1 (up) / -1 (down)
// per position.
//
// Crossing letters: `x+ p` means the strand entering from the bottom-left
// passes over; `x- p` the bottom-left strand passes under. The oriented sign
// of a crossing is eps_p * eps_{p+1} * (+1 for x+, -1 for x-), where the eps
// are the marks below the crossing. Two upward strands make x+ a positive
// crossing.
enum class Gen : uint8_t { Cup, Cap, XPos, XNeg };

struct Letter {
    Gen g;
    int pos;             // 1-based
    bool left_up = true; // cups only: orientation of the left leg

    bool operator==(const Letter&) const = default;
};

inline Letter cup(int pos, bool left_up) { return {Gen::Cup, pos, left_up}; }
inline Letter cap(int pos) { return {Gen::Cap, pos, false}; }
inline Letter xpos(int pos) { return {Gen::XPos, pos, false}; }
inline Letter xneg(int pos) { return {Gen::XNeg, pos, false}; }

struct WordError : std::runtime_error {
    int letter_index; // -1 = header
    WordError(std::string m, int idx) : std::runtime_error(std::move(m)), letter_index(idx) {}
};

struct TangleWord {
    std::vector<int8_t> bottom; // orientation marks of the bottom boundary
    std::vector<Letter> letters;
    std::vector<int> framing;   // per component (canonical order); empty = all 0

    bool operator==(const TangleWord&) const = default;
};

// Everything derivable from a word in one validation sweep.
struct ValidatedWord {
    std::vector<std::vector<int8_t>> orient; // orient[k] = marks at height k (size L+1)
    std::vector<int> sign;                   // per letter; 0 for cups/caps
    int n_plus = 0, n_minus = 0;
    int n_components = 0;
    std::vector<int> comp_of_bottom;         // bottom position (0-based) -> component
    std::vector<int> comp_of_top;
    std::vector<int> comp_of_letter;         // crossings: component of the lower-left strand;
                                             // cups: component of the born strand; caps: -1
    std::vector<int> comp_of_letter_right;   // crossings: component of the lower-right strand
    std::vector<int> self_writhe;            // per component

    int width_at(int k) const { return static_cast<int>(orient[k].size()); }
    int writhe() const { return n_plus - n_minus; }
};

inline ValidatedWord validate(const TangleWord& w) {
    ValidatedWord v;
    v.orient.push_back(w.bottom);
    v.sign.assign(w.letters.size(), 0);
    v.comp_of_letter.assign(w.letters.size(), -1);
    v.comp_of_letter_right.assign(w.letters.size(), -1);

    // Sweep once, tracking orientation marks and a strand-segment id per
    // position; segments are united into components as letters join them.
    int total = static_cast<int>(w.bottom.size());
    std::vector<int> par(total);
    std::iota(par.begin(), par.end(), 0);
    auto find = [&](int x) {
        while (par[x] != x) x = par[x] = par[par[x]];
        return x;
    };
    auto unite = [&](int a, int b) { par[find(a)] = find(b); };

    std::vector<int8_t> cur = w.bottom;
    std::vector<int> cur_seg(w.bottom.size());
    std::iota(cur_seg.begin(), cur_seg.end(), 0);

    for (size_t k = 0; k < w.letters.size(); ++k) {
        const Letter& l = w.letters[k];
        int n = static_cast<int>(cur.size());
        int li = static_cast<int>(k);
        switch (l.g) {
        case Gen::Cup: {
            if (l.pos < 1 || l.pos > n + 1) throw WordError("cup position out of range", li);
            int8_t left = l.left_up ? 1 : -1;
            cur.insert(cur.begin() + (l.pos - 1), {left, static_cast<int8_t>(-left)});
            v.comp_of_letter[k] = total;
            par.push_back(total);
            par.push_back(total); // both legs are one strand
            cur_seg.insert(cur_seg.begin() + (l.pos - 1), {total, total + 1});
            total += 2;
            break;
        }
        case Gen::Cap: {
            if (l.pos < 1 || l.pos > n - 1) throw WordError("cap position out of range", li);
            if (cur[l.pos - 1] != -cur[l.pos])
                throw WordError("cap joins strands with incompatible orientations", li);
            unite(cur_seg[l.pos - 1], cur_seg[l.pos]);
            cur.erase(cur.begin() + (l.pos - 1), cur.begin() + (l.pos + 1));
            cur_seg.erase(cur_seg.begin() + (l.pos - 1), cur_seg.begin() + (l.pos + 1));
            break;
        }
        case Gen::XPos:
        case Gen::XNeg: {
            if (l.pos < 1 || l.pos > n - 1) throw WordError("crossing position out of range", li);
            int s = cur[l.pos - 1] * cur[l.pos] * (l.g == Gen::XPos ? 1 : -1);
            v.sign[k] = s;
            (s > 0 ? v.n_plus : v.n_minus) += 1;
            v.comp_of_letter[k] = cur_seg[l.pos - 1];
            v.comp_of_letter_right[k] = cur_seg[l.pos];
            std::swap(cur[l.pos - 1], cur[l.pos]);
            std::swap(cur_seg[l.pos - 1], cur_seg[l.pos]);
            break;
        }
        }
        v.orient.push_back(cur);
    }

    // canonical component ids in order of first segment occurrence
    std::map<int, int> comp_id;
    auto comp_of = [&](int s) {
        auto [it, fresh] = comp_id.try_emplace(find(s), static_cast<int>(comp_id.size()));
        return it->second;
    };
    for (int s = 0; s < total; ++s) comp_of(s);
    v.n_components = static_cast<int>(comp_id.size());
    v.comp_of_bottom.resize(w.bottom.size());
    for (size_t i = 0; i < w.bottom.size(); ++i)
        v.comp_of_bottom[i] = comp_of(static_cast<int>(i));
    v.comp_of_top.resize(cur_seg.size());
    for (size_t i = 0; i < cur_seg.size(); ++i) v.comp_of_top[i] = comp_of(cur_seg[i]);
    v.self_writhe.assign(v.n_components, 0);
    for (size_t k = 0; k < w.letters.size(); ++k) {
        if (v.comp_of_letter[k] >= 0) v.comp_of_letter[k] = comp_of(v.comp_of_letter[k]);
        if (v.sign[k] == 0) continue;
        v.comp_of_letter_right[k] = comp_of(v.comp_of_letter_right[k]);
        if (v.comp_of_letter[k] == v.comp_of_letter_right[k])
            v.self_writhe[v.comp_of_letter[k]] += v.sign[k];
    }
    if (!w.framing.empty() && static_cast<int>(w.framing.size()) != v.n_components)
        throw WordError("framing list length differs from component count", -1);
    return v;
}

inline bool is_closed(const TangleWord& w, const ValidatedWord& v) {
    return w.bottom.empty() && v.orient.back().empty();
}

// --- builders ---------------------------------------------------------------

// Closure of a braid word on s strands: braid[i] = +-j for sigma_j^{+-1}.
// The closure strands run down positions 1..s and up s+1..2s.
inline TangleWord braid_closure(int s, const std::vector<int>& braid) {
    TangleWord w;
    for (int i = 1; i <= s; ++i) w.letters.push_back(cup(i, false));
    for (int b : braid) {
        int j = b > 0 ? b : -b;
        assert(j >= 1 && j < s);
        w.letters.push_back(b > 0 ? xpos(s + j) : xneg(s + j));
    }
    for (int i = s; i >= 1; --i) w.letters.push_back(cap(i));
    return w;
}

// Mirror: swap crossing types, negate framings.
inline TangleWord mirror(const TangleWord& w) {
    TangleWord m = w;
    for (Letter& l : m.letters) {
        if (l.g == Gen::XPos) l.g = Gen::XNeg;
        else if (l.g == Gen::XNeg) l.g = Gen::XPos;
    }
    for (int& f : m.framing) f = -f;
    return m;
}

// 4-plat closure of a two-bridge word given by a continued fraction
// [a1, a2, ...]: twist regions alternate between positions 2 and 1,
// with alternating crossing types so the diagram is alternating. The plat
// normal form needs an odd number of twist regions; an even-length fraction
// is first rewritten by [..., a] -> [..., a-1, 1] (or the reverse merge when
// a = 1), which preserves the continuant. The cup orientations are the first
// combination consistent with the closed curve.
inline TangleWord two_bridge(std::vector<int> cf) {
    for (int a : cf)
        if (a < 1) throw WordError("two_bridge: entries must be positive", -1);
    if (cf.size() % 2 == 0) {
        if (cf.back() >= 2) {
            cf.back() -= 1;
            cf.push_back(1);
        } else {
            cf.pop_back();
            cf.back() += 1;
        }
    }
    for (int combo = 0; combo < 4; ++combo) {
        TangleWord w;
        w.letters.push_back(cup(1, combo & 1));
        w.letters.push_back(cup(3, combo & 2));
        for (size_t i = 0; i < cf.size(); ++i) {
            bool mid = (i % 2 == 0); // twists at position 2, else position 1
            for (int t = 0; t < cf[i]; ++t)
                w.letters.push_back(mid ? xpos(2) : xneg(1));
        }
        w.letters.push_back(cap(1));
        w.letters.push_back(cap(1));
        try {
            validate(w);
            return w;
        } catch (const WordError&) {
            continue;
        }
    }
    throw WordError("two_bridge: no consistent orientation", -1);
}

// The same 4-plat cut open into a (1,1)-tangle: the strand the final cap
// would close instead enters at the bottom, hangs to the right of the plat
// (cups at 1 and 3 push it to position 5), and joins the remaining pair at
// the top. Closing this tangle back up reproduces two_bridge(cf).
inline TangleWord two_bridge_open(std::vector<int> cf) {
    for (int a : cf)
        if (a < 1) throw WordError("two_bridge_open: entries must be positive", -1);
    if (cf.size() % 2 == 0) {
        if (cf.back() >= 2) {
            cf.back() -= 1;
            cf.push_back(1);
        } else {
            cf.pop_back();
            cf.back() += 1;
        }
    }
    for (int combo = 0; combo < 8; ++combo) {
        TangleWord w;
        w.bottom = {combo & 4 ? int8_t(-1) : int8_t(1)};
        w.letters.push_back(cup(1, combo & 1));
        w.letters.push_back(cup(3, combo & 2));
        for (size_t i = 0; i < cf.size(); ++i) {
            bool mid = (i % 2 == 0);
            for (int t = 0; t < cf[i]; ++t)
                w.letters.push_back(mid ? xpos(2) : xneg(1));
        }
        w.letters.push_back(cap(1));
        w.letters.push_back(cap(2));
        try {
            validate(w);
            return w;
        } catch (const WordError&) {
            continue;
        }
    }
    throw WordError("two_bridge_open: no consistent orientation", -1);
}

// The word as a linear text body (used for hashing and serialization).
inline std::string word_body(const TangleWord& w) {
    std::string s = "bottom";
    if (w.bottom.empty()) s += " -";
    for (int8_t o : w.bottom) s += o > 0 ? " u" : " d";
    s += '\n';
    if (!w.framing.empty()) {
        s += "framing";
        for (int f : w.framing) s += " " + std::to_string(f);
        s += '\n';
    }
    for (const Letter& l : w.letters) {
        switch (l.g) {
        case Gen::Cup:
            s += "cup " + std::to_string(l.pos) + (l.left_up ? " u" : " d");
            break;
        case Gen::Cap: s += "cap " + std::to_string(l.pos); break;
        case Gen::XPos: s += "x+ " + std::to_string(l.pos); break;
        case Gen::XNeg: s += "x- " + std::to_string(l.pos); break;
        }
        s += '\n';
    }
    return s;
}

} // namespace skein

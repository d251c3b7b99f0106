#pragma once

#include <cassert>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace skein {

// A crossingless tangle in a rectangle: nb marked points on the bottom edge,
// nt on the top, a perfect matching on them, and a count of closed circles.
// Point indices: 0..nb-1 bottom (left to right), nb..nb+nt-1 top (left to
// right). Circles carry no position data — they only exist transiently
// between a composition and the delooping that removes them; pieces of a
// cobordism refer to them by index (narcs + k).
//
// All constructors below produce planar matchings and every operation
// preserves planarity, so it is never re-checked.
struct FlatTangle {
    int nb = 0;
    int nt = 0;
    std::vector<int> match; // involution on 0..nb+nt-1
    int circles = 0;

    int points() const { return nb + nt; }
    int narcs() const { return points() / 2; }
    int npieces() const { return narcs() + circles; }

    bool operator==(const FlatTangle& o) const {
        return nb == o.nb && nt == o.nt && circles == o.circles && match == o.match;
    }
    auto operator<=>(const FlatTangle& o) const {
        if (auto c = nb <=> o.nb; c != 0) return c;
        if (auto c = nt <=> o.nt; c != 0) return c;
        if (auto c = match <=> o.match; c != 0) return c;
        return circles <=> o.circles;
    }

    // Arcs in canonical order: sorted by smaller endpoint. arc_of[point] and
    // the list of (lo, hi) pairs are both derived on demand; tangles are tiny.
    std::vector<std::pair<int, int>> arcs() const {
        std::vector<std::pair<int, int>> a;
        a.reserve(narcs());
        for (int p = 0; p < points(); ++p)
            if (match[p] > p) a.push_back({p, match[p]});
        return a;
    }
    std::vector<int> arc_of_point() const {
        std::vector<int> of(points(), -1);
        int id = 0;
        for (int p = 0; p < points(); ++p)
            if (match[p] > p) { of[p] = id; of[match[p]] = id; ++id; }
        return of;
    }

    std::string key() const {
        std::string s = std::to_string(nb) + ":" + std::to_string(nt) + ":";
        for (int m : match) { s += std::to_string(m); s += ','; }
        s += "|" + std::to_string(circles);
        return s;
    }
};

inline FlatTangle identity_tangle(int n) {
    FlatTangle t;
    t.nb = t.nt = n;
    t.match.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        t.match[i] = n + i;
        t.match[n + i] = i;
    }
    return t;
}

// pos is 1-based (matching the word syntax `cup 3` etc.).

// n strands -> n+2: a minimum at positions pos, pos+1 of the new top.
inline FlatTangle cup_tangle(int n, int pos) {
    assert(pos >= 1 && pos <= n + 1);
    FlatTangle t;
    t.nb = n;
    t.nt = n + 2;
    t.match.resize(2 * n + 2);
    auto top = [&](int i) { return n + i; }; // 0-based top index -> point
    int p0 = pos - 1;
    for (int i = 0; i < n; ++i) {
        int ti = i < p0 ? i : i + 2;
        t.match[i] = top(ti);
        t.match[top(ti)] = i;
    }
    t.match[top(p0)] = top(p0 + 1);
    t.match[top(p0 + 1)] = top(p0);
    return t;
}

// n strands -> n-2: a maximum joining bottom positions pos, pos+1.
inline FlatTangle cap_tangle(int n, int pos) {
    assert(n >= 2 && pos >= 1 && pos <= n - 1);
    FlatTangle t;
    t.nb = n;
    t.nt = n - 2;
    t.match.resize(2 * n - 2);
    auto top = [&](int i) { return n + i; };
    int p0 = pos - 1;
    t.match[p0] = p0 + 1;
    t.match[p0 + 1] = p0;
    for (int i = 0; i < n; ++i) {
        if (i == p0 || i == p0 + 1) continue;
        int ti = i < p0 ? i : i - 2;
        t.match[i] = top(ti);
        t.match[top(ti)] = i;
    }
    return t;
}

// n -> n: bottom pos,pos+1 joined and top pos,pos+1 joined; identity elsewhere.
// This is the non-identity resolution of a crossing.
inline FlatTangle turnback_tangle(int n, int pos) {
    assert(n >= 2 && pos >= 1 && pos <= n - 1);
    FlatTangle t;
    t.nb = t.nt = n;
    t.match.resize(2 * n);
    auto top = [&](int i) { return n + i; };
    int p0 = pos - 1;
    for (int i = 0; i < n; ++i) {
        t.match[i] = top(i);
        t.match[top(i)] = i;
    }
    t.match[p0] = p0 + 1;
    t.match[p0 + 1] = p0;
    t.match[top(p0)] = top(p0 + 1);
    t.match[top(p0 + 1)] = top(p0);
    return t;
}

// Composite of s (a -> b) under t (b -> c), with piece provenance: the new
// tangle's pieces are chains of old arcs glued through the b boundary, plus
// circles (closed chains through b, then carried-over old circles).
struct ComposeResult {
    FlatTangle tangle;
    // old piece id -> new piece id (arcs first, then circles, per tangle)
    std::vector<int> piece_of_s;
    std::vector<int> piece_of_t;
};

inline ComposeResult compose_tangles(const FlatTangle& s, const FlatTangle& t) {
    assert(s.nt == t.nb);
    const int mid = s.nt;
    ComposeResult res;
    FlatTangle& u = res.tangle;
    u.nb = s.nb;
    u.nt = t.nt;
    u.match.assign(u.nb + u.nt, -1);

    auto s_arc = s.arc_of_point();
    auto t_arc = t.arc_of_point();
    res.piece_of_s.assign(s.npieces(), -1);
    res.piece_of_t.assign(t.npieces(), -1);

    // u endpoint -> (side, point): bottom points are s's bottom, top are t's top.
    // Walk chains starting from each free u endpoint.
    auto u_points = u.nb + u.nt;
    std::vector<bool> seen_s(s.narcs(), false), seen_t(t.narcs(), false);

    auto s_point_of_u = [&](int up) { return up; };            // up < u.nb
    auto t_point_of_u = [&](int up) { return t.nb + (up - u.nb); }; // up >= u.nb

    int next_piece = u.narcs(); // circles appended after arcs; arcs numbered later
    (void)next_piece;

    // First pass: trace all boundary-to-boundary chains to build the matching.
    std::vector<std::vector<std::pair<char, int>>> chain_pieces; // per u-arc in discovery order
    std::vector<std::pair<int, int>> chain_ends;
    std::vector<bool> visited_u(u_points, false);
    for (int start = 0; start < u_points; ++start) {
        if (visited_u[start]) continue;
        std::vector<std::pair<char, int>> pieces;
        // current location: (side, point) where side 's' means a point of s, 't' of t
        char side;
        int pt;
        if (start < u.nb) { side = 's'; pt = s_point_of_u(start); }
        else { side = 't'; pt = t_point_of_u(start); }
        int cur_u_end = -1;
        while (true) {
            if (side == 's') {
                pieces.push_back({'s', s_arc[pt]});
                seen_s[s_arc[pt]] = true;
                int q = s.match[pt];
                if (q < s.nb) { cur_u_end = q; break; } // s bottom = u bottom
                // crossed to the middle boundary; continue into t
                side = 't';
                pt = q - s.nb; // t bottom point index == middle position
            } else {
                pieces.push_back({'t', t_arc[pt]});
                seen_t[t_arc[pt]] = true;
                int q = t.match[pt];
                if (q >= t.nb) { cur_u_end = u.nb + (q - t.nb); break; } // t top = u top
                side = 's';
                pt = s.nb + q; // middle position as s top point
            }
        }
        u.match[start] = cur_u_end;
        u.match[cur_u_end] = start;
        visited_u[start] = true;
        visited_u[cur_u_end] = true;
        chain_pieces.push_back(std::move(pieces));
        chain_ends.push_back({start, cur_u_end});
    }

    // Arc ids in u follow canonical order (smaller endpoint); map chains to them.
    auto u_arc = u.arc_of_point();
    for (size_t i = 0; i < chain_pieces.size(); ++i) {
        int lo = std::min(chain_ends[i].first, chain_ends[i].second);
        int id = u_arc[lo];
        for (auto [side, piece] : chain_pieces[i])
            (side == 's' ? res.piece_of_s : res.piece_of_t)[piece] = id;
    }

    // Second pass: leftover arcs form closed chains through the middle.
    int circle_id = u.narcs();
    for (int a = 0; a < s.narcs(); ++a) {
        if (seen_s[a]) continue;
        // trace the cycle containing s-arc a
        std::vector<std::pair<char, int>> pieces;
        char side = 's';
        // find a point of this arc (both are middle points)
        int pt = -1;
        for (int p = 0; p < s.points(); ++p)
            if (s_arc[p] == a) { pt = p; break; }
        int guard = 0;
        while (true) {
            assert(++guard < 1 << 20);
            if (side == 's') {
                if (seen_s[s_arc[pt]]) break;
                pieces.push_back({'s', s_arc[pt]});
                seen_s[s_arc[pt]] = true;
                int q = s.match[pt];
                assert(q >= s.nb);
                side = 't';
                pt = q - s.nb;
            } else {
                if (seen_t[t_arc[pt]]) break;
                pieces.push_back({'t', t_arc[pt]});
                seen_t[t_arc[pt]] = true;
                int q = t.match[pt];
                assert(q < t.nb);
                side = 's';
                pt = s.nb + q;
            }
        }
        for (auto [sd, piece] : pieces)
            (sd == 's' ? res.piece_of_s : res.piece_of_t)[piece] = circle_id;
        ++circle_id;
        ++u.circles;
    }

    // Carried-over circles.
    for (int c = 0; c < s.circles; ++c) {
        res.piece_of_s[s.narcs() + c] = circle_id++;
        ++u.circles;
    }
    for (int c = 0; c < t.circles; ++c) {
        res.piece_of_t[t.narcs() + c] = circle_id++;
        ++u.circles;
    }
    return res;
}

} // namespace skein

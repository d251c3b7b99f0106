#pragma once

#include <cassert>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"

namespace skein {

// ---------------------------------------------------------------------------
// Movie engine: chain maps induced by elementary frames.
//
// A frame rewrites a short tail of the word just below a chosen split and
// carries a local cobordism. Its chain map is assembled uniformly: the raw
// map is written between the fully unsimplified stacks of the old and new
// tails over the common prefix, conjugated through the tracked simplification
// of each tail fold, and then transported through the unchanged suffix one
// letter at a time. Where a convention-dependent sign enters (Reidemeister
// frames) both candidates are tried and the chain-map equation picks one.
// ---------------------------------------------------------------------------

namespace detail {

inline CobShape transpose_shape(const CobShape& s) {
    CobShape t;
    t.src = s.tgt;
    t.tgt = s.src;
    int ns = t.src.npieces(), nt = t.tgt.npieces();
    t.comp.resize(ns + nt);
    for (int i = 0; i < ns; ++i) t.comp[i] = s.comp[nt + i];
    for (int i = 0; i < nt; ++i) t.comp[ns + i] = s.comp[i];
    t.dots = s.dots;
    t.canonicalize();
    return t;
}

template <class F>
struct LetterFold {
    Complex<F> letter; // the letter complex that was stacked
    Complex<F> after;  // simplified result
    ChainMap<F> p, s;  // stack(prev, letter) <-> after
};

// phi (x) id_L; no Koszul signs since the identity has degree zero
template <class F>
ChainMap<F> tensor_letter_id(const ChainMap<F>& phi, const Complex<F>& L) {
    const int n = L.nobj();
    ChainMap<F> r;
    r.dh = phi.dh;
    r.dq = phi.dq;
    for (auto& [ij, v] : phi.m)
        for (int b = 0; b < n; ++b) {
            CobLin<F> t = stack(v, identity_lin<F>(L.objs[b].tangle));
            if (!t.is_zero()) r.m[{ij.first * n + b, ij.second * n + b}] = std::move(t);
        }
    return r;
}

template <class F>
std::vector<LetterFold<F>> fold_tracked(Complex<F>& cur, const TangleWord& w,
                                        const ValidatedWord& vw, size_t lo, size_t hi) {
    std::vector<LetterFold<F>> out;
    for (size_t k = lo; k < hi; ++k) {
        Complex<F> letter =
            letter_complex<F>(w.letters[k], vw.width_at(static_cast<int>(k)), vw.sign[k]);
        Complex<F> big = stack_complex(cur, letter);
        auto simp = simplify(big, true);
        cur = simp.c;
        out.push_back({std::move(letter), cur, std::move(simp.p), std::move(simp.s)});
    }
    return out;
}

template <class F>
Complex<F> fold_plain(Complex<F> cur, const TangleWord& w, const ValidatedWord& vw, size_t lo,
                      size_t hi) {
    for (size_t k = lo; k < hi; ++k) {
        Complex<F> letter =
            letter_complex<F>(w.letters[k], vw.width_at(static_cast<int>(k)), vw.sign[k]);
        cur = simplify(stack_complex(cur, letter)).c;
    }
    return cur;
}

// folded tail -> unsimplified stack A (x) L1 (x) ... (x) Lk
template <class F>
ChainMap<F> unsimplify_map(const std::vector<LetterFold<F>>& folds) {
    ChainMap<F> S;
    for (size_t k = 0; k < folds.size(); ++k)
        S = k == 0 ? folds[0].s
                   : compose_maps(tensor_letter_id(S, folds[k].letter), folds[k].s);
    return S;
}

// unsimplified stack -> folded tail
template <class F>
ChainMap<F> simplify_map(const std::vector<LetterFold<F>>& folds) {
    ChainMap<F> P;
    for (size_t k = 0; k < folds.size(); ++k)
        P = k == 0 ? folds[0].p
                   : compose_maps(folds[k].p, tensor_letter_id(P, folds[k].letter));
    return P;
}

} // namespace detail

// Running state of a movie: the current word, its scanned complex, and the
// accumulated chain map from the scanned complex of the starting word.
template <class F>
class Movie {
  public:
    explicit Movie(TangleWord w) : word_(std::move(w)) {
        auto sc = scan_word<F>(word_);
        cur_ = sc.result;
        start_ = cur_;
        phi_ = identity_map(cur_);
    }

    const TangleWord& word() const { return word_; }
    const Complex<F>& complex() const { return cur_; }
    const Complex<F>& start_complex() const { return start_; }
    const ChainMap<F>& map() const { return phi_; }

    // Insert a circle (cup p, cap p) just below `split`, with d dots on the
    // newborn sheet. Two or more dots give the zero map.
    void birth(size_t split, int p, int dots = 0, bool left_up = true) {
        std::vector<Letter> tail{cup(p, left_up), cap(p)};
        run_frame(split, 0, tail, 2 * dots - 1, [&](Ctx& c) {
            if (dots >= 2) return;
            for (int a = 0; a < c.A->nobj(); ++a) {
                const FlatTangle& big = c.Unew->objs[a].tangle;
                assert(big.circles == 1);
                c.rho.set(a, a, cob_term<F>(birth_shape(big, 0, dots == 1)));
            }
            assert(verify_chain_map(*c.A, *c.Unew, c.rho));
        });
    }

    // Delete the adjacent circle (cup p, cap p) ending at `split`, evaluating
    // it with d dots. Two or more dots give the zero map.
    void death(size_t split, int dots = 0) {
        assert(split >= 2 && word_.letters[split - 2].g == Gen::Cup &&
               word_.letters[split - 1].g == Gen::Cap &&
               word_.letters[split - 2].pos == word_.letters[split - 1].pos);
        run_frame(split, 2, {}, 2 * dots - 1, [&](Ctx& c) {
            if (dots >= 2) return;
            for (int a = 0; a < c.A->nobj(); ++a) {
                const FlatTangle& big = c.Uold->objs[a].tangle;
                assert(big.circles == 1);
                c.rho.set(a, a, cob_term<F>(death_shape(big, 0, dots == 1)));
            }
            assert(verify_chain_map(*c.Uold, *c.A, c.rho));
        });
    }

    // Saddle between the strands at p, p+1 (they must be anti-parallel).
    void saddle(size_t split, int p) {
        auto vw = validate(word_);
        assert(split < vw.orient.size());
        int8_t mark = vw.orient[split][p - 1];
        std::vector<Letter> tail{cap(p), cup(p, mark > 0)};
        run_frame(split, 0, tail, 1, [&](Ctx& c) {
            for (int a = 0; a < c.A->nobj(); ++a) {
                const FlatTangle& s = c.A->objs[a].tangle;
                const FlatTangle& t = c.Unew->objs[a].tangle;
                CobShape sh = min_shape(s, t);
                if (t.circles == s.circles + 1) {
                    // The turnback closed a lone arc into an anonymous circle.
                    // min_shape detaches that circle as a birth disk; reconnect
                    // it to its arc so the shape is the honest saddle annulus.
                    int arc = s.arc_of_point()[s.nb + (p - 1)];
                    int keep = sh.comp[arc];
                    int gone = sh.comp[s.npieces() + t.narcs() + (t.circles - 1)];
                    if (keep != gone) {
                        for (int& x : sh.comp)
                            if (x == gone) x = keep;
                        sh.canonicalize();
                    }
                }
                c.rho.set(a, a, cob_term<F>(sh));
            }
            assert(verify_chain_map(*c.A, *c.Unew, c.rho));
        });
    }

    // Put a dot on the sheet of the strand at position p.
    void dot_frame(size_t split, int p) {
        run_frame(split, 0, {}, 2, [&](Ctx& c) {
            for (int a = 0; a < c.A->nobj(); ++a) {
                const FlatTangle& t = c.A->objs[a].tangle;
                CobShape sh = identity_shape(t);
                int arc = t.arc_of_point()[t.nb + (p - 1)];
                sh.dots[sh.comp_of_src(arc)] = 1;
                c.rho.set(a, a, cob_term<F>(sh));
            }
            assert(verify_chain_map(*c.A, *c.A, c.rho));
        });
    }

    // Insert the cancelling pair (x{t} p, x{-t} p) just below `split`.
    void r2_insert(size_t split, int p, bool first_positive) {
        Gen g1 = first_positive ? Gen::XPos : Gen::XNeg;
        Gen g2 = first_positive ? Gen::XNeg : Gen::XPos;
        std::vector<Letter> tail{{g1, p, false}, {g2, p, false}};
        run_frame(split, 0, tail, 0, [&](Ctx& c) {
            solve_sign(c, *c.A, *c.Unew, [&](const F& cand) {
                for (int a = 0; a < c.A->nobj(); ++a) {
                    const FlatTangle& ta = c.A->objs[a].tangle;
                    int corner = c.new_index(a, {0, 0});
                    int o1 = c.new_index(a, {0, 1});
                    int o2 = c.new_index(a, {1, 0});
                    int oa = c.Unew->objs[o1].tangle == ta ? o1 : o2;
                    int oc = oa == o1 ? o2 : o1;
                    assert(c.Unew->objs[oa].tangle == ta);
                    c.rho.set(a, oa, cob_term<F>(identity_shape(ta)));
                    // Into the circle-bearing resolution: undo the saddle that
                    // joins the corner to the parallel smoothing, then give
                    // birth to the middle circle. This stays correct when the
                    // turnback closes an existing cup (the saddle splits a
                    // circle off rather than merging strands). The stored
                    // entry carries the stacking sign, which depends on the
                    // prefix object's height; strip it so the component is
                    // the bare local cobordism.
                    const CobLin<F>* sad = c.Unew->entry(corner, oa);
                    assert(sad && !sad->terms.empty());
                    F unsign = field_inverse(sad->terms[0].second);
                    CobLin<F> up = cob_zero<F>();
                    for (auto& [sh, co] : sad->terms)
                        up = up + cob_term<F>(detail::transpose_shape(sh), co * unsign);
                    CobLin<F> bear =
                        cob_term<F>(birth_shape(c.Unew->objs[oc].tangle, 0, false));
                    c.rho.set(a, oc, compose(bear, up) * cand);
                }
            });
        });
    }

    // Delete the cancelling pair (x{t} p, x{-t} p) ending at `split`.
    void r2_delete(size_t split) {
        assert(split >= 2);
        const Letter& l1 = word_.letters[split - 2];
        const Letter& l2 = word_.letters[split - 1];
        assert(l1.pos == l2.pos);
        assert((l1.g == Gen::XPos && l2.g == Gen::XNeg) ||
               (l1.g == Gen::XNeg && l2.g == Gen::XPos));
        run_frame(split, 2, {}, 0, [&](Ctx& c) {
            solve_sign(c, *c.Uold, *c.A, [&](const F& cand) {
                for (int a = 0; a < c.A->nobj(); ++a) {
                    const FlatTangle& ta = c.A->objs[a].tangle;
                    int corner = c.old_index(a, {0, 0});
                    int o1 = c.old_index(a, {0, 1});
                    int o2 = c.old_index(a, {1, 0});
                    int oa = c.Uold->objs[o1].tangle == ta ? o1 : o2;
                    int oc = oa == o1 ? o2 : o1;
                    assert(c.Uold->objs[oa].tangle == ta);
                    c.rho.set(oa, a, cob_term<F>(identity_shape(ta)));
                    // From the circle-bearing resolution: kill the middle
                    // circle, then ride the corner saddle back to the
                    // parallel smoothing (mirror of the insertion map, with
                    // the height-dependent stacking sign stripped).
                    const CobLin<F>* sad = c.Uold->entry(corner, oa);
                    assert(sad && !sad->terms.empty());
                    F unsign = field_inverse(sad->terms[0].second);
                    CobLin<F> down = cob_zero<F>();
                    for (auto& [sh, co] : sad->terms)
                        down = down + cob_term<F>(sh, co * unsign);
                    CobLin<F> die =
                        cob_term<F>(death_shape(c.Uold->objs[oc].tangle, 0, false));
                    c.rho.set(oc, a, compose(down, die) * cand);
                }
            });
        });
    }

    // Kink the strand at p: insert (cup p+1, x p, cap p+1) just below `split`.
    void r1_insert(size_t split, int p, bool positive) {
        Gen g = positive ? Gen::XPos : Gen::XNeg;
        std::vector<Letter> tail{cup(p + 1, true), {g, p, false}, cap(p + 1)};
        {
            // the cap above the crossing constrains the cup orientation
            TangleWord probe = word_;
            probe.letters.insert(probe.letters.begin() + split, tail.begin(), tail.end());
            try {
                validate(probe);
            } catch (const WordError&) {
                tail[0] = cup(p + 1, false);
            }
        }
        run_frame(split, 0, tail, 0, [&](Ctx& c) {
            solve_sign(c, *c.A, *c.Unew, [&](const F& cand) {
                for (int a = 0; a < c.A->nobj(); ++a)
                    for (int i = 0; i < 2; ++i) {
                        int u = c.new_index(a, {0, i, 0});
                        if (c.Unew->objs[u].h != c.A->objs[a].h) continue;
                        int rel_q = c.Unew->objs[u].q - c.A->objs[a].q;
                        c.rho.set(a, u, kink_leg(c.A->objs[a].tangle, c.Unew->objs[u].tangle,
                                                 rel_q, p, cand, true));
                    }
            });
        });
    }

    // Remove the kink (cup p+1, x p, cap p+1) ending at `split`.
    void r1_delete(size_t split, int p) {
        assert(split >= 3 && word_.letters[split - 3].g == Gen::Cup &&
               word_.letters[split - 1].g == Gen::Cap);
        run_frame(split, 3, {}, 0, [&](Ctx& c) {
            solve_sign(c, *c.Uold, *c.A, [&](const F& cand) {
                for (int a = 0; a < c.A->nobj(); ++a)
                    for (int i = 0; i < 2; ++i) {
                        int u = c.old_index(a, {0, i, 0});
                        if (c.Uold->objs[u].h != c.A->objs[a].h) continue;
                        int rel_q = c.Uold->objs[u].q - c.A->objs[a].q;
                        c.rho.set(u, a, kink_leg(c.A->objs[a].tangle, c.Uold->objs[u].tangle,
                                                 rel_q, p, cand, false));
                    }
            });
        });
    }

    // Swap the letters at split-2, split-1; their supports must be disjoint.
    void exchange(size_t split) {
        assert(split >= 2);
        Letter P = word_.letters[split - 2];
        Letter Q = word_.letters[split - 1];
        auto delta = [](const Letter& l) {
            return l.g == Gen::Cup ? 2 : l.g == Gen::Cap ? -2 : 0;
        };
        auto consumed = [](const Letter& l) { return l.g == Gen::Cup ? 0 : 2; };
        auto produced = [](const Letter& l) { return l.g == Gen::Cap ? 0 : 2; };
        Letter Q2 = Q, P2 = P;
        if (Q.pos >= P.pos + produced(P))
            Q2.pos = Q.pos - delta(P);
        else if (Q.pos + consumed(Q) <= P.pos)
            P2.pos = P.pos + delta(Q);
        else
            throw std::invalid_argument("exchange: letter supports overlap");
        apply_exchange(split, Q2, P2);
    }

    // Replace the `old_len` letters below `split` by `repl`. Both tails must
    // fold to literally equal complexes (a pure isotopy of the resolutions).
    void rewrite(size_t split, size_t old_len, const std::vector<Letter>& repl) {
        assert(split >= old_len && split <= word_.letters.size());
        TangleWord w_new = spliced(split, old_len, repl);
        auto vw_old = validate(word_);
        auto vw_new = validate(w_new);
        Complex<F> A = prefix_complex(word_, vw_old, split - old_len);
        Complex<F> oldt = detail::fold_plain(A, word_, vw_old, split - old_len, split);
        Complex<F> newt = detail::fold_plain(A, w_new, vw_new, split - old_len,
                                             split - old_len + repl.size());
        if (!(oldt.objs == newt.objs && oldt.d == newt.d))
            throw std::invalid_argument("rewrite: tails do not fold identically");
        finish(std::move(w_new), split, old_len, repl.size(), oldt, newt, identity_map(oldt),
               vw_old, vw_new);
    }

    // Move the crossing at split-1 across the nested cup pair below it:
    // [cup j, cup j+1, x(j,t)] <-> [cup j, cup j+1, x(j+2,t)].
    void cup_bend(size_t split, bool outward) {
        assert(split >= 3);
        Letter x = word_.letters[split - 1];
        assert(x.g == Gen::XPos || x.g == Gen::XNeg);
        Letter moved = x;
        moved.pos = outward ? x.pos + 2 : x.pos - 2;
        rewrite(split, 1, {moved});
    }

    // The mirror move across a nested cap pair above the crossing:
    // [x(j+2,t), cap j+1, cap j] <-> [x(j,t), cap j+1, cap j].
    void cap_bend(size_t split, bool inward) {
        assert(split >= 3);
        Letter x = word_.letters[split - 3];
        assert(x.g == Gen::XPos || x.g == Gen::XNeg);
        Letter moved = x;
        moved.pos = inward ? x.pos - 2 : x.pos + 2;
        rewrite(split, 3, {moved, word_.letters[split - 2], word_.letters[split - 1]});
    }

  private:
    struct Ctx {
        const Complex<F>* A = nullptr;
        const Complex<F>* Uold = nullptr;
        const Complex<F>* Unew = nullptr;
        std::vector<int> old_sizes, new_sizes;
        ChainMap<F> rho;

        static int flat(const std::vector<int>& sizes, int a, const std::vector<int>& multi) {
            int idx = a;
            for (size_t k = 0; k < sizes.size(); ++k) idx = idx * sizes[k] + multi[k];
            return idx;
        }
        int new_index(int a, const std::vector<int>& multi) const {
            return flat(new_sizes, a, multi);
        }
        int old_index(int a, const std::vector<int>& multi) const {
            return flat(old_sizes, a, multi);
        }
    };

    // The kink cylinder's value on the circle resolution. The q-shift of that
    // resolution (rel_q, always +-1) forces the unique degree-zero shape: a
    // plain birth/death on one side of the kink, and the combination
    // (dotted sheet) - (dot on the strand, plain sheet) on the other.
    CobLin<F> kink_leg(const FlatTangle& ta, const FlatTangle& tu, int rel_q, int p,
                       const F& cand, bool into_big) {
        assert(tu.circles == ta.circles + 1);
        int needed_raw = into_big ? -rel_q : rel_q;
        assert(needed_raw == 1 || needed_raw == -1);
        if (needed_raw == -1) {
            CobShape plain = into_big ? birth_shape(tu, 0, false) : death_shape(tu, 0, false);
            return cob_term<F>(plain, cand);
        }
        CobShape dotted = into_big ? birth_shape(tu, 0, true) : death_shape(tu, 0, true);
        CobShape plain = into_big ? birth_shape(tu, 0, false) : death_shape(tu, 0, false);
        int arc = ta.arc_of_point()[ta.nb + (p - 1)];
        if (into_big)
            plain.dots[plain.comp_of_src(arc)] = 1;
        else
            plain.dots[plain.comp_of_tgt(arc)] = 1;
        return (cob_term<F>(dotted) + cob_term<F>(plain, F(-1))) * cand;
    }

    template <class Build>
    void solve_sign(Ctx& c, const Complex<F>& src, const Complex<F>& tgt, Build&& build) {
        for (const F& cand : {F(1), F(-1)}) {
            c.rho.m.clear();
            build(cand);
            if (verify_chain_map(src, tgt, c.rho)) return;
        }
        throw std::logic_error("movie frame: no consistent local sign");
    }

    TangleWord spliced(size_t split, size_t old_len, const std::vector<Letter>& repl) const {
        TangleWord w = word_;
        w.letters.erase(w.letters.begin() + (split - old_len), w.letters.begin() + split);
        w.letters.insert(w.letters.begin() + (split - old_len), repl.begin(), repl.end());
        return w;
    }

    Complex<F> prefix_complex(const TangleWord& w, const ValidatedWord& vw, size_t upto) {
        std::string key;
        for (size_t k = 0; k < upto; ++k) {
            const Letter& l = w.letters[k];
            key += static_cast<char>('a' + static_cast<int>(l.g));
            key += std::to_string(l.pos);
            key += l.left_up ? 'u' : 'd';
            key += static_cast<char>('0' + (vw.sign[k] + 1));
        }
        auto it = prefix_cache_.find(key);
        if (it != prefix_cache_.end()) return it->second;
        Complex<F> start;
        start.objs.push_back({0, 0, identity_tangle(static_cast<int>(w.bottom.size()))});
        Complex<F> got = detail::fold_plain(start, w, vw, 0, upto);
        prefix_cache_[key] = got;
        return got;
    }

    template <class Builder>
    void run_frame(size_t split, size_t old_len, const std::vector<Letter>& repl, int dq,
                   Builder&& build) {
        assert(split >= old_len && split <= word_.letters.size());
        TangleWord w_new = spliced(split, old_len, repl);
        auto vw_old = validate(word_);
        auto vw_new = validate(w_new);
        Complex<F> A = prefix_complex(word_, vw_old, split - old_len);

        Ctx ctx;
        Complex<F> cur_old = A;
        auto folds_old = detail::fold_tracked(cur_old, word_, vw_old, split - old_len, split);
        Complex<F> cur_new = A;
        auto folds_new = detail::fold_tracked(cur_new, w_new, vw_new, split - old_len,
                                              split - old_len + repl.size());

        Complex<F> Uold = A;
        for (auto& f : folds_old) {
            ctx.old_sizes.push_back(f.letter.nobj());
            Uold = stack_complex(Uold, f.letter);
        }
        Complex<F> Unew = A;
        for (auto& f : folds_new) {
            ctx.new_sizes.push_back(f.letter.nobj());
            Unew = stack_complex(Unew, f.letter);
        }
        ctx.A = &A;
        ctx.Uold = &Uold;
        ctx.Unew = &Unew;
        ctx.rho.dq = dq;
        build(ctx);
        ctx.rho.dq = dq;

        ChainMap<F> S = old_len == 0 ? identity_map(A) : detail::unsimplify_map(folds_old);
        ChainMap<F> P = repl.empty() ? identity_map(A) : detail::simplify_map(folds_new);
        ChainMap<F> local = compose_maps(P, compose_maps(ctx.rho, S));
        local.dq = dq;
        finish(std::move(w_new), split, old_len, repl.size(), cur_old, cur_new,
               std::move(local), vw_old, vw_new);
    }

    void apply_exchange(size_t split, const Letter& first, const Letter& second) {
        TangleWord w_new = word_;
        w_new.letters[split - 2] = first;
        w_new.letters[split - 1] = second;
        auto vw_old = validate(word_);
        auto vw_new = validate(w_new);
        Complex<F> A = prefix_complex(word_, vw_old, split - 2);

        Complex<F> cur_old = A;
        auto folds_old = detail::fold_tracked(cur_old, word_, vw_old, split - 2, split);
        Complex<F> cur_new = A;
        auto folds_new = detail::fold_tracked(cur_new, w_new, vw_new, split - 2, split);

        Complex<F> Uold =
            stack_complex(stack_complex(A, folds_old[0].letter), folds_old[1].letter);
        Complex<F> Unew =
            stack_complex(stack_complex(A, folds_new[0].letter), folds_new[1].letter);

        const int n1 = folds_old[0].letter.nobj();
        const int n2 = folds_old[1].letter.nobj();
        assert(folds_new[0].letter.nobj() == n2 && folds_new[1].letter.nobj() == n1);
        ChainMap<F> rho;
        for (int a = 0; a < A.nobj(); ++a)
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n2; ++j) {
                    int from = (a * n1 + i) * n2 + j;
                    int to = (a * n2 + j) * n1 + i;
                    assert(Uold.objs[from].tangle == Unew.objs[to].tangle &&
                           Uold.objs[from].h == Unew.objs[to].h &&
                           Uold.objs[from].q == Unew.objs[to].q);
                    // The slide carries every piece of the old composite to the
                    // same piece of the new one, but anonymous circles are
                    // numbered by the order in which the letters close them,
                    // which the slide changes. Recover the honest circle
                    // pairing from composition provenance.
                    const FlatTangle& Ta = A.objs[a].tangle;
                    const FlatTangle& Tp = folds_old[0].letter.objs[i].tangle;
                    const FlatTangle& Tq = folds_old[1].letter.objs[j].tangle;
                    const FlatTangle& Tq2 = folds_new[0].letter.objs[j].tangle;
                    const FlatTangle& Tp2 = folds_new[1].letter.objs[i].tangle;
                    auto lo1 = compose_tangles(Ta, Tp);
                    auto lo2 = compose_tangles(lo1.tangle, Tq);
                    auto ln1 = compose_tangles(Ta, Tq2);
                    auto ln2 = compose_tangles(ln1.tangle, Tp2);
                    const FlatTangle& T = Uold.objs[from].tangle;
                    assert(lo2.tangle == T && ln2.tangle == T);
                    // Every circle of T passes through a prefix piece: the two
                    // letters have disjoint supports, so neither letter (nor
                    // both together) can close a circle on its own.
                    std::vector<int> pi(T.circles, -1);
                    for (int p = 0; p < Ta.npieces(); ++p) {
                        int oldp = lo2.piece_of_s[lo1.piece_of_s[p]];
                        int newp = ln2.piece_of_s[ln1.piece_of_s[p]];
                        assert((oldp < T.narcs()) == (newp < T.narcs()));
                        if (oldp < T.narcs()) {
                            assert(oldp == newp);
                            continue;
                        }
                        int& img = pi[oldp - T.narcs()];
                        assert(img == -1 || img == newp - T.narcs());
                        img = newp - T.narcs();
                    }
                    CobShape sh = identity_shape(T);
                    for (int c = 0; c < T.circles; ++c) {
                        assert(pi[c] >= 0);
                        sh.comp[T.npieces() + T.narcs() + pi[c]] = T.narcs() + c;
                    }
                    sh.canonicalize();
                    int hi = folds_old[0].letter.objs[i].h;
                    int hj = folds_old[1].letter.objs[j].h;
                    F coeff = ((hi & 1) && (hj & 1)) ? F(-1) : F(1);
                    rho.set(from, to, cob_term<F>(sh, coeff));
                }
        assert(verify_chain_map(Uold, Unew, rho));

        ChainMap<F> S = detail::unsimplify_map(folds_old);
        ChainMap<F> P = detail::simplify_map(folds_new);
        ChainMap<F> local = compose_maps(P, compose_maps(rho, S));
        finish(std::move(w_new), split, 2, 2, cur_old, cur_new, std::move(local), vw_old,
               vw_new);
    }

    void finish(TangleWord w_new, size_t split, size_t old_len, size_t new_len,
                Complex<F> cur_old, Complex<F> cur_new, ChainMap<F> phi,
                const ValidatedWord& vw_old, const ValidatedWord& vw_new) {
        for (size_t k = split; k < word_.letters.size(); ++k) {
            size_t kn = k - old_len + new_len;
            assert(vw_new.width_at(static_cast<int>(kn)) ==
                       vw_old.width_at(static_cast<int>(k)) &&
                   vw_new.sign[kn] == vw_old.sign[k]);
            (void)kn;
            Complex<F> L = letter_complex<F>(word_.letters[k],
                                             vw_old.width_at(static_cast<int>(k)),
                                             vw_old.sign[k]);
            auto so = simplify(stack_complex(cur_old, L), true);
            auto sn = simplify(stack_complex(cur_new, L), true);
            phi = compose_maps(sn.p, compose_maps(detail::tensor_letter_id(phi, L), so.s));
            cur_old = std::move(so.c);
            cur_new = std::move(sn.c);
        }
        phi_ = compose_maps(phi, phi_);
        word_ = std::move(w_new);
        cur_ = std::move(cur_new);
    }

    TangleWord word_;
    Complex<F> start_, cur_;
    ChainMap<F> phi_;
    std::map<std::string, Complex<F>> prefix_cache_;
};

} // namespace skein

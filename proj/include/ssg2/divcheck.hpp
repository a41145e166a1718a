#pragma once
#include <map>
#include <string>
#include <vector>

#include "surface.hpp"

namespace ssg2 {

// Function on E restricted from the surface: (a(x) + y b(x)) / d(x).
struct EFunc {
    FqPoly a, b, d;
};

struct FiberInPolarLocus : std::runtime_error {
    explicit FiberInPolarLocus(const std::string& s) : std::runtime_error(s) {}
};

// restriction of g to the horizontal fiber E x {Q}
inline EFunc restrict_to_horizontal(const SurfFn& g, const ECPoint& Q) {
    if (Q.inf) throw std::invalid_argument("restriction at infinity not supported");
    EFunc e;
    e.a = g.num.a00.eval_x2(Q.x) + g.num.a01.eval_x2(Q.x) * Q.y;
    e.b = g.num.a10.eval_x2(Q.x) + g.num.a11.eval_x2(Q.x) * Q.y;
    e.d = g.den.eval_x2(Q.x);
    if (e.d.is_zero()) throw FiberInPolarLocus("horizontal fiber lies in the polar locus");
    return e;
}

// restriction of g to the vertical fiber {Q} x E (coordinates x2, y2)
inline EFunc restrict_to_vertical(const SurfFn& g, const ECPoint& Q) {
    if (Q.inf) throw std::invalid_argument("restriction at infinity not supported");
    EFunc e;
    e.a = g.num.a00.eval_x1(Q.x) + g.num.a10.eval_x1(Q.x) * Q.y;
    e.b = g.num.a01.eval_x1(Q.x) + g.num.a11.eval_x1(Q.x) * Q.y;
    e.d = g.den.eval_x1(Q.x);
    if (e.d.is_zero()) throw FiberInPolarLocus("vertical fiber lies in the polar locus");
    return e;
}

// divisor on E with point coordinates over a splitting tower
struct DivisorE {
    FqCtxPtr ctx;  // field of the entries at the time they were added
    struct Entry {
        Fq x, y;
        int m;
    };
    std::vector<Entry> entries;
    int inf = 0;

    void add(const Fq& x, const Fq& y, int m) {
        if (m) entries.push_back({x, y, m});
    }
    // canonical form over a common context (entries lifted and merged)
    std::map<std::string, int> canonical(const FqCtx* top) const {
        std::map<std::string, int> out;
        for (auto& e : entries) {
            Fq x = Fq::lift(top, e.x), y = Fq::lift(top, e.y);
            std::string k = x.str() + "|" + y.str();
            out[k] += e.m;
            if (out[k] == 0) out.erase(k);
        }
        return out;
    }
    int degree() const {
        int s = inf;
        for (auto& e : entries) s += e.m;
        return s;
    }
    std::string str() const {
        std::string s;
        for (auto& e : entries)
            s += e.x.str() + "|" + e.y.str() + ":" + std::to_string(e.m) + " ";
        s += "inf:" + std::to_string(inf);
        return s;
    }
};

// splitting context for a list of x-polynomials plus y-coordinates over E
struct SplitCtx {
    FqCtxPtr K;
    const CurveE* E;
    FqPoly rhs;  // curve cubic lifted to K

    explicit SplitCtx(FqCtxPtr base, const CurveE* e) : K(std::move(base)), E(e) {
        rhs = fqpoly_lift(K.get(), e->rhs());
    }
    void split(const FqPoly& f, Rng& rng) {
        FqPoly g = fqpoly_lift(K.get(), f);
        FqCtxPtr nk = splitting_field(K, g, rng);
        if (nk != K) {
            K = nk;
            rhs = fqpoly_lift(K.get(), E->rhs());
        }
    }
    // ensure sqrt of v exists, extending by a quadratic if needed
    Fq sqrt(const Fq& v0, Rng& rng) {
        Fq v = Fq::lift(K.get(), v0);
        auto r = fq_sqrt(v, rng);
        if (!r.empty()) return r[0];
        std::vector<Fq> quad = {-v, Fq::zero(K.get()), Fq::one(K.get())};
        K = make_extension(K, quad);
        rhs = fqpoly_lift(K.get(), E->rhs());
        return Fq::gen(K.get());
    }
};

// divisor of the pullback of a univariate polynomial q(x) to E (zeros only;
// the matching pole at infinity is 2 deg q)
inline void add_pullback_zeros(DivisorE& D, SplitCtx& S, const FqPoly& q, int scale, Rng& rng) {
    if (q.deg() <= 0) return;
    S.split(q, rng);
    D.ctx = S.K;
    auto roots = fqpoly_roots_mult(fqpoly_lift(S.K.get(), q), rng);
    int total = 0;
    for (auto& [r, m] : roots) total += m;
    if (total != q.deg()) throw std::logic_error("pullback: polynomial failed to split");
    for (auto& [r, m] : roots) {
        Fq rl = Fq::lift(S.K.get(), r);
        Fq c = S.rhs.eval(rl);
        if (c.is_zero()) {
            D.add(rl, Fq::zero(S.K.get()), 2 * m * scale);
        } else {
            Fq y = S.sqrt(c, rng);
            rl = Fq::lift(S.K.get(), rl);
            D.ctx = S.K;
            D.add(rl, y, m * scale);
            D.add(rl, -y, m * scale);
        }
    }
}

// grow the splitting context until q's roots and their curve y-coordinates all
// live in it (two-phase so divisor keys are stable)
inline void prepare_pullback(SplitCtx& S, const FqPoly& q, Rng& rng) {
    if (q.deg() <= 0) return;
    bool grew = true;
    while (grew) {
        grew = false;
        S.split(q, rng);
        auto roots = fqpoly_roots_mult(fqpoly_lift(S.K.get(), q), rng);
        for (auto& [r, m] : roots) {
            Fq c = S.rhs.eval(r);
            if (!c.is_zero() && fq_sqrt(c, rng).empty()) {
                std::vector<Fq> quad = {-c, Fq::zero(S.K.get()), Fq::one(S.K.get())};
                S.K = make_extension(S.K, quad);
                S.rhs = fqpoly_lift(S.K.get(), S.E->rhs());
                grew = true;
                break;
            }
        }
    }
}

// full divisor of (a + y b)/d on E; the infinity coefficient follows from the
// degree-zero balance since infinity is the only non-affine point
inline DivisorE divisor_of_efunc(const EFunc& e0, SplitCtx& S, Rng& rng) {
    if (e0.a.is_zero() && e0.b.is_zero()) throw std::domain_error("divisor of zero function");
    FqPoly w, a1, b1, N;
    if (e0.b.is_zero()) {
        w = FqPoly::constant(kone(e0.a.lead()));
        a1 = e0.a;
        b1 = FqPoly();
        N = FqPoly::constant(kone(e0.a.lead()));
    } else {
        w = poly_gcd(e0.a, e0.b);
        a1 = e0.a.is_zero() ? e0.a : poly_exact_div(e0.a, w);
        b1 = poly_exact_div(e0.b, w);
        N = a1 * a1 - S.E->rhs() * b1 * b1;
        if (N.is_zero()) throw std::logic_error("norm of a + yb vanished");
    }
    // phase 1: stabilize the context
    prepare_pullback(S, e0.d, rng);
    prepare_pullback(S, w, rng);
    if (e0.b.is_zero()) prepare_pullback(S, a1, rng);
    else prepare_pullback(S, N, rng);
    // phase 2: collect entries
    DivisorE D;
    D.ctx = S.K;
    add_pullback_zeros(D, S, e0.d, -1, rng);
    add_pullback_zeros(D, S, w, 1, rng);
    if (e0.b.is_zero()) {
        add_pullback_zeros(D, S, a1, 1, rng);
    } else {
        auto roots = fqpoly_roots_mult(fqpoly_lift(S.K.get(), N), rng);
        FqPoly a1K = fqpoly_lift(S.K.get(), a1), b1K = fqpoly_lift(S.K.get(), b1);
        for (auto& [r, m] : roots) {
            Fq bv = b1K.eval(r);
            if (bv.is_zero()) continue;
            Fq y = -a1K.eval(r) / bv;
            D.add(r, y, m);
        }
    }
    int total = 0;
    for (auto& e : D.entries) total += e.m;
    D.inf = -total;
    return D;
}

struct DivisorCheckFailure {
    bool ok = true;
    std::string why;
};

// predicted restriction divisor of a formal divisor sum_i m_i C_i to a test
// fiber.  horizontal = true: fiber E x {Q}, identified with E by the first
// coordinate; otherwise {Q} x E.
inline DivisorE predicted_restriction(const std::vector<std::pair<EmbeddedCurve, int>>& D,
                                      const ECPoint& Q, bool horizontal, SplitCtx& S,
                                      Rng& rng) {
    const CurveE& E = *S.E;
    if (Q.inf || Q.y.is_zero()) throw std::invalid_argument("test point must be generic");
    // phase 1: stabilize context over all needed polynomials
    std::vector<FqPoly> polys;
    for (auto& [C, m] : D) {
        const CoordMap& inner = horizontal ? C.c2 : C.c1;  // must hit Q
        if (inner.is_const) continue;
        FqPoly num = inner.map.u.num - inner.map.u.den * FqPoly::constant(Q.x);
        polys.push_back(num);
    }
    for (auto& q : polys) prepare_pullback(S, q, rng);
    DivisorE out;
    out.ctx = S.K;
    for (auto& [C, m] : D) {
        const CoordMap& inner = horizontal ? C.c2 : C.c1;
        const CoordMap& outer = horizontal ? C.c1 : C.c2;
        if (inner.is_const) {
            // component parallel to the test fiber: crosses only if equal (excluded
            // by the genericity of Q)
            if (!inner.cpt.inf && inner.cpt == Q)
                throw FiberInPolarLocus("test fiber equals a component");
            continue;
        }
        // preimage points of Q under the inner coordinate map
        FqPoly num = inner.map.u.num - inner.map.u.den * FqPoly::constant(Q.x);
        auto roots = fqpoly_roots_mult(fqpoly_lift(S.K.get(), num), rng);
        int found = 0;
        for (auto& [r, mult] : roots) {
            Fq c = S.rhs.eval(r);
            if (c.is_zero()) throw FiberInPolarLocus("preimage at 2-torsion; retry");
            Fq y = S.sqrt(c, rng);
            if (out.ctx != S.K) throw std::logic_error("context grew in phase 2");
            // select the sign matching Q
            FqPoly vd = fqpoly_lift(S.K.get(), inner.map.v.den);
            FqPoly vn = fqpoly_lift(S.K.get(), inner.map.v.num);
            Fq vdv = vd.eval(r);
            if (vdv.is_zero()) throw FiberInPolarLocus("v-part pole at preimage; retry");
            Fq vv = vn.eval(r) / vdv;
            Fq yq = Fq::lift(S.K.get(), Q.y);
            Fq ysel;
            if (y * vv == yq) ysel = y;
            else if ((-y) * vv == yq) ysel = -y;
            else continue;  // preimage of -Q
            found += mult;
            // push through the outer coordinate
            if (outer.is_const) {
                if (outer.cpt.inf) out.inf += m * mult;
                else out.add(Fq::lift(S.K.get(), outer.cpt.x),
                             Fq::lift(S.K.get(), outer.cpt.y), m * mult);
                continue;
            }
            FqPoly ud = fqpoly_lift(S.K.get(), outer.map.u.den);
            Fq udv = ud.eval(r);
            if (udv.is_zero()) {
                out.inf += m * mult;
                continue;
            }
            FqPoly un = fqpoly_lift(S.K.get(), outer.map.u.num);
            Fq ux = un.eval(r) / udv;
            FqPoly wd = fqpoly_lift(S.K.get(), outer.map.v.den);
            Fq wdv = wd.eval(r);
            if (wdv.is_zero()) throw FiberInPolarLocus("outer v-part pole; retry");
            FqPoly wn = fqpoly_lift(S.K.get(), outer.map.v.num);
            Fq uy = ysel * (wn.eval(r) / wdv);
            out.add(ux, uy, m * mult);
        }
        (void)found;
    }
    return out;
}

struct DivCheckReport {
    bool ok = true;
    std::string why;
};

// verifies (g) = sum m_i C_i: symbolic vanishing of the numerator on positive
// components and the denominator on negative honest components, then exact
// divisor comparison on random horizontal and vertical test fibers.
inline DivCheckReport divisor_check(const CurveData& Cd, const SurfFn& g,
                                    const std::vector<std::pair<EmbeddedCurve, int>>& D,
                                    int fibers_per_direction, uint64_t seed) {
    const CurveE& E = Cd.E;
    const FqCtx* k = E.k;
    Rng rng(seed);
    // (a)/(b): symbolic containment
    for (auto& [C, m] : D) {
        if (C.c1.is_const || C.c2.is_const) {
            // fiber component: substitute the constant coordinate
            if (m > 0) {
                bool vertical = C.c1.is_const;
                const ECPoint& T = vertical ? C.c1.cpt : C.c2.cpt;
                if (T.inf) continue;  // infinity fibers live in the degree bookkeeping
                R4 n = g.num;
                Poly2 r00, r10, r01, r11;
                if (vertical) {
                    FqPoly h00 = n.a00.eval_x1(T.x), h01 = n.a01.eval_x1(T.x);
                    // y1 = 0 on the fiber (2-torsion): y-parts with y1 drop
                    if (!(h00.is_zero() && h01.is_zero()))
                        return {false, "numerator does not vanish on a vertical component"};
                } else {
                    FqPoly h00 = n.a00.eval_x2(T.x), h10 = n.a10.eval_x2(T.x);
                    if (!(h00.is_zero() && h10.is_zero()))
                        return {false, "numerator does not vanish on a horizontal component"};
                }
            }
            continue;
        }
        CurveCoordFns cf = curve_coords(C);
        RatFuncU crf = RatFuncU::from_poly(E.rhs(), k);
        auto vanish = [&](const R4& n) {
            // n(U1, yV1, U2, yV2) even and odd parts
            RatFuncU even = kzero(crf), odd = kzero(crf);
            auto addp = [&](const Poly2& comp, int e1, int e2) {
                if (comp.is_zero()) return;
                RatFuncU val = kzero(crf);
                for (int j = 0; j <= comp.deg_x2(); j++) {
                    const FqPoly& cj = comp.c[j];
                    if (cj.is_zero()) continue;
                    RatFuncU inner1 = kzero(crf);
                    for (int i = cj.deg(); i >= 0; i--)
                        inner1 = inner1 * cf.u1 + RatFuncU::constant(cj.coeff(i, Fq::one(k)));
                    RatFuncU u2p = kone(crf);
                    for (int t = 0; t < j; t++) u2p = u2p * cf.u2;
                    val = val + inner1 * u2p;
                }
                if (e1 && e2) even = even + val * crf * cf.v1 * cf.v2;
                else if (e1) odd = odd + val * cf.v1;
                else if (e2) odd = odd + val * cf.v2;
                else even = even + val;
            };
            addp(n.a00, 0, 0);
            addp(n.a10, 1, 0);
            addp(n.a01, 0, 1);
            addp(n.a11, 1, 1);
            return even.is_zero() && odd.is_zero();
        };
        if (m > 0) {
            if (!vanish(g.num)) return {false, "numerator does not vanish on a component"};
        } else {
            R4 dn = R4::from00(g.den);
            if (!vanish(dn)) return {false, "denominator does not vanish on a component"};
        }
    }
    // (c): fiber restrictions
    for (int dir = 0; dir < 2; dir++) {
        bool horizontal = dir == 0;
        int done = 0, attempts = 0;
        while (done < fibers_per_direction) {
            if (++attempts > 40 * fibers_per_direction)
                return {false, "could not find enough good test fibers"};
            Fq x = Fq::rand(k, rng);
            Fq c = E.rhs().eval(x);
            if (c.is_zero()) continue;
            auto sq = fq_sqrt(c, rng);
            if (sq.empty()) continue;
            ECPoint Q = ECPoint::make(x, sq[0]);
            try {
                EFunc e = horizontal ? restrict_to_horizontal(g, Q)
                                     : restrict_to_vertical(g, Q);
                if (e.a.is_zero() && e.b.is_zero())
                    return {false, "restriction vanished identically"};
                SplitCtx S1(Cd.owner, &E);
                DivisorE actual = divisor_of_efunc(e, S1, rng);
                DivisorE want = predicted_restriction(D, Q, horizontal, S1, rng);
                bool same = actual.inf == want.inf &&
                            actual.canonical(S1.K.get()) == want.canonical(S1.K.get());
                if (!same)
                    return {false,
                            std::string(horizontal ? "horizontal" : "vertical") +
                                " fiber mismatch at x = " + Q.x.str() + ": got " +
                                actual.str() + " want " + want.str()};
                done++;
            } catch (const FiberInPolarLocus&) {
                continue;
            }
        }
    }
    return {true, {}};
}

}  // namespace ssg2

#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ec.hpp"
#include "poly2.hpp"

namespace ssg2 {

// Elements of the affine coordinate ring of E x E:
//   k[x1, y1, x2, y2] / (y1^2 - c(x1), y2^2 - c(x2))
// stored as four bivariate components 1, y1, y2, y1 y2.
struct R4 {
    Poly2 a00, a10, a01, a11;

    static R4 zero() { return {}; }
    static R4 constant(const Fq& v) { return {Poly2::constant(v), {}, {}, {}}; }
    static R4 from00(Poly2 p) { return {std::move(p), {}, {}, {}}; }
    bool is_zero() const {
        return a00.is_zero() && a10.is_zero() && a01.is_zero() && a11.is_zero();
    }
    bool operator==(const R4& o) const {
        return a00 == o.a00 && a10 == o.a10 && a01 == o.a01 && a11 == o.a11;
    }
    R4 operator+(const R4& o) const {
        return {a00 + o.a00, a10 + o.a10, a01 + o.a01, a11 + o.a11};
    }
    R4 operator-(const R4& o) const {
        return {a00 - o.a00, a10 - o.a10, a01 - o.a01, a11 - o.a11};
    }
    R4 operator-() const { return {-a00, -a10, -a01, -a11}; }
    R4 scale(const Fq& v) const { return {a00.scale(v), a10.scale(v), a01.scale(v), a11.scale(v)}; }
    R4 mul_poly(const Poly2& p) const { return {a00 * p, a10 * p, a01 * p, a11 * p}; }
    size_t term_count() const {
        return a00.term_count() + a10.term_count() + a01.term_count() + a11.term_count();
    }
    // sign flips of y1 / y2
    R4 flip1() const { return {a00, -a10, a01, -a11}; }
    R4 flip2() const { return {a00, a10, -a01, -a11}; }
};

// multiplication context: the two Weierstrass cubics as bivariate constants
struct SurfCtx {
    const CurveE* E = nullptr;
    Poly2 c1;  // rhs(x1)
    Poly2 c2;  // rhs(x2)

    SurfCtx() = default;
    explicit SurfCtx(const CurveE* e) : E(e) {
        if (!e) return;
        c1 = Poly2::from_x1(e->rhs());
        c2 = Poly2::from_x2(e->rhs(), e->k);
    }
};

inline R4 r4_mul(const SurfCtx& S, const R4& u, const R4& v) {
    // (u00 + y1 u10 + y2 u01 + y1y2 u11)(v00 + ...) with y1^2 = c1, y2^2 = c2
    const Poly2 &c1 = S.c1, &c2 = S.c2;
    R4 r;
    r.a00 = u.a00 * v.a00 + (u.a10 * v.a10) * c1 + (u.a01 * v.a01) * c2 +
            ((u.a11 * v.a11) * c1) * c2;
    r.a10 = u.a00 * v.a10 + u.a10 * v.a00 + ((u.a01 * v.a11) + (u.a11 * v.a01)) * c2;
    r.a01 = u.a00 * v.a01 + u.a01 * v.a00 + ((u.a10 * v.a11) + (u.a11 * v.a10)) * c1;
    r.a11 = u.a00 * v.a11 + u.a11 * v.a00 + u.a10 * v.a01 + u.a01 * v.a10;
    return r;
}

// direction (a, b): D = a (2 y1 d/dx1 + (3x1^2+A) d/dy1) + b (... x2, y2 ...)
struct SurfDerivation {
    const SurfCtx* S = nullptr;
    Fq a, b;
    Poly2 p1, p2;  // 3 x_i^2 + A as bivariate polys

    SurfDerivation(const SurfCtx* s, const Fq& a_, const Fq& b_) : S(s), a(a_), b(b_) {
        const FqCtx* k = s->E->k;
        FqPoly q(std::vector<Fq>{s->E->A, Fq::zero(k), Fq::from_int(k, 3)});
        p1 = Poly2::from_x1(q);
        p2 = Poly2::from_x2(q, k);
    }

    R4 apply(const R4& h) const {
        const FqCtx* k = S->E->k;
        Fq two = Fq::from_int(k, 2);
        R4 out;
        if (!a.is_zero()) {
            // 2a y1 d/dx1:
            Poly2 d00 = h.a00.derivative_x1(), d10 = h.a10.derivative_x1();
            Poly2 d01 = h.a01.derivative_x1(), d11 = h.a11.derivative_x1();
            R4 t1;
            t1.a10 = d00;
            t1.a00 = d10 * S->c1;
            t1.a11 = d01;
            t1.a01 = d11 * S->c1;
            out = out + t1.scale(two * a);
            // a (3x1^2 + A) d/dy1: d/dy1 h = h10 + y2 h11
            R4 t2;
            t2.a00 = h.a10 * p1;
            t2.a01 = h.a11 * p1;
            out = out + t2.scale(a);
        }
        if (!b.is_zero()) {
            Poly2 d00 = h.a00.derivative_x2(), d10 = h.a10.derivative_x2();
            Poly2 d01 = h.a01.derivative_x2(), d11 = h.a11.derivative_x2();
            R4 t1;
            t1.a01 = d00;
            t1.a00 = d01 * S->c2;
            t1.a11 = d10;
            t1.a10 = d11 * S->c2;
            out = out + t1.scale(two * b);
            R4 t2;
            t2.a00 = h.a01 * p2;
            t2.a10 = h.a11 * p2;
            out = out + t2.scale(b);
        }
        return out;
    }
};

// rational function on E x E: num in R, den in k[x1, x2]
struct SurfFn {
    R4 num;
    Poly2 den;

    static SurfFn from_r4(R4 n, const FqCtx* k) {
        return {std::move(n), Poly2::constant(Fq::one(k))};
    }
    bool is_zero() const { return num.is_zero(); }
    SurfFn reduce() const {
        SurfFn r = *this;
        Poly2 g = poly2_gcd(poly2_gcd(poly2_gcd(r.num.a00, r.num.a10),
                                      poly2_gcd(r.num.a01, r.num.a11)),
                            r.den);
        if (g.deg_x1() > 0 || g.deg_x2() > 0) {
            r.num.a00 = r.num.a00.is_zero() ? r.num.a00 : poly2_exact_div(r.num.a00, g);
            r.num.a10 = r.num.a10.is_zero() ? r.num.a10 : poly2_exact_div(r.num.a10, g);
            r.num.a01 = r.num.a01.is_zero() ? r.num.a01 : poly2_exact_div(r.num.a01, g);
            r.num.a11 = r.num.a11.is_zero() ? r.num.a11 : poly2_exact_div(r.num.a11, g);
            r.den = poly2_exact_div(r.den, g);
        }
        // normalize: leading coefficient of den (in x2-major order) = 1
        Fq lc = r.den.c.back().lead();
        if (!lc.is_one()) {
            Fq li = lc.inv();
            r.den = r.den.scale(li);
            r.num = r.num.scale(li);
        }
        return r;
    }
};

inline SurfFn surf_add(const SurfFn& f, const SurfFn& g) {
    SurfFn r;
    r.num = f.num.mul_poly(g.den) + g.num.mul_poly(f.den);
    r.den = f.den * g.den;
    return r.reduce();
}
inline SurfFn surf_mul(const SurfCtx& S, const SurfFn& f, const SurfFn& g) {
    SurfFn r;
    r.num = r4_mul(S, f.num, g.num);
    r.den = f.den * g.den;
    return r.reduce();
}

// 1/f via the sign-flip norm: the product of all four conjugates is y-free
inline SurfFn surf_inverse(const SurfCtx& S, const SurfFn& f) {
    if (f.is_zero()) throw std::domain_error("inverse of zero function");
    R4 prod = r4_mul(S, f.num.flip1(), r4_mul(S, f.num.flip2(), f.num.flip1().flip2()));
    R4 nrm = r4_mul(S, f.num, prod);
    if (!nrm.a10.is_zero() || !nrm.a01.is_zero() || !nrm.a11.is_zero())
        throw std::logic_error("norm of surface function is not scalar");
    SurfFn r{prod.mul_poly(f.den), nrm.a00};
    return r.reduce();
}

// D(num/den) applied with the quotient rule; remains exact whenever the caller
// divides the pencil denominators back out.
inline SurfFn surf_derive(const SurfDerivation& D, const SurfFn& f) {
    SurfFn r;
    R4 dn = D.apply(f.num);
    // D(den) is y-free times y-parts: D(den) = 2a y1 den_x1 + 2b y2 den_x2
    const FqCtx* k = D.S->E->k;
    Fq two = Fq::from_int(k, 2);
    R4 dden;
    dden.a10 = f.den.derivative_x1().scale(two * D.a);
    dden.a01 = f.den.derivative_x2().scale(two * D.b);
    r.num = dn.mul_poly(f.den) - r4_mul(*D.S, f.num, dden);
    r.den = f.den * f.den;
    return r.reduce();
}

inline Fq r4_eval(const R4& h, const PointE2& P) {
    if (P.a.inf || P.b.inf) throw std::domain_error("r4_eval at infinity");
    Fq v = h.a00.eval(P.a.x, P.b.x);
    v += h.a10.eval(P.a.x, P.b.x) * P.a.y;
    v += h.a01.eval(P.a.x, P.b.x) * P.b.y;
    v += h.a11.eval(P.a.x, P.b.x) * P.a.y * P.b.y;
    return v;
}

// substitute the translation by a 2-torsion point P = (T1, T2) of E^2 into a
// surface function: x_i -> Moebius_i(x_i), y_i -> y_i v_i(x_i)
inline SurfFn surf_translate2(const SurfCtx& S, const SurfFn& f, const PointE2& P) {
    const CurveE* E = S.E;
    const FqCtx* k = E->k;
    ECMap id = ECMap::identity(E);
    RatFuncU one = RatFuncU::constant(Fq::one(k));
    RatFuncU u1 = RatFuncU::x(k), v1 = one, u2 = RatFuncU::x(k), v2 = one;
    if (!P.a.inf) {
        ECMap m = ec_map_translate2(id, P.a);
        u1 = m.u;
        v1 = m.v;
    }
    if (!P.b.inf) {
        ECMap m = ec_map_translate2(id, P.b);
        u2 = m.u;
        v2 = m.v;
    }
    // components a(x1, x2) evaluated at (u1, u2), cleared by den powers
    int D1 = 0, D2 = 0;
    for (const Poly2* comp : {&f.num.a00, &f.num.a10, &f.num.a01, &f.num.a11}) {
        D1 = std::max(D1, comp->deg_x1());
        D2 = std::max(D2, comp->deg_x2());
    }
    D1 = std::max(D1, f.den.deg_x1());
    D2 = std::max(D2, f.den.deg_x2());
    std::vector<FqPoly> p1(D1 + 1), q1(D1 + 1), p2(D2 + 1), q2(D2 + 1);
    p1[0] = q1[0] = FqPoly::constant(Fq::one(k));
    for (int i = 1; i <= D1; i++) {
        p1[i] = p1[i - 1] * u1.num;
        q1[i] = q1[i - 1] * u1.den;
    }
    p2[0] = q2[0] = FqPoly::constant(Fq::one(k));
    for (int j = 1; j <= D2; j++) {
        p2[j] = p2[j - 1] * u2.num;
        q2[j] = q2[j - 1] * u2.den;
    }
    // cleared substitution of a bivariate polynomial: sum c_ij u1^i u2^j * q1^{D1-i} q2^{D2-j}
    auto subst = [&](const Poly2& a) {
        Poly2 acc;
        for (int j = 0; j <= a.deg_x2(); j++) {
            const FqPoly& cj = a.c[j];
            for (int i = 0; i <= cj.deg(); i++) {
                if (kis0(cj.c[i])) continue;
                FqPoly in_x1 = p1[i] * q1[D1 - i] * FqPoly::constant(cj.c[i]);
                FqPoly in_x2 = p2[j] * q2[D2 - j];
                acc = acc + Poly2::from_x1(in_x1) * Poly2::from_x2(in_x2, k);
            }
        }
        return acc;
    };
    // y-parts: y1 v1(x1), y2 v2(x2); clear by v-dens too
    Poly2 v1n = Poly2::from_x1(v1.num), v1d = Poly2::from_x1(v1.den);
    Poly2 v2n = Poly2::from_x2(v2.num, k), v2d = Poly2::from_x2(v2.den, k);
    R4 num;
    Poly2 vclear = v1d * v2d;
    num.a00 = subst(f.num.a00) * vclear;
    num.a10 = subst(f.num.a10) * v1n * v2d;
    num.a01 = subst(f.num.a01) * v2n * v1d;
    num.a11 = subst(f.num.a11) * v1n * v2n;
    Poly2 den = subst(f.den) * vclear;
    return SurfFn{num, den}.reduce();
}

// --- implicit plane equations of embedded curves ---------------------------

// x1/x2-coordinate rational maps of an embedded curve's parametrization
struct CurveCoordFns {
    bool c1_const = false, c2_const = false;
    RatFuncU u1, v1, u2, v2;  // when not constant
    ECPoint k1, k2;           // when constant
};

inline CurveCoordFns curve_coords(const EmbeddedCurve& C) {
    CurveCoordFns f;
    if (C.c1.is_const) {
        f.c1_const = true;
        f.k1 = C.c1.cpt;
    } else {
        f.u1 = C.c1.map.u;
        f.v1 = C.c1.map.v;
    }
    if (C.c2.is_const) {
        f.c2_const = true;
        f.k2 = C.c2.cpt;
    } else {
        f.u2 = C.c2.map.u;
        f.v2 = C.c2.map.v;
    }
    return f;
}

// irreducible plane relation between U1(x) and U2(x), all pure-x1/x2 content
// stripped; divisor on E^2 is C + C^- minus poles along the infinity fibers.
inline Poly2 plane_equation(const CurveE& E, const RatFuncU& U1, const RatFuncU& U2) {
    const FqCtx* k = E.k;
    // f(t) = U1.num(t) - x1 U1.den(t), coefficients in k[x1]
    int d1 = std::max(U1.num.deg(), U1.den.deg());
    int d2 = std::max(U2.num.deg(), U2.den.deg());
    std::vector<Poly2> f(d1 + 1), g(d2 + 1);
    for (int i = 0; i <= d1; i++) {
        FqPoly coeff;  // in x1: U1.num[i] - x1 * U1.den[i]
        std::vector<Fq> cc = {U1.num.coeff(i, Fq::one(k)), -U1.den.coeff(i, Fq::one(k))};
        f[i] = Poly2::from_x1(FqPoly(cc));
    }
    for (int i = 0; i <= d2; i++) {
        std::vector<Fq> cc = {U2.num.coeff(i, Fq::one(k)), -U2.den.coeff(i, Fq::one(k))};
        FqPoly cp(cc);  // in "x2": build as Poly2 via from_x2
        g[i] = Poly2::from_x2(cp, k);
    }
    while (f.size() > 1 && f.back().is_zero()) f.pop_back();
    while (g.size() > 1 && g.back().is_zero()) g.pop_back();
    Poly2 q = sylvester_resultant(f, g);
    if (q.is_zero()) throw std::logic_error("degenerate implicitization");
    // strip pure-x1 and pure-x2 content
    FqPoly c1 = q.content_x1();
    if (c1.deg() > 0) q = poly2_exact_div(q, Poly2::from_x1(c1));
    // pure-x2 content: gcd over x1-coefficients; transpose view
    {
        // collect coefficients of x1^i as polynomials in x2
        int dx1 = q.deg_x1();
        FqPoly g2;
        for (int i = 0; i <= dx1; i++) {
            std::vector<Fq> cc;
            for (auto& p : q.c) cc.push_back(p.coeff(i, Fq::one(k)));
            FqPoly w(cc);
            g2 = poly_gcd(g2, w);
        }
        if (g2.deg() > 0) q = poly2_exact_div(q, Poly2::from_x2(g2, k));
    }
    // normalize leading coefficient
    Fq lc = q.c.back().lead();
    if (!lc.is_one()) q = q.scale(lc.inv());
    return q;
}

// --- principal function with divisor Dinf - D0 ------------------------------

struct DivisorSpec {
    std::vector<EmbeddedCurve> comps;  // all with multiplicity one
};

struct PrincipalFnError : std::runtime_error {
    explicit PrincipalFnError(const std::string& s) : std::runtime_error(s) {}
};

namespace detail {

struct MonomialBox {
    // exponents (i, e1, j, e2) with 2i + 3e1 <= M1, 2j + 3e2 <= M2
    struct Mono {
        int i, e1, j, e2;
    };
    std::vector<Mono> monos;
};

inline MonomialBox monomial_box(int M1, int M2) {
    MonomialBox box;
    for (int e1 = 0; e1 <= 1; e1++)
        for (int i = 0; 2 * i + 3 * e1 <= M1; i++)
            for (int e2 = 0; e2 <= 1; e2++)
                for (int j = 0; 2 * j + 3 * e2 <= M2; j++)
                    box.monos.push_back({i, e1, j, e2});
    return box;
}

// substitution of a parametrized curve into a monomial: returns even/odd parts
// e(x) + y o(x) with y^2 = c(x)
struct SubstPowers {
    std::vector<RatFuncU> u1pow, u2pow;
    RatFuncU v1, v2, c;
    bool flip2 = false;  // substitute (x1, y1, x2, -y2)
};

inline void mono_subst(const SubstPowers& sp, int i, int e1, int j, int e2, RatFuncU& even,
                       RatFuncU& odd) {
    RatFuncU base = sp.u1pow[i] * sp.u2pow[j];
    RatFuncU v2eff = sp.flip2 ? -sp.v2 : sp.v2;
    if (e1 && e2) {
        even = base * sp.c * sp.v1 * v2eff;
        odd = kzero(base);
    } else if (e1) {
        even = kzero(base);
        odd = base * sp.v1;
    } else if (e2) {
        even = kzero(base);
        odd = base * v2eff;
    } else {
        even = base;
        odd = kzero(base);
    }
}

}  // namespace detail

struct PrincipalFn {
    SurfFn g;
    Fq dir_a, dir_b;  // tangent direction of D0 (normalized, first nonzero = 1)
};

// tangent direction of a reducible fiber through the origin: Lie scalars of a
// kernel-vector parametrization; both components must agree projectively.
inline std::pair<Fq, Fq> tangent_direction(const CurveData& C, const DivisorSpec& D0) {
    const FqCtx* k = C.E.k;
    std::optional<std::pair<Fq, Fq>> dir;
    for (auto& comp : D0.comps) {
        Fq a, b;
        if (comp.c1.is_const) a = Fq::zero(k);
        else a = lie_scalar(comp.c1.map);
        if (comp.c2.is_const) b = Fq::zero(k);
        else b = lie_scalar(comp.c2.map);
        if (a.is_zero() && b.is_zero()) throw std::logic_error("component with zero direction");
        // normalize first nonzero entry to 1
        Fq s = a.is_zero() ? b.inv() : a.inv();
        std::pair<Fq, Fq> cur{a * s, b * s};
        if (!dir) dir = cur;
        else if (!(dir->first == cur.first && dir->second == cur.second))
            throw std::logic_error("component tangent directions disagree");
    }
    if (!dir) throw std::logic_error("empty divisor");
    return *dir;
}

// Constructs g with (g) = Dinf - D0 by an exact pole-bounded ansatz solved as a
// nullspace over the base field, then normalizes the designated coefficient.
inline PrincipalFn construct_principal_function(const CurveData& C, const DivisorSpec& D0,
                                                const DivisorSpec& Dinf) {
    const CurveE& E = C.E;
    const FqCtx* k = E.k;
    SurfCtx S(&E);
    // classify components
    struct FiberInfo {
        bool vertical;  // {T} x E (vertical: constant first coordinate)
        ECPoint T;      // the constant coordinate (may be infinity)
    };
    auto classify = [&](const EmbeddedCurve& c) -> std::optional<FiberInfo> {
        if (c.c1.is_const) return FiberInfo{true, c.c1.cpt};
        if (c.c2.is_const) return FiberInfo{false, c.c2.cpt};
        return std::nullopt;
    };
    // denominator and pole budgets
    Poly2 den = Poly2::constant(Fq::one(k));
    int d0_binf = 0, d0_hinf = 0, dinf_binf = 0, dinf_hinf = 0;
    std::vector<CurveCoordFns> d0_honest;
    std::vector<FiberInfo> d0_finite_fibers;
    for (auto& comp : D0.comps) {
        auto fib = classify(comp);
        if (!fib) {
            CurveCoordFns cf = curve_coords(comp);
            Poly2 q = plane_equation(E, cf.u1, cf.u2);
            den = den * q;
            d0_honest.push_back(cf);
        } else if (fib->T.inf) {
            (fib->vertical ? d0_binf : d0_hinf)++;
        } else {
            d0_finite_fibers.push_back(*fib);
            // (x1 - xT) or (x2 - xT): order 2 along the fiber, order-1 overshoot
            FqPoly lin(std::vector<Fq>{-fib->T.x, Fq::one(k)});
            den = den * (fib->vertical ? Poly2::from_x1(lin) : Poly2::from_x2(lin, k));
        }
    }
    std::vector<CurveCoordFns> dinf_honest;
    std::vector<FiberInfo> dinf_fibers;
    for (auto& comp : Dinf.comps) {
        auto fib = classify(comp);
        if (!fib) dinf_honest.push_back(curve_coords(comp));
        else if (fib->T.inf) (fib->vertical ? dinf_binf : dinf_hinf)++;
        else dinf_fibers.push_back(*fib);
    }
    int M1 = 2 * den.deg_x1() + d0_binf - dinf_binf;
    int M2 = 2 * den.deg_x2() + d0_hinf - dinf_hinf;
    if (M1 < 0 || M2 < 0) throw PrincipalFnError("negative pole budget");
    auto box = detail::monomial_box(M1, M2);
    size_t nm = box.monos.size();
    // build condition rows over k
    std::vector<std::vector<Fq>> rows;
    auto add_rows_from_ratfuncs = [&](std::vector<RatFuncU>& entries) {
        // common denominator
        FqPoly L = FqPoly::constant(Fq::one(k));
        for (auto& e : entries) L = poly_exact_div(L * e.den, poly_gcd(L, e.den));
        int maxdeg = -1;
        std::vector<FqPoly> cleared(entries.size());
        for (size_t m = 0; m < entries.size(); m++) {
            cleared[m] = entries[m].num * poly_exact_div(L, entries[m].den);
            maxdeg = std::max(maxdeg, cleared[m].deg());
        }
        for (int d = 0; d <= maxdeg; d++) {
            std::vector<Fq> row(nm, Fq::zero(k));
            bool nonzero = false;
            for (size_t m = 0; m < entries.size(); m++) {
                row[m] = cleared[m].coeff(d, Fq::one(k));
                if (!row[m].is_zero()) nonzero = true;
            }
            if (nonzero) rows.push_back(std::move(row));
        }
    };
    auto add_curve_conditions = [&](const CurveCoordFns& cf, bool flip_y2) {
        detail::SubstPowers sp;
        sp.flip2 = flip_y2;
        sp.v1 = cf.v1;
        sp.v2 = cf.v2;
        sp.c = RatFuncU::from_poly(E.rhs(), k);
        int maxi = M1 / 2 + 1, maxj = M2 / 2 + 1;
        sp.u1pow.resize(maxi + 1);
        sp.u2pow.resize(maxj + 1);
        sp.u1pow[0] = RatFuncU::constant(Fq::one(k));
        sp.u2pow[0] = sp.u1pow[0];
        for (int i = 1; i <= maxi; i++) sp.u1pow[i] = sp.u1pow[i - 1] * cf.u1;
        for (int j = 1; j <= maxj; j++) sp.u2pow[j] = sp.u2pow[j - 1] * cf.u2;
        std::vector<RatFuncU> evens(nm), odds(nm);
        for (size_t m = 0; m < nm; m++) {
            auto& mo = box.monos[m];
            detail::mono_subst(sp, mo.i, mo.e1, mo.j, mo.e2, evens[m], odds[m]);
        }
        add_rows_from_ratfuncs(evens);
        add_rows_from_ratfuncs(odds);
    };
    // conditions: vanish on each Dinf honest component and on the conjugate of
    // each D0 honest component
    for (auto& cf : dinf_honest) add_curve_conditions(cf, false);
    for (auto& cf : d0_honest) add_curve_conditions(cf, true);
    // finite-fiber conditions (both Dinf components and D0 overshoot compensation)
    auto add_fiber_conditions = [&](const FiberInfo& fib) {
        // vertical {T} x E: substitute x1 = xT, y1 = 0: rows indexed by (j, e2)
        // horizontal: substitute x2 = xT, y2 = 0
        std::map<std::pair<int, int>, std::vector<Fq>> rowmap;
        for (size_t m = 0; m < nm; m++) {
            auto& mo = box.monos[m];
            if (fib.vertical) {
                if (mo.e1) continue;  // y1 = 0 kills these
                Fq val = fib.T.x.pow(mo.i);
                auto key = std::make_pair(mo.j, mo.e2);
                auto it = rowmap.find(key);
                if (it == rowmap.end())
                    it = rowmap.emplace(key, std::vector<Fq>(nm, Fq::zero(k))).first;
                it->second[m] += val;
            } else {
                if (mo.e2) continue;
                Fq val = fib.T.x.pow(mo.j);
                auto key = std::make_pair(mo.i, mo.e1);
                auto it = rowmap.find(key);
                if (it == rowmap.end())
                    it = rowmap.emplace(key, std::vector<Fq>(nm, Fq::zero(k))).first;
                it->second[m] += val;
            }
        }
        for (auto& [key, row] : rowmap) rows.push_back(row);
    };
    for (auto& fib : dinf_fibers) add_fiber_conditions(fib);
    for (auto& fib : d0_finite_fibers) add_fiber_conditions(fib);
    // solve
    Mat<Fq> Mx(rows.size(), nm, Fq::zero(k));
    for (size_t i = 0; i < rows.size(); i++)
        for (size_t j = 0; j < nm; j++) Mx.at(i, j) = rows[i][j];
    auto ker = kernel_basis(Mx, Fq::zero(k));
    if (ker.size() != 1)
        throw PrincipalFnError("ansatz nullspace has dimension " + std::to_string(ker.size()));
    // assemble numerator
    R4 numr;
    for (size_t m = 0; m < nm; m++) {
        Fq cm = ker[0][m];
        if (cm.is_zero()) continue;
        auto& mo = box.monos[m];
        Poly2 term = Poly2::from_x1(FqPoly::monomial(cm, mo.i)) *
                     Poly2::from_x2(FqPoly::monomial(Fq::one(k), mo.j), k);
        if (mo.e1 && mo.e2) numr.a11 = numr.a11 + term;
        else if (mo.e1) numr.a10 = numr.a10 + term;
        else if (mo.e2) numr.a01 = numr.a01 + term;
        else numr.a00 = numr.a00 + term;
    }
    PrincipalFn out;
    out.g = SurfFn{numr, den}.reduce();
    auto dir = tangent_direction(C, D0);
    out.dir_a = dir.first;
    out.dir_b = dir.second;
    return out;
}

// --- the theta pencil --------------------------------------------------------

// coefficients G_i with g_t = sum_i t^i G_i; G_i = (-1)^i D^{2i}(g) / (2^i i!),
// each of which lies back in L(D0) (shared denominator).
struct ThetaPencil {
    SurfCtx S;
    SurfFn g;           // = G_0
    std::vector<R4> gnum;  // numerators of G_i over g.den, i = 0..(p-1)/2
    Fq dir_a, dir_b;

    ThetaPencil() = default;
    explicit ThetaPencil(const CurveE* E) : S(E) {}
};

inline ThetaPencil make_pencil(const CurveData& C, const PrincipalFn& pf) {
    const FqCtx* k = C.E.k;
    uint32_t p = k->p;
    ThetaPencil P(&C.E);
    P.g = pf.g;
    P.dir_a = pf.dir_a;
    P.dir_b = pf.dir_b;
    SurfDerivation D(&P.S, pf.dir_a, pf.dir_b);
    // iterate: n_{j+1} = (D(n_j) den - n_j D(den)) / den  -- exact by invariance
    const Poly2& den = pf.g.den;
    Poly2 den_x1 = den.derivative_x1(), den_x2 = den.derivative_x2();
    Fq two = Fq::from_int(k, 2);
    R4 dden;
    dden.a10 = den_x1.scale(two * pf.dir_a);
    dden.a01 = den_x2.scale(two * pf.dir_b);
    std::vector<R4> derivs(p + 1);
    derivs[0] = pf.g.num;
    for (uint32_t j = 0; j < p; j++) {
        R4 t = D.apply(derivs[j]).mul_poly(den) - r4_mul(P.S, derivs[j], dden);
        R4 nj;
        nj.a00 = t.a00.is_zero() ? t.a00 : poly2_exact_div(t.a00, den);
        nj.a10 = t.a10.is_zero() ? t.a10 : poly2_exact_div(t.a10, den);
        nj.a01 = t.a01.is_zero() ? t.a01 : poly2_exact_div(t.a01, den);
        nj.a11 = t.a11.is_zero() ? t.a11 : poly2_exact_div(t.a11, den);
        derivs[j + 1] = nj;
    }
    if (!derivs[p].is_zero())
        throw std::logic_error("derivation is not nilpotent of order p along this direction");
    // G_i = (-1)^i / (2^i i!) * derivs[2i]
    uint32_t m = (p - 1) / 2;
    for (uint32_t i = 0; i <= m; i++) {
        long long fact = 1;
        for (uint32_t t = 1; t <= i; t++) fact = (fact * 2 * t) % p;  // 2^i i!
        Fq c = Fq::from_int(k, fact).inv();
        if (i % 2) c = -c;
        P.gnum.push_back(derivs[2 * i].scale(c));
    }
    return P;
}

// g_t for a parameter t in (an extension of) the base field of the pencil
inline SurfFn theta_translate(const ThetaPencil& P, const Fq& t) {
    const FqCtx* k = P.S.E->k;
    if (t.ctx != k) throw std::invalid_argument("parameter not in the pencil's field");
    R4 acc;
    Fq tp = Fq::one(k);
    for (size_t i = 0; i < P.gnum.size(); i++) {
        acc = acc + P.gnum[i].scale(tp);
        tp = tp * t;
    }
    return SurfFn{acc, P.g.den};
}

// full derivative data for coaction property checks
inline std::vector<R4> pencil_derivatives(const CurveData& C, const PrincipalFn& pf) {
    const FqCtx* k = C.E.k;
    uint32_t p = k->p;
    SurfCtx S(&C.E);
    SurfDerivation D(&S, pf.dir_a, pf.dir_b);
    const Poly2& den = pf.g.den;
    Fq two = Fq::from_int(k, 2);
    R4 dden;
    dden.a10 = den.derivative_x1().scale(two * pf.dir_a);
    dden.a01 = den.derivative_x2().scale(two * pf.dir_b);
    std::vector<R4> derivs(p + 1);
    derivs[0] = pf.g.num;
    for (uint32_t j = 0; j < p; j++) {
        R4 t = D.apply(derivs[j]).mul_poly(den) - r4_mul(S, derivs[j], dden);
        R4 nj;
        nj.a00 = t.a00.is_zero() ? t.a00 : poly2_exact_div(t.a00, den);
        nj.a10 = t.a10.is_zero() ? t.a10 : poly2_exact_div(t.a10, den);
        nj.a01 = t.a01.is_zero() ? t.a01 : poly2_exact_div(t.a01, den);
        nj.a11 = t.a11.is_zero() ? t.a11 : poly2_exact_div(t.a11, den);
        derivs[j + 1] = nj;
    }
    return derivs;
}

}  // namespace ssg2

#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fqfactor.hpp"
#include "quat.hpp"
#include "ratfunc.hpp"

namespace ssg2 {

// y^2 = x^3 + A x + B over the coefficient field of A, B.
struct CurveE {
    const FqCtx* k = nullptr;
    Fq A, B;

    FqPoly rhs() const {
        std::vector<Fq> c = {B, A, Fq::zero(k), Fq::one(k)};
        return FqPoly(c);
    }
    bool nonsingular() const {
        Fq d = Fq::from_int(k, 4) * A * A * A + Fq::from_int(k, 27) * B * B;
        return !d.is_zero();
    }
};

struct ECPoint {
    bool inf = true;
    Fq x, y;

    static ECPoint infinity() { return ECPoint{}; }
    static ECPoint make(const Fq& x, const Fq& y) { return ECPoint{false, x, y}; }
    bool operator==(const ECPoint& o) const {
        if (inf || o.inf) return inf == o.inf;
        return x == o.x && y == o.y;
    }
    bool operator!=(const ECPoint& o) const { return !(*this == o); }
};

inline bool on_curve(const CurveE& E, const ECPoint& P) {
    if (P.inf) return true;
    return P.y * P.y == E.rhs().eval(P.x);
}

inline ECPoint ec_neg(const ECPoint& P) {
    if (P.inf) return P;
    return ECPoint::make(P.x, -P.y);
}

inline ECPoint ec_add(const CurveE& E, const ECPoint& P, const ECPoint& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    if (P.x == Q.x) {
        if (P.y == -Q.y) return ECPoint::infinity();
        // tangent
        Fq lam = (Fq::from_int(E.k, 3) * P.x * P.x + E.A) / (Fq::from_int(E.k, 2) * P.y);
        Fq x3 = lam * lam - P.x - Q.x;
        Fq y3 = lam * (P.x - x3) - P.y;
        return ECPoint::make(x3, y3);
    }
    Fq lam = (P.y - Q.y) / (P.x - Q.x);
    Fq x3 = lam * lam - P.x - Q.x;
    Fq y3 = lam * (P.x - x3) - P.y;
    return ECPoint::make(x3, y3);
}

inline ECPoint ec_mul(const CurveE& E, Int n, ECPoint P) {
    if (n < 0) { n = -n; P = ec_neg(P); }
    ECPoint R = ECPoint::infinity();
    while (n > 0) {
        if ((n & 1) != 0) R = ec_add(E, R, P);
        P = ec_add(E, P, P);
        n >>= 1;
    }
    return R;
}

// Rational self-map of E of the shape (x, y) -> (u(x), y v(x)); the zero map is
// the constant map to the origin.  Endomorphisms and their 2-torsion translates
// all have this shape (p odd).
struct ECMap {
    const CurveE* E = nullptr;
    bool zero = true;
    RatFuncU u, v;

    static ECMap zero_map(const CurveE* E) { return ECMap{E, true, {}, {}}; }
    static ECMap identity(const CurveE* E) {
        return ECMap{E, false, RatFuncU::x(E->k), RatFuncU::constant(Fq::one(E->k))};
    }
    static ECMap frobenius(const CurveE* E) {
        uint32_t p = E->k->p;
        RatFuncU u = RatFuncU::from_poly(FqPoly::monomial(Fq::one(E->k), p), E->k);
        FqPoly c = E->rhs();
        FqPoly vp = FqPoly::constant(Fq::one(E->k));
        for (uint32_t i = 0; i < (p - 1) / 2; i++) vp = vp * c;
        return ECMap{E, false, u, RatFuncU::from_poly(vp, E->k)};
    }
    bool operator==(const ECMap& o) const {
        if (zero || o.zero) return zero == o.zero;
        return u == o.u && v == o.v;
    }
};

inline ECPoint ec_map_apply(const ECMap& m, const ECPoint& P) {
    if (m.zero || P.inf) return ECPoint::infinity();
    if (m.u.has_pole_at(P.x)) return ECPoint::infinity();
    return ECPoint::make(m.u.eval(P.x), P.y * m.v.eval(P.x));
}

inline ECMap ec_map_neg(const ECMap& m) {
    if (m.zero) return m;
    ECMap r = m;
    r.v = -r.v;
    return r;
}

inline ECMap ec_map_add(const ECMap& a, const ECMap& b) {
    const CurveE* E = a.E ? a.E : b.E;
    if (a.zero) return b;
    if (b.zero) return a;
    const FqCtx* k = E->k;
    RatFuncU c = RatFuncU::from_poly(E->rhs(), k);
    if (a.u == b.u) {
        if (a.v == -b.v || (a.v.is_zero() && b.v.is_zero())) return ECMap::zero_map(E);
        if (a.v == b.v) {
            // tangent doubling: lambda = y (3u^2 + A)/(2 c v)
            RatFuncU three_u2 =
                a.u * a.u * RatFuncU::constant(Fq::from_int(k, 3)) +
                RatFuncU::constant(E->A);
            RatFuncU t = three_u2 / (RatFuncU::constant(Fq::from_int(k, 2)) * c * a.v);
            RatFuncU x3 = c * t * t - a.u - a.u;
            RatFuncU y3v = t * (a.u - x3) - a.v;
            return ECMap{E, false, x3, y3v};
        }
        throw std::logic_error("ec_map_add: inconsistent maps with equal x-parts");
    }
    // lambda = y (v1 - v2)/(u1 - u2)
    RatFuncU s = (a.v - b.v) / (a.u - b.u);
    RatFuncU x3 = c * s * s - a.u - b.u;
    RatFuncU y3v = s * (a.u - x3) - a.v;
    return ECMap{E, false, x3, y3v};
}

inline ECMap ec_map_mul_int(const ECMap& m, Int n) {
    const CurveE* E = m.E;
    ECMap P = m;
    if (n < 0) { n = -n; P = ec_map_neg(P); }
    ECMap R = ECMap::zero_map(E);
    while (n > 0) {
        if ((n & 1) != 0) R = ec_map_add(R, P);
        P = ec_map_add(P, P);
        n >>= 1;
    }
    return R;
}

// a after b (apply b first)
inline ECMap ec_map_compose(const ECMap& a, const ECMap& b) {
    const CurveE* E = a.E ? a.E : b.E;
    if (a.zero || b.zero) return ECMap::zero_map(E);
    RatFuncU u = a.u.compose(b.u);
    RatFuncU v = b.v * a.v.compose(b.u);
    return ECMap{E, false, u, v};
}

// translation by a 2-torsion point (r, 0); keeps the (u, yv) shape
inline ECMap ec_map_translate2(const ECMap& m, const ECPoint& T) {
    const CurveE* E = m.E;
    if (T.inf) return m;
    if (!T.y.is_zero()) throw std::invalid_argument("translation point must be 2-torsion");
    if (m.zero) throw std::invalid_argument("translate of the zero map is a constant map");
    const FqCtx* k = E->k;
    RatFuncU r = RatFuncU::constant(T.x);
    RatFuncU c = RatFuncU::from_poly(E->rhs(), k);
    // x' = (c v^2 - (u + r)(u - r)^2) / (u - r)^2,  y' = y v (r - x')/(u - r)
    RatFuncU d = m.u - r;
    RatFuncU x2 = c * m.v * m.v / (d * d) - m.u - r;
    RatFuncU v2 = m.v * (r - x2) / d;
    return ECMap{E, false, x2, v2};
}

// curve presets: j0 (y^2 = x^3 + 1, sigma = zeta_3 scaling) over p = 2 mod 3,
// j1728 (y^2 = x^3 - x, sigma = (x,y) -> (-x, iy)) over p = 3 mod 4.
struct CurveData {
    CurveE E;
    ECMap sigma_map;
    ECMap frob_map;
    std::string name;
    Fq special_root;  // zeta_3 or i depending on the preset
    FqCtxPtr owner;   // owning pointer of the coefficient field

    CurveData() = default;
    CurveData(const CurveData& o)
        : E(o.E), sigma_map(o.sigma_map), frob_map(o.frob_map), name(o.name),
          special_root(o.special_root), owner(o.owner) {
        sigma_map.E = &E;
        frob_map.E = &E;
    }
    CurveData& operator=(const CurveData& o) {
        if (this == &o) return *this;
        E = o.E;
        sigma_map = o.sigma_map;
        frob_map = o.frob_map;
        name = o.name;
        special_root = o.special_root;
        owner = o.owner;
        sigma_map.E = &E;
        frob_map.E = &E;
        return *this;
    }
};

inline CurveData curve_preset(const std::string& name, FqCtxPtr kp) {
    const FqCtx* k = kp.get();
    Rng rng(2024);
    CurveData C;
    C.name = name;
    if (name == "j0") {
        if (k->p % 3 != 2) throw std::invalid_argument("j0 preset needs p = 2 mod 3");
        C.E = CurveE{k, Fq::zero(k), Fq::one(k)};
        // zeta_3: deterministic smallest root of x^2 + x + 1
        FqPoly f = fqpoly_from_ints(k, {1, 1, 1});
        auto roots = fqpoly_roots(f, rng);
        if (roots.size() != 2) throw std::invalid_argument("field does not contain zeta_3");
        Fq z = roots[0];
        C.special_root = z;
        C.sigma_map = ECMap{&C.E, false,
                            RatFuncU::make(FqPoly(std::vector<Fq>{Fq::zero(k), z}),
                                           FqPoly::constant(Fq::one(k))),
                            RatFuncU::constant(Fq::one(k))};
    } else if (name == "j1728") {
        if (k->p % 4 != 3) throw std::invalid_argument("j1728 preset needs p = 3 mod 4");
        C.E = CurveE{k, -Fq::one(k), Fq::zero(k)};
        FqPoly f = fqpoly_from_ints(k, {1, 0, 1});
        auto roots = fqpoly_roots(f, rng);
        if (roots.size() != 2) throw std::invalid_argument("field does not contain i");
        Fq i = roots[0];
        C.special_root = i;
        C.sigma_map = ECMap{&C.E, false,
                            RatFuncU::make(FqPoly(std::vector<Fq>{Fq::zero(k), -Fq::one(k)}),
                                           FqPoly::constant(Fq::one(k))),
                            RatFuncU::constant(i)};
    } else {
        throw std::invalid_argument("unknown curve preset " + name);
    }
    C.frob_map = ECMap::frobenius(&C.E);
    C.owner = std::move(kp);
    return C;
}

// sigma_map must be rebuilt against the copied curve whenever CurveData is copied;
// keep CurveData in one place and pass by reference.
struct CurveDataHolder {
    std::shared_ptr<CurveData> data;
};

// all four 2-torsion points, infinity first, finite ones by root order
inline std::vector<ECPoint> two_torsion_pts(const CurveE& E) {
    Rng rng(5);
    auto roots = fqpoly_roots(E.rhs(), rng);
    if (roots.size() != 3)
        throw std::domain_error("2-torsion not rational over the base field");
    std::vector<ECPoint> out = {ECPoint::infinity()};
    for (auto& r : roots) out.push_back(ECPoint::make(r, Fq::zero(E.k)));
    return out;
}

// coordinates of q in the basis 1, sigma, F, sigma F (integrality not enforced)
inline std::optional<std::array<Rat, 4>> sigma_frob_coords(const Quat& q, const Quat& sigma,
                                                           const Quat& frob) {
    Mat<Rat> m(4, 4, Rat(0));
    std::array<Quat, 4> bas = {Quat::one(q.alg), sigma, frob, sigma * frob};
    for (size_t i = 0; i < 4; i++) {
        m.at(i, 0) = bas[i].w; m.at(i, 1) = bas[i].x;
        m.at(i, 2) = bas[i].y; m.at(i, 3) = bas[i].z;
    }
    Mat<Rat> mi;
    if (!mat_inverse(m, mi, Rat(0))) return std::nullopt;
    std::array<Rat, 4> out;
    std::vector<Rat> v = {q.w, q.x, q.y, q.z};
    for (size_t i = 0; i < 4; i++) {
        Rat s = 0;
        for (size_t j = 0; j < 4; j++) s += v[j] * mi.at(j, i);
        out[i] = s;
    }
    return out;
}

struct NonEvaluable : std::domain_error {
    explicit NonEvaluable(const std::string& s) : std::domain_error(s) {}
};

// gamma correspondence, restricted to the evaluable subring Z[sigma, F]
inline ECMap endo_to_map(const CurveData& C, const Quat& q, const Quat& sigma,
                         const Quat& frob) {
    auto co = sigma_frob_coords(q, sigma, frob);
    if (!co) throw NonEvaluable("sigma, F do not span the algebra");
    for (auto& c : *co)
        if (!is_integer(c)) throw NonEvaluable("endomorphism not in Z[sigma, F]: " + q.str());
    ECMap sf = ec_map_compose(C.sigma_map, C.frob_map);
    ECMap r = ec_map_mul_int(ECMap::identity(&C.E), inum((*co)[0]));
    r = ec_map_add(r, ec_map_mul_int(C.sigma_map, inum((*co)[1])));
    r = ec_map_add(r, ec_map_mul_int(C.frob_map, inum((*co)[2])));
    r = ec_map_add(r, ec_map_mul_int(sf, inum((*co)[3])));
    return r;
}

// scalar c with phi^* (dx/2y) = c dx/2y; equals u'/v and must be constant
inline Fq lie_scalar(const ECMap& m) {
    if (m.zero) return Fq::zero(m.E->k);
    RatFuncU c = m.u.derivative() / m.v;
    if (!c.is_constant()) throw std::logic_error("lie scalar is not constant");
    return c.constant_value();
}

// invariant derivation dual to dx/2y: D(x) = 2y, D(y) = 3x^2 + A
struct DerivationE {
    FqPoly dx_over_y;  // D(x)/y = 2
    FqPoly dy;         // D(y) = 3x^2 + A
};
inline DerivationE invariant_derivation(const CurveE& E) {
    DerivationE d;
    d.dx_over_y = FqPoly::constant(Fq::from_int(E.k, 2));
    d.dy = FqPoly(std::vector<Fq>{E.A, Fq::zero(E.k), Fq::from_int(E.k, 3)});
    return d;
}

// point pair on E x E
struct PointE2 {
    ECPoint a, b;
    bool operator==(const PointE2& o) const { return a == o.a && b == o.b; }
};

// one coordinate of an embedded-curve parametrization: a map or a constant point
struct CoordMap {
    bool is_const = false;
    ECMap map;     // when !is_const
    ECPoint cpt;   // when is_const

    ECPoint at(const ECPoint& T) const { return is_const ? cpt : ec_map_apply(map, T); }
};

// T -> (c1(T), c2(T)): the image of E under a kernel vector, translated by a
// 2-torsion point of E^2.
struct EmbeddedCurve {
    const CurveE* E = nullptr;
    CoordMap c1, c2;
    PointE2 trans;  // the translation applied (2-torsion)

    PointE2 param(const ECPoint& T) const { return {c1.at(T), c2.at(T)}; }
};

// build the embedded curve for a kernel vector (phi1, phi2), translated by P
inline EmbeddedCurve embed_curve(const CurveData& C, const Quat& phi1, const Quat& phi2,
                                 const Quat& sigma, const Quat& frob, const PointE2& P) {
    EmbeddedCurve ec;
    ec.E = &C.E;
    ec.trans = P;
    auto mk = [&](const Quat& q, const ECPoint& t) {
        CoordMap cm;
        ECMap m = endo_to_map(C, q, sigma, frob);
        if (m.zero) {
            cm.is_const = true;
            cm.cpt = t;
        } else {
            cm.is_const = false;
            cm.map = t.inf ? m : ec_map_translate2(m, t);
        }
        return cm;
    };
    ec.c1 = mk(phi1, P.a);
    ec.c2 = mk(phi2, P.b);
    return ec;
}

// membership for 2-torsion points of E^2 by enumeration over E[2]
inline bool curve_membership_2tors(const EmbeddedCurve& C, const PointE2& Q) {
    for (auto& T : two_torsion_pts(*C.E))
        if (C.param(T) == Q) return true;
    return false;
}

inline Int ec_count_points(const CurveE& E) {
    // naive count over the coefficient field
    Int q = E.k->order();
    if (q > 100000) throw std::domain_error("naive count too large");
    Int n = 1;  // infinity
    FqPoly c = E.rhs();
    // iterate all field elements via coefficient counters
    std::vector<uint32_t> cnt(E.k->absdeg, 0);
    while (true) {
        Fq x = Fq::from_coeffs(E.k, std::vector<uint32_t>(cnt.begin(), cnt.end()));
        Fq r = c.eval(x);
        if (r.is_zero()) n += 1;
        else if (fq_is_square(r)) n += 2;
        size_t i = 0;
        while (i < cnt.size()) {
            cnt[i]++;
            if (cnt[i] < E.k->p) break;
            cnt[i] = 0;
            i++;
        }
        if (i == cnt.size()) break;
    }
    return n;
}

}  // namespace ssg2

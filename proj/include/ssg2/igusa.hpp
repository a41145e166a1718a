#pragma once
#include <array>
#include <vector>

#include "fqfactor.hpp"

namespace ssg2 {

// Invariants of binary sextics from projective root differences, computed in a
// splitting field.  For f of degree 5 the sixth root is taken at infinity.
// With roots [a_i : b_i] and (ij) = a_i b_j - a_j b_i:
//   J2  = lc^2  sum over 15 pairings of (12)^2(34)^2(56)^2
//   J4  = lc^4  sum over 10 triple-pairs  (12)^2(23)^2(31)^2 (45)^2(56)^2(64)^2
//   J6  = lc^6  sum over 60 of (12)^2(23)^2(31)^2(45)^2(56)^2(64)^2(14)^2(25)^2(36)^2
//   J10 = lc^10 prod_{i<j} (ij)^2
//   J8  = (J2 J6 - J4^2)/4
struct IgusaInvariants {
    Fq j2, j4, j6, j8, j10;
};

namespace detail {

struct ProjRoot {
    Fq a, b;  // [a : b]
};

inline Fq pr_diff(const ProjRoot& x, const ProjRoot& y) { return x.a * y.b - y.a * x.b; }

}  // namespace detail

// f has degree 5 or 6 and must be squarefree; invariants land in f's field.
// kOwner owns f's coefficient context (needed to build the splitting tower).
inline IgusaInvariants igusa_invariants(const FqPoly& f0, FqCtxPtr kOwner, Rng& rng) {
    int d = f0.deg();
    if (d != 5 && d != 6) throw std::invalid_argument("need a quintic or sextic");
    const FqCtx* k = f0.c[0].ctx;
    if (kOwner.get() != k) throw std::invalid_argument("owner mismatch");
    FqCtxPtr cur = splitting_field(kOwner, f0, rng);
    const FqCtx* K = cur.get();
    auto roots = fqpoly_roots_mult(fqpoly_lift(K, f0), rng);
    std::vector<detail::ProjRoot> R;
    for (auto& [r, m] : roots) {
        if (m != 1) throw std::invalid_argument("polynomial is not squarefree");
        R.push_back({r, Fq::one(K)});
    }
    if (d == 5) R.push_back({Fq::one(K), Fq::zero(K)});  // root at infinity
    if (R.size() != 6) throw std::logic_error("expected six projective roots");
    Fq lc = Fq::lift(K, f0.lead());
    // pair differences
    Fq diff[6][6];
    for (int i = 0; i < 6; i++)
        for (int j = 0; j < 6; j++) diff[i][j] = detail::pr_diff(R[i], R[j]);
    auto sq = [&](int i, int j) { return diff[i][j] * diff[i][j]; };
    // J2: 15 perfect matchings of {0..5}
    Fq J2 = Fq::zero(K);
    int others[5] = {1, 2, 3, 4, 5};
    (void)others;
    for (int a = 1; a < 6; a++) {
        // pair (0,a); remaining 4 elements split into 3 matchings
        std::vector<int> rem;
        for (int t = 1; t < 6; t++)
            if (t != a) rem.push_back(t);
        int combos[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        for (auto& c : combos)
            J2 += sq(0, a) * sq(rem[c[0]], rem[c[1]]) * sq(rem[c[2]], rem[c[3]]);
    }
    // J4: unordered partitions of the six roots into two unordered triples (10)
    Fq J4 = Fq::zero(K);
    std::vector<std::array<int, 3>> triples;
    for (int a = 1; a < 6; a++)
        for (int b2 = a + 1; b2 < 6; b2++) triples.push_back({0, a, b2});
    auto tri_prod = [&](const std::array<int, 3>& t) {
        return sq(t[0], t[1]) * sq(t[1], t[2]) * sq(t[2], t[0]);
    };
    for (auto& t : triples) {
        std::array<int, 3> u{};
        int idx = 0;
        for (int x = 1; x < 6; x++) {
            if (x != t[1] && x != t[2]) u[idx++] = x;
        }
        // u has the remaining three (excluding 0, t1, t2)
        J4 += tri_prod(t) * tri_prod(u);
    }
    // J6: sum over ordered pairings between the two triples of a partition.
    // For each partition {T, U} and each bijection T -> U: product of the two
    // triangle terms and the three cross differences squared.
    Fq J6 = Fq::zero(K);
    for (auto& t : triples) {
        std::array<int, 3> u{};
        int idx = 0;
        for (int x = 1; x < 6; x++)
            if (x != t[1] && x != t[2]) u[idx++] = x;
        int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (auto& pm : perms) {
            Fq cross = sq(t[0], u[pm[0]]) * sq(t[1], u[pm[1]]) * sq(t[2], u[pm[2]]);
            J6 += tri_prod(t) * tri_prod(u) * cross;
        }
    }
    // J10: discriminant-type product
    Fq J10 = Fq::one(K);
    for (int i = 0; i < 6; i++)
        for (int j = i + 1; j < 6; j++) J10 = J10 * sq(i, j);
    Fq lc2 = lc * lc;
    Fq lc4 = lc2 * lc2, lc6 = lc4 * lc2, lc10 = lc6 * lc4;
    IgusaInvariants out;
    Fq j2K = lc2 * J2, j4K = lc4 * J4, j6K = lc6 * J6, j10K = lc10 * J10;
    Fq j8K = (j2K * j6K - j4K * j4K) / Fq::from_int(K, 4);
    // the invariants are symmetric in the roots, hence lie in the base field
    out.j2 = j2K.lower(k);
    out.j4 = j4K.lower(k);
    out.j6 = j6K.lower(k);
    out.j8 = j8K.lower(k);
    out.j10 = j10K.lower(k);
    return out;
}

// equality of weighted projective points (weights 2,4,6,8,10), given j10 != 0
inline bool igusa_isomorphic(const IgusaInvariants& a, const IgusaInvariants& b) {
    if (a.j10.is_zero() || b.j10.is_zero()) throw std::domain_error("singular model");
    // compare absolute invariants j2^5/j10, j4^5/j10^2, j6^5/j10^3, j8^5/j10^4
    auto cmp = [&](const Fq& xa, const Fq& xb, int w) {
        Fq pa = xa.pow(5), pb = xb.pow(5);
        Fq da = a.j10.pow(w), db = b.j10.pow(w);
        return pa * db == pb * da;
    };
    return cmp(a.j2, b.j2, 1) && cmp(a.j4, b.j4, 2) && cmp(a.j6, b.j6, 3) &&
           cmp(a.j8, b.j8, 4);
}

// L-polynomial of y^2 = f(x) (genus 2) over F_q from point counts over F_q, F_{q^2}:
// L(T) = 1 + a1 T + a2 T^2 + q a1 T^3 + q^2 T^4 with
// a1 = N1 - (q+1), a2 = (N2 - (q^2+1) + a1^2 (.. power sums ..)) / 2.
struct LPoly {
    Int q;
    std::array<Int, 5> coeff;  // 1, a1, a2, q a1, q^2
};

// count affine points of y^2 = f(x) plus the points at infinity (2 if deg f = 6
// and lc is a square, 0 if non-square; 1 if deg f = 5)
inline Int hyperelliptic_count(const FqPoly& f, const FqCtx* K) {
    FqPoly fl = fqpoly_lift(K, f);
    Int n = 0;
    // chi(a) over K via a^((q-1)/2); use the subfield-norm shortcut when K is a
    // quadratic extension of f's field
    Int e = (K->order() - 1) / 2;
    std::vector<uint32_t> cnt(K->absdeg, 0);
    while (true) {
        Fq x = Fq::from_coeffs(K, std::vector<uint32_t>(cnt.begin(), cnt.end()));
        Fq v = fl.eval(x);
        if (v.is_zero()) n += 1;
        else {
            Fq c = v.pow(e);
            if (c.is_one()) n += 2;
        }
        size_t i = 0;
        while (i < cnt.size()) {
            cnt[i]++;
            if (cnt[i] < K->p) break;
            cnt[i] = 0;
            i++;
        }
        if (i == cnt.size()) break;
    }
    if (f.deg() == 5) n += 1;
    else {
        Fq lc = Fq::lift(K, f.lead());
        if (lc.pow(e).is_one()) n += 2;
    }
    return n;
}

// point count over the quadratic extension K2 of f's field, using the
// subfield norm for the quadratic character and a character table
inline Int hyperelliptic_count_quad(const FqPoly& f, const FqCtx* K2) {
    const FqCtx* k = f.c[0].ctx;
    // chi table over the small field
    Int qs = k->order();
    Int e = (qs - 1) / 2;
    std::vector<int8_t> chi((size_t)(uint64_t)qs, 0);
    {
        std::vector<uint32_t> cnt(k->absdeg, 0);
        while (true) {
            Fq x = Fq::from_coeffs(k, std::vector<uint32_t>(cnt.begin(), cnt.end()));
            size_t idx = 0, mul = 1;
            for (uint32_t i = 0; i < k->absdeg; i++) {
                idx += (size_t)x.c[i] * mul;
                mul *= k->p;
            }
            if (x.is_zero()) chi[idx] = 0;
            else chi[idx] = x.pow(e).is_one() ? 1 : -1;
            size_t i = 0;
            while (i < cnt.size()) {
                cnt[i]++;
                if (cnt[i] < k->p) break;
                cnt[i] = 0;
                i++;
            }
            if (i == cnt.size()) break;
        }
    }
    auto chi_of = [&](const Fq& smallv) {
        size_t idx = 0, mul = 1;
        for (uint32_t i = 0; i < k->absdeg; i++) {
            idx += (size_t)smallv.c[i] * mul;
            mul *= k->p;
        }
        return chi[idx];
    };
    FqPoly fl = fqpoly_lift(K2, f);
    Int n = 0;
    std::vector<uint32_t> cnt(K2->absdeg, 0);
    while (true) {
        Fq x = Fq::from_coeffs(K2, std::vector<uint32_t>(cnt.begin(), cnt.end()));
        Fq v = fl.eval(x);
        if (v.is_zero()) n += 1;
        else {
            // chi_{q^2}(v) = chi_q(N(v)) with N(v) = v * v^q
            Fq nv = v * v.frob_iter(k->absdeg);
            int c = chi_of(nv.lower(k));
            if (c == 1) n += 2;
        }
        size_t i = 0;
        while (i < cnt.size()) {
            cnt[i]++;
            if (cnt[i] < K2->p) break;
            cnt[i] = 0;
            i++;
        }
        if (i == cnt.size()) break;
    }
    if (f.deg() == 5) n += 1;
    else {
        Fq lc = Fq::lift(K2, f.lead());
        Fq nv = lc * lc.frob_iter(k->absdeg);
        if (chi_of(nv.lower(k)) == 1) n += 2;
    }
    return n;
}

inline LPoly lpolynomial(const FqPoly& f, FqCtxPtr kOwner, Rng& rng) {
    const FqCtx* k = f.c[0].ctx;
    (void)rng;
    Int q = k->order();
    Int N1 = hyperelliptic_count(f, k);
    // quadratic extension for N2
    FqCtxPtr k2;
    {
        Rng r2(99);
        FqPoly quad;
        while (true) {
            std::vector<Fq> c = {Fq::rand(k, r2), Fq::rand(k, r2), Fq::one(k)};
            quad = FqPoly(c);
            if (quad.deg() == 2 && fqpoly_is_irreducible(quad)) break;
        }
        k2 = make_extension(kOwner, quad.c);
    }
    Int N2 = hyperelliptic_count_quad(f, k2.get());
    // zeta: N_r = q^r + 1 - sum alpha_i^r; s1 = sum alpha_i, s2 = sum alpha_i^2
    Int s1 = q + 1 - N1;
    Int s2 = q * q + 1 - N2;
    // e1 = s1; e2 = (s1^2 - s2)/2; L(T) = prod (1 - alpha_i T) ->
    // L(T) = 1 - e1 T + e2 T^2 - q e1 T^3 + q^2 T^4 (functional equation)
    Int e1 = s1;
    Int e2 = (s1 * s1 - s2) / 2;
    LPoly L;
    L.q = q;
    L.coeff = {Int(1), -e1, e2, -q * e1, q * q};
    return L;
}

// all Newton-polygon slopes at p equal 1/2
inline bool is_supersingular_lpoly(const LPoly& L, uint32_t p) {
    // lower convex hull of points (i, v_p(c_i)); slopes must all equal v_p(q^2)/4
    std::vector<std::pair<int, Rat>> pts;
    for (int i = 0; i <= 4; i++) {
        if (L.coeff[i] == 0) continue;
        pts.emplace_back(i, Rat(vp(L.coeff[i], p)));
    }
    // hull from (0, 0) to (4, v(q^2))
    Rat total = pts.back().second;
    Rat slope = total / 4;
    // all points must lie on or above the straight line of that slope
    for (auto& [i, v] : pts)
        if (Rat(v) < slope * i) return false;
    return true;
}

}  // namespace ssg2

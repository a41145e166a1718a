#pragma once
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "intlat.hpp"
#include "quat.hpp"

namespace ssg2 {

struct QuatVec2 {
    Quat a, b;
    QuatVec2() = default;
    QuatVec2(Quat a_, Quat b_) : a(std::move(a_)), b(std::move(b_)) {}
    QuatVec2 operator*(const Quat& s) const { return {a * s, b * s}; }
    QuatVec2 operator*(const Rat& s) const { return {a * s, b * s}; }
    QuatVec2 operator+(const QuatVec2& o) const { return {a + o.a, b + o.b}; }
    QuatVec2 operator-() const { return {-a, -b}; }
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    std::string str() const { return "(" + a.str() + ", " + b.str() + ")"; }
};

// 2x2 matrix over the quaternion algebra.
struct QuatMat2 {
    Quat e11, e12, e21, e22;

    static QuatMat2 zero(const QuatAlgebra* A) {
        return {Quat::zero(A), Quat::zero(A), Quat::zero(A), Quat::zero(A)};
    }
    static QuatMat2 identity(const QuatAlgebra* A) {
        return {Quat::one(A), Quat::zero(A), Quat::zero(A), Quat::one(A)};
    }
    QuatMat2 operator+(const QuatMat2& o) const {
        return {e11 + o.e11, e12 + o.e12, e21 + o.e21, e22 + o.e22};
    }
    QuatMat2 operator-(const QuatMat2& o) const {
        return {e11 - o.e11, e12 - o.e12, e21 - o.e21, e22 - o.e22};
    }
    QuatMat2 mul(const QuatMat2& o) const {
        return {e11 * o.e11 + e12 * o.e21, e11 * o.e12 + e12 * o.e22,
                e21 * o.e11 + e22 * o.e21, e21 * o.e12 + e22 * o.e22};
    }
    QuatVec2 apply(const QuatVec2& v) const {
        return {e11 * v.a + e12 * v.b, e21 * v.a + e22 * v.b};
    }
    QuatMat2 dagger() const {  // conjugate transpose
        return {e11.conj(), e21.conj(), e12.conj(), e22.conj()};
    }
    bool operator==(const QuatMat2& o) const {
        return e11 == o.e11 && e12 == o.e12 && e21 == o.e21 && e22 == o.e22;
    }
    bool is_zero() const {
        return e11.is_zero() && e12.is_zero() && e21.is_zero() && e22.is_zero();
    }
    std::string str() const {
        return "[[" + e11.str() + ", " + e12.str() + "], [" + e21.str() + ", " + e22.str() +
               "]]";
    }
};

inline Quat herm_pair(const QuatMat2& f, const QuatVec2& v, const QuatVec2& w) {
    // v^dagger f w
    return v.a.conj() * (f.e11 * w.a + f.e12 * w.b) + v.b.conj() * (f.e21 * w.a + f.e22 * w.b);
}

inline bool quat_is_rational(const Quat& q) { return q.x == 0 && q.y == 0 && q.z == 0; }

struct HermCheck {
    bool ok = true;
    std::string why;
};

inline HermCheck herm_form_check(const QuatMat2& f) {
    if (!quat_is_rational(f.e11) || !quat_is_rational(f.e22))
        return {false, "diagonal entries are not rational"};
    if (!(f.e21 == f.e12.conj())) return {false, "f21 != conj(f12)"};
    return {true, {}};
}

inline Rat det_herm(const QuatMat2& f) { return f.e11.w * f.e22.w - f.e12.nrd(); }

inline bool herm_positive_definite(const QuatMat2& f) {
    return f.e11.w > 0 && det_herm(f) > 0;
}

inline bool mat_entries_in_order(const QuatMat2& f, const QuatOrder& O) {
    return O.contains(f.e11) && O.contains(f.e12) && O.contains(f.e21) && O.contains(f.e22);
}

// Validity of f as Moret-Bailly input: hermitian, positive definite,
// F^{-1} f integral and det_herm(f) = p.
struct PolarizationCheck {
    bool ok = false;
    std::string why;
};

inline PolarizationCheck validate_polarization(const QuatMat2& f, const QuatOrder& O,
                                               const Quat& frob, const Int& p) {
    auto hc = herm_form_check(f);
    if (!hc.ok) return {false, hc.why};
    if (!mat_entries_in_order(f, O)) return {false, "entries not integral"};
    if (!herm_positive_definite(f)) return {false, "not positive definite"};
    Quat finv = frob.inv();
    QuatMat2 g{finv * f.e11, finv * f.e12, finv * f.e21, finv * f.e22};
    if (!mat_entries_in_order(g, O)) return {false, "F^{-1} f not integral"};
    if (det_herm(f) != Rat(p)) return {false, "det_herm(f) != p"};
    return {true, {}};
}

// Z-basis of I^{-1} (+) I^{-1} inside B^2, kept as 8 QuatVec2.
struct ModuleBasis8 {
    std::vector<QuatVec2> vecs;  // size 8
};

inline ModuleBasis8 module_basis(const QuatLattice& Iinv) {
    ModuleBasis8 mb;
    const QuatAlgebra* A = Iinv.order->alg;
    for (size_t i = 0; i < 4; i++)
        mb.vecs.push_back({Iinv.element(i), Quat::zero(A)});
    for (size_t i = 0; i < 4; i++)
        mb.vecs.push_back({Quat::zero(A), Iinv.element(i)});
    return mb;
}

// Gram of the symmetric bilinear form (v,w) -> trd(v^dagger f w)
// Q(v) = v^dagger f v equals (1/2) x^T G x in basis coordinates.
inline QMat trace_gram(const QuatMat2& f, const ModuleBasis8& mb) {
    QMat g(8, std::vector<Rat>(8));
    for (size_t i = 0; i < 8; i++)
        for (size_t j = 0; j < 8; j++)
            g[i][j] = herm_pair(f, mb.vecs[i], mb.vecs[j]).trd();
    return g;
}

// exactly the nonzero coordinate vectors with Q(v) <= bound, deterministic order
inline std::vector<std::vector<Int>> short_vectors(const QMat& gram_of_Q, const Rat& bound) {
    return fincke_pohst(gram_of_Q, bound);
}

struct Decomposition {
    QuatMat2 f1, f2;             // ker(f1) contains the stored kernel vector
    QuatVec2 v;                  // primitive kernel vector of f1 (when free/evaluable)
    bool v_evaluable = false;    // both entries in Z[sigma, F]
    bool kernel_free = false;    // ker(f1) is a free module
    std::string class_label;     // label of the class of ker(f1)'s input ideal
};

inline std::string quat_key(const Quat& q) {
    return q.w.str() + "|" + q.x.str() + "|" + q.y.str() + "|" + q.z.str();
}
inline std::string mat_key(const QuatMat2& m) {
    return quat_key(m.e11) + ";" + quat_key(m.e12) + ";" + quat_key(m.e21) + ";" +
           quat_key(m.e22);
}
// canonical key of the unordered pair {f1, f2}
inline std::string pair_key(const QuatMat2& f1, const QuatMat2& f2) {
    std::string a = mat_key(f1), b = mat_key(f2);
    return a < b ? a + "#" + b : b + "#" + a;
}

// 8-dim coordinates of O^2 relative to the order basis
inline QuatVec2 vec_from_coords(const QuatOrder& O, const std::vector<Rat>& c) {
    Quat a = Quat::zero(O.alg), b = Quat::zero(O.alg);
    for (size_t i = 0; i < 4; i++) {
        a = a + O.basis[i] * c[i];
        b = b + O.basis[i] * c[4 + i];
    }
    return {a, b};
}
inline std::vector<Rat> coords_of_vec(const QuatOrder& O, const QuatVec2& v) {
    std::vector<Rat> out(8);
    auto ca = O.coords(v.a), cb = O.coords(v.b);
    for (size_t i = 0; i < 4; i++) { out[i] = ca[i]; out[4 + i] = cb[i]; }
    return out;
}

// rank-4 sublattice of O^2 given by integer rows in order-pair coordinates
struct SubLattice8 {
    const QuatOrder* order = nullptr;
    IMat rows;  // k x 8
    QuatVec2 element(size_t i) const {
        std::vector<Rat> c(8);
        for (size_t j = 0; j < 8; j++) c[j] = Rat(rows[i][j]);
        return vec_from_coords(*order, c);
    }
};

// kernel of gamma(f1) cap O^2 as a saturated sublattice (f1 of rank 1)
inline SubLattice8 kernel_sublattice(const QuatOrder& O, const QuatMat2& f1) {
    // linear conditions: f1 * v = 0 for v in O^2, v = sum x_m (basis pair m)
    // each of the two quaternion equations gives 4 rational conditions
    ModuleBasis8 mb = module_basis(order_as_lattice(&O));
    IMat cond;
    std::vector<std::vector<Rat>> rows;
    for (int eq = 0; eq < 8; eq++) rows.push_back(std::vector<Rat>(8));
    for (size_t m = 0; m < 8; m++) {
        QuatVec2 im = {f1.e11 * mb.vecs[m].a + f1.e12 * mb.vecs[m].b,
                       f1.e21 * mb.vecs[m].a + f1.e22 * mb.vecs[m].b};
        std::vector<Rat> flat = {im.a.w, im.a.x, im.a.y, im.a.z, im.b.w, im.b.x, im.b.y, im.b.z};
        for (int eq = 0; eq < 8; eq++) rows[eq][m] = flat[eq];
    }
    // clear denominators per row
    for (auto& r : rows) {
        Int den = 1;
        for (auto& c : r) den = den / igcd(den, iden(c)) * iden(c);
        std::vector<Int> ir(8);
        for (size_t j = 0; j < 8; j++) ir[j] = inum(r[j]) * (den / iden(r[j]));
        cond.push_back(std::move(ir));
    }
    SubLattice8 L;
    L.order = &O;
    L.rows = integer_kernel(cond);
    return L;
}

// index [L : M] for sublattices of Z^8 given by rank-4 row bases, M subset of L
inline Rat sublattice_index(const IMat& lrows, const IMat& mrows) {
    size_t k = lrows.size();
    Mat<Rat> A(8, k, Rat(0));
    for (size_t i = 0; i < k; i++)
        for (size_t j = 0; j < 8; j++) A.at(j, i) = Rat(lrows[i][j]);
    Mat<Rat> M(k, k, Rat(0));
    for (size_t m = 0; m < mrows.size(); m++) {
        std::vector<Rat> b(8), x;
        for (size_t j = 0; j < 8; j++) b[j] = Rat(mrows[m][j]);
        if (!solve_linear(A, b, x, Rat(0)))
            throw std::domain_error("sublattice_index: not a sublattice");
        for (size_t i = 0; i < k; i++) M.at(m, i) = x[i];
    }
    Rat d = mat_det(M, Rat(0));
    if (d < 0) d = -d;
    return d;
}

inline bool sublattice_contains(const SubLattice8& L, const std::vector<Int>& x) {
    // solve over Z via HNF membership: x in rowspan_Z(L.rows)
    IMat m = L.rows;
    m.push_back(x);
    IMat h1 = hnf_rows(L.rows), h2 = hnf_rows(m);
    return h1 == h2;
}

// 4x4 gram of Q(v) = v^dagger f v restricted to a rank-4 sublattice
inline QMat sublattice_gram(const QuatMat2& f, const SubLattice8& L) {
    size_t n = L.rows.size();
    QMat g(n, std::vector<Rat>(n));
    std::vector<QuatVec2> els;
    for (size_t i = 0; i < n; i++) els.push_back(L.element(i));
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) g[i][j] = herm_pair(f, els[i], els[j]).trd();
    return g;
}

struct KernelVectorResult {
    bool free = false;
    bool evaluable = false;
    QuatVec2 v;          // set if free
    std::string detail;  // failure description
};

// Is q an integer combination of 1, sigma, F, sigma*F?
inline bool in_sigma_frob_ring(const Quat& q, const Quat& sigma, const Quat& frob) {
    Mat<Rat> m(4, 4, Rat(0));
    std::array<Quat, 4> bas = {Quat::one(q.alg), sigma, frob, sigma * frob};
    for (size_t i = 0; i < 4; i++) {
        m.at(i, 0) = bas[i].w; m.at(i, 1) = bas[i].x;
        m.at(i, 2) = bas[i].y; m.at(i, 3) = bas[i].z;
    }
    Mat<Rat> mi;
    if (!mat_inverse(m, mi, Rat(0))) return false;
    std::vector<Rat> v = {q.w, q.x, q.y, q.z};
    for (size_t i = 0; i < 4; i++) {
        Rat s = 0;
        for (size_t j = 0; j < 4; j++) s += v[j] * mi.at(j, i);
        if (!is_integer(s)) return false;
    }
    return true;
}

// Primitive generator of ker(f1) with deterministic normalization.  Enumerates
// kernel-lattice vectors of length exactly p (property iii'); generators are the
// index-1 vectors among them.
inline KernelVectorResult kernel_vector(const QuatOrder& O, const QuatMat2& f,
                                        const QuatMat2& f1, const Int& p, const Quat& sigma,
                                        const Quat& frob) {
    KernelVectorResult res;
    SubLattice8 L = kernel_sublattice(O, f1);
    if (L.rows.size() != 4) {
        res.detail = "kernel rank != 4";
        return res;
    }
    QMat g = sublattice_gram(f, L);  // bilinear trd-gram; Q = x^T (g/2) x
    QMat gq(4, std::vector<Rat>(4));
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) gq[i][j] = g[i][j] / 2;
    auto cand = fincke_pohst(gq, Rat(p));
    std::vector<QuatVec2> gens;
    for (auto& x : cand) {
        if (eval_quadratic(gq, x) != Rat(p)) continue;
        // v in O^2 coordinates
        std::vector<Int> full(8, 0);
        for (size_t i = 0; i < 4; i++)
            for (size_t j = 0; j < 8; j++) full[j] += x[i] * L.rows[i][j];
        std::vector<Rat> c(8);
        for (size_t j = 0; j < 8; j++) c[j] = Rat(full[j]);
        QuatVec2 v = vec_from_coords(O, c);
        // index [L : vO] = 1 ?  vO has basis v*b_k; express in O^2-coords
        IMat vrows;
        for (size_t k = 0; k < 4; k++) {
            QuatVec2 vb = v * O.basis[k];
            auto cc = coords_of_vec(O, vb);
            std::vector<Int> r(8);
            for (size_t j = 0; j < 8; j++) {
                if (!is_integer(cc[j])) { r.clear(); break; }
                r[j] = inum(cc[j]);
            }
            if (r.empty()) { vrows.clear(); break; }
            vrows.push_back(std::move(r));
        }
        if (vrows.size() != 4) continue;
        if (sublattice_index(L.rows, vrows) == 1) gens.push_back(v);
    }
    if (gens.empty()) {
        res.detail = "no generator of length p: kernel class not free";
        return res;
    }
    res.free = true;
    // prefer evaluable generators; deterministic pick by serialized coordinates
    auto keyfn = [&](const QuatVec2& v) { return quat_key(v.a) + "/" + quat_key(v.b); };
    std::vector<QuatVec2> eva;
    for (auto& v : gens)
        if (in_sigma_frob_ring(v.a, sigma, frob) && in_sigma_frob_ring(v.b, sigma, frob))
            eva.push_back(v);
    const std::vector<QuatVec2>& pool = eva.empty() ? gens : eva;
    size_t best = 0;
    for (size_t i = 1; i < pool.size(); i++)
        if (keyfn(pool[i]) < keyfn(pool[best])) best = i;
    res.v = pool[best];
    res.evaluable = !eva.empty();
    if (!res.evaluable) res.detail = "kernel generator exists but none lies in Z[sigma,F]";
    return res;
}

struct ProjectionPair {
    QuatMat2 p1, p2;
};

// P1 = v v^dagger f / (v^dagger f v), P2 = 1 - P1
inline ProjectionPair projection_matrices(const QuatMat2& f, const QuatVec2& v) {
    Quat q = herm_pair(f, v, v);
    if (!quat_is_rational(q) || q.w == 0) throw std::domain_error("isotropic or bad vector");
    Rat inv = 1 / q.w;
    // v v^dagger f: (v v^dagger) has entries v_a conj(v_b); multiply by f on the right
    QuatMat2 vv{v.a * v.a.conj(), v.a * v.b.conj(), v.b * v.a.conj(), v.b * v.b.conj()};
    QuatMat2 f2 = {Quat::zero(f.e11.alg), Quat::zero(f.e11.alg), Quat::zero(f.e11.alg),
                   Quat::zero(f.e11.alg)};
    QuatMat2 p1 = vv.mul(f);
    p1 = {p1.e11 * inv, p1.e12 * inv, p1.e21 * inv, p1.e22 * inv};
    QuatMat2 p2 = QuatMat2::identity(f.e11.alg) - p1;
    (void)f2;
    return {p1, p2};
}

struct DecompositionCheck {
    bool ok = false;
    std::string why;
};

inline bool sublattices_orthogonal(const QuatMat2& f, const SubLattice8& A,
                                   const SubLattice8& B) {
    for (size_t i = 0; i < A.rows.size(); i++)
        for (size_t j = 0; j < B.rows.size(); j++)
            if (!herm_pair(f, A.element(i), B.element(j)).is_zero()) return false;
    return true;
}

inline DecompositionCheck check_decomposition(const QuatOrder& O, const QuatMat2& f,
                                              const QuatMat2& f1, const QuatMat2& f2,
                                              const Int& p) {
    if (!(f1 + f2 == f)) return {false, "f1 + f2 != f"};
    for (const QuatMat2* m : {&f1, &f2}) {
        auto hc = herm_form_check(*m);
        if (!hc.ok) return {false, hc.why};
        if (!mat_entries_in_order(*m, O)) return {false, "entries not integral"};
        if (m->is_zero()) return {false, "zero summand"};
        if (det_herm(*m) != 0) return {false, "summand not of rank 1"};
    }
    SubLattice8 I1 = kernel_sublattice(O, f1), I2 = kernel_sublattice(O, f2);
    if (I1.rows.size() != 4 || I2.rows.size() != 4) return {false, "kernel rank wrong"};
    if (!sublattices_orthogonal(f, I1, I2)) return {false, "kernels not orthogonal"};
    // index form of iii): [O^2 : I1 + I2] = p^2
    IMat sum = I1.rows;
    for (auto& r : I2.rows) sum.push_back(r);
    IMat h = hnf_rows(sum);
    if (h.size() != 8) return {false, "I1 + I2 not of full rank"};
    Int d = imat_det(h);
    if (d < 0) d = -d;
    if (d != p * p) return {false, "[O^2 : I1 (+) I2] != p^2"};
    // iii') on sample vectors of I1: v^dagger f v = p [I1 : vO]
    for (size_t i = 0; i < 4; i++) {
        QuatVec2 v = I1.element(i);
        Quat q = herm_pair(f, v, v);
        if (!quat_is_rational(q)) return {false, "pairing not rational"};
        if (v.is_zero()) continue;
        IMat vrows;
        for (size_t k = 0; k < 4; k++) {
            auto cc = coords_of_vec(O, v * O.basis[k]);
            std::vector<Int> r(8);
            for (size_t j = 0; j < 8; j++) {
                if (!is_integer(cc[j])) return {false, "vO not integral"};
                r[j] = inum(cc[j]);
            }
            vrows.push_back(std::move(r));
        }
        // reduced module index: [I1 : vO] = sqrt of the Z-lattice index
        Rat idx = sublattice_index(I1.rows, vrows);
        Rat ridx = Rat(isqrt_floor(inum(idx)), isqrt_floor(iden(idx)));
        if (ridx * ridx != idx) return {false, "lattice index not a square"};
        if (q.w != Rat(p) * ridx) return {false, "v^dagger f v != p [I1 : vO]"};
    }
    return {true, {}};
}

// Algorithm: all decompositions f = f1 + f2 with ker-class represented by I.
// The enumerated short vector v satisfies (f - fvv^df/(v^dfv)) v = 0, so the
// returned f1 is the summand annihilating v.
inline std::vector<Decomposition> decompose_with_class(const QuatOrder& O, const QuatMat2& f,
                                                       const QuatLattice& I,
                                                       const std::string& label, const Int& p,
                                                       const Quat& sigma, const Quat& frob) {
    QuatLattice Iinv = ideal_inverse(I);
    ModuleBasis8 mb = module_basis(Iinv);
    QMat tg = trace_gram(f, mb);
    QMat gq(8, std::vector<Rat>(8));
    for (int i = 0; i < 8; i++)
        for (int j = 0; j < 8; j++) gq[i][j] = tg[i][j] / 2;
    // reduced module index [I : O]: the Z-lattice index is its square
    Rat zidx = gen_index(I, order_as_lattice(&O));
    Rat ridx = Rat(isqrt_floor(inum(zidx)), isqrt_floor(iden(zidx)));
    if (ridx * ridx != zidx) throw std::domain_error("[I : O] is not a perfect square");
    Rat bound = Rat(p) * ridx;
    auto sv = short_vectors(gq, bound);
    std::map<std::string, Decomposition> seen;
    for (auto& x : sv) {
        Rat q = eval_quadratic(gq, x);
        if (q != bound) continue;  // all short vectors have exact length (divisibility)
        QuatVec2 v{Quat::zero(O.alg), Quat::zero(O.alg)};
        for (size_t m = 0; m < 8; m++)
            if (x[m] != 0) v = v + mb.vecs[m] * Rat(x[m]);
        // fB := f v v^dagger f / q  (kernel = orthogonal complement of v)
        QuatVec2 w{f.e11 * v.a + f.e12 * v.b, f.e21 * v.a + f.e22 * v.b};
        Rat inv = 1 / q;
        QuatMat2 fB{w.a * w.a.conj() * inv, w.a * w.b.conj() * inv, w.b * w.a.conj() * inv,
                    w.b * w.b.conj() * inv};
        QuatMat2 fA = f - fB;  // annihilates v; kernel class is [I]
        if (!mat_entries_in_order(fA, O) || !mat_entries_in_order(fB, O)) continue;
        std::string key = pair_key(fA, fB);
        if (seen.count(key)) continue;
        Decomposition d;
        d.f1 = fA;
        d.f2 = fB;
        d.class_label = label;
        auto kv = kernel_vector(O, f, fA, p, sigma, frob);
        d.kernel_free = kv.free;
        d.v_evaluable = kv.evaluable;
        if (kv.free) d.v = kv.v;
        seen[key] = d;
    }
    std::vector<Decomposition> out;
    for (auto& [k, v] : seen) out.push_back(v);
    return out;
}

}  // namespace ssg2

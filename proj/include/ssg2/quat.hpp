#pragma once
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "intlat.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace ssg2 {

// Quaternion algebra (a,b / Q): i^2 = a, j^2 = b, ij = k = -ji.
struct QuatAlgebra {
    Rat a, b;
    bool operator==(const QuatAlgebra& o) const { return a == o.a && b == o.b; }
};

struct Quat {
    const QuatAlgebra* alg = nullptr;
    Rat w, x, y, z;  // coordinates in 1, i, j, k

    Quat() = default;
    Quat(const QuatAlgebra* A, Rat w_, Rat x_, Rat y_, Rat z_)
        : alg(A), w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}
    static Quat zero(const QuatAlgebra* A) { return Quat(A, 0, 0, 0, 0); }
    static Quat one(const QuatAlgebra* A) { return Quat(A, 1, 0, 0, 0); }
    static Quat unit_i(const QuatAlgebra* A) { return Quat(A, 0, 1, 0, 0); }
    static Quat unit_j(const QuatAlgebra* A) { return Quat(A, 0, 0, 1, 0); }
    static Quat unit_k(const QuatAlgebra* A) { return Quat(A, 0, 0, 0, 1); }

    bool is_zero() const { return w == 0 && x == 0 && y == 0 && z == 0; }
    bool operator==(const Quat& o) const {
        return w == o.w && x == o.x && y == o.y && z == o.z;
    }
    bool operator!=(const Quat& o) const { return !(*this == o); }

    Quat operator+(const Quat& o) const { return Quat(alg, w + o.w, x + o.x, y + o.y, z + o.z); }
    Quat operator-(const Quat& o) const { return Quat(alg, w - o.w, x - o.x, y - o.y, z - o.z); }
    Quat operator-() const { return Quat(alg, -w, -x, -y, -z); }
    Quat operator*(const Rat& s) const { return Quat(alg, w * s, x * s, y * s, z * s); }
    Quat operator*(const Quat& o) const {
        const Rat &a = alg->a, &b = alg->b;
        return Quat(alg,
                    w * o.w + a * x * o.x + b * y * o.y - a * b * z * o.z,
                    w * o.x + x * o.w - b * y * o.z + b * z * o.y,
                    w * o.y + y * o.w + a * x * o.z - a * z * o.x,
                    w * o.z + z * o.w + x * o.y - y * o.x);
    }
    Quat conj() const { return Quat(alg, w, -x, -y, -z); }
    Rat nrd() const { return w * w - alg->a * x * x - alg->b * y * y + alg->a * alg->b * z * z; }
    Rat trd() const { return 2 * w; }
    Quat inv() const {
        Rat n = nrd();
        if (n == 0) throw std::domain_error("quaternion not invertible");
        return conj() * (1 / n);
    }
    std::string str() const {
        return "(" + w.str() + ", " + x.str() + ", " + y.str() + ", " + z.str() + ")";
    }
};

inline Rat trd_pair(const Quat& u, const Quat& v) { return (u * v.conj()).trd(); }

// Order with a fixed Z-basis.  Construction checks the ring axioms and caches
// the coordinate-change matrices.
struct QuatOrder {
    const QuatAlgebra* alg = nullptr;
    std::array<Quat, 4> basis;
    Mat<Rat> basis_mat;      // rows = basis coords in (1,i,j,k)
    Mat<Rat> basis_mat_inv;  // coordinate map
    Int reduced_disc = 0;

    std::vector<Rat> coords(const Quat& q) const {
        std::vector<Rat> v = {q.w, q.x, q.y, q.z};
        std::vector<Rat> out(4, Rat(0));
        for (size_t i = 0; i < 4; i++)
            for (size_t j = 0; j < 4; j++) out[i] += v[j] * basis_mat_inv.at(j, i);
        return out;
    }
    Quat from_coords(const std::vector<Rat>& v) const {
        Quat q = Quat::zero(alg);
        for (size_t i = 0; i < 4; i++) q = q + basis[i] * v[i];
        return q;
    }
    bool contains(const Quat& q) const {
        for (auto& c : coords(q))
            if (!is_integer(c)) return false;
        return true;
    }
};

inline QuatOrder make_order(const QuatAlgebra* A, const std::array<Quat, 4>& basis,
                            bool check_maximal_level = true) {
    QuatOrder O;
    O.alg = A;
    O.basis = basis;
    O.basis_mat = Mat<Rat>(4, 4, Rat(0));
    for (size_t i = 0; i < 4; i++) {
        O.basis_mat.at(i, 0) = basis[i].w;
        O.basis_mat.at(i, 1) = basis[i].x;
        O.basis_mat.at(i, 2) = basis[i].y;
        O.basis_mat.at(i, 3) = basis[i].z;
    }
    if (!mat_inverse(O.basis_mat, O.basis_mat_inv, Rat(0)))
        throw std::invalid_argument("order basis not full rank");
    // ring checks: 1 in O, products integral
    if (!O.contains(Quat::one(A))) throw std::invalid_argument("order must contain 1");
    for (size_t i = 0; i < 4; i++)
        for (size_t j = 0; j < 4; j++)
            if (!O.contains(basis[i] * basis[j]))
                throw std::invalid_argument("basis is not multiplicatively closed");
    // reduced discriminant from the trd gram determinant
    Mat<Rat> g(4, 4, Rat(0));
    for (size_t i = 0; i < 4; i++)
        for (size_t j = 0; j < 4; j++) g.at(i, j) = trd_pair(basis[i], basis[j]);
    Rat d = mat_det(g, Rat(0));
    if (!is_integer(d)) throw std::invalid_argument("trd gram not integral");
    Int di = inum(d);
    if (di < 0) di = -di;
    Int rd = isqrt_floor(di);
    if (rd * rd != di) throw std::invalid_argument("order discriminant is not a square");
    O.reduced_disc = rd;
    (void)check_maximal_level;
    return O;
}

// A full-rank Z-lattice in B, stored as a 4x4 rational row basis in ORDER coordinates.
struct QuatLattice {
    const QuatOrder* order = nullptr;
    Mat<Rat> rows;  // 4x4, rows = lattice basis in order coordinates

    Quat element(size_t i) const {
        std::vector<Rat> v(4);
        for (size_t j = 0; j < 4; j++) v[j] = rows.at(i, j);
        return order->from_coords(v);
    }
};

// canonical HNF basis for the lattice spanned by arbitrary rational generators
inline QuatLattice lattice_from_generators(const QuatOrder* O,
                                           const std::vector<std::vector<Rat>>& gens) {
    Int den = 1;
    for (auto& g : gens)
        for (auto& c : g) den = den / igcd(den, iden(c)) * iden(c);
    IMat m;
    for (auto& g : gens) {
        std::vector<Int> row(4);
        for (size_t j = 0; j < 4; j++) row[j] = inum(g[j]) * (den / iden(g[j]));
        m.push_back(std::move(row));
    }
    IMat h = hnf_rows(std::move(m));
    if (h.size() != 4) throw std::invalid_argument("lattice generators not full rank");
    QuatLattice L;
    L.order = O;
    L.rows = Mat<Rat>(4, 4, Rat(0));
    for (size_t i = 0; i < 4; i++)
        for (size_t j = 0; j < 4; j++) L.rows.at(i, j) = Rat(h[i][j]) / Rat(den);
    return L;
}

inline QuatLattice lattice_from_quats(const QuatOrder* O, const std::vector<Quat>& gens) {
    std::vector<std::vector<Rat>> g;
    for (auto& q : gens) g.push_back(O->coords(q));
    return lattice_from_generators(O, g);
}

inline QuatLattice order_as_lattice(const QuatOrder* O) {
    QuatLattice L;
    L.order = O;
    L.rows = Mat<Rat>::identity(4, Rat(0));
    return L;
}

// generalized index [I : J]: |det| of the matrix writing J's basis in I's basis
inline Rat gen_index(const QuatLattice& I, const QuatLattice& J) {
    Mat<Rat> inv;
    if (!mat_inverse(I.rows, inv, Rat(0))) throw std::invalid_argument("degenerate lattice");
    Mat<Rat> m = J.rows.mul(inv);
    Rat d = mat_det(m, Rat(0));
    if (d < 0) d = -d;
    if (d == 0) throw std::invalid_argument("degenerate lattice");
    return d;
}

inline bool lattice_contains(const QuatLattice& L, const Quat& q) {
    Mat<Rat> inv;
    if (!mat_inverse(L.rows, inv, Rat(0))) return false;
    auto v = L.order->coords(q);
    for (size_t i = 0; i < 4; i++) {
        Rat s = 0;
        for (size_t j = 0; j < 4; j++) s += v[j] * inv.at(j, i);
        if (!is_integer(s)) return false;
    }
    return true;
}

inline bool lattice_equal(const QuatLattice& A, const QuatLattice& B) {
    for (size_t i = 0; i < 4; i++) {
        if (!lattice_contains(A, B.element(i))) return false;
        if (!lattice_contains(B, A.element(i))) return false;
    }
    return true;
}

// right O-ideal: lattice closed under right multiplication by the order basis
inline bool is_right_ideal(const QuatLattice& L) {
    for (size_t i = 0; i < 4; i++)
        for (size_t j = 0; j < 4; j++)
            if (!lattice_contains(L, L.element(i) * L.order->basis[j])) return false;
    return true;
}

inline QuatLattice lattice_product(const QuatLattice& A, const QuatLattice& B) {
    std::vector<Quat> gens;
    for (size_t i = 0; i < 4; i++)
        for (size_t j = 0; j < 4; j++) gens.push_back(A.element(i) * B.element(j));
    return lattice_from_quats(A.order, gens);
}

inline QuatLattice lattice_conj(const QuatLattice& A) {
    std::vector<Quat> gens;
    for (size_t i = 0; i < 4; i++) gens.push_back(A.element(i).conj());
    return lattice_from_quats(A.order, gens);
}

inline QuatLattice lattice_scale(const QuatLattice& A, const Rat& s) {
    QuatLattice L = A;
    for (auto& x : L.rows.a) x = x * s;
    return L;
}

// reduced norm of a right O-ideal: positive generator of the fractional ideal nrd(I)Z.
// For maximal orders [O : I] = nrd(I)^2.
inline Rat ideal_nrd(const QuatLattice& I) {
    Rat idx = gen_index(order_as_lattice(I.order), I);
    // idx = nrd^2
    Rat n = Rat(isqrt_floor(inum(idx) * iden(idx)), iden(idx));
    if (n * n != idx) throw std::domain_error("ideal index is not a perfect square");
    return n;
}

// I^{-1} = conj(I) / nrd(I) for invertible ideals over maximal orders
inline QuatLattice ideal_inverse(const QuatLattice& I) {
    Rat n = ideal_nrd(I);
    return lattice_scale(lattice_conj(I), 1 / n);
}

// principal right ideal qO
inline QuatLattice principal_right_ideal(const QuatOrder* O, const Quat& q) {
    std::vector<Quat> gens;
    for (size_t j = 0; j < 4; j++) gens.push_back(q * O->basis[j]);
    return lattice_from_quats(O, gens);
}

// trd(u conj(v)) gram of a lattice basis (positive definite for definite algebras)
inline QMat lattice_gram(const QuatLattice& L) {
    QMat g(4, std::vector<Rat>(4));
    for (size_t i = 0; i < 4; i++)
        for (size_t j = 0; j < 4; j++) g[i][j] = trd_pair(L.element(i), L.element(j));
    return g;
}

// Saturate an order at primes dividing its reduced discriminant beyond `target`:
// repeatedly adjoins integral elements x = (sum a_i b_i)/l and re-closes.  Used by
// the preset generator; presets ship already-maximal bases.
inline QuatOrder saturate_order(QuatOrder O, const Int& target_disc) {
    bool progress = true;
    while (O.reduced_disc != target_disc && progress) {
        progress = false;
        Int excess = O.reduced_disc / target_disc;
        for (uint32_t l = 2; l < 1000 && !progress; l++) {
            if (!is_prime_u32(l) || excess % l != 0) continue;
            // try all x = (sum a_i b_i)/l, a_i in [0, l)
            std::array<uint32_t, 4> a{};
            for (uint64_t code = 1; code < (uint64_t)l * l * l * l && !progress; code++) {
                uint64_t t = code;
                for (int i = 0; i < 4; i++) { a[i] = (uint32_t)(t % l); t /= l; }
                Quat x = Quat::zero(O.alg);
                for (int i = 0; i < 4; i++) x = x + O.basis[i] * Rat(a[i]);
                x = x * Rat(Int(1), Int(l));
                if (!is_integer(x.trd()) || !is_integer(x.nrd())) continue;
                // candidate: close O + xO under multiplication
                std::vector<Quat> gens(O.basis.begin(), O.basis.end());
                gens.push_back(x);
                for (int round = 0; round < 3; round++) {
                    QuatLattice L = lattice_from_quats(&O, gens);
                    std::vector<Quat> next;
                    for (size_t i2 = 0; i2 < 4; i2++) next.push_back(L.element(i2));
                    size_t base_n = next.size();
                    for (size_t i2 = 0; i2 < base_n; i2++)
                        for (size_t j2 = 0; j2 < base_n; j2++)
                            next.push_back(next[i2] * next[j2]);
                    gens = next;
                }
                QuatLattice L = lattice_from_quats(&O, gens);
                std::array<Quat, 4> nb;
                bool ok = true;
                for (size_t i2 = 0; i2 < 4; i2++) nb[i2] = L.element(i2);
                QuatOrder O2;
                try {
                    O2 = make_order(O.alg, nb);
                } catch (const std::exception&) {
                    ok = false;
                }
                if (ok && O2.reduced_disc < O.reduced_disc) {
                    O = O2;
                    progress = true;
                }
            }
        }
    }
    return O;
}

}  // namespace ssg2

#pragma once
#include <deque>
#include <vector>

#include "hermlat.hpp"
#include "quat.hpp"

namespace ssg2 {

// Right ideal classes of a maximal order in a definite quaternion algebra,
// computed by breadth-first search on the l-neighbor graph with isometry
// deduplication.  Used by the preset generator; the CLI reads the shipped list.

// x -> x * b_k as a matrix on the lattice basis of I (columns act on row coords)
inline std::vector<IMat> right_mult_matrices_mod(const QuatLattice& I, uint32_t l) {
    const QuatOrder* O = I.order;
    Mat<Rat> B(4, 4, Rat(0));  // rows = I basis in order coords
    for (size_t i = 0; i < 4; i++)
        for (size_t j = 0; j < 4; j++) B.at(i, j) = I.rows.at(i, j);
    Mat<Rat> Binv;
    if (!mat_inverse(B, Binv, Rat(0))) throw std::domain_error("degenerate ideal");
    std::vector<IMat> out;
    for (size_t k = 0; k < 4; k++) {
        IMat m(4, std::vector<Int>(4));
        for (size_t i = 0; i < 4; i++) {
            Quat prod = I.element(i) * O->basis[k];
            auto c = O->coords(prod);
            for (size_t j = 0; j < 4; j++) {
                Rat s = 0;
                for (size_t t = 0; t < 4; t++) s += c[t] * Binv.at(t, j);
                if (!is_integer(s)) throw std::domain_error("not a right ideal");
                Int v = inum(s) % l;
                if (v < 0) v += l;
                m[i][j] = v;
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

// The l+1 right-stable index-l^2 sublattices J with I/J = (F_l)^2 (l coprime to
// the discriminant).  Enumerate right-stable 2-dim subspaces of I/lI.
inline std::vector<QuatLattice> neighbors(const QuatLattice& I, uint32_t l) {
    auto mats = right_mult_matrices_mod(I, l);
    std::vector<QuatLattice> out;
    // enumerate 2-dim subspaces of F_l^4 via row-echelon representatives
    // subspace = row span of a 2x4 matrix in reduced echelon form
    std::vector<std::array<std::array<uint32_t, 4>, 2>> reps;
    // choose pivot columns c1 < c2, free entries elsewhere
    for (int c1 = 0; c1 < 4; c1++)
        for (int c2 = c1 + 1; c2 < 4; c2++) {
            // count free positions
            std::vector<int> free1, free2;
            for (int j = c1 + 1; j < 4; j++)
                if (j != c2) free1.push_back(j);
            for (int j = c2 + 1; j < 4; j++) free2.push_back(j);
            size_t total = 1;
            for (size_t t = 0; t < free1.size() + free2.size(); t++) total *= l;
            for (size_t code = 0; code < total; code++) {
                std::array<std::array<uint32_t, 4>, 2> r{};
                r[0][c1] = 1;
                r[1][c2] = 1;
                size_t tmp = code;
                for (int j : free1) { r[0][j] = (uint32_t)(tmp % l); tmp /= l; }
                for (int j : free2) { r[1][j] = (uint32_t)(tmp % l); tmp /= l; }
                reps.push_back(r);
            }
        }
    for (auto& r : reps) {
        // right stability: each row * R_k must stay in the span mod l
        bool stable = true;
        auto in_span = [&](const std::array<uint32_t, 4>& v) {
            // reduce v by the echelon rows
            std::array<uint32_t, 4> w = v;
            for (int t = 0; t < 2; t++) {
                int piv = -1;
                for (int j = 0; j < 4; j++)
                    if (r[t][j]) { piv = j; break; }
                if (piv < 0) continue;
                uint32_t f = w[piv];  // pivot entries are 1
                if (f)
                    for (int j = 0; j < 4; j++)
                        w[j] = (w[j] + (l - f) * r[t][j]) % l;
            }
            for (int j = 0; j < 4; j++)
                if (w[j]) return false;
            return true;
        };
        for (int t = 0; t < 2 && stable; t++)
            for (size_t k = 0; k < 4 && stable; k++) {
                std::array<uint32_t, 4> img{};
                for (int j = 0; j < 4; j++) {
                    uint64_t s = 0;
                    for (int m = 0; m < 4; m++)
                        s += (uint64_t)r[t][m] * mats[k][m][j].convert_to<uint64_t>();
                    img[j] = (uint32_t)(s % l);
                }
                if (!in_span(img)) stable = false;
            }
        if (!stable) continue;
        // J = span(lifted rows) + l I, in order coordinates
        std::vector<std::vector<Rat>> gens;
        for (int t = 0; t < 2; t++) {
            std::vector<Rat> g(4, Rat(0));
            for (int m = 0; m < 4; m++)
                for (size_t j = 0; j < 4; j++)
                    g[j] += Rat(r[t][m]) * I.rows.at(m, j);
            gens.push_back(g);
        }
        for (size_t i = 0; i < 4; i++) {
            std::vector<Rat> g(4);
            for (size_t j = 0; j < 4; j++) g[j] = Rat(l) * I.rows.at(i, j);
            gens.push_back(g);
        }
        QuatLattice J = lattice_from_generators(I.order, gens);
        out.push_back(J);
    }
    return out;
}

// Right-module isomorphism test: I ~ J iff nrd(I)nrd(J) is represented by the
// norm form on I conj(J).
inline bool ideals_isomorphic(const QuatLattice& I, const QuatLattice& J) {
    QuatLattice M = lattice_product(I, lattice_conj(J));
    Rat target = ideal_nrd(I) * ideal_nrd(J);
    QMat g = lattice_gram(M);
    QMat gq(4, std::vector<Rat>(4));
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) gq[i][j] = g[i][j] / 2;  // Q = nrd
    auto sv = fincke_pohst(gq, target);
    for (auto& v : sv)
        if (eval_quadratic(gq, v) == target) return true;
    return false;
}

struct ClassSet {
    std::vector<QuatLattice> reps;  // reps[0] = O
    std::vector<std::string> labels;
};

inline ClassSet right_class_set(const QuatOrder* O, uint32_t l = 2) {
    ClassSet cs;
    cs.reps.push_back(order_as_lattice(O));
    cs.labels.push_back("cl0");
    std::deque<size_t> queue;
    queue.push_back(0);
    while (!queue.empty()) {
        size_t idx = queue.front();
        queue.pop_front();
        QuatLattice I = cs.reps[idx];
        for (auto& J : neighbors(I, l)) {
            bool known = false;
            for (auto& K : cs.reps)
                if (ideals_isomorphic(J, K)) { known = true; break; }
            if (!known) {
                cs.reps.push_back(J);
                cs.labels.push_back("cl" + std::to_string(cs.reps.size() - 1));
                queue.push_back(cs.reps.size() - 1);
            }
        }
    }
    return cs;
}

// left order of a right ideal, for unit-group mass checks
inline std::vector<Quat> left_order_unit_reps(const QuatLattice& I) {
    // O_L(I) = (1/nrd(I)) I conj(I)
    QuatLattice OL = lattice_scale(lattice_product(I, lattice_conj(I)), 1 / ideal_nrd(I));
    QMat g = lattice_gram(OL);
    QMat gq(4, std::vector<Rat>(4));
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) gq[i][j] = g[i][j] / 2;
    auto sv = fincke_pohst(gq, Rat(1));
    std::vector<Quat> units;
    for (auto& v : sv) {
        if (eval_quadratic(gq, v) != 1) continue;
        Quat u = Quat::zero(I.order->alg);
        for (size_t i = 0; i < 4; i++) u = u + OL.element(i) * Rat(v[i]);
        units.push_back(u);
    }
    return units;
}

}  // namespace ssg2

#pragma once
#include <memory>
#include <stdexcept>
#include <string>

#include "hermlat.hpp"
#include "quat.hpp"

namespace ssg2 {

// Quaternion-side preset: the algebra, a maximal order, the designated
// endomorphisms sigma and F, and the polarization matrix.
struct QuatPreset {
    std::string name;
    Int p;
    std::string curve;  // "j0" (y^2 = x^3 + 1) or "j1728" (y^2 = x^3 - x)
    std::shared_ptr<QuatAlgebra> alg;
    std::shared_ptr<QuatOrder> order;
    Quat sigma, frob;
    QuatMat2 f;
};

inline Quat qq(const QuatAlgebra* A, const Rat& w, const Rat& x, const Rat& y, const Rat& z) {
    return Quat(A, w, x, y, z);
}

// p = 3: B = (-1,-3), E: y^2 = x^3 - x, sigma = i, F = j.
inline QuatPreset preset_p3() {
    QuatPreset P;
    P.name = "p3";
    P.p = 3;
    P.curve = "j1728";
    P.alg = std::make_shared<QuatAlgebra>(QuatAlgebra{Rat(-1), Rat(-3)});
    const QuatAlgebra* A = P.alg.get();
    std::array<Quat, 4> basis = {
        Quat::one(A),
        Quat::unit_i(A),
        qq(A, 0, Rat(1, 2), 0, Rat(1, 2)),   // (i + k)/2
        qq(A, Rat(1, 2), 0, Rat(1, 2), 0),   // (1 + j)/2
    };
    P.order = std::make_shared<QuatOrder>(make_order(A, basis));
    if (P.order->reduced_disc != 3) throw std::logic_error("p3 order not maximal");
    P.sigma = Quat::unit_i(A);
    P.frob = Quat::unit_j(A);
    // f = [[3, (1+i)F], [-(1+i)F, 3]]
    Quat t = (Quat::one(A) + Quat::unit_i(A)) * P.frob;
    P.f = QuatMat2{qq(A, 3, 0, 0, 0), t, t.conj(), qq(A, 3, 0, 0, 0)};
    return P;
}

// p = 5: B = (-3,-5), E: y^2 = x^3 + 1, sigma = zeta_3 = (-1+i)/2, F = j.
inline QuatPreset preset_p5() {
    QuatPreset P;
    P.name = "p5";
    P.p = 5;
    P.curve = "j0";
    P.alg = std::make_shared<QuatAlgebra>(QuatAlgebra{Rat(-3), Rat(-5)});
    const QuatAlgebra* A = P.alg.get();
    // start from Z<1, zeta, j, (j+k)/2> and saturate to the maximal order
    std::array<Quat, 4> basis = {
        Quat::one(A),
        qq(A, Rat(-1, 2), Rat(1, 2), 0, 0),  // zeta_3
        Quat::unit_j(A),
        qq(A, 0, 0, Rat(1, 2), Rat(1, 2)),   // (j + k)/2
    };
    QuatOrder O0 = make_order(A, basis);
    QuatOrder O = O0.reduced_disc == 5 ? O0 : saturate_order(O0, 5);
    if (O.reduced_disc != 5) throw std::logic_error("p5 order saturation failed");
    // canonical HNF basis
    QuatLattice L = lattice_from_quats(&O0, {O.basis[0], O.basis[1], O.basis[2], O.basis[3]});
    std::array<Quat, 4> canon;
    for (size_t i = 0; i < 4; i++) canon[i] = L.element(i);
    O = make_order(A, canon);
    if (O.reduced_disc != 5) throw std::logic_error("p5 canonical basis lost maximality");
    P.order = std::make_shared<QuatOrder>(O);
    P.sigma = qq(A, Rat(-1, 2), Rat(1, 2), 0, 0);
    P.frob = Quat::unit_j(A);
    Quat t = P.frob * Rat(2);
    P.f = QuatMat2{qq(A, 5, 0, 0, 0), t, t.conj(), qq(A, 5, 0, 0, 0)};
    P.f.e21 = P.f.e12.conj();
    return P;
}

// p = 1601: B = (-3,-1601) with the maximal order
// <1, 1/2 + i/2, 1/2 + i/6 + j/2 + k/6, -1/2 + i/6 - k/3>.
inline QuatPreset preset_p1601() {
    QuatPreset P;
    P.name = "p1601";
    P.p = 1601;
    P.curve = "j0";
    P.alg = std::make_shared<QuatAlgebra>(QuatAlgebra{Rat(-3), Rat(-1601)});
    const QuatAlgebra* A = P.alg.get();
    std::array<Quat, 4> basis = {
        Quat::one(A),
        qq(A, Rat(1, 2), Rat(1, 2), 0, 0),
        qq(A, Rat(1, 2), Rat(1, 6), Rat(1, 2), Rat(1, 6)),
        qq(A, Rat(-1, 2), Rat(1, 6), 0, Rat(-1, 3)),
    };
    P.order = std::make_shared<QuatOrder>(make_order(A, basis));
    if (P.order->reduced_disc != 1601) throw std::logic_error("p1601 order not maximal");
    P.sigma = qq(A, Rat(-1, 2), Rat(1, 2), 0, 0);
    P.frob = Quat::unit_j(A);
    Quat t = P.frob * Rat(40);
    P.f = QuatMat2{qq(A, 1601, 0, 0, 0), t, t.conj(), qq(A, 1601, 0, 0, 0)};
    P.f.e21 = P.f.e12.conj();
    return P;
}

inline QuatPreset quat_preset_by_name(const std::string& name) {
    if (name == "p3") return preset_p3();
    if (name == "p5") return preset_p5();
    if (name == "p1601") return preset_p1601();
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace ssg2

#pragma once
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "presets.hpp"

namespace ssg2 {

// Plain-text key/value preset files.
//
//   name p5            preset name
//   p 5                the prime
//   curve j0           curve preset (j0: y^2 = x^3 + 1, j1728: y^2 = x^3 - x)
//   alg_a -3           i^2 = alg_a
//   alg_b -5           j^2 = alg_b
//   basis w x y z * 4  order Z-basis, 16 rationals in coordinates 1, i, j, k
//   sigma w x y z      the CM endomorphism as a quaternion
//   frob w x y z       the Frobenius as a quaternion
//   f11 5              polarization matrix: rational diagonal entries
//   f22 5
//   f12 w x y z        off-diagonal entry (f21 = conjugate)
//   classes <file>     optional right-ideal class list (from gen_classes)
//
// Lines starting with '#' are comments.

struct PresetParseError : std::runtime_error {
    explicit PresetParseError(const std::string& s) : std::runtime_error(s) {}
};

inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw PresetParseError("bad rational: " + s);
    }
}

inline QuatPreset load_quat_preset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PresetParseError("cannot open preset file " + path);
    std::map<std::string, std::vector<std::string>> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        std::vector<std::string> vals;
        std::string v;
        while (ss >> v) vals.push_back(v);
        kv[key] = vals;
    }
    auto need = [&](const std::string& key, size_t n) -> const std::vector<std::string>& {
        auto it = kv.find(key);
        if (it == kv.end()) throw PresetParseError("missing key: " + key);
        if (it->second.size() != n)
            throw PresetParseError("key " + key + " needs " + std::to_string(n) + " values");
        return it->second;
    };
    QuatPreset P;
    P.name = need("name", 1)[0];
    P.p = Int(need("p", 1)[0]);
    P.curve = need("curve", 1)[0];
    Rat a = parse_rat(need("alg_a", 1)[0]), b = parse_rat(need("alg_b", 1)[0]);
    P.alg = std::make_shared<QuatAlgebra>(QuatAlgebra{a, b});
    const QuatAlgebra* A = P.alg.get();
    auto quat_of = [&](const std::vector<std::string>& v, size_t off) {
        return Quat(A, parse_rat(v[off]), parse_rat(v[off + 1]), parse_rat(v[off + 2]),
                    parse_rat(v[off + 3]));
    };
    auto& bs = need("basis", 16);
    std::array<Quat, 4> basis;
    for (size_t i = 0; i < 4; i++) basis[i] = quat_of(bs, 4 * i);
    P.order = std::make_shared<QuatOrder>(make_order(A, basis));
    if (P.order->reduced_disc != P.p)
        throw PresetParseError("order in preset file is not maximal (disc != p)");
    P.sigma = quat_of(need("sigma", 4), 0);
    P.frob = quat_of(need("frob", 4), 0);
    if (!P.order->contains(P.sigma) || !P.order->contains(P.frob))
        throw PresetParseError("sigma/frob not in the order");
    Quat f12 = quat_of(need("f12", 4), 0);
    Quat f11 = Quat(A, parse_rat(need("f11", 1)[0]), 0, 0, 0);
    Quat f22 = Quat(A, parse_rat(need("f22", 1)[0]), 0, 0, 0);
    P.f = QuatMat2{f11, f12, f12.conj(), f22};
    auto pc = validate_polarization(P.f, *P.order, P.frob, P.p);
    if (!pc.ok) throw PresetParseError("invalid polarization matrix: " + pc.why);
    return P;
}

// right-ideal class list written by gen_classes
inline std::vector<std::pair<std::string, QuatLattice>> load_class_list(
    const std::string& path, const QuatOrder* O) {
    std::ifstream in(path);
    if (!in) throw PresetParseError("cannot open class file " + path);
    std::vector<std::pair<std::string, QuatLattice>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string head;
        ss >> head;
        if (head == "preset" || head == "classes") continue;
        std::vector<Rat> vals;
        std::string v;
        while (ss >> v) vals.push_back(parse_rat(v));
        if (vals.size() != 16) throw PresetParseError("class row needs 16 rationals");
        QuatLattice L;
        L.order = O;
        L.rows = Mat<Rat>(4, 4, Rat(0));
        for (size_t i = 0; i < 4; i++)
            for (size_t j = 0; j < 4; j++) L.rows.at(i, j) = vals[4 * i + j];
        if (!is_right_ideal(L)) throw PresetParseError("class row is not a right ideal");
        out.emplace_back(head, L);
    }
    return out;
}

}  // namespace ssg2

// Command-line driver: classification of the reducible fibers and hyperelliptic
// models of the irreducible fibers, with machine-readable JSON output.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <ssg2/pipeline.hpp>
#include <ssg2/presetfile.hpp>

using namespace ssg2;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchemaVersion = "1";

std::string preset_path(const std::string& name) {
    if (name.find('/') != std::string::npos || name.find(".cfg") != std::string::npos)
        return name;
    return std::string(SSG2_PRESET_DIR) + "/" + name + ".cfg";
}

json rat_json(const Rat& r) { return r.str(); }

json quat_json(const Quat& q) {
    return json::array({rat_json(q.w), rat_json(q.x), rat_json(q.y), rat_json(q.z)});
}

json mat_json(const QuatMat2& m) {
    return json::array({json::array({quat_json(m.e11), quat_json(m.e12)}),
                        json::array({quat_json(m.e21), quat_json(m.e22)})});
}

// field elements as coefficient lists, highest power of the generator first,
// matching the display convention of the worked examples
json fq_json(const Fq& v) {
    json a = json::array();
    for (size_t i = v.c.size(); i-- > 0;) a.push_back(v.c[i]);
    return a;
}

json point_json(const ECPoint& P) {
    if (P.inf) return json("inf");
    return json::array({fq_json(P.x), fq_json(P.y)});
}

json poly_json(const FqPoly& f) {
    json a = json::array();
    for (auto& c : f.c) a.push_back(fq_json(c));
    return a;
}

json decomposition_json(const Decomposition& d) {
    json j;
    j["f1"] = mat_json(d.f1);
    j["f2"] = mat_json(d.f2);
    j["class"] = d.class_label;
    j["kernel_free"] = d.kernel_free;
    j["constructible"] = d.kernel_free && d.v_evaluable;
    if (d.kernel_free)
        j["v"] = json::array({quat_json(d.v.a), quat_json(d.v.b)});
    return j;
}

Fq parse_t(const std::string& s, const FqCtx* k) {
    // coefficient list c_{n-1},...,c_0 in the basis a^{n-1},...,a,1
    std::vector<uint32_t> rev;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        long long v = std::stoll(cur);
        v %= (long long)k->p;
        if (v < 0) v += k->p;
        rev.push_back((uint32_t)v);
    }
    if (rev.size() > k->absdeg) throw std::invalid_argument("t has too many coefficients");
    std::vector<uint32_t> le(rev.rbegin(), rev.rend());
    return Fq::from_coeffs(k, le);
}

json run_report_header(const std::string& cmd, const std::string& preset, uint64_t seed) {
    json j;
    j["schema"] = kSchemaVersion;
    j["command"] = cmd;
    j["preset"] = preset;
    j["seed"] = seed;
    return j;
}

void emit(const json& j, const std::string& out) {
    std::string text = j.dump(1);
    text += "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        f << text;
    }
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

json model_json(const FiberModel& m, const Fq& t) {
    json j;
    j["t"] = fq_json(t);
    j["model"] = poly_json(m.model);
    j["degree"] = m.model.deg();
    j["igusa"] = json::array(
        {fq_json(m.ig.j2), fq_json(m.ig.j4), fq_json(m.ig.j6), fq_json(m.ig.j8),
         fq_json(m.ig.j10)});
    json lp = json::array();
    for (auto& c : m.lp.coeff) lp.push_back(c.str());
    j["lpolynomial"] = lp;
    j["supersingular"] = m.supersingular;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reducible-fiber classification and hyperelliptic models of the "
                 "irreducible fibers of supersingular genus-2 families"};
    app.require_subcommand(1);

    std::string preset_name = "p5", class_label, out_path, t_str, t_list;
    std::string orbit_mode;
    uint64_t seed = 1;
    int jobs = 1;
    std::optional<size_t> sel0, selinf;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--preset", preset_name, "preset name or .cfg path");
        cmd->add_option("--seed", seed, "random seed (echoed; runs are deterministic)");
        cmd->add_option("--out", out_path, "write JSON to this path instead of stdout");
    };

    auto* cmd_dec = app.add_subcommand("decompose", "classify the reducible fibers");
    add_common(cmd_dec);
    cmd_dec->add_option("--class", class_label, "restrict to one ideal class label");

    auto* cmd_fib = app.add_subcommand("fibers", "reducible fibers with correction points");
    add_common(cmd_fib);

    auto* cmd_curve = app.add_subcommand("curve", "hyperelliptic model of one fiber");
    add_common(cmd_curve);
    size_t d0_idx = SIZE_MAX, dinf_idx = SIZE_MAX;
    cmd_curve->add_option("--t", t_str, "fiber parameter as coefficients c3,c2,c1,c0");
    cmd_curve->add_option("--d0", d0_idx, "index of the base decomposition");
    cmd_curve->add_option("--dinf", dinf_idx, "index of the second decomposition");

    auto* cmd_cat = app.add_subcommand("catalog", "models for a list of parameters");
    add_common(cmd_cat);
    cmd_cat->add_option("--t-list", t_list, "parameters separated by |");
    cmd_cat->add_option("--orbit", orbit_mode,
                        "sweep the coordinate-ambiguity orbit of --t (full|scale)");
    cmd_cat->add_option("--t", t_str, "base parameter for --orbit");
    cmd_cat->add_option("--jobs", jobs, "concurrent rows");
    cmd_cat->add_option("--d0", d0_idx, "index of the base decomposition");
    cmd_cat->add_option("--dinf", dinf_idx, "index of the second decomposition");

    CLI11_PARSE(app, argc, argv);

    try {
        QuatPreset qp = load_quat_preset(preset_path(preset_name));
        if (cmd_dec->parsed()) {
            Timer tm;
            json j = run_report_header("decompose", qp.name, seed);
            auto O = order_as_lattice(qp.order.get());
            std::vector<std::pair<std::string, QuatLattice>> classes;
            std::string cls_file = preset_path(qp.name + "_classes");
            std::ifstream probe(cls_file);
            if (probe.good())
                classes = load_class_list(cls_file, qp.order.get());
            else
                classes = {{"cl0", O}};
            std::map<std::string, Decomposition> all;
            json per_class = json::array();
            for (auto& [label, I] : classes) {
                if (!class_label.empty() && label != class_label) continue;
                auto decs =
                    decompose_with_class(*qp.order, qp.f, I, label, qp.p, qp.sigma, qp.frob);
                json cj;
                cj["class"] = label;
                cj["count"] = decs.size();
                per_class.push_back(cj);
                for (auto& d : decs) {
                    std::string key = pair_key(d.f1, d.f2);
                    if (!all.count(key)) all[key] = d;
                }
            }
            j["classes"] = per_class;
            json list = json::array();
            for (auto& [key, d] : all) list.push_back(decomposition_json(d));
            j["decompositions"] = list;
            j["count"] = all.size();
            j["expected_5p_minus_5"] = (Int(5) * qp.p - 5).str();
            j["seconds"] = tm.secs();
            emit(j, out_path);
            return 0;
        }
        if (cmd_fib->parsed()) {
            Timer tm;
            json j = run_report_header("fibers", qp.name, seed);
            auto Pp = make_pipeline(qp);
            PipelineCtx& P = *Pp;
            TwoTorsionBasis basis(P.C.E);
            PointE2 origin{ECPoint::infinity(), ECPoint::infinity()};
            auto val0 = [&](const PointE2& Q) { return e_star(P.D0, Q, origin); };
            QuadF2 Q0 = quad_matrix(val0, basis);
            json rows = json::array();
            for (size_t i = 0; i < P.decs.size(); i++) {
                json r = decomposition_json(P.decs[i]);
                r["index"] = i;
                if (P.decs[i].kernel_free && P.decs[i].v_evaluable) {
                    auto comps = decomposition_curves(P.C, qp, P.decs[i], qp.p);
                    auto val = [&](const PointE2& Qp) { return e_star(comps, Qp, origin); };
                    QuadF2 Qi = quad_matrix(val, basis);
                    auto bits = torsion_correction_bits(Q0, Qi);
                    PointE2 Pc = basis.from_bits(bits);
                    r["correction_point"] =
                        json::array({point_json(Pc.a), point_json(Pc.b)});
                    // components are images of E, so their j-invariant is j(E);
                    // the quotient components are the Frobenius twists
                    Fq jE = P.C.E.A.is_zero() ? Fq::zero(P.C.E.k)
                                              : Fq::from_int(P.C.E.k, 1728);
                    r["component_j"] = fq_json(jE);
                    r["component_j_twist"] = fq_json(jE.pow(Int(P.C.E.k->p)));
                }
                rows.push_back(r);
            }
            j["fibers"] = rows;
            j["count"] = P.decs.size();
            j["seconds"] = tm.secs();
            emit(j, out_path);
            return 0;
        }
        // curve / catalog need the pipeline
        std::optional<size_t> s0, si;
        if (d0_idx != SIZE_MAX) s0 = d0_idx;
        if (dinf_idx != SIZE_MAX) si = dinf_idx;
        Timer tm;
        auto Pp = make_pipeline(qp, s0, si);
        PipelineCtx& P = *Pp;
        const FqCtx* k = P.C.E.k;
        if (cmd_curve->parsed()) {
            json j = run_report_header("curve", qp.name, seed);
            j["d0"] = decomposition_json(P.sel0);
            j["dinf"] = decomposition_json(P.selinf);
            j["correction_point"] =
                json::array({point_json(P.Pcorr.a), point_json(P.Pcorr.b)});
            if (t_str.empty()) throw std::invalid_argument("curve needs --t");
            Fq t = parse_t(t_str, k);
            try {
                FiberModel m = extract_fiber_model(P, t);
                j["result"] = model_json(m, t);
            } catch (const ReducibleFiber& e) {
                j["error"] = {{"code", "reducible_fiber"}, {"message", e.what()}};
                j["seconds"] = tm.secs();
                emit(j, out_path);
                return 2;
            }
            j["seconds"] = tm.secs();
            emit(j, out_path);
            return 0;
        }
        if (cmd_cat->parsed()) {
            json j = run_report_header("catalog", qp.name, seed);
            std::vector<Fq> ts;
            if (!orbit_mode.empty()) {
                if (t_str.empty()) throw std::invalid_argument("--orbit needs --t");
                Fq t = parse_t(t_str, k);
                if (orbit_mode == "scale") {
                    for (auto& l : subfield_p2_elements(k))
                        if (!l.is_zero()) ts.push_back(l * t);
                } else {
                    ts = ambiguity_orbit(k, t);
                }
            } else if (!t_list.empty()) {
                std::istringstream ss(t_list);
                std::string cur;
                while (std::getline(ss, cur, '|')) ts.push_back(parse_t(cur, k));
            }
            // dedupe, deterministic order by coordinates
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            struct Row {
                size_t idx;
                json payload;
            };
            std::vector<json> rows(ts.size());
            std::mutex mu;
            size_t next = 0;
            auto worker = [&]() {
                while (true) {
                    size_t mine;
                    {
                        std::lock_guard<std::mutex> lk(mu);
                        if (next >= ts.size()) return;
                        mine = next++;
                    }
                    json r;
                    r["t"] = fq_json(ts[mine]);
                    try {
                        FiberModel m = extract_fiber_model(P, ts[mine]);
                        r["result"] = model_json(m, ts[mine]);
                    } catch (const ReducibleFiber& e) {
                        r["error"] = {{"code", "reducible_fiber"}, {"message", e.what()}};
                    } catch (const std::exception& e) {
                        r["error"] = {{"code", "extract_error"}, {"message", e.what()}};
                    }
                    rows[mine] = std::move(r);
                }
            };
            int nthreads = std::max(1, jobs);
            std::vector<std::thread> pool;
            for (int i = 1; i < nthreads; i++) pool.emplace_back(worker);
            worker();
            for (auto& th : pool) th.join();
            j["rows"] = json::array();
            for (auto& r : rows) j["rows"].push_back(r);
            // igusa collision summary
            json collisions = json::array();
            for (size_t a = 0; a < ts.size(); a++) {
                if (!rows[a].contains("result")) continue;
                for (size_t b = a + 1; b < ts.size(); b++) {
                    if (!rows[b].contains("result")) continue;
                    if (rows[a]["result"]["igusa"] == rows[b]["result"]["igusa"])
                        collisions.push_back(json::array({a, b}));
                }
            }
            j["igusa_collisions_exact"] = collisions;
            j["seconds"] = tm.secs();
            emit(j, out_path);
            return 0;
        }
    } catch (const PresetParseError& e) {
        json j;
        j["error"] = {{"code", "preset_error"}, {"message", e.what()}};
        emit(j, out_path);
        return 3;
    } catch (const std::exception& e) {
        json j;
        j["error"] = {{"code", "error"}, {"message", e.what()}};
        emit(j, out_path);
        return 1;
    }
    return 0;
}

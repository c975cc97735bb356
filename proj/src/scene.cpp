#include "linklab/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "linklab/smearing.hpp"

namespace linklab {

namespace {

using nlohmann::json;
using cd = std::complex<double>;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string fmt_hash(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const std::set<std::string>& experiment_names() {
    static const std::set<std::string> names{"link",      "commute",    "sweep-linking",
                                             "sweep-mass", "invariance", "positivity",
                                             "identities"};
    return names;
}

bool is_vec4(const json& v) {
    if (!v.is_array() || v.size() != 4) return false;
    for (const auto& e : v)
        if (!e.is_number()) return false;
    return true;
}

FourVector to_vec4(const json& v) {
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
}

// ---------------------------------------------------------------- validation

void check_vec4(std::vector<std::string>& out, const json& spec, const std::string& path,
                const char* key) {
    if (!spec.contains(key))
        out.push_back(path + "." + key + ": required");
    else if (!is_vec4(spec.at(key)))
        out.push_back(path + "." + key + ": must be an array of 4 numbers");
}

bool positive_number(const json& v) { return v.is_number() && v.get<double>() > 0.0; }

void validate_loop_spec(std::vector<std::string>& out, const std::string& path, const json& spec) {
    if (!spec.is_object()) {
        out.push_back(path + ": must be an object");
        return;
    }
    const std::string kind = spec.value("kind", "");
    if (kind.empty()) {
        out.push_back(path + ".kind: required");
        return;
    }
    if (kind == "circle") {
        check_vec4(out, spec, path, "center");
        check_vec4(out, spec, path, "e1");
        check_vec4(out, spec, path, "e2");
        if (!spec.contains("radius") || !positive_number(spec.at("radius")))
            out.push_back(path + ".radius: must be a positive number");
        for (const char* key : {"e1", "e2"}) {
            if (!spec.contains(key) || !is_vec4(spec.at(key))) continue;
            const FourVector e = to_vec4(spec.at(key));
            if (std::abs(e.t) > 1e-12)
                out.push_back(path + "." + key + ": must be purely spatial");
            if (std::abs(std::sqrt(spatial_norm_sq(e)) - 1.0) > 1e-9)
                out.push_back(path + "." + key + ": must be unit length");
        }
        if (spec.contains("e1") && spec.contains("e2") && is_vec4(spec.at("e1")) &&
            is_vec4(spec.at("e2"))) {
            const FourVector a = to_vec4(spec.at("e1")), b = to_vec4(spec.at("e2"));
            if (std::abs(a.x * b.x + a.y * b.y + a.z * b.z) > 1e-9)
                out.push_back(path + ".e2: must be orthogonal to e1");
        }
    } else if (kind == "fourier") {
        check_vec4(out, spec, path, "a0");
        for (const char* key : {"cos", "sin"}) {
            if (!spec.contains(key) || !spec.at(key).is_array() || spec.at(key).size() != 4) {
                out.push_back(path + "." + key + ": must be an array of 4 coefficient rows");
                continue;
            }
            for (const auto& row : spec.at(key)) {
                if (!row.is_array() || row.empty()) {
                    out.push_back(path + "." + key + ": rows must be nonempty number arrays");
                    break;
                }
                for (const auto& e : row)
                    if (!e.is_number()) {
                        out.push_back(path + "." + key + ": rows must contain numbers");
                        break;
                    }
            }
        }
        if (spec.contains("cos") && spec.contains("sin") && spec.at("cos").is_array() &&
            spec.at("sin").is_array() && spec.at("cos").size() == 4 && spec.at("sin").size() == 4) {
            for (int mu = 0; mu < 4; ++mu)
                if (spec.at("cos")[mu].is_array() && spec.at("sin")[mu].is_array() &&
                    spec.at("cos")[mu].size() != spec.at("sin")[mu].size())
                    out.push_back(path + ": cos and sin rows must have matching lengths");
        }
    } else if (kind == "polyline") {
        if (!spec.contains("vertices") || !spec.at("vertices").is_array() ||
            spec.at("vertices").size() < 3) {
            out.push_back(path + ".vertices: need at least 3 vertices");
        } else {
            for (const auto& v : spec.at("vertices"))
                if (!is_vec4(v)) {
                    out.push_back(path + ".vertices: entries must be arrays of 4 numbers");
                    break;
                }
        }
    } else if (kind == "torus-first" || kind == "torus-second") {
        if (!spec.contains("lambda") || !spec.at("lambda").is_number_integer())
            out.push_back(path + ".lambda: must be an integer");
    } else {
        out.push_back(path + ".kind: unknown loop kind '" + kind + "'");
    }
}

void validate_mollifier_spec(std::vector<std::string>& out, const std::string& path,
                             const json& spec) {
    if (!spec.is_object()) {
        out.push_back(path + ": must be an object");
        return;
    }
    const std::string kind = spec.value("kind", "");
    if (kind == "gaussian") {
        if (!spec.contains("width") || !positive_number(spec.at("width")))
            out.push_back(path + ".width: must be a positive number");
    } else if (kind == "bump") {
        if (!spec.contains("radius") || !positive_number(spec.at("radius")))
            out.push_back(path + ".radius: must be a positive number");
    } else {
        out.push_back(path + ".kind: must be 'gaussian' or 'bump'");
    }
}

void validate_model_spec(std::vector<std::string>& out, const std::string& path, const json& spec) {
    if (!spec.is_object() || !spec.contains("components") || !spec.at("components").is_array() ||
        spec.at("components").empty()) {
        out.push_back(path + ".components: must be a nonempty array");
        return;
    }
    int idx = 0;
    for (const auto& comp : spec.at("components")) {
        const std::string cpath = path + ".components[" + std::to_string(idx++) + "]";
        if (!comp.is_object()) {
            out.push_back(cpath + ": must be an object");
            continue;
        }
        for (const char* key : {"c1", "c2"})
            if (!comp.contains(key) || !comp.at(key).is_number())
                out.push_back(cpath + "." + key + ": must be a number");
        if (!comp.contains("mass") || !comp.at("mass").is_object()) {
            out.push_back(cpath + ".mass: required");
            continue;
        }
        const json& mass = comp.at("mass");
        const std::string kind = mass.value("kind", "");
        bool gapped = false;
        if (kind == "atom") {
            if (!mass.contains("value") || !mass.at("value").is_number() ||
                mass.at("value").get<double>() < 0.0)
                out.push_back(cpath + ".mass.value: must be a nonnegative number");
            else
                gapped = mass.at("value").get<double>() > 0.0;
            if (mass.contains("weight") && !positive_number(mass.at("weight")))
                out.push_back(cpath + ".mass.weight: must be a positive number");
        } else if (kind == "continuum") {
            const bool lo_ok = mass.contains("lo") && mass.at("lo").is_number() &&
                               mass.at("lo").get<double>() >= 0.0;
            const bool hi_ok = mass.contains("hi") && mass.at("hi").is_number();
            if (!lo_ok) out.push_back(cpath + ".mass.lo: must be a nonnegative number");
            if (!hi_ok || (lo_ok && mass.at("hi").get<double>() <= mass.at("lo").get<double>()))
                out.push_back(cpath + ".mass.hi: must exceed lo");
            if (!mass.contains("density") || !positive_number(mass.at("density")))
                out.push_back(cpath + ".mass.density: must be a positive number");
            if (!mass.contains("nodes") || !mass.at("nodes").is_number_integer() ||
                mass.at("nodes").get<int>() < 1)
                out.push_back(cpath + ".mass.nodes: must be a positive integer");
            gapped = true;
        } else {
            out.push_back(cpath + ".mass.kind: must be 'atom' or 'continuum'");
        }
        if (gapped && comp.contains("c2") && comp.at("c2").is_number() &&
            comp.at("c2").get<double>() != 0.0)
            out.push_back(cpath + ".c2: the dual line requires massless support");
    }
}

void validate_grid_spec(std::vector<std::string>& out, const json& spec) {
    if (!spec.is_object()) {
        out.push_back("grid: must be an object");
        return;
    }
    const std::string kind = spec.value("kind", "");
    if (kind == "suggest") {
        for (const char* key : {"min_width", "extent", "transverse"})
            if (!spec.contains(key) || !positive_number(spec.at(key)))
                out.push_back(std::string("grid.") + key + ": must be a positive number");
        if (spec.contains("scale") && !positive_number(spec.at("scale")))
            out.push_back("grid.scale: must be a positive number");
    } else if (kind == "explicit") {
        for (const char* key : {"radial_nodes", "polar_nodes", "azimuthal_nodes"})
            if (!spec.contains(key) || !spec.at(key).is_number_integer() ||
                spec.at(key).get<int>() < 4)
                out.push_back(std::string("grid.") + key + ": must be an integer >= 4");
        if (!spec.contains("radial_scale") || !positive_number(spec.at("radial_scale")))
            out.push_back("grid.radial_scale: must be a positive number");
    } else {
        out.push_back("grid.kind: must be 'suggest' or 'explicit'");
    }
}

std::set<std::string> key_set(const json& scene, const char* key) {
    std::set<std::string> names;
    if (scene.contains(key) && scene.at(key).is_object())
        for (const auto& [k, v] : scene.at(key).items()) names.insert(k);
    return names;
}

void require_loop_ref(std::vector<std::string>& out, const std::set<std::string>& loops,
                      const json& params, const std::string& field) {
    if (!params.contains(field) || !params.at(field).is_string())
        out.push_back("params." + field + ": must name a loop");
    else if (!loops.count(params.at(field).get<std::string>()))
        out.push_back("params." + field + ": unknown loop '" +
                      params.at(field).get<std::string>() + "'");
}

void require_mollifier_ref(std::vector<std::string>& out, const std::set<std::string>& mols,
                           const json& params, const std::string& field) {
    if (!params.contains(field) || !params.at(field).is_string())
        out.push_back("params." + field + ": must name a mollifier");
    else if (!mols.count(params.at(field).get<std::string>()))
        out.push_back("params." + field + ": unknown mollifier '" +
                      params.at(field).get<std::string>() + "'");
}

void validate_experiment(std::vector<std::string>& out, const std::string& experiment,
                         const json& scene) {
    const std::set<std::string> loops = key_set(scene, "loops");
    const std::set<std::string> mols = key_set(scene, "mollifiers");
    const json params = scene.value("params", json::object());
    const json tol = scene.value("tolerances", json::object());

    const bool needs_grid = experiment != "link";
    if (needs_grid && !scene.contains("grid"))
        out.push_back("grid: required for experiment '" + experiment + "'");
    const bool needs_model = experiment == "commute" || experiment == "sweep-linking" ||
                             experiment == "invariance" || experiment == "identities";
    if (needs_model && !scene.contains("model"))
        out.push_back("model: required for experiment '" + experiment + "'");

    if (experiment == "link") {
        if (!params.contains("pairs") || !params.at("pairs").is_array() ||
            params.at("pairs").empty()) {
            out.push_back("params.pairs: must be a nonempty array of loop name pairs");
            return;
        }
        int idx = 0;
        for (const auto& pr : params.at("pairs")) {
            const std::string path = "params.pairs[" + std::to_string(idx++) + "]";
            if (!pr.is_array() || pr.size() != 2 || !pr[0].is_string() || !pr[1].is_string()) {
                out.push_back(path + ": must be a pair of loop names");
                continue;
            }
            for (int k = 0; k < 2; ++k)
                if (!loops.count(pr[k].get<std::string>()))
                    out.push_back(path + ": unknown loop '" + pr[k].get<std::string>() + "'");
        }
        if (params.contains("panels") && (!params.at("panels").is_number_integer() ||
                                          params.at("panels").get<int>() < 8))
            out.push_back("params.panels: must be an integer >= 8");
    } else if (experiment == "commute") {
        require_loop_ref(out, loops, params, "first");
        require_loop_ref(out, loops, params, "second");
        require_mollifier_ref(out, mols, params, "first_mollifier");
        require_mollifier_ref(out, mols, params, "second_mollifier");
        const bool zero = tol.contains("zero_rel_scale");
        const bool target = tol.contains("expect_im");
        if (!zero && !target)
            out.push_back("tolerances: need zero_rel_scale or expect_im");
        if (zero && !positive_number(tol.at("zero_rel_scale")))
            out.push_back("tolerances.zero_rel_scale: must be a positive number");
        if (target) {
            if (!tol.at("expect_im").is_number())
                out.push_back("tolerances.expect_im: must be a number");
            if (!tol.contains("rel") || !positive_number(tol.at("rel")))
                out.push_back("tolerances.rel: must be a positive number");
        }
    } else if (experiment == "sweep-linking") {
        require_mollifier_ref(out, mols, params, "mollifier");
        if (!params.contains("lambdas") || !params.at("lambdas").is_array() ||
            params.at("lambdas").empty()) {
            out.push_back("params.lambdas: must be a nonempty array of integers");
        } else {
            for (const auto& l : params.at("lambdas"))
                if (!l.is_number_integer()) {
                    out.push_back("params.lambdas: entries must be integers");
                    break;
                }
            if (params.contains("expected_ratios") &&
                (!params.at("expected_ratios").is_array() ||
                 params.at("expected_ratios").size() != params.at("lambdas").size()))
                out.push_back("params.expected_ratios: must match lambdas in length");
        }
        if (!tol.contains("ratio_tol") || !positive_number(tol.at("ratio_tol")))
            out.push_back("tolerances.ratio_tol: must be a positive number");
        if (tol.contains("hermiticity_rel") && !positive_number(tol.at("hermiticity_rel")))
            out.push_back("tolerances.hermiticity_rel: must be a positive number");
    } else if (experiment == "sweep-mass") {
        require_mollifier_ref(out, mols, params, "mollifier");
        if (!params.contains("masses") || !params.at("masses").is_array() ||
            params.at("masses").empty()) {
            out.push_back("params.masses: must be a nonempty array of nonnegative numbers");
        } else {
            bool has_zero = false;
            for (const auto& m : params.at("masses")) {
                if (!m.is_number() || m.get<double>() < 0.0) {
                    out.push_back("params.masses: entries must be nonnegative numbers");
                    break;
                }
                if (m.get<double>() == 0.0) has_zero = true;
            }
            if (!has_zero)
                out.push_back("params.masses: need a zero mass as the reference entry");
        }
        if (!tol.contains("gapped_rel") || !positive_number(tol.at("gapped_rel")))
            out.push_back("tolerances.gapped_rel: must be a positive number");
    } else if (experiment == "invariance") {
        require_loop_ref(out, loops, params, "first");
        require_loop_ref(out, loops, params, "second");
        require_mollifier_ref(out, mols, params, "first_mollifier");
        require_mollifier_ref(out, mols, params, "second_mollifier");
        if (!params.contains("variants") || !params.at("variants").is_array() ||
            params.at("variants").empty()) {
            out.push_back("params.variants: must be a nonempty array of loop names");
        } else {
            for (const auto& v : params.at("variants"))
                if (!v.is_string() || !loops.count(v.get<std::string>())) {
                    out.push_back("params.variants: unknown loop '" +
                                  (v.is_string() ? v.get<std::string>() : std::string("?")) + "'");
                }
        }
        if (!tol.contains("rel") || !positive_number(tol.at("rel")))
            out.push_back("tolerances.rel: must be a positive number");
    } else if (experiment == "positivity") {
        if (!params.contains("trials") || !params.at("trials").is_number_integer() ||
            params.at("trials").get<int>() < 1)
            out.push_back("params.trials: must be a positive integer");
        for (const char* key : {"f_model", "g_model", "cross_model"}) {
            if (!params.contains(key))
                out.push_back(std::string("params.") + key + ": required");
            else
                validate_model_spec(out, std::string("params.") + key, params.at(key));
        }
    } else if (experiment == "identities") {
        require_loop_ref(out, loops, params, "loop");
        require_loop_ref(out, loops, params, "second");
        require_mollifier_ref(out, mols, params, "mollifier");
        if (params.contains("step") && !positive_number(params.at("step")))
            out.push_back("params.step: must be a positive number");
        if (tol.contains("halving_min") && !positive_number(tol.at("halving_min")))
            out.push_back("tolerances.halving_min: must be a positive number");
        if (tol.contains("dalembert_rel") && !positive_number(tol.at("dalembert_rel")))
            out.push_back("tolerances.dalembert_rel: must be a positive number");
        if (scene.contains("model") && scene.at("model").is_object()) {
            bool gapped = false;
            const json comps = scene.at("model").value("components", json::array());
            for (const auto& comp : comps) {
                if (!comp.is_object() || !comp.contains("mass")) continue;
                const json& mass = comp.at("mass");
                if (mass.value("kind", "") == "atom" && mass.value("value", 0.0) > 0.0)
                    gapped = true;
                if (mass.value("kind", "") == "continuum") gapped = true;
            }
            if (!gapped)
                out.push_back(
                    "model: identities needs a gapped component for the wave-operator check");
        }
    }
}

// ------------------------------------------------------------------ builders

ParamLoop build_loop(const json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "circle")
        return make_circle(to_vec4(spec.at("center")), to_vec4(spec.at("e1")),
                           to_vec4(spec.at("e2")), spec.at("radius").get<double>());
    if (kind == "fourier") {
        ParamLoop::Fourier f;
        const json& a0 = spec.at("a0");
        for (int mu = 0; mu < 4; ++mu) f.a0[mu] = a0[mu].get<double>();
        for (int mu = 0; mu < 4; ++mu) {
            for (const auto& c : spec.at("cos")[mu]) f.cs[mu].push_back(c.get<double>());
            for (const auto& s : spec.at("sin")[mu]) f.sn[mu].push_back(s.get<double>());
        }
        return ParamLoop(f);
    }
    if (kind == "polyline") {
        std::vector<FourVector> verts;
        for (const auto& v : spec.at("vertices")) verts.push_back(to_vec4(v));
        return make_polyline(std::move(verts));
    }
    const int lambda = spec.at("lambda").get<int>();
    const LinkedPair pair = make_torus_link_pair(lambda);
    return kind == "torus-first" ? pair.first : pair.second;
}

Mollifier build_mollifier(const json& spec) {
    if (spec.at("kind").get<std::string>() == "gaussian")
        return Mollifier::gaussian(spec.at("width").get<double>());
    return Mollifier::bump(spec.at("radius").get<double>());
}

FieldPairModel build_model(const json& spec) {
    FieldPairModel model;
    for (const auto& comp : spec.at("components")) {
        const json& mass = comp.at("mass");
        MassComponent mc;
        if (mass.at("kind").get<std::string>() == "atom")
            mc = MassComponent::atom(mass.at("value").get<double>(), mass.value("weight", 1.0));
        else {
            const double density = mass.at("density").get<double>();
            mc = MassComponent::continuum(mass.at("lo").get<double>(), mass.at("hi").get<double>(),
                                          [density](double) { return density; },
                                          mass.at("nodes").get<int>());
        }
        model.components.push_back(
            {mc, {comp.at("c1").get<double>(), comp.at("c2").get<double>()}});
    }
    return model;
}

ShellGrid build_grid(const json& spec) {
    if (spec.at("kind").get<std::string>() == "suggest") {
        ShellGrid g = suggest_shell_grid(spec.at("min_width").get<double>(),
                                         spec.at("extent").get<double>(),
                                         spec.at("transverse").get<double>());
        const double scale = spec.value("scale", 1.0);
        if (scale != 1.0) g = g.scaled(scale);
        return g;
    }
    ShellGrid g;
    g.radial_nodes = spec.at("radial_nodes").get<int>();
    g.polar_nodes = spec.at("polar_nodes").get<int>();
    g.azimuthal_nodes = spec.at("azimuthal_nodes").get<int>();
    g.radial_scale = spec.at("radial_scale").get<double>();
    return g;
}

// -------------------------------------------------------------- experiments

struct Check {
    std::string name;
    double expected = 0.0;
    double measured = 0.0;
    double error = 0.0;
    bool pass = false;
};

struct Row {
    double parameter = 0.0;
    cd value;
    double error = 0.0;
};

struct ExperimentResult {
    std::vector<Check> checks;
    std::vector<Row> rows;
    std::vector<std::string> notes;
};

struct SceneObjects {
    std::map<std::string, ParamLoop> loops;
    std::map<std::string, Mollifier> mollifiers;
    FieldPairModel model;
    bool has_model = false;
    ShellGrid grid;
};

ExperimentResult run_link(const SceneObjects& obj, const json& params, const json& tol) {
    ExperimentResult res;
    const int panels = params.value("panels", 48);
    const double integer_tol = tol.value("integer_tol", 1e-3);
    const auto polyline_of = [](const ParamLoop& l) {
        if (std::holds_alternative<ParamLoop::Polyline>(l.rep())) return l;
        return l.to_polyline(512);
    };
    int idx = 0;
    for (const auto& pr : params.at("pairs")) {
        const ParamLoop& a = obj.loops.at(pr[0].get<std::string>());
        const ParamLoop& b = obj.loops.at(pr[1].get<std::string>());
        const LinkingEstimate est = gauss_linking(a, b, panels);
        const int cross = crossing_sign_linking(polyline_of(a), polyline_of(b));
        const double rounded = std::round(est.value);
        const std::string tag = "[" + std::to_string(idx) + "]";
        res.checks.push_back({"gauss-near-integer" + tag, rounded, est.value,
                              std::abs(est.value - rounded),
                              std::abs(est.value - rounded) <= integer_tol});
        res.checks.push_back({"engines-agree" + tag, rounded, double(cross),
                              std::abs(cross - rounded), cross == int(rounded)});
        res.rows.push_back({double(idx), cd(est.value, 0.0), est.error});
        ++idx;
    }
    return res;
}

ExperimentResult run_commute(const SceneObjects& obj, const json& params, const json& tol,
                             const RunOptions& opt) {
    ExperimentResult res;
    IntrinsicOptions io;
    io.workers = opt.workers;
    const CommutatorReport rep = intrinsic_commutator(
        obj.model, obj.mollifiers.at(params.at("first_mollifier").get<std::string>()),
        obj.loops.at(params.at("first").get<std::string>()),
        obj.mollifiers.at(params.at("second_mollifier").get<std::string>()),
        obj.loops.at(params.at("second").get<std::string>()), obj.grid, io);
    res.notes.push_back("# value: re " + fmt(rep.value.real()) + " im " + fmt(rep.value.imag()) +
                        " error " + fmt(rep.error_estimate) + " scale " + fmt(rep.l1_scale));
    if (tol.contains("zero_rel_scale")) {
        const double bound = tol.at("zero_rel_scale").get<double>() * rep.l1_scale;
        res.checks.push_back(
            {"commutator-null", 0.0, std::abs(rep.value), bound, std::abs(rep.value) <= bound});
    }
    if (tol.contains("expect_im")) {
        const double want = tol.at("expect_im").get<double>();
        const double rel = tol.at("rel").get<double>();
        res.checks.push_back({"commutator-im", want, rep.value.imag(), rep.error_estimate,
                              std::abs(rep.value.imag() - want) <= rel * std::abs(want)});
    }
    res.rows.push_back({0.0, rep.value, rep.error_estimate});
    return res;
}

ExperimentResult run_sweep_linking(const SceneObjects& obj, const json& params, const json& tol,
                                   const RunOptions& opt) {
    ExperimentResult res;
    std::vector<int> lambdas;
    for (const auto& l : params.at("lambdas")) lambdas.push_back(l.get<int>());
    const Mollifier& s = obj.mollifiers.at(params.at("mollifier").get<std::string>());
    const ProportionalityReport rep =
        verify_linking_proportionality(obj.model, s, lambdas, obj.grid, opt.workers);

    res.notes.push_back("# z: " + fmt(rep.z.z) + " hermiticity-residual " +
                        fmt(rep.z.imag_residual) + " error " + fmt(rep.z.error));
    const double herm_rel = tol.value("hermiticity_rel", 1e-3);
    const double herm = rep.z.imag_residual / std::abs(rep.z.z);
    res.checks.push_back({"hermiticity-residual", 0.0, herm, herm_rel, herm <= herm_rel});

    const double ratio_tol = tol.at("ratio_tol").get<double>();
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const ProportionalityRow& row = rep.rows[i];
        double want = double(row.lambda);
        if (params.contains("expected_ratios")) want = params.at("expected_ratios")[i].get<double>();
        res.checks.push_back({"ratio[lambda=" + std::to_string(row.lambda) + "]", want, row.ratio,
                              row.error, std::abs(row.ratio - want) <= ratio_tol});
        res.rows.push_back({double(row.lambda), row.value, row.error});
    }
    return res;
}

ExperimentResult run_sweep_mass(const SceneObjects& obj, const json& params, const json& tol,
                                const RunOptions& opt) {
    ExperimentResult res;
    std::vector<double> masses;
    for (const auto& m : params.at("masses")) masses.push_back(m.get<double>());
    const Mollifier& s = obj.mollifiers.at(params.at("mollifier").get<std::string>());
    const std::vector<MassRow> rows = mass_gap_sweep(masses, s, obj.grid, opt.workers);

    double reference = 0.0, ref_l1 = 0.0;
    for (const MassRow& row : rows)
        if (row.m == 0.0 && reference == 0.0) {
            reference = std::abs(row.value);
            ref_l1 = row.l1_scale;
        }
    const double nonzero_rel = tol.value("massless_nonzero_rel", 1e-4);
    res.checks.push_back({"massless-nonzero", nonzero_rel * ref_l1, reference, 0.0,
                          reference > nonzero_rel * ref_l1});
    const double gapped_rel = tol.at("gapped_rel").get<double>();
    for (const MassRow& row : rows) {
        res.rows.push_back({row.m, row.value, row.error});
        if (row.m == 0.0) continue;
        char name[48];
        std::snprintf(name, sizeof name, "gapped[m=%g]", row.m);
        res.checks.push_back({name, 0.0, std::abs(row.value), gapped_rel * reference,
                              std::abs(row.value) <= gapped_rel * reference});
    }
    return res;
}

ExperimentResult run_invariance(const SceneObjects& obj, const json& params, const json& tol,
                                const RunOptions& opt) {
    ExperimentResult res;
    IntrinsicOptions io;
    io.workers = opt.workers;
    const Mollifier& s1 = obj.mollifiers.at(params.at("first_mollifier").get<std::string>());
    const Mollifier& s2 = obj.mollifiers.at(params.at("second_mollifier").get<std::string>());
    const ParamLoop& second = obj.loops.at(params.at("second").get<std::string>());
    const CommutatorReport base = intrinsic_commutator(
        obj.model, s1, obj.loops.at(params.at("first").get<std::string>()), s2, second, obj.grid,
        io);
    res.notes.push_back("# base: re " + fmt(base.value.real()) + " im " + fmt(base.value.imag()) +
                        " error " + fmt(base.error_estimate));
    res.rows.push_back({0.0, base.value, base.error_estimate});
    const double rel = tol.at("rel").get<double>();
    double idx = 1.0;
    for (const auto& name : params.at("variants")) {
        const CommutatorReport rep = intrinsic_commutator(
            obj.model, s1, obj.loops.at(name.get<std::string>()), s2, second, obj.grid, io);
        const double dev = std::abs(rep.value - base.value);
        res.checks.push_back({"invariance[" + name.get<std::string>() + "]", base.value.imag(),
                              rep.value.imag(), rep.error_estimate,
                              dev <= rel * std::abs(base.value)});
        res.rows.push_back({idx, rep.value, rep.error_estimate});
        idx += 1.0;
    }
    return res;
}

ExperimentResult run_positivity(const SceneObjects& obj, const json& params, const json& tol,
                                const RunOptions& opt) {
    ExperimentResult res;
    const FieldPairModel f = build_model(params.at("f_model"));
    const FieldPairModel g = build_model(params.at("g_model"));
    const FieldPairModel cross = build_model(params.at("cross_model"));
    const PositivityReport rep = check_wightman_positivity(
        f, g, cross, params.at("trials").get<int>(), obj.grid,
        static_cast<std::uint32_t>(opt.seed), opt.workers);
    const double margin_min = tol.value("margin_min", -1e-4);
    const double self_min = tol.value("self_min", -1e-12);
    res.notes.push_back("# trials: " + std::to_string(rep.trials));
    res.checks.push_back({"positivity-margin", margin_min, rep.worst_margin, 0.0,
                          rep.worst_margin >= margin_min});
    res.checks.push_back(
        {"positivity-self", self_min, rep.worst_self, 0.0, rep.worst_self >= self_min});
    res.checks.push_back({"positivity-agreed", 1.0, rep.passed ? 1.0 : 0.0, 0.0, rep.passed});
    return res;
}

/// Max Frobenius deviation over the fixed probe set for an identity of the
/// form fd(x) == want(x); scale is the largest |want| seen.
struct FdResidual {
    double residual = 0.0;
    double scale = 0.0;
};

FdResidual fd_residual(const std::vector<FourVector>& pts,
                       const std::function<FourVector(const FourVector&)>& fd,
                       const std::function<FourVector(const FourVector&)>& want) {
    FdResidual out;
    for (const FourVector& x : pts) {
        const FourVector lhs = fd(x);
        const FourVector rhs = want(x);
        const FourVector diff = lhs - rhs;
        out.residual = std::max(out.residual, std::sqrt(euclid_norm_sq(diff)));
        out.scale = std::max(out.scale, std::sqrt(euclid_norm_sq(rhs)));
    }
    return out;
}

ExperimentResult run_identities(const SceneObjects& obj, const json& params, const json& tol,
                                const RunOptions& opt) {
    ExperimentResult res;
    const ParamLoop& loop = obj.loops.at(params.at("loop").get<std::string>());
    const ParamLoop& second = obj.loops.at(params.at("second").get<std::string>());
    const Mollifier& s = obj.mollifiers.at(params.at("mollifier").get<std::string>());
    const double step = params.value("step", 1e-3);
    const double halving_min = tol.value("halving_min", 3.5);
    const double dal_rel = tol.value("dalembert_rel", 1e-4);
    const LoopSmearing ls{s, loop, 1.0};

    std::vector<FourVector> pts;
    for (double u : {0.1, 0.45, 0.8})
        pts.push_back(FourVector{0.0, 0.0, 0.0, 0.0} - loop.position(u));
    pts[0] = pts[0] + FourVector{0.04, 0.08, -0.06, 0.1};
    pts[1] = pts[1] + FourVector{-0.06, -0.12, 0.1, 0.05};
    pts[2] = pts[2] + FourVector{0.1, 0.05, 0.12, -0.08};

    const auto h = [&](const FourVector& x) { return eval_loop_function(ls, x); };
    const auto push_halving = [&](const std::string& name, double coarse, double fine,
                                  double scale) {
        const double floor = 1e-12 * std::max(scale, 1e-300);
        const double ratio = coarse / std::max(fine, floor);
        res.checks.push_back({name, 4.0, ratio, fine / std::max(scale, 1e-300),
                              ratio >= halving_min});
    };

    {
        double coarse = 0.0, fine = 0.0, scale = 0.0;
        for (const FourVector& x : pts) {
            coarse = std::max(coarse, std::abs(co_derivative_one_form_fd(h, x, step)));
            fine = std::max(fine, std::abs(co_derivative_one_form_fd(h, x, step / 2.0)));
            scale = std::max(scale, std::sqrt(euclid_norm_sq(h(x))));
        }
        push_halving("co-closed-halving", coarse, fine, scale);
    }

    {
        const SurfaceSmearing cone{s, cone_surface(loop, loop.centroid()), -1.0};
        const TwoFormSampler cs = [&](const FourVector& x) {
            return eval_surface_function(cone, x);
        };
        const auto fd_at = [&](double st) {
            return fd_residual(
                pts, [&](const FourVector& x) { return co_derivative_fd(cs, x, st); }, h);
        };
        const FdResidual coarse = fd_at(step * 5.0), fine = fd_at(step * 2.5);
        push_halving("co-stokes-position-halving", coarse.residual, fine.residual, coarse.scale);
    }

    {
        const FourVector y{0.3, -0.2, 0.5, 0.1};
        const TwoFormSampler f = translation_coprimitive(ls, y);
        const auto want = [&](const FourVector& x) { return h(x) - h(x - y); };
        const auto fd_at = [&](double st) {
            return fd_residual(
                pts, [&](const FourVector& x) { return co_derivative_fd(f, x, st); }, want);
        };
        const FdResidual coarse = fd_at(step * 5.0), fine = fd_at(step * 2.5);
        push_halving("translation-halving", coarse.residual, fine.residual, coarse.scale);
    }

    {
        double worst = 0.0;
        for (const FourVector& p :
             {FourVector{1.3, 0.7, -0.4, 0.9}, FourVector{0.4, -1.1, 0.8, 0.3},
              FourVector{2.0, 0.5, 1.2, -0.7}}) {
            const CMat4 f = fourier_loop_coprimitive(ls, loop.centroid(), p);
            const C4 lh = fourier_loop(ls, p);
            const FourVector pl = lower_index(p);
            double num = 0.0, den = 0.0;
            for (int mu = 0; mu < 4; ++mu) {
                cd acc = 0.0;
                for (int nu = 0; nu < 4; ++nu) acc += cd(0.0, 2.0) * pl[nu] * f[nu][mu];
                num = std::max(num, std::abs(acc - lh[mu]));
                den = std::max(den, std::abs(lh[mu]));
            }
            worst = std::max(worst, num / std::max(den, 1e-300));
        }
        res.checks.push_back({"co-stokes-momentum", 0.0, worst, 1e-9, worst <= 1e-9});
    }

    {
        const DalembertReport rep = dalembert_curl_identity_check(obj.model, s, loop, s, second,
                                                                  obj.grid, opt.workers);
        res.notes.push_back("# wave-slot values: first " + fmt(std::abs(rep.wave_first)) +
                            " second " + fmt(std::abs(rep.wave_second)));
        res.checks.push_back({"box-curl-first", 0.0, rep.err_first,
                              dal_rel * std::abs(rep.wave_first),
                              rep.err_first <= dal_rel * std::abs(rep.wave_first)});
        res.checks.push_back({"box-curl-second", 0.0, rep.err_second,
                              dal_rel * std::abs(rep.wave_second),
                              rep.err_second <= dal_rel * std::abs(rep.wave_second)});
    }
    return res;
}

}  // namespace

// ------------------------------------------------------------------- public

std::uint64_t fnv1a_hash(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

nlohmann::json parse_scene_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("scene parse error: ") + e.what());
    }
}

std::vector<std::string> validate_scene(const nlohmann::json& scene) {
    std::vector<std::string> out;
    if (!scene.is_object()) {
        out.push_back("scene: document must be a json object");
        return out;
    }
    const std::string experiment = scene.value("experiment", "");
    if (!experiment_names().count(experiment)) {
        out.push_back("experiment: must be one of link, commute, sweep-linking, sweep-mass, "
                      "invariance, positivity, identities");
        return out;
    }
    if (scene.contains("loops")) {
        if (!scene.at("loops").is_object())
            out.push_back("loops: must be an object of named loop specs");
        else
            for (const auto& [name, spec] : scene.at("loops").items())
                validate_loop_spec(out, "loops." + name, spec);
    }
    if (scene.contains("mollifiers")) {
        if (!scene.at("mollifiers").is_object())
            out.push_back("mollifiers: must be an object of named mollifier specs");
        else
            for (const auto& [name, spec] : scene.at("mollifiers").items())
                validate_mollifier_spec(out, "mollifiers." + name, spec);
    }
    if (scene.contains("model")) validate_model_spec(out, "model", scene.at("model"));
    if (scene.contains("grid")) validate_grid_spec(out, scene.at("grid"));
    if (scene.contains("output")) {
        const json& o = scene.at("output");
        if (!o.is_object())
            out.push_back("output: must be an object");
        else
            for (const char* key : {"report", "table"})
                if (o.contains(key) &&
                    (!o.at(key).is_string() || o.at(key).get<std::string>().empty()))
                    out.push_back(std::string("output.") + key + ": must be a nonempty string");
    }
    if (out.empty()) validate_experiment(out, experiment, scene);
    return out;
}

SceneOutcome run_scene(const nlohmann::json& scene, const RunOptions& opt) {
    SceneOutcome outcome;
    nlohmann::json effective = scene;
    if (!opt.experiment_override.empty()) effective["experiment"] = opt.experiment_override;

    std::ostringstream rep;
    rep << "# linklab report\n";
    rep << "# scene: " << (opt.scene_label.empty() ? "(inline)" : opt.scene_label) << "\n";
    rep << "# scene-hash: fnv1a:" << fmt_hash(opt.scene_hash) << "\n";

    const std::vector<std::string> diags = validate_scene(effective);
    if (!diags.empty()) {
        for (const auto& d : diags) rep << "# validation: " << d << "\n";
        rep << "# result: INVALID\n";
        outcome.exit_code = 2;
        outcome.report = rep.str();
        return outcome;
    }

    const std::string experiment = effective.at("experiment").get<std::string>();
    rep << "# experiment: " << experiment << "\n";
    rep << "# refine: " << opt.refine << "\n";
    rep << "# workers: " << opt.workers << "\n";
    rep << "# seed: " << opt.seed << "\n";

    SceneObjects obj;
    if (effective.contains("loops"))
        for (const auto& [name, spec] : effective.at("loops").items())
            obj.loops.emplace(name, build_loop(spec));
    if (effective.contains("mollifiers"))
        for (const auto& [name, spec] : effective.at("mollifiers").items())
            obj.mollifiers.emplace(name, build_mollifier(spec));
    if (effective.contains("model")) {
        obj.model = build_model(effective.at("model"));
        obj.has_model = true;
    }
    if (effective.contains("grid")) {
        obj.grid = build_grid(effective.at("grid"));
        obj.grid.refinement += opt.refine;
        rep << "# grid: radial " << obj.grid.radial_nodes << " polar " << obj.grid.polar_nodes
            << " azimuthal " << obj.grid.azimuthal_nodes << " refinement " << obj.grid.refinement
            << " effective " << obj.grid.eff_radial() << "/" << obj.grid.eff_polar() << "/"
            << obj.grid.eff_azimuthal() << " radial-scale " << fmt(obj.grid.radial_scale) << "\n";
    }

    const json params = effective.value("params", json::object());
    const json tol = effective.value("tolerances", json::object());
    ExperimentResult result;
    try {
        if (experiment == "link")
            result = run_link(obj, params, tol);
        else if (experiment == "commute")
            result = run_commute(obj, params, tol, opt);
        else if (experiment == "sweep-linking")
            result = run_sweep_linking(obj, params, tol, opt);
        else if (experiment == "sweep-mass")
            result = run_sweep_mass(obj, params, tol, opt);
        else if (experiment == "invariance")
            result = run_invariance(obj, params, tol, opt);
        else if (experiment == "positivity")
            result = run_positivity(obj, params, tol, opt);
        else
            result = run_identities(obj, params, tol, opt);
    } catch (const GridUnresolved& e) {
        rep << "# numeric-failure: " << e.what() << "\n# result: NUMERIC-FAILURE\n";
        outcome.exit_code = 3;
        outcome.report = rep.str();
        return outcome;
    } catch (const std::domain_error& e) {
        rep << "# numeric-failure: " << e.what() << "\n# result: NUMERIC-FAILURE\n";
        outcome.exit_code = 3;
        outcome.report = rep.str();
        return outcome;
    } catch (const std::invalid_argument& e) {
        rep << "# numeric-failure: " << e.what() << "\n# result: NUMERIC-FAILURE\n";
        outcome.exit_code = 3;
        outcome.report = rep.str();
        return outcome;
    }

    for (const auto& note : result.notes) rep << note << "\n";
    int passed = 0, failed = 0;
    for (const Check& c : result.checks) {
        rep << "check " << c.name << " expected " << fmt(c.expected) << " measured "
            << fmt(c.measured) << " error " << fmt(c.error) << (c.pass ? " PASS" : " FAIL")
            << "\n";
        (c.pass ? passed : failed) += 1;
    }
    rep << "# checks: " << passed << " passed, " << failed << " failed\n";
    rep << "# result: " << (failed == 0 ? "PASS" : "FAIL") << "\n";

    outcome.exit_code = failed == 0 ? 0 : 1;
    outcome.report = rep.str();

    const json output = effective.value("output", json::object());
    outcome.report_path = output.value("report", "report.txt");
    outcome.table_path = output.value("table", "");
    if (!outcome.table_path.empty()) {
        std::ostringstream csv;
        csv << "parameter,value_re,value_im,error\n";
        for (const Row& r : result.rows)
            csv << fmt(r.parameter) << "," << fmt(r.value.real()) << "," << fmt(r.value.imag())
                << "," << fmt(r.error) << "\n";
        outcome.table = csv.str();
    }
    return outcome;
}

}  // namespace linklab

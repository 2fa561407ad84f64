// Copyright 2026 The pvtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Scenario runner: resolves a JSON scenario (task, resource, operation,
// grids, optimizer settings) and writes CSV tables plus a JSON sidecar that
// records every resolved value and can be fed back as the configuration.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pvtele/fock_oracle.hpp"
#include "pvtele/io.hpp"
#include "pvtele/optimize.hpp"
#include "pvtele/parallel.hpp"
#include "pvtele/pv_ops.hpp"
#include "pvtele/teleport.hpp"

namespace pvtele {

enum class Task { response_ratio_grid, fidelity, optimize, h_prime_grid, oracle_validate, figure };

inline const std::vector<std::pair<Task, std::string>> &task_names() {
    static const std::vector<std::pair<Task, std::string>> names{
        {Task::response_ratio_grid, "response_ratio_grid"}, {Task::fidelity, "fidelity"},
        {Task::optimize, "optimize"},       {Task::h_prime_grid, "h_prime_grid"},
        {Task::oracle_validate, "oracle_validate"},         {Task::figure, "figure"}};
    return names;
}

inline std::string to_string(Task t) {
    for (const auto &[k, v] : task_names()) {
        if (k == t) {
            return v;
        }
    }
    return "?";
}

inline std::optional<Task> parse_task(const std::string &s) {
    for (const auto &[k, v] : task_names()) {
        if (v == s) {
            return k;
        }
    }
    return std::nullopt;
}

inline const std::vector<std::string> &figure_ids() {
    static const std::vector<std::string> ids{"fig2a", "fig2b", "fig2c", "fig3a", "fig3b",
                                              "fig3c", "fig4a", "fig4b", "fig5a", "fig5b"};
    return ids;
}

struct OracleSettings {
    int D = 60;
    double tolerance = 1e-8;
};

/// Parameters of one figure dataset; which members apply depends on the id.
struct FigureParams {
    double r_db = 8.0;
    std::vector<int> n;          // photon numbers (fig2)
    std::vector<int> Ns;         // truncation orders (fig3, fig4b)
    int N = 4;                   // single truncation order (fig4a)
    std::vector<double> z;       // displacements (fig4a)
    double z_single = 0.0;       // displacement (fig5)
    std::vector<double> nbar;    // thermal occupations (fig4b)
    bool dagger = true;
    OperationDescriptor operation = NoOperation{};
    GridSpec grid;
    ObjectiveConfig objective;
    PSOConfig pso;
};

struct Scenario {
    Task task = Task::response_ratio_grid;
    std::string figure;
    std::uint64_t seed = 0;
    PrecisionPolicy precision;
    int threads = 1;

    ResourceDescriptor resource;
    OperationDescriptor operation = NoOperation{};
    InputState input = InputState::coherent(0.0);
    GridSpec grid;
    QuadratureGrid quadrature;
    ObjectiveConfig objective;
    PSOConfig pso;
    std::string scheme = "e";
    int N = 4;
    bool dagger = true;
    OracleSettings oracle;
    FigureParams params;

    /// JSON pointers of values that were not supplied.
    std::set<std::string> defaulted;
};

namespace detail {

inline json pso_defaults() {
    return pso_to_json(PSOConfig{});
}

inline json figure_defaults(const std::string &id) {
    const json radial{{"kind", "radial"}, {"xi_max", 3.0}, {"points", 60}, {"phase", 0.0}};
    const json plane{{"kind", "plane"}, {"re_max", 3.0}, {"im_max", 3.0}, {"points", 41}};
    const json line = objective_to_json(ObjectiveConfig{});
    ObjectiveConfig disk_cfg;
    disk_cfg.domain = ObjectiveDomain::disk;
    const json disk = objective_to_json(disk_cfg);
    if (id == "fig2a" || id == "fig2b" || id == "fig2c") {
        return {{"r_dB", 8.0}, {"n", {1, 2, 3}}, {"grid", radial}};
    }
    if (id == "fig3a") {
        return {{"r_dB", 8.0},  {"N", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}, {"dagger", true}, {"objective", line},
                {"pso", pso_defaults()}, {"grid", radial}};
    }
    if (id == "fig3b" || id == "fig3c") {
        return {{"r_dB", id == "fig3b" ? 8.0 : 10.0}, {"N", {2, 4, 6}}, {"dagger", true}, {"objective", line},
                {"pso", pso_defaults()}, {"grid", radial}};
    }
    if (id == "fig4a") {
        return {{"r_dB", 8.0},  {"N", 4}, {"z", {0.0, 0.5, 1.0}}, {"dagger", false}, {"objective", disk},
                {"pso", pso_defaults()}, {"grid", plane}};
    }
    if (id == "fig4b") {
        return {{"r_dB", 8.0},     {"N", {1, 2, 3, 4, 5, 6}}, {"nbar", {0.1, 0.5}}, {"dagger", false},
                {"objective", line}, {"pso", pso_defaults()}, {"grid", radial}};
    }
    if (id == "fig5a" || id == "fig5b") {
        return {{"r_dB", 8.0},
                {"z", id == "fig5a" ? 0.5 : 1.0},
                {"operation", {{"type", "pv"}, {"t", {-1, -1}}, {"n", {1, 1}}}},
                {"grid", plane}};
    }
    throw ConfigError("unknown figure id '" + id + "'");
}

/// Defaults that restate the figure captions or the text rather than
/// choices made here.
inline bool caption_fixed(const std::string &figure, const std::string &pointer) {
    const bool two_or_four = figure.rfind("fig2", 0) == 0 || figure.rfind("fig4", 0) == 0;
    const bool three = figure.rfind("fig3", 0) == 0;
    if (pointer == "/params/r_dB") {
        return two_or_four || figure == "fig3a" || figure == "fig3b";
    }
    if (pointer == "/params/objective/xi_lim") {
        return three;
    }
    if (pointer == "/params/dagger") {
        return three || figure.rfind("fig4", 0) == 0;
    }
    return pointer == "/objective/xi_lim";
}

inline OperationDescriptor read_operation_or(const ConfigNode &parent, const std::string &key,
                                             const OperationDescriptor &def) {
    if (!parent.has(key)) {
        const ConfigNode n = parent.child(key);
        n.mark_default();
        return def;
    }
    return read_operation(parent.child(key));
}

inline ObjectiveConfig objective_from_json(const json &j) {
    ObjectiveConfig c;
    c.xi_lim = j["xi_lim"].get<double>();
    c.radial_nodes = j["radial_nodes"].get<int>();
    c.domain = parse_objective_domain(j["domain"].get<std::string>());
    c.angular_nodes = j["angular_nodes"].get<int>();
    return c;
}

inline GridSpec grid_from_json(const json &j) {
    GridSpec g;
    if (j["kind"] == "radial") {
        g.kind = GridSpec::Kind::radial;
        g.xi_max = j["xi_max"].get<double>();
        g.phase = j["phase"].get<double>();
    } else {
        g.kind = GridSpec::Kind::plane;
        g.re_max = j["re_max"].get<double>();
        g.im_max = j["im_max"].get<double>();
    }
    g.points = j["points"].get<int>();
    return g;
}

inline void check_orders(const ConfigNode &n, const std::string &key, const std::vector<int> &v, int lo, int hi) {
    if (v.empty()) {
        n.fail(key, "must not be empty");
    }
    for (int x : v) {
        if (x < lo || x > hi) {
            n.fail(key, "entries must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
    }
}

inline FigureParams read_figure_params(const ConfigNode &n, const std::string &id) {
    const json def = figure_defaults(id);
    std::set<std::string> keys;
    for (auto it = def.begin(); it != def.end(); ++it) {
        keys.insert(it.key());
    }
    n.allow_only(keys);
    FigureParams p;
    p.r_db = n.number("r_dB", def["r_dB"].get<double>());
    if (p.r_db < 0.0) {
        n.fail("r_dB", "must be >= 0");
    }
    if (def.contains("n")) {
        p.n = n.integers("n", def["n"].get<std::vector<int>>());
        check_orders(n, "n", p.n, 1, 10);
    }
    if (def.contains("N")) {
        if (def["N"].is_array()) {
            p.Ns = n.integers("N", def["N"].get<std::vector<int>>());
            check_orders(n, "N", p.Ns, 0, kDefaultDegreeCap / 4);
        } else {
            p.N = static_cast<int>(n.integer("N", def["N"].get<long long>()));
            check_orders(n, "N", {p.N}, 0, kDefaultDegreeCap / 4);
        }
    }
    if (def.contains("z")) {
        if (def["z"].is_array()) {
            p.z = n.numbers("z", def["z"].get<std::vector<double>>());
            if (p.z.empty()) {
                n.fail("z", "must not be empty");
            }
        } else {
            p.z_single = n.number("z", def["z"].get<double>());
        }
    }
    if (def.contains("nbar")) {
        p.nbar = n.numbers("nbar", def["nbar"].get<std::vector<double>>());
        if (p.nbar.empty() || *std::min_element(p.nbar.begin(), p.nbar.end()) < 0.0) {
            n.fail("nbar", "must be a non-empty list of values >= 0");
        }
    }
    if (def.contains("dagger")) {
        p.dagger = n.boolean("dagger", def["dagger"].get<bool>());
    }
    if (def.contains("operation")) {
        const ConfigNode dn = ConfigNode::root(def, std::make_shared<ConfigSource>());
        p.operation = read_operation_or(n, "operation", read_operation(dn.child("operation")));
        if (std::holds_alternative<NoOperation>(p.operation)) {
            n.fail("operation", "this figure needs an operation");
        }
    }
    if (def.contains("objective")) {
        p.objective = read_objective(n.child("objective"), objective_from_json(def["objective"]));
    }
    if (def.contains("pso")) {
        p.pso = read_pso(n.child("pso"));
    }
    p.grid = read_grid(n.child("grid"), grid_from_json(def["grid"]));
    return p;
}

inline json figure_params_to_json(const FigureParams &p, const std::string &id) {
    const json def = figure_defaults(id);
    json j;
    j["r_dB"] = p.r_db;
    if (def.contains("n")) {
        j["n"] = p.n;
    }
    if (def.contains("N")) {
        j["N"] = def["N"].is_array() ? json(p.Ns) : json(p.N);
    }
    if (def.contains("z")) {
        j["z"] = def["z"].is_array() ? json(p.z) : json(p.z_single);
    }
    if (def.contains("nbar")) {
        j["nbar"] = p.nbar;
    }
    if (def.contains("dagger")) {
        j["dagger"] = p.dagger;
    }
    if (def.contains("operation")) {
        j["operation"] = operation_to_json(p.operation);
    }
    if (def.contains("objective")) {
        j["objective"] = objective_to_json(p.objective);
    }
    if (def.contains("pso")) {
        j["pso"] = pso_to_json(p.pso);
    }
    j["grid"] = grid_to_json(p.grid);
    return j;
}

}  // namespace detail

/// Resolves a scenario document. `task` is the task implied by the caller
/// (for instance a CLI subcommand); a conflicting "task" member is an error.
inline Scenario parse_scenario(const json &doc, std::shared_ptr<const ConfigSource> src,
                               std::optional<Task> task = std::nullopt, std::optional<std::string> figure = std::nullopt) {
    const ConfigNode root = ConfigNode::root(doc, std::move(src));
    Scenario s;
    if (root.has("task")) {
        const std::string name = root.string("task");
        const auto t = parse_task(name);
        if (!t) {
            root.fail("task", "unknown task '" + name + "'");
        }
        if (task && *t != *task) {
            root.fail("task", "config is for task '" + name + "' but '" + to_string(*task) + "' was requested");
        }
        s.task = *t;
    } else if (task) {
        s.task = *task;
    } else {
        root.fail("task", "required key is missing");
    }

    std::set<std::string> allowed{"task", "seed", "precision", "threads", "defaults"};
    switch (s.task) {
        case Task::response_ratio_grid:
        case Task::h_prime_grid:
            allowed.insert({"resource", "operation", "grid"});
            break;
        case Task::fidelity:
            allowed.insert({"resource", "operation", "input", "quadrature"});
            break;
        case Task::optimize:
            allowed.insert({"resource", "scheme", "N", "dagger", "objective", "pso"});
            break;
        case Task::oracle_validate:
            allowed.insert({"resource", "operation", "grid", "oracle"});
            break;
        case Task::figure:
            allowed.insert({"figure", "params"});
            break;
    }
    root.allow_only(allowed);

    s.seed = root.unsigned64("seed", 0);
    s.precision = root.checked("precision", [&] { return PrecisionPolicy::parse(root.string("precision", "machine")); });
    s.threads = static_cast<int>(root.integer("threads", 1));
    if (s.threads < 1) {
        root.fail("threads", "must be >= 1");
    }

    const PVSpec sub11 = PVSpec::subtraction(1, 1);
    switch (s.task) {
        case Task::response_ratio_grid:
        case Task::h_prime_grid:
        case Task::oracle_validate: {
            s.resource = read_resource(root.child("resource"));
            s.operation = detail::read_operation_or(root, "operation", sub11);
            GridSpec def;
            if (s.task == Task::h_prime_grid) {
                def.kind = GridSpec::Kind::plane;
                def.points = 50;
            } else if (s.task == Task::oracle_validate) {
                def.points = 20;
            }
            s.grid = read_grid(root.child("grid"), def);
            if (s.task == Task::h_prime_grid) {
                if (!s.resource.loss) {
                    root.child("resource").child("loss").mark_default();
                    s.resource.loss = ChannelParams{0.8, 0.8};
                }
                if (std::holds_alternative<NoOperation>(s.operation)) {
                    root.fail("operation", "h_prime_grid needs a pv or generalized operation");
                }
            }
            if (s.task == Task::oracle_validate) {
                const ConfigNode o = root.child("oracle");
                o.allow_only({"D", "tolerance"});
                s.oracle.D = static_cast<int>(o.integer("D", 60));
                s.oracle.tolerance = o.number("tolerance", 1e-8);
                if (s.oracle.D < 2 || s.oracle.D > 400) {
                    o.fail("D", "must lie in [2, 400]");
                }
                if (!(s.oracle.tolerance > 0.0)) {
                    o.fail("tolerance", "must be > 0");
                }
            }
            break;
        }
        case Task::fidelity:
            s.resource = read_resource(root.child("resource"));
            s.operation = detail::read_operation_or(root, "operation", NoOperation{});
            s.input = read_input(root.child("input"));
            s.quadrature = read_quadrature(root.child("quadrature"));
            break;
        case Task::optimize: {
            s.resource = read_resource(root.child("resource"));
            if (s.resource.loss) {
                root.child("resource").fail("loss", "optimization runs on the lossless resource");
            }
            s.scheme = root.string("scheme", "e");
            if (s.scheme != "e" && s.scheme != "g") {
                root.fail("scheme", "expected 'e' (coefficients) or 'g' (amplifier gain)");
            }
            s.N = static_cast<int>(root.integer("N", 4));
            detail::check_orders(root, "N", {s.N}, 0, kDefaultDegreeCap / 4);
            s.dagger = root.boolean("dagger", true);
            if (s.scheme == "g" && (s.resource.family != ResourceFamily::tmsv || !s.dagger)) {
                root.fail("scheme", "the gain scheme is defined for the dagger operation on tmsv");
            }
            ObjectiveConfig def;
            if (s.resource.family == ResourceFamily::tmsc) {
                def.domain = ObjectiveDomain::disk;
            }
            s.objective = read_objective(root.child("objective"), def);
            s.pso = read_pso(root.child("pso"));
            break;
        }
        case Task::figure: {
            s.figure = root.has("figure") || !figure ? root.string("figure") : *figure;
            if (figure && s.figure != *figure) {
                root.fail("figure", "config is for '" + s.figure + "' but '" + *figure + "' was requested");
            }
            if (std::find(figure_ids().begin(), figure_ids().end(), s.figure) == figure_ids().end()) {
                root.fail("figure", "unknown figure id '" + s.figure + "'");
            }
            s.params = detail::read_figure_params(root.child("params"), s.figure);
            break;
        }
    }
    s.defaulted = root.defaulted();
    return s;
}

/// The resolved scenario, readable by parse_scenario, with the defaulted
/// values listed under "defaults".
inline json scenario_to_json(const Scenario &s) {
    json j;
    j["task"] = to_string(s.task);
    j["seed"] = s.seed;
    j["precision"] = s.precision.to_string();
    j["threads"] = s.threads;
    switch (s.task) {
        case Task::response_ratio_grid:
        case Task::h_prime_grid:
        case Task::oracle_validate:
            j["resource"] = resource_to_json(s.resource);
            j["operation"] = operation_to_json(s.operation);
            j["grid"] = grid_to_json(s.grid);
            if (s.task == Task::oracle_validate) {
                j["oracle"] = {{"D", s.oracle.D}, {"tolerance", s.oracle.tolerance}};
            }
            break;
        case Task::fidelity:
            j["resource"] = resource_to_json(s.resource);
            j["operation"] = operation_to_json(s.operation);
            j["input"] = input_to_json(s.input);
            j["quadrature"] = quadrature_to_json(s.quadrature);
            break;
        case Task::optimize:
            j["resource"] = resource_to_json(s.resource);
            j["scheme"] = s.scheme;
            j["N"] = s.N;
            j["dagger"] = s.dagger;
            j["objective"] = objective_to_json(s.objective);
            j["pso"] = pso_to_json(s.pso);
            break;
        case Task::figure:
            j["figure"] = s.figure;
            j["params"] = detail::figure_params_to_json(s.params, s.figure);
            break;
    }
    json d = json::object();
    for (const auto &p : s.defaulted) {
        d[p] = {{"artifact_default", !detail::caption_fixed(s.figure, p)}};
    }
    j["defaults"] = d;
    return j;
}

struct RunResult {
    std::vector<std::string> files;
    /// Short human-readable summary (for fidelity, the value itself).
    std::string summary;
    /// False when an oracle comparison exceeded its tolerance.
    bool ok = true;
};

namespace detail {

/// Evaluates `row(xi)` at every node in parallel, rows kept in node order.
inline void fill_rows(CsvTable &table, const std::vector<cplx> &nodes, int threads, bool radial,
                      const std::function<std::vector<double>(cplx)> &row) {
    std::vector<std::vector<double>> rows(nodes.size());
    parallel_for(nodes.size(), threads, [&](std::size_t i) {
        std::vector<double> r;
        if (radial) {
            r.push_back(std::abs(nodes[i]));
        } else {
            r.push_back(nodes[i].real());
            r.push_back(nodes[i].imag());
        }
        const std::vector<double> v = row(nodes[i]);
        r.insert(r.end(), v.begin(), v.end());
        rows[i] = std::move(r);
    });
    for (auto &r : rows) {
        table.add_row(r);
    }
}

inline std::vector<std::string> axis_header(const GridSpec &g) {
    return g.kind == GridSpec::Kind::radial ? std::vector<std::string>{"abs_xi"}
                                            : std::vector<std::string>{"re_xi", "im_xi"};
}

inline double real_ratio(const Resource &res, cplx xi) {
    return checked_real(res.ratio(xi, std::conj(xi)), "response ratio");
}

inline std::string label_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

class Output {
   public:
    Output(std::string dir, std::string stem) : dir_(std::move(dir)), stem_(std::move(stem)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) {
            throw ConfigError(dir_ + ": cannot create output directory (" + ec.message() + ")");
        }
    }
    std::string write(const std::string &suffix, const std::string &text) {
        const std::string path = (std::filesystem::path(dir_) / (stem_ + suffix)).string();
        write_text(path, text);
        result.files.push_back(path);
        return path;
    }
    RunResult result;

   private:
    std::string dir_;
    std::string stem_;
};

inline PSOConfig seeded(PSOConfig p, const Scenario &s) {
    p.seed = s.seed;
    p.threads = s.threads;
    return p;
}

inline RunResult run_grid_task(const Scenario &s, const std::string &out_dir) {
    const bool hp = s.task == Task::h_prime_grid;
    Output out(out_dir, hp ? "h_prime" : "response_ratio");
    const Resource res = make_resource(s.resource, s.operation, s.precision);
    std::vector<std::string> header = axis_header(s.grid);
    header.push_back(hp ? "H_prime" : "H");
    CsvTable t(header);
    fill_rows(t, s.grid.nodes(), s.threads, s.grid.kind == GridSpec::Kind::radial,
              [&](cplx xi) { return std::vector<double>{real_ratio(res, xi)}; });
    out.write(".csv", t.str());
    out.write(".config.json", scenario_to_json(s).dump(2) + "\n");
    out.result.summary = std::to_string(t.rows().size()) + " points";
    return out.result;
}

inline RunResult run_fidelity(const Scenario &s, const std::string &out_dir) {
    Output out(out_dir, "fidelity");
    const Resource res = make_resource(s.resource, s.operation, s.precision);
    const FidelityResult f = fidelity_detail(res, s.input, s.quadrature, s.threads);
    json j{{"fidelity", f.value},
           {"raw", f.raw},
           {"cutoff", f.cutoff},
           {"radial_nodes", f.radial_nodes},
           {"angular_nodes", f.angular_nodes},
           {"radial_path", f.radial_path}};
    out.write(".json", j.dump(2) + "\n");
    out.write(".config.json", scenario_to_json(s).dump(2) + "\n");
    out.result.summary = format_number(f.value);
    return out.result;
}

inline RunResult run_optimize(const Scenario &s, const std::string &out_dir) {
    Output out(out_dir, "optimize");
    const GaussianState base = s.resource.lossless_state();
    const ObjectiveModel model(base, s.N, s.dagger, s.objective, s.precision, s.threads);
    const PSOConfig p = seeded(s.pso, s);
    json j{{"scheme", s.scheme}, {"N", s.N}, {"r_dB", s.resource.r_db}, {"seed", s.seed}};
    std::vector<double> trace;
    if (s.scheme == "e") {
        const SchemeOneResult r = optimize_e(model, p);
        j["e_opt"] = r.e_opt;
        j["objective"] = r.objective;
        trace = r.trace;
    } else {
        const SchemeTwoResult r = optimize_g(model, s.resource.squeezing(), p);
        j["g_opt"] = r.g_opt;
        j["e_of_g"] = r.e_of_g;
        j["objective"] = r.objective;
        trace = r.trace;
    }
    j["trace"] = trace;
    CsvTable t({"iteration", "best"});
    for (std::size_t i = 0; i < trace.size(); ++i) {
        t.add_row({static_cast<double>(i + 1), trace[i]});
    }
    out.write(".json", j.dump(2) + "\n");
    out.write(".csv", t.str());
    out.write(".config.json", scenario_to_json(s).dump(2) + "\n");
    out.result.summary = "objective " + format_number(j["objective"].get<double>());
    return out.result;
}

inline RunResult run_oracle_validate(const Scenario &s, const std::string &out_dir) {
    Output out(out_dir, "oracle_validate");
    ResourceDescriptor lossless = s.resource;
    lossless.loss.reset();
    FockState base = oracle_state(lossless, s.oracle.D);
    FockState varied = base;
    if (const auto *pv = std::get_if<PVSpec>(&s.operation)) {
        varied = oracle_apply(base, *pv);
    } else if (const auto *g = std::get_if<GeneralizedPVSpec>(&s.operation)) {
        varied = oracle_apply(base, *g);
    }
    if (s.resource.loss) {
        base = oracle_loss(base, *s.resource.loss);
        varied = oracle_loss(varied, *s.resource.loss);
    }
    const Resource res = make_resource(s.resource, s.operation, s.precision);
    CsvTable t({"abs_xi", "re_xi", "im_xi", "cf_re", "cf_im", "oracle_cf_re", "oracle_cf_im", "ratio_re", "ratio_im",
                "oracle_ratio_re", "oracle_ratio_im", "cf_abs_err", "ratio_abs_err"});
    const std::vector<cplx> nodes = s.grid.nodes();
    std::vector<std::vector<double>> rows(nodes.size());
    parallel_for(nodes.size(), s.threads, [&](std::size_t i) {
        const cplx xi = nodes[i];
        const std::array<cplx, 2> p{xi, std::conj(xi)};
        const cplx cf = res.cf(xi, std::conj(xi));
        const cplx ocf = oracle_cf(varied, p);
        const cplx ratio = res.ratio(xi, std::conj(xi));
        const cplx oratio = ocf / oracle_cf(base, p);
        rows[i] = {std::abs(xi), xi.real(),  xi.imag(),     cf.real(),           cf.imag(),
                   ocf.real(),   ocf.imag(), ratio.real(),  ratio.imag(),        oratio.real(),
                   oratio.imag(), std::abs(cf - ocf), std::abs(ratio - oratio)};
    });
    double cf_err = 0.0, ratio_err = 0.0;
    for (auto &r : rows) {
        cf_err = std::max(cf_err, r[11]);
        ratio_err = std::max(ratio_err, r[12]);
        t.add_row(r);
    }
    out.result.ok = cf_err <= s.oracle.tolerance && ratio_err <= s.oracle.tolerance;
    json j{{"max_cf_abs_err", cf_err},
           {"max_ratio_abs_err", ratio_err},
           {"tolerance", s.oracle.tolerance},
           {"D", s.oracle.D},
           {"tail_mass", varied.tail_mass()},
           {"pass", out.result.ok}};
    out.write(".csv", t.str());
    out.write(".json", j.dump(2) + "\n");
    out.write(".config.json", scenario_to_json(s).dump(2) + "\n");
    out.result.summary = "max cf error " + sci(cf_err) + ", max ratio error " + sci(ratio_err) +
                         (out.result.ok ? " (pass)" : " (FAIL)");
    return out.result;
}

/// Response-ratio curve of an optimized generalized operation.
struct OptimizedSeries {
    std::string label;
    GeneralizedPVState state;
    json record;
};

inline OptimizedSeries optimized_series(const std::string &label, const GaussianState &base, int N, bool dagger,
                                        const FigureParams &p, const Scenario &s, bool gain_scheme = false) {
    const ObjectiveModel model(base, N, dagger, p.objective, s.precision, s.threads);
    const PSOConfig pso = seeded(p.pso, s);
    json rec{{"label", label}, {"N", N}, {"dagger", dagger}};
    std::vector<double> e;
    if (gain_scheme) {
        const SchemeTwoResult r = optimize_g(model, SqueezingParam::from_db(p.r_db), pso);
        e = r.e_of_g;
        rec["g_opt"] = r.g_opt;
        rec["objective"] = r.objective;
    } else {
        const SchemeOneResult r = optimize_e(model, pso);
        e = r.e_opt;
        rec["objective"] = r.objective;
    }
    rec["e"] = e;
    return {label, GeneralizedPVState(base, GeneralizedPVSpec(e, dagger), s.precision), rec};
}

inline RunResult run_figure(const Scenario &s, const std::string &out_dir) {
    Output out(out_dir, s.figure);
    const FigureParams &p = s.params;
    const SqueezingParam r = SqueezingParam::from_db(p.r_db);
    const bool radial = p.grid.kind == GridSpec::Kind::radial;
    std::vector<std::string> header = axis_header(p.grid);
    std::vector<std::function<double(cplx)>> columns;
    json series = json::array();
    std::vector<std::shared_ptr<OptimizedSeries>> keep;

    auto add_pv = [&](const std::string &label, const GaussianState &base, const PVSpec &spec) {
        auto st = std::make_shared<PhotonVariedState>(base, spec, s.precision);
        header.push_back(label);
        columns.push_back([st](cplx xi) { return checked_real(st->ratio(diagonal_point(xi)), "response ratio"); });
    };
    auto add_optimized = [&](OptimizedSeries os) {
        auto ptr = std::make_shared<OptimizedSeries>(std::move(os));
        header.push_back(ptr->label);
        series.push_back(ptr->record);
        columns.push_back([ptr](cplx xi) { return response_ratio(ptr->state, xi); });
        keep.push_back(ptr);
    };
    auto add_hmax = [&](const std::string &label, const ResourceDescriptor &d) {
        header.push_back(label);
        columns.push_back([d](cplx xi) { return h_max(d, xi); });
    };
    ResourceDescriptor tmsv_desc;
    tmsv_desc.r_db = p.r_db;

    const std::string &id = s.figure;
    if (id == "fig2a" || id == "fig2b") {
        for (int n : p.n) {
            add_pv("H_n" + std::to_string(n), tmsv(r), id == "fig2a" ? PVSpec::subtraction(n, n) : PVSpec::addition(n, n));
        }
    } else if (id == "fig2c") {
        for (int n : p.n) {
            const std::string k = std::to_string(n);
            add_pv("H_PS" + k + "_PS" + k, tmsv(r), PVSpec({{-1, n}, {-1, n}}));
            add_pv("H_PS" + k + "_PA" + k, tmsv(r), PVSpec({{-1, n}, {1, n}}));
            add_pv("H_PA" + k + "_PS" + k, tmsv(r), PVSpec({{1, n}, {-1, n}}));
            add_pv("H_PA" + k + "_PA" + k, tmsv(r), PVSpec({{1, n}, {1, n}}));
        }
    } else if (id == "fig3a") {
        for (int N : p.Ns) {
            add_optimized(optimized_series("H_N" + std::to_string(N), tmsv(r), N, p.dagger, p, s));
        }
        add_hmax("H_max", tmsv_desc);
    } else if (id == "fig3b" || id == "fig3c") {
        for (int N : p.Ns) {
            add_optimized(optimized_series("S1_N" + std::to_string(N), tmsv(r), N, p.dagger, p, s));
            add_optimized(optimized_series("S2_N" + std::to_string(N), tmsv(r), N, p.dagger, p, s, true));
        }
        add_hmax("H_max", tmsv_desc);
    } else if (id == "fig4a") {
        for (double z : p.z) {
            add_optimized(optimized_series("H_z" + label_number(z), tmsc(r, z, z), p.N, p.dagger, p, s));
        }
    } else if (id == "fig4b") {
        for (double nb : p.nbar) {
            for (int N : p.Ns) {
                add_optimized(optimized_series("H_nbar" + label_number(nb) + "_N" + std::to_string(N), tmst(r, nb), N,
                                               p.dagger, p, s));
            }
            ResourceDescriptor d = tmsv_desc;
            d.family = ResourceFamily::tmst;
            d.nbar = nb;
            add_hmax("H_max_nbar" + label_number(nb), d);
        }
    } else if (id == "fig5a" || id == "fig5b") {
        const GaussianState base = tmsc(r, p.z_single, p.z_single);
        const OperationDescriptor &op = p.operation;
        if (const auto *pv = std::get_if<PVSpec>(&op)) {
            add_pv("H", base, *pv);
        } else {
            auto st = std::make_shared<GeneralizedPVState>(base, std::get<GeneralizedPVSpec>(op), s.precision);
            header.push_back("H");
            columns.push_back([st](cplx xi) { return response_ratio(*st, xi); });
        }
    }

    CsvTable t(header);
    fill_rows(t, p.grid.nodes(), s.threads, radial, [&](cplx xi) {
        std::vector<double> v;
        for (const auto &c : columns) {
            v.push_back(c(xi));
        }
        return v;
    });
    out.write(".csv", t.str());
    if (!series.empty()) {
        out.write(".json", json{{"figure", id}, {"series", series}}.dump(2) + "\n");
    }
    out.write(".config.json", scenario_to_json(s).dump(2) + "\n");
    out.result.summary = std::to_string(t.rows().size()) + " rows x " + std::to_string(header.size()) + " columns";
    return out.result;
}

}  // namespace detail

inline RunResult run_scenario(const Scenario &s, const std::string &out_dir) {
    switch (s.task) {
        case Task::response_ratio_grid:
        case Task::h_prime_grid:
            return detail::run_grid_task(s, out_dir);
        case Task::fidelity:
            return detail::run_fidelity(s, out_dir);
        case Task::optimize:
            return detail::run_optimize(s, out_dir);
        case Task::oracle_validate:
            return detail::run_oracle_validate(s, out_dir);
        case Task::figure:
            return detail::run_figure(s, out_dir);
    }
    throw std::logic_error("unknown task");
}

}  // namespace pvtele

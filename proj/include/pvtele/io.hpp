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


// JSON descriptors for resources, operations, inputs and run settings, with
// error messages that point at the offending line of the source document,
// and a fixed-format CSV writer.

#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pvtele/gaussian_states.hpp"
#include "pvtele/optimize.hpp"
#include "pvtele/pv_ops.hpp"
#include "pvtele/teleport.hpp"

namespace pvtele {

using json = nlohmann::ordered_json;

/// Invalid configuration; the message names the source line when known.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

inline std::string pointer_escape(const std::string &key) {
    std::string out;
    for (char c : key) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

/// Source text of a JSON document and the line on which each member key or
/// array element starts, keyed by JSON pointer.
class ConfigSource {
   public:
    ConfigSource() = default;
    ConfigSource(std::string name, const std::string &text) : name_(std::move(name)) {
        index(text);
    }

    const std::string &name() const {
        return name_;
    }

    /// Line of `pointer`, or of its nearest indexed ancestor; 0 if unknown.
    int line(std::string pointer) const {
        while (true) {
            auto it = lines_.find(pointer);
            if (it != lines_.end()) {
                return it->second;
            }
            const auto cut = pointer.rfind('/');
            if (cut == std::string::npos || pointer.empty()) {
                return 0;
            }
            pointer.resize(cut);
        }
    }

    std::string locate(const std::string &pointer) const {
        const int ln = line(pointer);
        std::string where = name_.empty() ? "<config>" : name_;
        if (ln > 0) {
            where += ":" + std::to_string(ln);
        }
        return where;
    }

   private:
    struct Frame {
        bool object;
        std::string path;
        std::string key;
        int index = 0;
        bool expect_key = true;
        bool element_seen = false;
    };

    // Child pointer for a value that starts now, recording its line.
    std::string begin_value(std::vector<Frame> &stack, int ln) {
        if (stack.empty()) {
            lines_.emplace("", ln);
            return "";
        }
        Frame &f = stack.back();
        if (f.object) {
            return f.path + "/" + pointer_escape(f.key);
        }
        const std::string p = f.path + "/" + std::to_string(f.index);
        if (!f.element_seen) {
            lines_.emplace(p, ln);
            f.element_seen = true;
        }
        return p;
    }

    void index(const std::string &text) {
        std::vector<Frame> stack;
        int ln = 1;
        bool in_scalar = false;
        for (std::size_t i = 0; i < text.size(); ++i) {
            const char c = text[i];
            if (c == '\n') {
                ++ln;
            }
            const bool scalar_char = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
            if (!scalar_char) {
                in_scalar = false;
            }
            if (c == '"') {
                const int start = ln;
                std::string s;
                for (++i; i < text.size() && text[i] != '"'; ++i) {
                    if (text[i] == '\\' && i + 1 < text.size()) {
                        ++i;
                    } else if (text[i] == '\n') {
                        ++ln;
                    }
                    s += text[i];
                }
                if (!stack.empty() && stack.back().object && stack.back().expect_key) {
                    Frame &f = stack.back();
                    f.key = s;
                    f.expect_key = false;
                    lines_.emplace(f.path + "/" + pointer_escape(s), start);
                } else {
                    begin_value(stack, start);
                }
            } else if (c == '{' || c == '[') {
                const std::string p = begin_value(stack, ln);
                stack.push_back(Frame{c == '{', p, "", 0, true, false});
            } else if (c == '}' || c == ']') {
                if (!stack.empty()) {
                    stack.pop_back();
                }
            } else if (c == ',') {
                if (!stack.empty()) {
                    Frame &f = stack.back();
                    if (f.object) {
                        f.expect_key = true;
                    } else {
                        ++f.index;
                        f.element_seen = false;
                    }
                }
            } else if (scalar_char && !in_scalar) {
                in_scalar = true;
                begin_value(stack, ln);
            }
        }
    }

    std::string name_;
    std::map<std::string, int> lines_;
};

/// Typed, path-aware view of one JSON object in a configuration document.
/// Keys read through defaults are recorded so the resolved configuration
/// can say which values were not supplied.
class ConfigNode {
   public:
    ConfigNode(const json *j, std::string path, std::shared_ptr<const ConfigSource> src,
               std::shared_ptr<std::set<std::string>> defaulted)
        : j_(j), path_(std::move(path)), src_(std::move(src)), defaulted_(std::move(defaulted)) {
        if (j_ && !j_->is_null() && !j_->is_object()) {
            fail("", "expected an object");
        }
    }

    static ConfigNode root(const json &j, std::shared_ptr<const ConfigSource> src) {
        return ConfigNode(&j, "", std::move(src), std::make_shared<std::set<std::string>>());
    }

    const std::string &path() const {
        return path_;
    }
    std::string pointer(const std::string &key) const {
        return path_ + "/" + pointer_escape(key);
    }
    const std::set<std::string> &defaulted() const {
        return *defaulted_;
    }

    /// Records this node itself as taken from defaults.
    void mark_default() const {
        defaulted_->insert(path_);
    }

    bool has(const std::string &key) const {
        return j_ && j_->is_object() && j_->contains(key) && !(*j_)[key].is_null();
    }

    [[noreturn]] void fail(const std::string &key, const std::string &msg) const {
        const std::string p = key.empty() ? path_ : pointer(key);
        throw ConfigError(src_->locate(p) + ": " + (p.empty() ? "/" : p) + ": " + msg);
    }

    /// Rejects members other than `keys`.
    void allow_only(const std::set<std::string> &keys) const {
        if (!j_ || !j_->is_object()) {
            return;
        }
        for (auto it = j_->begin(); it != j_->end(); ++it) {
            if (!keys.count(it.key())) {
                std::string list;
                for (const auto &k : keys) {
                    list += (list.empty() ? "" : ", ") + k;
                }
                fail(it.key(), "unknown key (allowed: " + list + ")");
            }
        }
    }

    ConfigNode child(const std::string &key) const {
        if (has(key)) {
            return ConfigNode(&(*j_)[key], pointer(key), src_, defaulted_);
        }
        return ConfigNode(nullptr, pointer(key), src_, defaulted_);
    }

    double number(const std::string &key, std::optional<double> def = std::nullopt) const {
        if (!has(key)) {
            return fallback(key, def);
        }
        const json &v = (*j_)[key];
        if (!v.is_number()) {
            fail(key, "expected a number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(key, "expected a finite number");
        }
        return x;
    }

    long long integer(const std::string &key, std::optional<long long> def = std::nullopt) const {
        if (!has(key)) {
            return fallback(key, def);
        }
        return as_integer((*j_)[key], key);
    }

    std::uint64_t unsigned64(const std::string &key, std::optional<std::uint64_t> def = std::nullopt) const {
        if (!has(key)) {
            return fallback(key, def);
        }
        const json &v = (*j_)[key];
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            fail(key, "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string &key, std::optional<bool> def = std::nullopt) const {
        if (!has(key)) {
            return fallback(key, def);
        }
        const json &v = (*j_)[key];
        if (!v.is_boolean()) {
            fail(key, "expected true or false");
        }
        return v.get<bool>();
    }

    std::string string(const std::string &key, std::optional<std::string> def = std::nullopt) const {
        if (!has(key)) {
            return fallback(key, def);
        }
        const json &v = (*j_)[key];
        if (!v.is_string()) {
            fail(key, "expected a string");
        }
        return v.get<std::string>();
    }

    /// A number, or [re, im].
    cplx complex(const std::string &key, std::optional<cplx> def = std::nullopt) const {
        if (!has(key)) {
            return fallback(key, def);
        }
        const json &v = (*j_)[key];
        if (v.is_number()) {
            return {v.get<double>(), 0.0};
        }
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            return {v[0].get<double>(), v[1].get<double>()};
        }
        fail(key, "expected a number or a [re, im] pair");
    }

    std::vector<double> numbers(const std::string &key, std::optional<std::vector<double>> def = std::nullopt) const {
        if (!has(key)) {
            return fallback(key, def);
        }
        const json &v = (*j_)[key];
        if (!v.is_array()) {
            fail(key, "expected an array of numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                fail(key + "/" + std::to_string(i), "expected a number");
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::vector<int> integers(const std::string &key, std::optional<std::vector<int>> def = std::nullopt) const {
        if (!has(key)) {
            return fallback(key, def);
        }
        const json &v = (*j_)[key];
        if (!v.is_array()) {
            fail(key, "expected an array of integers");
        }
        std::vector<int> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(static_cast<int>(as_integer(v[i], key + "/" + std::to_string(i))));
        }
        return out;
    }

    /// Runs `f`, re-raising engine argument errors against `key`.
    template <class F>
    auto checked(const std::string &key, F &&f) const -> decltype(f()) {
        try {
            return f();
        } catch (const ConfigError &) {
            throw;
        } catch (const std::invalid_argument &e) {
            fail(key, e.what());
        }
    }

   private:
    template <class T>
    T fallback(const std::string &key, const std::optional<T> &def) const {
        if (!def) {
            fail(key, "required key is missing");
        }
        defaulted_->insert(pointer(key));
        return *def;
    }

    long long as_integer(const json &v, const std::string &key) const {
        if (v.is_number_integer()) {
            return v.get<long long>();
        }
        if (v.is_number_float()) {
            const double x = v.get<double>();
            if (std::floor(x) == x && std::abs(x) < 9e15) {
                return static_cast<long long>(x);
            }
        }
        fail(key, "expected an integer");
    }

    const json *j_;
    std::string path_;
    std::shared_ptr<const ConfigSource> src_;
    std::shared_ptr<std::set<std::string>> defaulted_;
};

inline json complex_to_json(cplx z) {
    if (z.imag() == 0.0) {
        return z.real();
    }
    return json::array({z.real(), z.imag()});
}

// ---- resource ----

inline ResourceFamily parse_family(const ConfigNode &n, const std::string &key) {
    const std::string s = n.string(key, "tmsv");
    if (s == "tmsv") {
        return ResourceFamily::tmsv;
    }
    if (s == "tmsc") {
        return ResourceFamily::tmsc;
    }
    if (s == "tmst") {
        return ResourceFamily::tmst;
    }
    n.fail(key, "unknown family '" + s + "' (expected tmsv, tmsc or tmst)");
}

inline ResourceDescriptor read_resource(const ConfigNode &n) {
    n.allow_only({"family", "r_dB", "z1", "z2", "nbar", "loss"});
    ResourceDescriptor d;
    d.family = parse_family(n, "family");
    d.r_db = n.number("r_dB", 8.0);
    if (d.r_db < 0.0) {
        n.fail("r_dB", "must be >= 0");
    }
    if (d.family == ResourceFamily::tmsc) {
        d.z1 = n.complex("z1", cplx(0.0));
        d.z2 = n.complex("z2", cplx(0.0));
    } else if (n.has("z1") || n.has("z2")) {
        n.fail(n.has("z1") ? "z1" : "z2", "displacements apply to the tmsc family only");
    }
    if (d.family == ResourceFamily::tmst) {
        d.nbar = n.number("nbar", 0.0);
        if (d.nbar < 0.0) {
            n.fail("nbar", "must be >= 0");
        }
    } else if (n.has("nbar")) {
        n.fail("nbar", "thermal occupation applies to the tmst family only");
    }
    if (n.has("loss")) {
        const ConfigNode l = n.child("loss");
        l.allow_only({"T1", "T2"});
        ChannelParams ch{l.number("T1"), l.number("T2")};
        l.checked("", [&] {
            ch.validate();
            return 0;
        });
        d.loss = ch;
    }
    return d;
}

inline json resource_to_json(const ResourceDescriptor &d) {
    json j;
    j["family"] = to_string(d.family);
    j["r_dB"] = d.r_db;
    if (d.family == ResourceFamily::tmsc) {
        j["z1"] = complex_to_json(d.z1);
        j["z2"] = complex_to_json(d.z2);
    }
    if (d.family == ResourceFamily::tmst) {
        j["nbar"] = d.nbar;
    }
    if (d.loss) {
        j["loss"] = {{"T1", d.loss->T1}, {"T2", d.loss->T2}};
    }
    return j;
}

// ---- operation ----

struct NoOperation {};
using OperationDescriptor = std::variant<NoOperation, PVSpec, GeneralizedPVSpec>;

inline OperationDescriptor read_operation(const ConfigNode &n) {
    const std::string type = n.string("type", "none");
    if (type == "none") {
        n.allow_only({"type"});
        return NoOperation{};
    }
    if (type == "pv") {
        n.allow_only({"type", "t", "n"});
        const std::vector<int> t = n.integers("t", std::vector<int>{-1, -1});
        const std::vector<int> k = n.integers("n");
        if (t.size() != 2 || k.size() != 2) {
            n.fail(t.size() != 2 ? "t" : "n", "expected one entry per mode (2)");
        }
        return n.checked("", [&] { return PVSpec({{t[0], k[0]}, {t[1], k[1]}}); });
    }
    if (type == "generalized") {
        n.allow_only({"type", "e", "dagger"});
        const std::vector<double> e = n.numbers("e");
        const bool dagger = n.boolean("dagger", true);
        return n.checked("e", [&] { return GeneralizedPVSpec(e, dagger); });
    }
    n.fail("type", "unknown operation type '" + type + "' (expected none, pv or generalized)");
}

inline json operation_to_json(const OperationDescriptor &op) {
    if (const auto *pv = std::get_if<PVSpec>(&op)) {
        json t = json::array(), k = json::array();
        for (const auto &m : pv->entries()) {
            t.push_back(m.t);
            k.push_back(m.n);
        }
        return {{"type", "pv"}, {"t", t}, {"n", k}};
    }
    if (const auto *g = std::get_if<GeneralizedPVSpec>(&op)) {
        return {{"type", "generalized"}, {"e", g->e()}, {"dagger", g->dagger()}};
    }
    return {{"type", "none"}};
}

/// The teleportation resource described by (resource, operation), loss
/// applied after the operation.
inline Resource make_resource(const ResourceDescriptor &d, const OperationDescriptor &op, PrecisionPolicy policy = {}) {
    const GaussianState base = d.lossless_state();
    if (const auto *pv = std::get_if<PVSpec>(&op)) {
        return Resource(PhotonVariedState(base, *pv, policy), d.loss);
    }
    if (const auto *g = std::get_if<GeneralizedPVSpec>(&op)) {
        return Resource(GeneralizedPVState(base, *g, policy), d.loss);
    }
    return Resource(base, d.loss);
}

// ---- input ----

inline InputState read_input(const ConfigNode &n) {
    const std::string kind = n.string("kind", "coherent");
    if (kind == "coherent") {
        n.allow_only({"kind", "alpha"});
        return InputState::coherent(n.complex("alpha", cplx(0.0)));
    }
    if (kind == "squeezed_vacuum") {
        n.allow_only({"kind", "s"});
        const double s = n.number("s");
        return InputState::squeezed_vacuum(s);
    }
    if (kind == "fock") {
        n.allow_only({"kind", "n"});
        const long long k = n.integer("n");
        return n.checked("n", [&] { return InputState::fock(static_cast<int>(k)); });
    }
    n.fail("kind", "unknown input kind '" + kind + "' (expected coherent, squeezed_vacuum or fock)");
}

inline json input_to_json(const InputState &in) {
    switch (in.kind()) {
        case InputState::Kind::coherent:
            return {{"kind", "coherent"}, {"alpha", complex_to_json(in.alpha())}};
        case InputState::Kind::squeezed_vacuum:
            return {{"kind", "squeezed_vacuum"}, {"s", in.squeezing()}};
        case InputState::Kind::fock:
            return {{"kind", "fock"}, {"n", in.photons()}};
        case InputState::Kind::custom:
            break;
    }
    throw std::invalid_argument("custom inputs cannot be serialized");
}

// ---- evaluation grids ----

/// Points on a ray |xi| = x_max k / points, k = 1..points, at fixed phase,
/// or a square lattice over [-re_max, re_max] x [-im_max, im_max].
struct GridSpec {
    enum class Kind { radial, plane };
    Kind kind = Kind::radial;
    double xi_max = 3.0;
    double phase = 0.0;
    double re_max = 3.0;
    double im_max = 3.0;
    int points = 60;

    std::vector<cplx> nodes() const {
        std::vector<cplx> out;
        if (kind == Kind::radial) {
            for (int k = 1; k <= points; ++k) {
                out.push_back(std::polar(xi_max * k / points, phase));
            }
        } else {
            for (int i = 0; i < points; ++i) {
                for (int j = 0; j < points; ++j) {
                    const double a = points == 1 ? 0.0 : -re_max + 2.0 * re_max * i / (points - 1);
                    const double b = points == 1 ? 0.0 : -im_max + 2.0 * im_max * j / (points - 1);
                    out.emplace_back(a, b);
                }
            }
        }
        return out;
    }
};

inline GridSpec read_grid(const ConfigNode &n, const GridSpec &def = {}) {
    GridSpec g = def;
    const std::string kind = n.string("kind", def.kind == GridSpec::Kind::radial ? "radial" : "plane");
    if (kind == "radial") {
        n.allow_only({"kind", "xi_max", "points", "phase"});
        g.kind = GridSpec::Kind::radial;
        g.xi_max = n.number("xi_max", def.xi_max);
        g.phase = n.number("phase", def.phase);
        if (!(g.xi_max > 0.0)) {
            n.fail("xi_max", "must be > 0");
        }
    } else if (kind == "plane") {
        n.allow_only({"kind", "re_max", "im_max", "points"});
        g.kind = GridSpec::Kind::plane;
        g.re_max = n.number("re_max", def.re_max);
        g.im_max = n.number("im_max", def.im_max);
        if (g.re_max < 0.0 || g.im_max < 0.0) {
            n.fail(g.re_max < 0.0 ? "re_max" : "im_max", "must be >= 0");
        }
    } else {
        n.fail("kind", "unknown grid kind '" + kind + "' (expected radial or plane)");
    }
    g.points = static_cast<int>(n.integer("points", def.points));
    if (g.points < 1 || g.points > 100000) {
        n.fail("points", "must lie in [1, 100000]");
    }
    return g;
}

inline json grid_to_json(const GridSpec &g) {
    if (g.kind == GridSpec::Kind::radial) {
        return {{"kind", "radial"}, {"xi_max", g.xi_max}, {"points", g.points}, {"phase", g.phase}};
    }
    return {{"kind", "plane"}, {"re_max", g.re_max}, {"im_max", g.im_max}, {"points", g.points}};
}

// ---- numerical settings ----

inline QuadratureGrid read_quadrature(const ConfigNode &n) {
    n.allow_only({"radial_cutoff", "nodes", "angular_nodes", "tolerance", "max_doublings"});
    QuadratureGrid q;
    q.radial_cutoff = n.number("radial_cutoff", q.radial_cutoff);
    q.nodes = static_cast<int>(n.integer("nodes", q.nodes));
    q.angular_nodes = static_cast<int>(n.integer("angular_nodes", q.angular_nodes));
    q.tolerance = n.number("tolerance", q.tolerance);
    q.max_doublings = static_cast<int>(n.integer("max_doublings", q.max_doublings));
    n.checked("", [&] {
        q.validate();
        return 0;
    });
    return q;
}

inline json quadrature_to_json(const QuadratureGrid &q) {
    return {{"radial_cutoff", q.radial_cutoff},
            {"nodes", q.nodes},
            {"angular_nodes", q.angular_nodes},
            {"tolerance", q.tolerance},
            {"max_doublings", q.max_doublings}};
}

inline ObjectiveConfig read_objective(const ConfigNode &n, const ObjectiveConfig &def = {}) {
    n.allow_only({"xi_lim", "radial_nodes", "domain", "angular_nodes"});
    ObjectiveConfig c = def;
    c.xi_lim = n.number("xi_lim", def.xi_lim);
    c.radial_nodes = static_cast<int>(n.integer("radial_nodes", def.radial_nodes));
    c.angular_nodes = static_cast<int>(n.integer("angular_nodes", def.angular_nodes));
    c.domain = n.checked("domain", [&] { return parse_objective_domain(n.string("domain", to_string(def.domain))); });
    n.checked("", [&] {
        c.validate();
        return 0;
    });
    return c;
}

inline json objective_to_json(const ObjectiveConfig &c) {
    return {{"xi_lim", c.xi_lim},
            {"radial_nodes", c.radial_nodes},
            {"domain", to_string(c.domain)},
            {"angular_nodes", c.angular_nodes}};
}

/// The seed is taken from the top level of the scenario, not from here.
inline PSOConfig read_pso(const ConfigNode &n) {
    n.allow_only({"swarm", "iters", "inertia", "cognitive", "social", "restarts", "bounds"});
    PSOConfig p;
    p.swarm = static_cast<int>(n.integer("swarm", p.swarm));
    p.iters = static_cast<int>(n.integer("iters", p.iters));
    p.inertia = n.number("inertia", p.inertia);
    p.cognitive = n.number("cognitive", p.cognitive);
    p.social = n.number("social", p.social);
    p.restarts = static_cast<int>(n.integer("restarts", p.restarts));
    if (n.has("bounds")) {
        const std::vector<double> b = n.numbers("bounds");
        if (b.size() != 2) {
            n.fail("bounds", "expected [lo, hi]");
        }
        p.bounds = std::pair{b[0], b[1]};
    }
    n.checked("", [&] {
        p.validate();
        return 0;
    });
    return p;
}

inline json pso_to_json(const PSOConfig &p) {
    json j{{"swarm", p.swarm},         {"iters", p.iters},   {"inertia", p.inertia},
           {"cognitive", p.cognitive}, {"social", p.social}, {"restarts", p.restarts}};
    if (p.bounds) {
        j["bounds"] = {p.bounds->first, p.bounds->second};
    }
    return j;
}

// ---- output ----

/// 17 significant digits, '.' separator.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvTable {
   public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    }
    void add_row(const std::vector<double> &row) {
        if (row.size() != header_.size()) {
            throw std::logic_error("CSV row width does not match header");
        }
        rows_.push_back(row);
    }
    const std::vector<std::string> &header() const {
        return header_;
    }
    const std::vector<std::vector<double>> &rows() const {
        return rows_;
    }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < header_.size(); ++i) {
            out += (i ? "," : "") + header_[i];
        }
        out += '\n';
        for (const auto &r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) {
                    out += ',';
                }
                out += format_number(r[i]);
            }
            out += '\n';
        }
        return out;
    }

   private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

inline void write_text(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    f << text;
    if (!f) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

inline std::string read_text(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError(path + ": cannot open file");
    }
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

/// Parses a configuration document; syntax errors report line and column.
inline json parse_config_text(const std::string &name, const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        int line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
    }
}

}  // namespace pvtele

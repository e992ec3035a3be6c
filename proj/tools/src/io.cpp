#include "scenrisk/cli/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace scenrisk::cli {

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
    throw ValidationError(fmt::format("field '{}': {}", path, what));
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) field_error(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) field_error(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) field_error(path, fmt::format("expected a number, got {}", j.type_name()));
    const double v = j.get<double>();
    if (!std::isfinite(v)) field_error(path, "not finite");
    return v;
}

std::string text(const Json& j, const std::string& path) {
    if (!j.is_string()) field_error(path, fmt::format("expected a string, got {}", j.type_name()));
    return j.get<std::string>();
}

NodeIndex node_ref(const ScenarioTree& tree, const std::string& id, const std::string& path) {
    const auto n = tree.find(id);
    if (!n) field_error(path, fmt::format("unknown node id '{}'", id));
    return *n;
}

/// Zeros are omitted, except negative zero which would not survive the trip.
bool worth_writing(double v) { return v != 0.0 || std::signbit(v); }

} // namespace

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // nlohmann reports "parse error at line L, column C: ..."
        throw ValidationError(fmt::format("{}: {}", source, e.what()));
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("{}: cannot open file", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path.string());
}

// --- tree ------------------------------------------------------------------

TreePtr tree_from_json(const Json& j) {
    if (j.is_object() && j.contains("uniform_binomial")) {
        const double d = number(j["uniform_binomial"], "uniform_binomial");
        if (d != std::floor(d) || d < 1 || d > 24) field_error("uniform_binomial", "expected an integer depth in [1, 24]");
        return ScenarioTree::uniform_binomial(static_cast<int>(d));
    }
    const auto& nodes = require(j, "nodes", "");
    if (!nodes.is_array()) field_error("nodes", "expected an array");
    std::vector<NodeSpec> spec;
    spec.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto path = fmt::format("nodes[{}]", i);
        const auto& n = nodes[i];
        NodeSpec s;
        s.id = text(require(n, "id", path), path + ".id");
        const auto& parent = require(n, "parent", path);
        if (!parent.is_null()) s.parent = text(parent, path + ".parent");
        s.branch_prob = number(require(n, "p", path), path + ".p");
        s.time = number(require(n, "t", path), path + ".t");
        spec.push_back(std::move(s));
    }
    return ScenarioTree::build(std::move(spec));
}

Json tree_to_json(const ScenarioTree& tree) {
    Json nodes = Json::array();
    for (const auto& n : tree.nodes()) {
        Json e;
        e["id"] = n.id;
        e["parent"] = n.parent ? Json(tree.node(*n.parent).id) : Json(nullptr);
        e["p"] = n.branch_prob;
        e["t"] = n.time;
        nodes.push_back(std::move(e));
    }
    return Json{{"nodes", std::move(nodes)}};
}

// --- processes -------------------------------------------------------------

ProcessInput process_from_json(const Json& j, const TreePtr& tree) {
    if (!j.is_object()) field_error("", "expected an object");
    const bool has_values = j.contains("values");
    const bool has_payoff = j.contains("payoff");
    if (has_values == has_payoff) field_error("values", "exactly one of 'values' or 'payoff' is required");

    if (has_values) {
        const auto& vals = j["values"];
        if (!vals.is_object()) field_error("values", "expected an object keyed by node id");
        auto x = AdaptedProcess::constant(tree, 0.0);
        for (const auto& [id, v] : vals.items()) {
            const auto path = "values." + id;
            x[node_ref(*tree, id, path)] = number(v, path);
        }
        return {std::move(x), std::nullopt};
    }
    const auto& vals = j["payoff"];
    if (!vals.is_object()) field_error("payoff", "expected an object keyed by leaf id");
    auto y = StaticRV::constant(tree, 0.0);
    for (const auto& [id, v] : vals.items()) {
        const auto path = "payoff." + id;
        const auto n = node_ref(*tree, id, path);
        if (!tree->is_leaf(n)) field_error(path, "not a terminal node");
        y[tree->leaf_index(n)] = number(v, path);
    }
    auto x = optional_projection_static(y);
    return {std::move(x), std::move(y)};
}

Json process_to_json(const AdaptedProcess& x) {
    const auto& tree = *x.tree();
    Json vals = Json::object();
    for (NodeIndex n = 0; n < tree.node_count(); ++n) vals[tree.node(n).id] = x[n];
    return Json{{"values", std::move(vals)}};
}

Json payoff_to_json(const StaticRV& y) {
    const auto& tree = *y.tree();
    Json vals = Json::object();
    for (LeafIndex l = 0; l < tree.leaf_count(); ++l) vals[tree.node(tree.leaf_node(l)).id] = y[l];
    return Json{{"payoff", std::move(vals)}};
}

// --- bi-measures -----------------------------------------------------------

BiMeasure bimeasure_from_json(const Json& j, const TreePtr& tree) {
    if (!j.is_object()) field_error("", "expected an object with 'pr' and/or 'op'");
    std::vector<double> pr(tree->node_count(), 0.0), op(tree->node_count(), 0.0);
    for (const char* key : {"pr", "op"}) {
        if (!j.contains(key)) continue;
        const auto& list = j[key];
        if (!list.is_array()) field_error(key, "expected an array");
        auto& target = std::string(key) == "pr" ? pr : op;
        std::set<NodeIndex> seen;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto path = fmt::format("{}[{}]", key, i);
            const auto n = node_ref(*tree, text(require(list[i], "node", path), path + ".node"), path + ".node");
            if (!seen.insert(n).second) field_error(path + ".node", "node listed twice");
            target[n] = number(require(list[i], "increment", path), path + ".increment");
        }
    }
    return BiMeasure(tree, std::move(pr), std::move(op));
}

Json bimeasure_to_json(const BiMeasure& a) {
    const auto& tree = *a.tree();
    Json pr = Json::array(), op = Json::array();
    for (NodeIndex n = 0; n < tree.node_count(); ++n) {
        if (worth_writing(a.pr(n))) pr.push_back({{"node", tree.node(n).id}, {"increment", a.pr(n)}});
        if (worth_writing(a.op(n))) op.push_back({{"node", tree.node(n).id}, {"increment", a.op(n)}});
    }
    return Json{{"pr", std::move(pr)}, {"op", std::move(op)}};
}

// --- specs -----------------------------------------------------------------

RiskMeasureSpec spec_from_json(const Json& j, const TreePtr& tree, const std::filesystem::path& base) {
    if (j.is_object() && j.contains("family")) {
        const auto family = text(j["family"], "family");
        if (family == "worst_case") return worst_case_spec(tree);
        if (family == "avar") {
            const QuantileLevel alpha(number(require(j, "alpha", ""), "alpha"));
            return avar_spec(tree, alpha);
        }
        field_error("family", fmt::format("unknown family '{}' (expected worst_case or avar)", family));
    }
    const auto& elems = require(j, "elements", "");
    if (!elems.is_array()) field_error("elements", "expected an array");
    std::vector<SpecElement> out;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        const auto path = fmt::format("elements[{}]", i);
        const auto& e = elems[i];
        const auto& m = require(e, "measure", path);
        SpecElement el{BiMeasure::zero(tree), 0.0, ""};
        try {
            if (m.is_string()) {
                el.measure = bimeasure_from_json(read_json_file(base / m.get<std::string>()), tree);
            } else {
                el.measure = bimeasure_from_json(m, tree);
            }
        } catch (const ValidationError& err) {
            throw ValidationError(fmt::format("{}.measure: {}", path, err.what()));
        }
        if (e.contains("gamma")) el.gamma = number(e["gamma"], path + ".gamma");
        if (e.contains("label")) el.label = text(e["label"], path + ".label");
        out.push_back(std::move(el));
    }
    return RiskMeasureSpec(tree, std::move(out));
}

Json spec_to_json(const RiskMeasureSpec& spec) {
    Json elems = Json::array();
    for (const auto& e : spec.elements()) {
        elems.push_back({{"measure", bimeasure_to_json(e.measure)}, {"gamma", e.gamma}, {"label", e.label}});
    }
    return Json{{"elements", std::move(elems)}};
}

} // namespace scenrisk::cli

#include "scenrisk/cli/app.hpp"

#include "scenrisk/cli/io.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace scenrisk::cli {

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"eval",     "static-eval",      "project",
                                                "conjugate", "allocate",         "diagnose-ui",
                                                "diagnose-lebesgue", "diagnose-identities", "instances"};
    return names;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, sep);) parts.push_back(trim(item));
    return parts;
}

int to_int(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size()) throw ValidationError(fmt::format("{}: '{}' is not an integer", what, s));
    return v;
}

// --- shared loaders --------------------------------------------------------

struct Outcome {
    Report report;
    int status = kExitOk;
};

[[noreturn]] void missing(const RunConfig& c, const char* flag) {
    throw ValidationError(fmt::format("{}: {} is required", c.command, flag));
}

TreePtr load_tree(const RunConfig& c) {
    if (c.tree.empty()) missing(c, "--tree");
    try {
        return tree_from_json(read_json_file(c.tree));
    } catch (const ValidationError& e) {
        if (std::string(e.what()).rfind(c.tree.string(), 0) == 0) throw;
        throw ValidationError(fmt::format("{}: {}", c.tree.string(), e.what()));
    }
}

template <class F>
auto with_source(const std::filesystem::path& path, F&& f) {
    try {
        return f(read_json_file(path));
    } catch (const ValidationError& e) {
        if (std::string(e.what()).rfind(path.string(), 0) == 0) throw;
        throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

RiskMeasureSpec load_spec(const RunConfig& c, const TreePtr& tree) {
    if (c.spec.empty()) missing(c, "--spec");
    return with_source(c.spec, [&](const Json& j) { return spec_from_json(j, tree, c.spec.parent_path()); });
}

ProcessInput load_process(const std::filesystem::path& p, const TreePtr& tree) {
    return with_source(p, [&](const Json& j) { return process_from_json(j, tree); });
}

ProcessInput single_process(const RunConfig& c, const TreePtr& tree) {
    if (c.processes.size() != 1) throw ValidationError(fmt::format("{}: exactly one --process is required", c.command));
    return load_process(c.processes.front(), tree);
}

BiMeasure load_measure(const std::filesystem::path& p, const TreePtr& tree) {
    return with_source(p, [&](const Json& j) { return bimeasure_from_json(j, tree); });
}

std::uint64_t require_seed(const RunConfig& c) {
    if (!c.seed) missing(c, "--seed");
    return *c.seed;
}

std::string label_of(const RiskMeasureSpec& spec, std::size_t i) {
    const auto& l = spec[i].label;
    return l.empty() ? fmt::format("#{}", i) : l;
}

std::string labels_of(const RiskMeasureSpec& spec, const std::vector<std::size_t>& idx) {
    std::vector<std::string> names;
    for (auto i : idx) names.push_back(label_of(spec, i));
    return fmt::format("{}", fmt::join(names, ","));
}

// --- commands --------------------------------------------------------------

Outcome cmd_eval(const RunConfig& c) {
    const auto tree = load_tree(c);
    const auto spec = load_spec(c, tree);
    const auto x = single_process(c, tree).process;
    const auto ev = rho_eval(spec, x);
    Outcome o;
    o.report.add("value", Cell::number(ev.value));
    o.report.add("argmax", Cell::string(labels_of(spec, ev.argmax)));
    o.report.add("coherent", Cell::boolean(spec.coherent()));
    o.report.add("gamma_shift", Cell::number(spec.gamma_shift()));
    Table t{"elements", {"index", "label", "gamma", "pairing", "score", "argmax"}, {}};
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const bool top = std::find(ev.argmax.begin(), ev.argmax.end(), i) != ev.argmax.end();
        t.rows.push_back({Cell::integer(static_cast<std::int64_t>(i)), Cell::string(label_of(spec, i)),
                          Cell::number(spec[i].gamma), Cell::number(pairing(x, spec[i].measure)),
                          Cell::number(ev.scores[i]), Cell::boolean(top)});
    }
    o.report.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_static_eval(const RunConfig& c) {
    const auto tree = load_tree(c);
    const auto spec = load_spec(c, tree);
    const auto in = single_process(c, tree);
    const auto y = in.payoff ? *in.payoff : in.process.terminal();
    const auto closure = optional_projection_static(y);
    const auto ev = rho_eval(spec, closure);
    Outcome o;
    o.report.add("static_value", Cell::number(static_rho(spec, y)));
    if (spec.coherent()) o.report.add("direct_value", Cell::number(static_rho_coherent_direct(spec, y)));
    o.report.add("argmax", Cell::string(labels_of(spec, ev.argmax)));
    o.report.add("expectation", Cell::number(closure[tree->root()]));
    Table t{"elements", {"index", "label", "gamma", "score"}, {}};
    for (std::size_t i = 0; i < spec.size(); ++i) {
        t.rows.push_back({Cell::integer(static_cast<std::int64_t>(i)), Cell::string(label_of(spec, i)),
                          Cell::number(spec[i].gamma), Cell::number(ev.scores[i])});
    }
    o.report.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_project(const RunConfig& c) {
    const auto tree = load_tree(c);
    const auto in = single_process(c, tree);
    const auto proj = optional_projection_static(in.process.terminal());
    Outcome o;
    o.report.add("input", Cell::string(in.payoff ? "payoff" : "values"));
    double dev = 0.0;
    Table t{"nodes", {"node", "depth", "probability", "value", "projection"}, {}};
    for (NodeIndex n = 0; n < tree->node_count(); ++n) {
        const auto& node = tree->node(n);
        dev = std::max(dev, std::abs(in.process[n] - proj[n]));
        t.rows.push_back({Cell::string(node.id), Cell::integer(node.depth), Cell::number(tree->node_probability(n)),
                          Cell::number(in.process[n]), Cell::number(proj[n])});
    }
    o.report.add("max_deviation", Cell::number(dev));
    o.report.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_conjugate(const RunConfig& c) {
    const auto tree = load_tree(c);
    const auto spec = load_spec(c, tree);
    if (c.measures.size() != 1) throw ValidationError("conjugate: exactly one --measure is required");
    const auto a = load_measure(c.measures.front(), tree);
    const auto cv = conjugate_value(spec, a, c.tol);
    Outcome o;
    o.report.add("status", Cell::string(cv.infinite() ? "infeasible" : "feasible"));
    o.report.add("value", Cell::number(cv.value.value_or(std::numeric_limits<double>::infinity())));
    o.report.add("tol", Cell::number(c.tol));
    Table t{"weights", {"index", "label", "gamma", "weight"}, {}};
    for (std::size_t i = 0; i < cv.weights.size(); ++i) {
        t.rows.push_back({Cell::integer(static_cast<std::int64_t>(i)), Cell::string(label_of(spec, i)),
                          Cell::number(spec[i].gamma), Cell::number(cv.weights[i])});
    }
    o.report.tables.push_back(std::move(t));
    if (cv.infinite()) o.status = kExitUndefined;
    return o;
}

Outcome cmd_allocate(const RunConfig& c) {
    const auto tree = load_tree(c);
    const auto spec = load_spec(c, tree);
    if (c.processes.empty()) missing(c, "--process");
    const auto seed = require_seed(c);
    std::vector<AdaptedProcess> xs;
    for (const auto& p : c.processes) xs.push_back(load_process(p, tree).process);
    const auto res = allocate(spec, xs);
    const auto cert = fairness_check(res, spec, xs, c.samples.value_or(kDefaultFairnessSamples), seed);

    Outcome o;
    auto& r = o.report;
    r.add("rho_total", Cell::number(res.rho_total));
    r.add("allocation_sum", Cell::number(res.allocation_sum));
    r.add("maximizer", Cell::string(label_of(spec, res.maximizer)));
    r.add("tied_maximizers", Cell::string(labels_of(spec, res.tied_maximizers)));
    r.add("fairness_checks", Cell::integer(static_cast<std::int64_t>(cert.checks)));
    r.add("worst_slack", Cell::number(cert.worst_slack));
    r.add("witness_error", Cell::number(cert.witness_error));
    r.add("fair", Cell::boolean(cert.passed));
    r.add("seed", Cell::integer(static_cast<std::int64_t>(seed)));

    Table alloc{"allocation", {"position", "source", "k"}, {}};
    for (std::size_t j = 0; j < xs.size(); ++j) {
        alloc.rows.push_back({Cell::integer(static_cast<std::int64_t>(j)),
                              Cell::string(c.processes[j].filename().string()), Cell::number(res.k[j])});
    }
    r.tables.push_back(std::move(alloc));

    // slack of every basis vector and of the all-ones weighting
    Table slack{"slacks", {"weights", "weighted_k", "rho", "slack"}, {}};
    auto row = [&](const std::string& name, const std::vector<double>& w) {
        auto sum = AdaptedProcess::constant(tree, 0.0);
        double wk = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            for (NodeIndex n = 0; n < tree->node_count(); ++n) sum[n] += w[j] * xs[j][n];
            wk += w[j] * res.k[j];
        }
        const double value = rho(spec, sum);
        slack.rows.push_back({Cell::string(name), Cell::number(wk), Cell::number(value), Cell::number(value - wk)});
    };
    for (std::size_t j = 0; j < xs.size(); ++j) {
        std::vector<double> e(xs.size(), 0.0);
        e[j] = 1.0;
        row(fmt::format("e{}", j), e);
    }
    row("ones", std::vector<double>(xs.size(), 1.0));
    r.tables.push_back(std::move(slack));
    return o;
}

std::vector<double> default_k_grid() {
    std::vector<double> g{0.0};
    for (int i = 0; i <= 20; ++i) g.push_back(std::ldexp(1.0, i));
    return g;
}

Outcome cmd_diagnose_ui(const RunConfig& c) {
    const auto tree = load_tree(c);
    std::vector<StaticRV> fam;
    std::string source;
    if (c.family == "escaping") {
        // f_k = 2^k on the leaves below the first node at depth k
        for (int k = 0; k <= tree->depth(); ++k) {
            auto f = StaticRV::constant(tree, 0.0);
            const auto block = tree->nodes_at_depth(k).front();
            const double mass = 1.0 / tree->node_probability(block);
            for (auto l : tree->leaves_under(block)) f[l] = mass;
            fam.push_back(f);
        }
        source = "escaping";
    } else if (c.family.empty() || c.family == "spec") {
        const auto spec = load_spec(c, tree);
        for (const auto& e : spec.elements()) fam.push_back(variation(e.measure));
        source = "spec variations";
    } else {
        throw ValidationError(fmt::format("diagnose-ui: unknown --family '{}' (expected spec or escaping)", c.family));
    }
    const auto grid = c.k_grid.empty() ? default_k_grid() : c.k_grid;
    const auto rep = ui_modulus(fam, grid);
    Outcome o;
    o.report.add("family", Cell::string(source));
    o.report.add("family_size", Cell::integer(static_cast<std::int64_t>(fam.size())));
    o.report.add("decay_threshold", Cell::number(rep.decay_threshold));
    o.report.add("decaying", Cell::boolean(rep.decaying));
    Table t{"moduli", {"threshold", "eta"}, {}};
    for (std::size_t i = 0; i < rep.eta.size(); ++i) {
        t.rows.push_back({Cell::number(rep.thresholds[i]), Cell::number(rep.eta[i])});
    }
    o.report.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_diagnose_lebesgue(const RunConfig& c) {
    auto depths = c.depths;
    if (depths.empty()) {
        depths.resize(10);
        std::iota(depths.begin(), depths.end(), 1);
    }
    RefinementSchedule sched;
    if (c.family.empty() || c.family == "worst_case") {
        sched = worst_case_schedule(depths);
    } else if (c.family == "avar") {
        if (!c.alpha) missing(c, "--alpha");
        sched = avar_schedule(depths, QuantileLevel(*c.alpha));
    } else {
        throw ValidationError(
            fmt::format("diagnose-lebesgue: unknown --family '{}' (expected worst_case or avar)", c.family));
    }
    const auto rep = lebesgue_probe(sched);
    Outcome o;
    o.report.add("schedule", Cell::string(rep.schedule));
    o.report.add("verdict", Cell::string(to_string(rep.verdict)));
    o.report.add("schedule_valid", Cell::boolean(rep.schedule_valid));
    if (!rep.note.empty()) o.report.add("note", Cell::string(rep.note));
    Table t{"depths",
            {"depth", "leaves", "family_size", "rho_n", "rho_limit", "gap", "exceedance", "ui_eta"},
            {}};
    for (const auto& row : rep.rows) {
        t.rows.push_back({Cell::integer(row.depth), Cell::integer(static_cast<std::int64_t>(row.leaves)),
                          Cell::integer(static_cast<std::int64_t>(row.family_size)), Cell::number(row.rho_n),
                          Cell::number(row.rho_limit), Cell::number(row.gap), Cell::number(row.exceedance),
                          Cell::number(row.ui_eta)});
    }
    o.report.tables.push_back(std::move(t));
    return o;
}

BiMeasure random_signed_measure(const TreePtr& tree, Rng& rng) {
    std::vector<double> pr(tree->node_count(), 0.0), op(tree->node_count(), 0.0);
    for (NodeIndex n = 0; n < tree->node_count(); ++n) {
        // integer increments keep the identities exact in floating point
        if (!tree->is_leaf(n) && rng.integer(0, 2) == 0) pr[n] = rng.integer(-4, 4);
        if (rng.integer(0, 1) == 0) op[n] = rng.integer(-4, 4);
    }
    return BiMeasure(tree, std::move(pr), std::move(op));
}

Outcome cmd_diagnose_identities(const RunConfig& c) {
    const auto tree = load_tree(c);
    std::vector<BiMeasure> fam;
    std::vector<std::string> sources;
    for (const auto& p : c.measures) {
        fam.push_back(load_measure(p, tree));
        sources.push_back(p.filename().string());
    }
    Outcome o;
    if (fam.empty()) {
        const auto seed = require_seed(c);
        Rng rng(seed);
        const auto n = c.samples.value_or(100);
        for (std::size_t i = 0; i < n; ++i) {
            fam.push_back(random_signed_measure(tree, rng));
            sources.push_back(fmt::format("sample{}", i));
        }
        o.report.add("seed", Cell::integer(static_cast<std::int64_t>(seed)));
    }
    if (fam.empty()) throw ValidationError("diagnose-identities: --samples must be positive");
    const auto rep = identity_battery(fam);
    auto& r = o.report;
    r.add("elements", Cell::integer(static_cast<std::int64_t>(fam.size())));
    r.add("passing", Cell::integer(static_cast<std::int64_t>(rep.passing)));
    r.add("sup_variation", Cell::number(rep.sup_variation));
    r.add("sup_terminal", Cell::number(rep.sup_terminal));
    r.add("c_within_2var", Cell::boolean(rep.c_within_2var));
    r.add("var_within_2c", Cell::boolean(rep.var_within_2c));
    r.add("positive_parts_match", Cell::boolean(rep.positive_parts_match));
    Table t{"elements",
            {"index", "source", "increment_bound", "variation_additive", "terminal_split", "strict_somewhere",
             "var_within_2c", "positive_part_match"},
            {}};
    for (std::size_t i = 0; i < rep.elements.size(); ++i) {
        const auto& e = rep.elements[i];
        t.rows.push_back({Cell::integer(static_cast<std::int64_t>(i)), Cell::string(sources[i]),
                          Cell::boolean(e.increment_bound), Cell::boolean(e.variation_additive),
                          Cell::boolean(e.terminal_split), Cell::boolean(e.strict_somewhere),
                          Cell::boolean(e.var_within_2c), Cell::boolean(e.positive_part_match)});
    }
    r.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_instances(const RunConfig& c) {
    const auto tree = load_tree(c);
    const auto in = single_process(c, tree);
    if (!c.alpha) missing(c, "--alpha");
    const QuantileLevel alpha(*c.alpha);
    const double beta = c.beta.value_or(1.0);
    const auto y = in.payoff ? *in.payoff : in.process.terminal();

    Outcome o;
    auto& r = o.report;
    r.add("alpha", Cell::number(alpha.value()));
    r.add("beta", Cell::number(beta));
    r.add("var", Cell::number(var_alpha(y, alpha)));
    try {
        r.add("es_tce", Cell::number(es_tce(y, alpha)));
    } catch (const UndefinedError& e) {
        r.add("es_tce", Cell::string("undefined"));
        r.add("note", Cell::string(e.what()));
        o.status = kExitUndefined;
    }
    r.add("avar", Cell::number(avar(y, alpha)));
    r.add("entropic", Cell::number(entropic(y, beta)));
    r.add("worst_case", Cell::number(static_rho(worst_case_spec(tree), y)));
    const auto stop = stopped_worst_case(in.process);
    r.add("stopped_worst_case", Cell::number(stop.value));
    Table t{"stopping", {"leaf", "probability", "payoff", "tau"}, {}};
    for (LeafIndex l = 0; l < tree->leaf_count(); ++l) {
        const auto n = tree->leaf_node(l);
        t.rows.push_back({Cell::string(tree->node(n).id), Cell::number(tree->node_probability(n)), Cell::number(y[l]),
                          Cell::integer(stop.tau[l])});
    }
    r.tables.push_back(std::move(t));
    return o;
}

Outcome dispatch(const RunConfig& c) {
    if (!(c.tol > 0.0) || !std::isfinite(c.tol)) throw ValidationError("--tol must be a positive number");
    Outcome o;
    if (c.command == "eval") o = cmd_eval(c);
    else if (c.command == "static-eval") o = cmd_static_eval(c);
    else if (c.command == "project") o = cmd_project(c);
    else if (c.command == "conjugate") o = cmd_conjugate(c);
    else if (c.command == "allocate") o = cmd_allocate(c);
    else if (c.command == "diagnose-ui") o = cmd_diagnose_ui(c);
    else if (c.command == "diagnose-lebesgue") o = cmd_diagnose_lebesgue(c);
    else if (c.command == "diagnose-identities") o = cmd_diagnose_identities(c);
    else if (c.command == "instances") o = cmd_instances(c);
    else throw ValidationError(fmt::format("unknown command '{}'", c.command));
    o.report.command = c.command;
    return o;
}

} // namespace

std::vector<int> parse_depths(const std::string& text) {
    std::vector<int> out;
    const auto range = text.find("..");
    if (range != std::string::npos) {
        const int lo = to_int(trim(text.substr(0, range)), "--depths");
        const int hi = to_int(trim(text.substr(range + 2)), "--depths");
        if (hi < lo) throw ValidationError(fmt::format("--depths: empty range '{}'", text));
        for (int d = lo; d <= hi; ++d) out.push_back(d);
        return out;
    }
    for (const auto& part : split(text, ',')) out.push_back(to_int(part, "--depths"));
    return out;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (part.empty() || used != part.size()) throw ValidationError(fmt::format("'{}' is not a number", part));
        out.push_back(v);
    }
    return out;
}

std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out,
                              std::ostream& err) {
    CLI::App app{"Scenario-tree risk measures: evaluation, duality, allocation and diagnostics"};
    app.set_help_flag("-h,--help");
    std::string format = "table", depths, k_grid;
    app.add_option("command", cfg.command, "Command to run")->required()->check(CLI::IsMember(command_names()));
    app.add_option("--tree", cfg.tree, "Tree file");
    app.add_option("--process", cfg.processes, "Process or payoff file (repeatable for allocate)");
    app.add_option("--measure", cfg.measures, "Bi-measure file (repeatable for diagnose-identities)");
    app.add_option("--spec", cfg.spec, "Spec file");
    app.add_option("--alpha", cfg.alpha, "Quantile level in (0,1)");
    app.add_option("--beta", cfg.beta, "Entropic risk aversion (default 1)");
    app.add_option("--depths", depths, "Depth list: 1..10 or 1,2,3");
    app.add_option("--k-grid", k_grid, "Thresholds for diagnose-ui, comma separated");
    app.add_option("--family", cfg.family, "worst_case|avar (diagnose-lebesgue), spec|escaping (diagnose-ui)");
    app.add_option("--samples", cfg.samples, "Sample count for randomized checks");
    app.add_option("--tol", cfg.tol, "Feasibility tolerance (default 1e-9)");
    app.add_option("--seed", cfg.seed, "Seed for randomized procedures");
    app.add_option("--out", cfg.out, "Write the report here instead of stdout");
    app.add_option("--format", format, "table|csv|structured")
        ->check(CLI::IsMember({"table", "csv", "structured"}));
    try {
        app.parse(argc, argv);
        if (!depths.empty()) cfg.depths = parse_depths(depths);
        if (!k_grid.empty()) cfg.k_grid = parse_number_list(k_grid);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    cfg.format = format == "csv" ? Format::Csv : format == "structured" ? Format::Structured : Format::Table;
    return std::nullopt;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Outcome o;
    try {
        o = dispatch(config);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const UndefinedError& e) {
        err << "undefined: " << e.what() << "\n";
        return kExitUndefined;
    }
    const auto text = render(o.report, config.format);
    if (config.out.empty()) {
        out << text;
    } else {
        std::ofstream file(config.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << config.out.string() << "\n";
            return kExitInvalid;
        }
        file << text;
    }
    if (o.status == kExitUndefined) err << config.command << ": infeasible or undefined quantity\n";
    return o.status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    if (const auto stop = parse_args(argc, argv, cfg, out, err)) return *stop;
    return run(cfg, out, err);
}

} // namespace scenrisk::cli

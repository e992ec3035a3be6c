#include "scenrisk/diagnostics.hpp"

#include "scenrisk/errors.hpp"

#include <algorithm>
#include <boost/multiprecision/gmp.hpp>
#include <cmath>
#include <fmt/format.h>

namespace scenrisk {

UIReport ui_modulus(const std::vector<StaticRV>& family, const std::vector<double>& k_grid, double decay_threshold) {
    if (family.empty()) {
        throw ValidationError("ui_modulus: empty family");
    }
    if (k_grid.empty()) {
        throw ValidationError("ui_modulus: empty threshold grid");
    }
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (k_grid[i] < 0.0 || (i > 0 && !(k_grid[i] > k_grid[i - 1]))) {
            throw ValidationError("ui_modulus: thresholds must be nonnegative and strictly increasing");
        }
    }
    UIReport rep;
    rep.thresholds = k_grid;
    rep.decay_threshold = decay_threshold;
    rep.eta.reserve(k_grid.size());
    for (double k : k_grid) rep.eta.push_back(ui_eta(family, k));
    rep.decaying = rep.eta.back() < decay_threshold;
    return rep;
}

double ui_eta(const std::vector<StaticRV>& family, double k) {
    double eta = 0.0;
    for (const auto& f : family) {
        double tail = 0.0;
        for (LeafIndex l = 0; l < f.size(); ++l) {
            const double v = std::abs(f[l]);
            if (v > k) tail += f.tree()->leaf_probability(l) * v;
        }
        eta = std::max(eta, tail);
    }
    return eta;
}

// ---------------------------------------------------------------------------

const char* to_string(ProbeVerdict v) {
    switch (v) {
    case ProbeVerdict::Consistent: return "Lebesgue-consistent";
    case ProbeVerdict::Violating: return "Lebesgue-violating";
    case ProbeVerdict::Inconclusive: return "inconclusive";
    case ProbeVerdict::InvalidSchedule: return "invalid-schedule";
    }
    return "unknown";
}

LebesgueReport lebesgue_probe(const RefinementSchedule& schedule, const ProbeConfig& config) {
    if (schedule.depths.empty()) {
        throw ValidationError("lebesgue_probe: no depths");
    }
    if (!std::is_sorted(schedule.depths.begin(), schedule.depths.end()) ||
        std::adjacent_find(schedule.depths.begin(), schedule.depths.end()) != schedule.depths.end()) {
        throw ValidationError("lebesgue_probe: depths must be strictly increasing");
    }
    if (!schedule.sequence_builder || !schedule.family_builder || !schedule.tree_builder) {
        throw ValidationError("lebesgue_probe: schedule is missing a builder");
    }

    LebesgueReport rep;
    rep.schedule = schedule.name;
    rep.config = config;
    rep.note = "finite-scale trend reading; a single finite tree always has the Lebesgue property";

    for (int depth : schedule.depths) {
        const auto tree = schedule.tree_builder(depth);
        const auto seq = schedule.sequence_builder(tree, depth);
        const auto spec = schedule.family_builder(tree, depth, seq);

        ProbeRow row;
        row.depth = depth;
        row.leaves = tree->leaf_count();
        row.family_size = spec.size();
        row.rho_n = rho(spec, seq.x_n);
        row.rho_limit = rho(spec, seq.x_limit);
        row.gap = std::abs(row.rho_n - row.rho_limit);
        row.exceedance = prob_sup_exceedance(seq.x_n, seq.x_limit, config.eps);
        std::vector<StaticRV> vars;
        vars.reserve(spec.size());
        for (const auto& e : spec.elements()) vars.push_back(variation(e.measure));
        row.ui_eta = ui_eta(vars, config.ui_reference_k);
        rep.rows.push_back(row);
    }

    const auto vanishing = [&](double v, int depth) { return v <= config.consistent_factor * std::ldexp(1.0, -depth); };

    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i].exceedance > rep.rows[i - 1].exceedance) rep.schedule_valid = false;
    }
    const auto& last = rep.rows.back();
    if (!vanishing(last.exceedance, last.depth)) rep.schedule_valid = false;

    if (!rep.schedule_valid) {
        rep.verdict = ProbeVerdict::InvalidSchedule;
        rep.note += "; sequence does not converge in the (X_n - X)* sense along the schedule";
        return rep;
    }

    const bool sustained_gap =
        rep.rows.size() >= config.sustained_rows &&
        std::all_of(rep.rows.end() - static_cast<std::ptrdiff_t>(config.sustained_rows), rep.rows.end(),
                    [&](const ProbeRow& r) { return r.gap > config.violating_gap; });
    if (sustained_gap) {
        rep.verdict = ProbeVerdict::Violating;
    } else if (vanishing(last.gap, last.depth) && last.ui_eta < config.ui_decay_threshold) {
        rep.verdict = ProbeVerdict::Consistent;
    } else {
        rep.verdict = ProbeVerdict::Inconclusive;
    }
    return rep;
}

SequencePoint single_leaf_loss(const TreePtr& tree, int) {
    std::vector<double> payoff(tree->leaf_count(), 0.0);
    payoff[0] = -1.0;
    return {AdaptedProcess::terminal_payoff(StaticRV(tree, std::move(payoff))), AdaptedProcess::constant(tree, 0.0)};
}

RefinementSchedule worst_case_schedule(std::vector<int> depths) {
    RefinementSchedule s;
    s.name = "worst-case";
    s.depths = std::move(depths);
    s.sequence_builder = single_leaf_loss;
    s.family_builder = [](const TreePtr& tree, int, const SequencePoint&) { return worst_case_spec(tree); };
    return s;
}

RefinementSchedule avar_schedule(std::vector<int> depths, QuantileLevel alpha) {
    RefinementSchedule s;
    s.name = fmt::format("avar(alpha={})", alpha.value());
    s.depths = std::move(depths);
    s.sequence_builder = single_leaf_loss;
    s.family_builder = [alpha](const TreePtr& tree, int, const SequencePoint& seq) {
        if (tree->leaf_count() <= kAvarLeafCap) return avar_spec(tree, alpha);
        return avar_support_spec(tree, alpha, {seq.x_n.terminal(), seq.x_limit.terminal()});
    };
    return s;
}

// ---------------------------------------------------------------------------

namespace {

using Q = boost::multiprecision::mpq_rational;

struct PathSums {
    Q variation;
    Q terminal;
};

PathSums exact_path_sums(const BiMeasure& a, LeafIndex leaf) {
    PathSums s;
    for (auto n : a.tree()->path(leaf)) {
        for (double v : {a.pr(n), a.op(n)}) {
            const Q q(v);
            s.terminal += q;
            s.variation += abs(q);
        }
    }
    return s;
}

} // namespace

IdentityReport identity_battery(const std::vector<BiMeasure>& family) {
    IdentityReport rep;
    rep.c_within_2var = true;
    rep.var_within_2c = true;
    rep.positive_parts_match = true;
    for (const auto& a : family) {
        const auto [plus, minus] = jordan(a);
        IdentityCheck c;
        c.increment_bound = c.variation_additive = c.terminal_split = true;
        c.var_within_2c = c.positive_part_match = true;
        bool c2v = true;
        for (LeafIndex l = 0; l < a.tree()->leaf_count(); ++l) {
            const auto whole = exact_path_sums(a, l);
            const auto up = exact_path_sums(plus, l);
            const auto down = exact_path_sums(minus, l);
            const Q abs_term = abs(whole.terminal);
            c.increment_bound = c.increment_bound && abs_term <= whole.variation;
            c.strict_somewhere = c.strict_somewhere || abs_term < whole.variation;
            c.variation_additive = c.variation_additive && whole.variation == up.variation + down.variation;
            c.terminal_split = c.terminal_split && whole.terminal == up.variation - down.variation;
            c.var_within_2c = c.var_within_2c && whole.variation <= 2 * abs_term;
            c2v = c2v && abs_term <= 2 * whole.variation;
            const Q pos = whole.terminal > 0 ? whole.terminal : Q(0);
            c.positive_part_match = c.positive_part_match && pos == up.variation;
        }
        rep.c_within_2var = rep.c_within_2var && c2v;
        rep.var_within_2c = rep.var_within_2c && c.var_within_2c;
        rep.positive_parts_match = rep.positive_parts_match && c.positive_part_match;
        if (c.identities_hold()) ++rep.passing;

        const auto var = variation(a);
        const auto term = terminal_increment(a);
        for (LeafIndex l = 0; l < var.size(); ++l) {
            rep.sup_variation = std::max(rep.sup_variation, var[l]);
            rep.sup_terminal = std::max(rep.sup_terminal, std::abs(term[l]));
        }
        rep.elements.push_back(c);
    }
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<Attainment> attainment_check(const RiskMeasureSpec& spec, const std::vector<AdaptedProcess>& xs) {
    std::vector<Attainment> out;
    out.reserve(xs.size());
    for (const auto& x : xs) {
        auto ev = rho_eval(spec, x);
        Attainment a;
        a.value = ev.value;
        a.maximizers = std::move(ev.argmax);
        if (ev.scores.size() > 1) {
            auto sorted = ev.scores;
            std::partial_sort(sorted.begin(), sorted.begin() + 2, sorted.end(), std::greater<>());
            a.margin = sorted[0] - sorted[1];
        }
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace scenrisk

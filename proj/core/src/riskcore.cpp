#include "scenrisk/riskcore.hpp"

#include "scenrisk/errors.hpp"
#include "scenrisk/random.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace scenrisk {

namespace {

constexpr double kNormTol = 1e-9;

void check_candidate(const TreePtr& tree, const BiMeasure& a, std::string_view what) {
    require_same_tree(tree, a.tree());
    if (!a.is_positive()) {
        throw ValidationError(fmt::format("{}: measure has a negative increment", what));
    }
    const double norm = ap_norm(a, 1.0);
    if (std::abs(norm - 1.0) > kNormTol) {
        throw ValidationError(fmt::format("{}: A1 norm {:.17g}, expected 1", what, norm));
    }
}

/// pr on non-terminal nodes followed by op on all nodes.
std::vector<double> flatten(const BiMeasure& a) {
    const auto& tree = *a.tree();
    std::vector<double> v;
    v.reserve(2 * tree.node_count());
    for (NodeIndex n = 0; n < tree.node_count(); ++n) {
        if (!tree.is_leaf(n)) v.push_back(a.pr(n));
    }
    v.insert(v.end(), a.op().begin(), a.op().end());
    return v;
}

AdaptedProcess random_process(const TreePtr& tree, Rng& rng) {
    const double scale = rng.uniform(0.1, 10.0);
    std::vector<double> v(tree->node_count());
    for (auto& x : v) x = rng.uniform(-scale, scale);
    return AdaptedProcess(tree, std::move(v));
}

} // namespace

RiskMeasureSpec::RiskMeasureSpec(TreePtr tree, std::vector<SpecElement> elements)
    : tree_(std::move(tree)), elements_(std::move(elements)) {
    if (!tree_) throw ValidationError("risk spec: null tree");
    if (elements_.empty()) throw ValidationError("risk spec: empty generating family");
    double min_gamma = elements_.front().gamma;
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        auto& e = elements_[i];
        if (e.label.empty()) e.label = fmt::format("a{}", i);
        check_candidate(tree_, e.measure, fmt::format("risk spec element '{}'", e.label));
        if (!std::isfinite(e.gamma)) {
            throw ValidationError(fmt::format("risk spec element '{}': penalty must be finite", e.label));
        }
        min_gamma = std::min(min_gamma, e.gamma);
    }
    gamma_shift_ = min_gamma;
    for (auto& e : elements_) {
        e.gamma -= min_gamma;
        coherent_ = coherent_ && e.gamma == 0.0;
    }
}

RiskMeasureSpec RiskMeasureSpec::with_gammas(const std::vector<double>& gammas) const {
    if (gammas.size() != elements_.size()) {
        throw ValidationError("with_gammas: one penalty per element required");
    }
    auto elems = elements_;
    for (std::size_t i = 0; i < elems.size(); ++i) elems[i].gamma = gammas[i];
    return RiskMeasureSpec(tree_, std::move(elems));
}

Evaluation rho_eval(const RiskMeasureSpec& spec, const AdaptedProcess& x) {
    require_same_tree(spec.tree(), x.tree());
    Evaluation out;
    out.scores.reserve(spec.size());
    for (const auto& e : spec.elements()) {
        out.scores.push_back(-pairing(x, e.measure) - e.gamma);
    }
    out.value = *std::max_element(out.scores.begin(), out.scores.end());
    for (std::size_t i = 0; i < out.scores.size(); ++i) {
        if (out.value - out.scores[i] <= kArgmaxTol) out.argmax.push_back(i);
    }
    return out;
}

double static_rho(const RiskMeasureSpec& spec, const StaticRV& y) {
    return rho_eval(spec, optional_projection_static(y)).value;
}

double static_rho_coherent_direct(const RiskMeasureSpec& spec, const StaticRV& y) {
    if (!spec.coherent()) {
        throw ValidationError("static_rho_coherent_direct: spec is not coherent");
    }
    require_same_tree(spec.tree(), y.tree());
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : spec.elements()) {
        best = std::max(best, -expectation_of_product(variation(e.measure), y));
    }
    return best;
}

ConjugateValue conjugate_value(const RiskMeasureSpec& spec, const BiMeasure& a, double tol) {
    check_candidate(spec.tree(), a, "conjugate_value");
    SimplexProgram prog;
    prog.target = flatten(a);
    for (const auto& e : spec.elements()) {
        prog.columns.push_back(flatten(e.measure));
        prog.costs.push_back(e.gamma);
    }
    ConjugateValue out;
    if (auto comb = min_cost_combination(prog, tol)) {
        out.value = comb->cost;
        out.weights = std::move(comb->weights);
    }
    return out;
}

std::vector<BiMeasure> subgradient(const RiskMeasureSpec& spec, const AdaptedProcess& x) {
    if (!spec.coherent()) {
        throw ValidationError("subgradient: spec is not coherent");
    }
    std::vector<BiMeasure> out;
    for (auto i : rho_eval(spec, x).argmax) out.push_back(-spec[i].measure);
    return out;
}

double AxiomReport::worst() const {
    double w = std::max({convexity, translation, monotonicity, std::abs(rho_of_zero)});
    if (homogeneity) w = std::max(w, *homogeneity);
    return w;
}

AxiomReport axiom_report(const RiskMeasureSpec& spec, std::size_t sample_count, std::uint64_t seed) {
    if (sample_count < 1) {
        throw ValidationError("axiom_report: sample_count must be >= 1");
    }
    const auto& tree = spec.tree();
    Rng rng(seed);
    AxiomReport rep;
    rep.samples = sample_count;
    rep.rho_of_zero = rho(spec, AdaptedProcess::constant(tree, 0.0));
    if (spec.coherent()) rep.homogeneity = 0.0;

    for (std::size_t s = 0; s < sample_count; ++s) {
        const auto x = random_process(tree, rng);
        const auto y = random_process(tree, rng);
        const double lambda = rng.uniform();
        const double m = rng.uniform(-5.0, 5.0);

        const double rx = rho(spec, x);
        const double ry = rho(spec, y);

        const double mix = rho(spec, lambda * x + (1.0 - lambda) * y);
        rep.convexity = std::max(rep.convexity, mix - lambda * rx - (1.0 - lambda) * ry);

        rep.translation = std::max(rep.translation, std::abs(rho(spec, x + m) - (rx - m)));

        // x + |y| dominates x node-wise, so its risk may not exceed rho(x)
        auto up = x;
        for (NodeIndex n = 0; n < tree->node_count(); ++n) up[n] += std::abs(y[n]);
        rep.monotonicity = std::max(rep.monotonicity, rho(spec, up) - rx);

        if (rep.homogeneity) {
            const double c = rng.uniform(0.0, 5.0) + 1e-3;
            rep.homogeneity = std::max(*rep.homogeneity, std::abs(rho(spec, c * x) - c * rx));
        }
    }
    return rep;
}

} // namespace scenrisk

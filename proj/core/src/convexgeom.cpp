#include "scenrisk/convexgeom.hpp"

#include "scenrisk/errors.hpp"

#include <boost/multiprecision/gmp.hpp>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace scenrisk {

namespace {

using Q = boost::multiprecision::mpq_rational;

/// Dense simplex tableau in equality form: rows * x = rhs, x >= 0.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : cols_(cols), a_(rows, std::vector<Q>(cols + 1)), basis_(rows, 0) {}

    Q& at(std::size_t r, std::size_t c) { return a_[r][c]; }
    Q& rhs(std::size_t r) { return a_[r][cols_]; }
    std::size_t& basic(std::size_t r) { return basis_[r]; }
    std::size_t rows() const { return a_.size(); }
    std::size_t cols() const { return cols_; }

    void drop_row(std::size_t r) {
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

    /// Reduced costs (and the negated objective in the rhs slot) for cost vector c.
    void price(const std::vector<Q>& c) {
        z_.assign(cols_ + 1, Q(0));
        for (std::size_t j = 0; j < cols_; ++j) z_[j] = c[j];
        for (std::size_t r = 0; r < rows(); ++r) {
            const Q& cb = c[basis_[r]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (a_[r][j] != 0) z_[j] -= cb * a_[r][j];
            }
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        const Q p = a_[r][c];
        for (auto& v : a_[r]) {
            if (v != 0) v /= p;
        }
        const auto eliminate = [&](std::vector<Q>& row) {
            const Q f = row[c];
            if (f == 0) return;
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (a_[r][j] != 0) row[j] -= f * a_[r][j];
            }
        };
        for (std::size_t i = 0; i < rows(); ++i) {
            if (i != r) eliminate(a_[i]);
        }
        if (!z_.empty()) eliminate(z_);
        basis_[r] = c;
    }

    /// Bland's rule: smallest improving column, ties in the ratio test to the
    /// smallest basic index. Columns at or beyond `limit` never enter.
    void optimize(std::size_t limit) {
        for (;;) {
            std::size_t enter = limit;
            for (std::size_t j = 0; j < limit; ++j) {
                if (z_[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == limit) return;

            std::optional<std::size_t> leave;
            Q best;
            for (std::size_t r = 0; r < rows(); ++r) {
                if (a_[r][enter] <= 0) continue;
                Q ratio = a_[r][cols_] / a_[r][enter];
                if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
                    leave = r;
                    best = std::move(ratio);
                }
            }
            if (!leave) {
                // the feasible region is bounded, so this is a logic error
                throw Error("min_cost_combination: unbounded direction in a bounded program");
            }
            pivot(*leave, enter);
        }
    }

private:
    std::size_t cols_;
    std::vector<std::vector<Q>> a_;
    std::vector<std::size_t> basis_;
    std::vector<Q> z_;
};

/// min cost.x subject to m x = rhs, x >= 0, over exact rationals. Two-phase
/// with one artificial per row. Returns nullopt when infeasible; the callers
/// only build bounded programs.
std::optional<std::vector<Q>> solve_lp(std::vector<std::vector<Q>> m, std::vector<Q> rhs, const std::vector<Q>& cost) {
    const std::size_t rows = m.size();
    const std::size_t vars = cost.size();
    const std::size_t cols = vars + rows;
    Tableau t(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const bool flip = rhs[r] < 0;
        for (std::size_t c = 0; c < vars; ++c) t.at(r, c) = flip ? -m[r][c] : m[r][c];
        t.rhs(r) = flip ? -rhs[r] : rhs[r];
        t.at(r, vars + r) = 1;
        t.basic(r) = vars + r;
    }

    std::vector<Q> phase1(cols, Q(0));
    for (std::size_t c = vars; c < cols; ++c) phase1[c] = 1;
    t.price(phase1);
    t.optimize(cols);
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.basic(r) >= vars && t.rhs(r) != 0) return std::nullopt;
    }

    // pivot zero-level artificials out of the basis; rows with no other
    // support are redundant
    for (std::size_t r = 0; r < t.rows();) {
        if (t.basic(r) < vars) {
            ++r;
            continue;
        }
        std::optional<std::size_t> col;
        for (std::size_t c = 0; c < vars && !col; ++c) {
            if (t.at(r, c) != 0) col = c;
        }
        if (col) {
            t.pivot(r, *col);
            ++r;
        } else {
            t.drop_row(r);
        }
    }

    std::vector<Q> phase2(cols, Q(0));
    std::copy(cost.begin(), cost.end(), phase2.begin());
    t.price(phase2);
    t.optimize(vars);

    std::vector<Q> x(vars, Q(0));
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.basic(r) < vars) x[t.basic(r)] = t.rhs(r);
    }
    return x;
}

/// Shared layout of both programs over lambda[n] | p[d] | m[d] | s[d] | extra:
///   A_j lambda + p_j - m_j = b_j     (p - m is the residual on coordinate j)
///   p_j + m_j + s_j - extra_j = box  (residual bounded by box or a variable)
///   sum lambda = 1
struct BoxProgram {
    std::vector<std::vector<Q>> m;
    std::vector<Q> rhs;
    std::size_t n = 0;
    std::size_t d = 0;
};

BoxProgram box_program(const SimplexProgram& prog, const std::vector<std::size_t>& coords, std::size_t extra_vars) {
    BoxProgram bp;
    bp.n = prog.columns.size();
    bp.d = coords.size();
    const std::size_t n = bp.n, d = bp.d;
    const std::size_t vars = n + 3 * d + extra_vars;
    bp.m.assign(2 * d + 1, std::vector<Q>(vars, Q(0)));
    bp.rhs.assign(2 * d + 1, Q(0));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t i = 0; i < n; ++i) bp.m[r][i] = Q(prog.columns[i][coords[r]]);
        bp.m[r][n + r] = 1;
        bp.m[r][n + d + r] = -1;
        bp.rhs[r] = Q(prog.target[coords[r]]);
        bp.m[d + r][n + r] = 1;
        bp.m[d + r][n + d + r] = 1;
        bp.m[d + r][n + 2 * d + r] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) bp.m[2 * d][i] = 1;
    bp.rhs[2 * d] = 1;
    return bp;
}

} // namespace

std::optional<Combination> min_cost_combination(const SimplexProgram& prog, double tol) {
    if (!(tol > 0.0)) {
        throw ValidationError(fmt::format("min_cost_combination: tol must be > 0, got {}", tol));
    }
    const std::size_t n = prog.columns.size();
    if (n == 0) {
        throw ValidationError("min_cost_combination: no columns");
    }
    if (prog.costs.size() != n) {
        throw ValidationError(fmt::format("min_cost_combination: {} costs for {} columns", prog.costs.size(), n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (prog.columns[i].size() != prog.target.size()) {
            throw ValidationError(fmt::format("min_cost_combination: column {} has dimension {}, target has {}", i,
                                              prog.columns[i].size(), prog.target.size()));
        }
    }
    const std::size_t dim = prog.target.size();

    // coordinates where every column vanishes constrain nothing but the target
    std::vector<std::size_t> coords;
    Q floor_residual = 0;
    for (std::size_t j = 0; j < dim; ++j) {
        bool all_zero = true;
        for (std::size_t i = 0; i < n && all_zero; ++i) all_zero = prog.columns[i][j] == 0.0;
        if (all_zero) {
            floor_residual = std::max(floor_residual, Q(std::abs(prog.target[j])));
        } else {
            coords.push_back(j);
        }
    }
    const Q qtol(tol);
    if (floor_residual > qtol) return std::nullopt;
    const std::size_t d = coords.size();

    // First the smallest achievable residual box. The tolerance only rescues
    // targets that are off by rounding, so it must never buy a lower cost.
    Q box = 0;
    if (d > 0) {
        auto bp = box_program(prog, coords, 1);
        const std::size_t width = n + 3 * d;
        for (std::size_t r = 0; r < d; ++r) bp.m[d + r][width] = -1;
        std::vector<Q> cost(width + 1, Q(0));
        cost[width] = 1;
        const auto x = solve_lp(std::move(bp.m), std::move(bp.rhs), cost);
        if (!x) throw Error("min_cost_combination: residual program infeasible");
        box = (*x)[width];
        if (box > qtol) return std::nullopt;
    }

    auto bp = box_program(prog, coords, 0);
    for (std::size_t r = 0; r < d; ++r) bp.rhs[d + r] = box;
    std::vector<Q> cost(n + 3 * d, Q(0));
    for (std::size_t i = 0; i < n; ++i) cost[i] = Q(prog.costs[i]);
    const auto x = solve_lp(std::move(bp.m), std::move(bp.rhs), cost);
    if (!x) throw Error("min_cost_combination: cost program infeasible at the minimal box");

    Combination out;
    out.weights.resize(n);
    Q total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.weights[i] = (*x)[i].convert_to<double>();
        total += (*x)[i] * cost[i];
    }
    out.cost = total.convert_to<double>();
    return out;
}

} // namespace scenrisk

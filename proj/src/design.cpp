#include "lostwork/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace lw::design {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_bounds(const DesignSpace& ds) {
    if (ds.params.empty() || ds.params.size() > 4)
        throw Error("param_count_unsupported",
                    "design space must have 1 to 4 parameters");
    for (const Param& p : ds.params)
        if (!std::isfinite(p.lower) || !std::isfinite(p.upper) ||
            !(p.lower < p.upper))
            throw Error("invalid_bounds",
                        "parameter '" + p.name + "' needs finite lower < upper");
}

std::vector<double> clamped(const DesignSpace& ds, std::vector<double> x) {
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::clamp(x[i], ds.params[i].lower, ds.params[i].upper);
    return x;
}

}  // namespace

double action(const thermo::ProcessTimeline& tl, double g) {
    thermo::ValidationReport rep = thermo::validate_timeline(tl);
    if (!rep.ok()) {
        std::string codes;
        for (const auto& v : rep.violations)
            codes += (codes.empty() ? "" : ", ") + v.code;
        throw Error("invalid_timeline", "timeline fails validation: " + codes);
    }
    return balance::integrate_over_lifetime(
        tl, [g](const thermo::SystemSnapshot& s) {
            return balance::lost_power(s, g).exergy.Wdot_lost;
        });
}

ExtremumResult minimize_lost_work(const DesignSpace& ds, int budget, double tol,
                                  const SearchOptions& opts) {
    check_bounds(ds);
    if (budget < 50)
        throw Error("budget_too_small", "evaluation budget must be >= 50");

    const int n = static_cast<int>(ds.params.size());
    const double sign = (opts.viewpoint == Viewpoint::environment) ? -1.0 : 1.0;

    int evals = 0, failed = 0;
    bool exhausted = false;

    // returns the (sign-adjusted) objective, +inf when the builder or the
    // balance fails at the probe point, nullopt once the budget is spent
    auto try_eval = [&](const std::vector<double>& x) -> std::optional<double> {
        if (evals >= budget) {
            exhausted = true;
            return std::nullopt;
        }
        ++evals;
        try {
            return sign * action(ds.builder(x), opts.g);
        } catch (const Error&) {
            ++failed;
            return kInf;
        }
    };

    // initial simplex: box center plus one vertex per axis at +0.25 * range
    std::vector<std::vector<double>> vx;
    std::vector<double> fx;
    {
        std::vector<double> center(n);
        for (int i = 0; i < n; ++i)
            center[i] = 0.5 * (ds.params[i].lower + ds.params[i].upper);
        vx.push_back(center);
        for (int i = 0; i < n; ++i) {
            std::vector<double> v = center;
            v[i] += 0.25 * (ds.params[i].upper - ds.params[i].lower);
            vx.push_back(clamped(ds, std::move(v)));
        }
        for (const auto& v : vx) {
            auto f = try_eval(v);
            if (!f) break;
            fx.push_back(*f);
        }
        if (fx.size() != vx.size())
            throw Error("budget_too_small",
                        "budget exhausted before the initial simplex");
        bool any_finite = false;
        for (double f : fx) any_finite |= std::isfinite(f);
        if (!any_finite)
            throw Error("design_evaluation_failed",
                        "builder failed at every initial simplex vertex");
    }

    std::vector<int> order(vx.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fx[a] < fx[b]; });
    };
    auto spread = [&]() {
        double s = 0;
        const auto& best = vx[order[0]];
        for (const auto& v : vx)
            for (int i = 0; i < n; ++i)
                s = std::max(s, std::abs(v[i] - best[i]));
        return s;
    };

    sort_simplex();
    while (!exhausted) {
        if (spread() <= tol) break;
        // exactly flat simplex cannot rank candidates; stop (constant objective)
        if (fx[order[0]] == fx[order[vx.size() - 1]] &&
            std::isfinite(fx[order[0]]))
            break;

        const int worst = order[vx.size() - 1];
        const int second = order[vx.size() - 2];
        const int best = order[0];

        std::vector<double> centroid(n, 0.0);
        for (int k = 0; k < static_cast<int>(vx.size()); ++k) {
            if (k == worst) continue;
            for (int i = 0; i < n; ++i) centroid[i] += vx[k][i];
        }
        for (int i = 0; i < n; ++i) centroid[i] /= n;

        auto blend = [&](double c) {
            std::vector<double> x(n);
            for (int i = 0; i < n; ++i)
                x[i] = centroid[i] + c * (centroid[i] - vx[worst][i]);
            return clamped(ds, std::move(x));
        };

        std::vector<double> xr = blend(1.0);  // reflection
        auto fr = try_eval(xr);
        if (!fr) break;

        if (*fr < fx[best]) {
            std::vector<double> xe = blend(2.0);  // expansion
            auto fe = try_eval(xe);
            if (!fe) break;
            if (*fe < *fr) {
                vx[worst] = std::move(xe);
                fx[worst] = *fe;
            } else {
                vx[worst] = std::move(xr);
                fx[worst] = *fr;
            }
        } else if (*fr < fx[second]) {
            vx[worst] = std::move(xr);
            fx[worst] = *fr;
        } else {
            // contraction, outside or inside of the worst vertex
            bool outside = *fr < fx[worst];
            std::vector<double> xc = blend(outside ? 0.5 : -0.5);
            auto fc = try_eval(xc);
            if (!fc) break;
            if (*fc < (outside ? *fr : fx[worst])) {
                vx[worst] = std::move(xc);
                fx[worst] = *fc;
            } else {
                // shrink toward the best vertex
                bool out_of_budget = false;
                for (int k = 0; k < static_cast<int>(vx.size()); ++k) {
                    if (k == best) continue;
                    for (int i = 0; i < n; ++i)
                        vx[k][i] = vx[best][i] + 0.5 * (vx[k][i] - vx[best][i]);
                    auto f = try_eval(vx[k]);
                    if (!f) {
                        out_of_budget = true;
                        break;
                    }
                    fx[k] = *f;
                }
                if (out_of_budget) break;
            }
        }
        sort_simplex();
    }

    sort_simplex();
    const std::vector<double>& best = vx[order[0]];
    if (!std::isfinite(fx[order[0]]))
        throw Error("design_evaluation_failed",
                    "no feasible design found within the budget");

    ExtremumResult res;
    res.params_star = best;
    res.W_lambda_star = sign * fx[order[0]];
    res.evaluations = evals;
    res.failed_evaluations = failed;

    // stationarity of the action at the optimum; the difference stencil is
    // clamped into the box, reducing to one-sided at an active bound
    double stat = 0;
    for (int i = 0; i < n; ++i) {
        double h = 1e-4 * (ds.params[i].upper - ds.params[i].lower);
        std::vector<double> hi = best, lo = best;
        hi[i] = std::min(best[i] + h, ds.params[i].upper);
        lo[i] = std::max(best[i] - h, ds.params[i].lower);
        double width = hi[i] - lo[i];
        if (width <= 0) continue;
        try {
            double d = (action(ds.builder(hi), opts.g) -
                        action(ds.builder(lo), opts.g)) / width;
            stat = std::max(stat, std::abs(d));
        } catch (const Error&) {
            ++res.failed_evaluations;
        }
    }
    res.stationarity = stat;
    return res;
}

double stationarity_check(const DesignSpace& ds, std::span<const double> params,
                          double g) {
    check_bounds(ds);
    if (params.size() != ds.params.size())
        throw Error("invalid_bounds", "parameter vector has wrong length");

    const int n = static_cast<int>(ds.params.size());
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) {
        h[i] = 1e-4 * (ds.params[i].upper - ds.params[i].lower);
        if (params[i] < ds.params[i].lower + 2 * h[i] ||
            params[i] > ds.params[i].upper - 2 * h[i])
            throw Error("fd_step_out_of_bounds",
                        "parameter '" + ds.params[i].name +
                            "' is too close to a bound for central differences");
    }

    double stat = 0;
    std::vector<double> x(params.begin(), params.end());
    for (int i = 0; i < n; ++i) {
        std::vector<double> hi = x, lo = x;
        hi[i] += h[i];
        lo[i] -= h[i];
        double d = (action(ds.builder(hi), g) - action(ds.builder(lo), g)) /
                   (2 * h[i]);
        stat = std::max(stat, std::abs(d));
    }
    return stat;
}

}  // namespace lw::design

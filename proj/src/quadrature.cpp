#include "fieldlink/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "fieldlink/correlators.hpp"

namespace fieldlink {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b;
    Complex value;
    double error;
};

Panel evaluate_panel(const std::function<Complex(double)>& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Complex fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kKronrodNodes[i]);
        fv[14 - i] = f(c + h * kKronrodNodes[i]);
    }
    fv[7] = f(c);
    evals += 15;
    Complex kronrod{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        kronrod += kKronrodWeights[i] * (i == 7 ? fv[7] : fv[i] + fv[14 - i]);
    }
    Complex gauss{0.0, 0.0};
    for (int i = 0; i < 3; ++i) gauss += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    gauss += kGaussWeights[3] * fv[7];
    kronrod *= h;
    gauss *= h;
    const double diff = std::abs(kronrod - gauss);
    // standard QUADPACK-style sharpening of the raw (K - G) difference
    double err = diff;
    double resasc = 0.0;
    for (int i = 0; i < 15; ++i) resasc += std::abs(fv[i] - kronrod / (b - a));
    resasc *= std::abs(h) * 2.0 / 15.0;
    if (resasc != 0.0 && diff != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * diff / resasc, 1.5));
    return Panel{a, b, kronrod, err};
}

} // namespace

IntegralResult integrate_1d(const std::function<Complex(double)>& f, double a, double b,
                            const QuadraturePolicy& policy, std::span<const double> split_hints,
                            double omega) {
    IntegralResult result;
    if (!(b > a)) return result;

    std::vector<double> cuts{a};
    for (double h : split_hints)
        if (h > a && h < b) cuts.push_back(h);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // seed oscillation resolution: at least osc_points_per_period nodes per 2 pi / omega
    double max_len = b - a;
    if (omega > 0.0) {
        const double period = 2.0 * std::numbers::pi / std::abs(omega);
        max_len = std::min(max_len, period * 15.0 / policy.osc_points_per_period);
    }

    auto cmp = [](const Panel& x, const Panel& y) {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a; // deterministic tie break
    };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> queue(cmp);

    long evals = 0;
    Complex total{0.0, 0.0};
    double total_err = 0.0;
    int panels = 0;
    auto push_seeded = [&](double lo, double hi) {
        const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_len)));
        for (int i = 0; i < n; ++i) {
            Panel p = evaluate_panel(f, lo + (hi - lo) * i / n, lo + (hi - lo) * (i + 1) / n, evals);
            total += p.value;
            total_err += p.error;
            queue.push(p);
            ++panels;
        }
    };
    for (size_t i = 0; i + 1 < cuts.size(); ++i) push_seeded(cuts[i], cuts[i + 1]);

    while (panels < policy.max_subdivisions) {
        const double tol = std::max(policy.rel_tol * std::abs(total), policy.abs_floor);
        if (total_err <= tol) break;
        Panel worst = queue.top();
        queue.pop();
        if (worst.b - worst.a < 1e-14 * (b - a)) {
            queue.push(worst); // cannot refine further
            break;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = evaluate_panel(f, worst.a, mid, evals);
        Panel right = evaluate_panel(f, mid, worst.b, evals);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }

    result.value = total;
    result.error_estimate = total_err;
    result.evaluations = evals;
    const double tol = std::max(policy.rel_tol * std::abs(total), policy.abs_floor);
    if (total_err > 50.0 * tol && panels >= policy.max_subdivisions)
        throw QuadratureError("adaptive quadrature: subdivision budget exhausted", total, total_err);
    return result;
}

namespace {

IntegralResult simplex_level(const std::function<Complex(std::span<const double>)>& f, int level,
                             int k, double t_lo, double upper, double t_hi,
                             const QuadraturePolicy& policy, double omega,
                             std::vector<double>& point) {
    QuadraturePolicy local = policy;
    // inner levels run a little tighter so the outer estimate stays honest
    local.abs_floor = policy.abs_floor / k;
    long evals = 0;
    IntegralResult res;
    auto integrand = [&](double t) -> Complex {
        point[level] = t;
        if (level + 1 == k) return f(point);
        IntegralResult inner =
            simplex_level(f, level + 1, k, t_lo, t, t_hi, policy, omega, point);
        evals += inner.evaluations;
        return inner.value;
    };
    res = integrate_1d(integrand, t_lo, upper, local, {}, omega);
    res.evaluations += evals;
    return res;
}

} // namespace

IntegralResult integrate_simplex(const std::function<Complex(std::span<const double>)>& f, int k,
                                 double t_lo, double t_hi, const QuadraturePolicy& policy,
                                 double omega) {
    if (k < 1 || k > 4) throw std::invalid_argument("integrate_simplex supports k in 1..4");
    std::vector<double> point(k, 0.0);
    return simplex_level(f, 0, k, t_lo, t_hi, t_hi, policy, omega, point);
}

std::pair<Complex, double> extrapolate_ladder(std::span<const std::pair<double, Complex>> rungs,
                                              int order) {
    const int n = static_cast<int>(rungs.size());
    if (n < 3) throw std::invalid_argument("ladder needs at least 3 rungs");
    for (int i = 1; i < n; ++i)
        if (!(rungs[i].first < rungs[i - 1].first) || !(rungs[i].first > 0.0))
            throw std::invalid_argument("ladder eps must be strictly decreasing and positive");
    const int max_order = (order < 0 || order >= n) ? n - 1 : order;

    // Neville tableau evaluated at eps = 0
    std::vector<Complex> cur(rungs.size());
    std::vector<double> x(rungs.size());
    for (int i = 0; i < n; ++i) {
        cur[i] = rungs[i].second;
        x[i] = rungs[i].first;
    }
    Complex prev_best = cur[n - 1];
    double residual = 0.0;
    std::vector<double> diffs;
    for (int k = 1; k <= max_order; ++k) {
        for (int i = 0; i + k < n; ++i)
            cur[i] = (x[i] * cur[i + 1] - x[i + k] * cur[i]) / (x[i] - x[i + k]);
        residual = std::abs(cur[0] - prev_best);
        diffs.push_back(residual);
        prev_best = cur[0];
    }
    // divergence guard: rung magnitudes that keep growing as eps shrinks,
    // together with a growing correction tail, mean there is no finite limit
    if (diffs.size() >= 3) {
        const size_t m = diffs.size();
        bool raw_growing = std::abs(rungs[n - 1].second) > 4.0 * std::abs(rungs[0].second);
        for (int i = 1; i < n; ++i)
            if (std::abs(rungs[i].second) <= std::abs(rungs[i - 1].second)) raw_growing = false;
        const bool tail_growing = diffs[m - 1] > diffs[m - 2] && diffs[m - 2] > diffs[m - 3];
        if (raw_growing && tail_growing)
            throw QuadratureError("ladder divergent", prev_best, diffs[m - 1]);
    }
    return {prev_best, residual};
}

CollapsedIntegrand collapse_delta(const std::function<Complex(std::span<const double>)>& f,
                                  const CommutatorSupport& support, int axis, int other_axis,
                                  int k, double t_lo, double t_hi, double boundary_tol) {
    CollapsedIntegrand out;
    const auto loci = support.loci;
    const int ka = axis, ko = other_axis;
    // tangency: a locus offset equal to the window length pins the axis to a corner
    for (const auto& locus : loci)
        if (std::abs(std::abs(locus.dt) - (t_hi - t_lo)) < boundary_tol)
            out.boundary_warning = true;
    out.f = [f, loci, ka, ko, k, t_lo, t_hi](std::span<const double> reduced) -> Complex {
        std::vector<double> full(static_cast<size_t>(k), 0.0);
        int j = 0;
        for (int i = 0; i < k; ++i) {
            if (i == ka) continue;
            full[static_cast<size_t>(i)] = reduced[static_cast<size_t>(j++)];
        }
        Complex acc{0.0, 0.0};
        for (const auto& locus : loci) {
            const double pinned = full[static_cast<size_t>(ko)] + locus.dt;
            if (pinned < t_lo || pinned > t_hi) continue;
            // ordering clamps: t[0] >= t[1] >= ... >= t[k-1]
            bool ok = true;
            full[static_cast<size_t>(ka)] = pinned;
            for (int i = 0; i + 1 < k; ++i)
                if (full[static_cast<size_t>(i)] < full[static_cast<size_t>(i + 1)]) ok = false;
            if (!ok) continue;
            acc += locus.weight * f(full);
        }
        return acc;
    };
    return out;
}

} // namespace fieldlink

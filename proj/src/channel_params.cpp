#include "fieldlink/channel_params.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

namespace fieldlink {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

struct Window {
    double lo, hi;
};

// most recent extrapolation residual per thread, picked up by compute_params
thread_local double g_last_residual = 0.0;

// effective integration window; Gaussian switching is truncated at 8 sigma
Window effective_window(const ScenarioSpec& spec) {
    const auto& s = spec.switching;
    if (s.kind == SwitchingKind::Gaussian) {
        const double c = 0.5 * (s.t_start + s.t_end);
        return {c - 8.0 * s.width, c + 8.0 * s.width};
    }
    return {s.t_start, s.t_end};
}

QuadraturePolicy inner_policy(const QuadraturePolicy& p) {
    QuadraturePolicy q = p;
    q.abs_floor = p.abs_floor * 1e-2;
    return q;
}

// W(dt, r) at fixed eps as a function of dt only
using WightmanFn = std::function<Complex(double)>;

WightmanFn massless_w(double r, double eps) {
    return [r, eps](double dt) -> Complex {
        const Complex z{dt, -eps};
        return -1.0 / (4.0 * kPi * kPi * (z * z - r * r));
    };
}

// dense-grid massive Wightman with cubic Hermite interpolation; the grid must
// resolve the eps-scale lightcone structure
// Tabulates the mass correction W_m - W_0 only; the singular lightcone
// structure lives entirely in the massless closed form, which is added back
// exactly, so the grid only needs to track variation on the 1/m scale.
class WightmanTable {
  public:
    WightmanTable(double m, double r, double eps, double t_abs_max)
        : w0_(massless_w(r, eps)) {
        lo_ = -t_abs_max;
        hi_ = t_abs_max;
        const double h = 0.05 / std::max(m, 1.0);
        n_ = static_cast<int>(std::ceil((hi_ - lo_) / h));
        n_ = std::clamp(n_, 512, 20000);
        vals_.resize(static_cast<size_t>(n_) + 1);
        Regulator reg{eps};
        QuadraturePolicy pol;
        pol.rel_tol = 1e-8;
        for (int i = 0; i <= n_; ++i) {
            const double dt = lo_ + (hi_ - lo_) * i / n_;
            vals_[static_cast<size_t>(i)] = wightman(m, dt, r, reg, pol) - w0_(dt);
        }
    }
    Complex operator()(double dt) const {
        const double x = (dt - lo_) / (hi_ - lo_) * n_;
        const int i = std::clamp(static_cast<int>(x), 0, n_ - 1);
        const double u = x - i;
        // Catmull-Rom
        const Complex p0 = vals_[static_cast<size_t>(std::max(i - 1, 0))];
        const Complex p1 = vals_[static_cast<size_t>(i)];
        const Complex p2 = vals_[static_cast<size_t>(i + 1)];
        const Complex p3 = vals_[static_cast<size_t>(std::min(i + 2, n_))];
        return w0_(dt) + p1 +
               0.5 * u * (p2 - p0 + u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                         u * (3.0 * (p1 - p2) + p3 - p0)));
    }

  private:
    WightmanFn w0_;
    double lo_, hi_;
    int n_;
    std::vector<Complex> vals_;
};

WightmanFn wightman_fn(const ScenarioSpec& spec, double r, double eps,
                       std::vector<std::shared_ptr<WightmanTable>>& keep_alive) {
    if (spec.field.mass == 0.0) return massless_w(r, eps);
    const Window w = effective_window(spec);
    auto table = std::make_shared<WightmanTable>(spec.field.mass, r, eps,
                                                 (w.hi - w.lo) * 1.05 + 1.0);
    keep_alive.push_back(table);
    return [table](double dt) { return (*table)(dt); };
}

std::pair<Complex, double> run_ladder(const ScenarioSpec& spec,
                                      const std::function<Complex(double)>& value_at_eps) {
    const auto eps = Regulator::ladder(spec.quadrature);
    std::vector<std::pair<double, Complex>> rungs;
    rungs.reserve(eps.size());
    for (double e : eps) rungs.emplace_back(e, value_at_eps(e));
    auto out = extrapolate_ladder(rungs);
    g_last_residual = out.second;
    return out;
}

double couple12(const ScenarioSpec& spec) {
    return spec.detector1.coupling * spec.detector2.coupling;
}

} // namespace

void ChannelParams::validate() const {
    const double pe = excitation_noise, a = gain_excited, b = gain_ground;
    const double tol = 1e-9;
    auto fin = [](double v) { return std::isfinite(v); };
    if (!fin(pe) || !fin(a) || !fin(b) || !std::isfinite(std::abs(coherence_direct)) ||
        !std::isfinite(std::abs(coherence_counter)))
        throw PhysicsError("nonphysical parameter set: non-finite entry");
    if (pe < -tol) throw PhysicsError("nonphysical parameter set: P_e < 0");
    if (pe + a < -tol || pe + a > 1.0 + tol)
        throw PhysicsError("nonphysical parameter set: P_e + A outside [0,1]");
    if (pe + b < -tol || pe + b > 1.0 + tol)
        throw PhysicsError("nonphysical parameter set: P_e + B outside [0,1]");
    const double c2 = std::norm(coherence_direct);
    const double d2 = std::norm(coherence_counter);
    if ((pe + a) * (1.0 - pe - b) + tol < c2)
        throw PhysicsError("nonphysical parameter set: Kraus radicand (C) negative");
    if ((pe + b) * (1.0 - pe - a) + tol < d2)
        throw PhysicsError("nonphysical parameter set: Kraus radicand (D) negative");
}

double compute_Pe(const ScenarioSpec& spec) {
    spec.validate();
    const double a2 = spec.detector2.coupling;
    if (a2 == 0.0) return 0.0;
    const Window w = effective_window(spec);
    const double g = spec.energy_gap;
    const auto& pol = spec.quadrature;
    const double m = spec.field.mass;

    auto value_at_eps = [&](double eps) -> Complex {
        auto wfn = massless_w(0.0, eps);
        auto outer = [&](double t1) -> Complex {
            auto inner = [&](double t2) -> Complex {
                const double tau = t1 - t2;
                return eval_switching(spec.switching, t2) * wfn(tau) *
                       std::exp(Complex{0.0, -g * tau});
            };
            const double hints[] = {t1};
            return eval_switching(spec.switching, t1) *
                   integrate_1d(inner, w.lo, w.hi, inner_policy(pol), hints, g).value;
        };
        return integrate_1d(outer, w.lo, w.hi, pol, {}, g).value;
    };

    double pe, im = 0.0;
    if (m == 0.0) {
        auto [val, resid] = run_ladder(spec, value_at_eps);
        pe = a2 * a2 * val.real();
        im = a2 * a2 * std::abs(val.imag());
    } else {
        // massive: spectral route, exact for any switching (Parseval turns
        // the double time integral into a positive mode integral)
        auto etahat2 = [&](double omega) -> double {
            auto f = [&](double t) -> Complex {
                return eval_switching(spec.switching, t) * std::exp(Complex{0.0, -omega * t});
            };
            return std::norm(integrate_1d(f, w.lo, w.hi, inner_policy(pol), {}, omega).value);
        };
        auto f = [&](double p) -> Complex {
            const double e = std::sqrt(p * p + m * m);
            return {p * p / e * etahat2(e + g), 0.0};
        };
        // double the momentum cutoff until the outermost shell is negligible
        const double span = std::max(w.hi - w.lo, 1e-30);
        double p_lo = 0.0, p_hi = std::max({g, m, 16.0 / span});
        double acc = 0.0, err = 0.0;
        for (int shell = 0; shell < 16; ++shell) {
            const auto seg = integrate_1d(f, p_lo, p_hi, pol, {}, 0.0);
            acc += seg.value.real();
            err += seg.error_estimate;
            if (shell > 0 && std::abs(seg.value.real()) <
                                 std::max(pol.rel_tol * std::abs(acc), pol.abs_floor))
                break;
            p_lo = p_hi;
            p_hi *= 2.0;
        }
        pe = a2 * a2 * acc / (4.0 * kPi * kPi);
        g_last_residual = err / (4.0 * kPi * kPi);
    }
    if (im > 1e-8 * std::max(std::abs(pe), 1e-30) && im > spec.quadrature.abs_floor)
        throw PhysicsError("nonphysical P_e: imaginary residue beyond tolerance");
    if (pe < -1e-10) throw PhysicsError("nonphysical P_e: negative");
    return std::max(pe, 0.0);
}

double compute_Pe_momentum_space(const ScenarioSpec& spec) {
    spec.validate();
    if (spec.field.mass != 0.0 || spec.switching.kind != SwitchingKind::Gaussian)
        throw PhysicsError("momentum-space P_e route requires massless field and gaussian switching");
    const double a2 = spec.detector2.coupling;
    const double sigma = spec.switching.width;
    const double g = spec.energy_gap;
    // |eta_hat(w)|^2 = 2 pi sigma^2 e^{-w^2 sigma^2}
    auto f = [&](double p) -> Complex {
        const double wfreq = p + g;
        return p * 2.0 * kPi * sigma * sigma * std::exp(-wfreq * wfreq * sigma * sigma);
    };
    const double p_max = g + 12.0 / sigma;
    const double val = integrate_1d(f, 0.0, p_max, spec.quadrature).value.real();
    return a2 * a2 * val / (4.0 * kPi * kPi);
}

namespace {

Complex coherence_term(const ScenarioSpec& spec, bool counter_rotating) {
    spec.validate();
    if (couple12(spec) == 0.0) return {0.0, 0.0};
    const Window w = effective_window(spec);
    const double L = spec.separation();
    const double g = spec.energy_gap;
    const double sign = counter_rotating ? -1.0 : 1.0; // D carries the overall minus

    if (spec.field.mass == 0.0) {
        // delta-collapse through the generic reduction machinery
        const auto support = commutator_distributional(L);
        auto smooth = [&](std::span<const double> t) -> Complex {
            const double t1 = t[0], t2 = t[1];
            const double phase = counter_rotating ? g * (t2 + t1) : g * (t2 - t1);
            return eval_switching(spec.switching, t1) * eval_switching(spec.switching, t2) *
                   std::exp(Complex{0.0, phase});
        };
        // commutator argument is t2 - t1 (first field at t2): axis = 1, other = 0
        auto collapsed = collapse_delta(smooth, support, 1, 0, 2, w.lo, w.hi);
        auto f1 = [&](double t1) -> Complex {
            const double v[] = {t1};
            return collapsed.f(std::span<const double>(v, 1));
        };
        const double hints[] = {w.lo + L, w.hi - L};
        auto res = integrate_1d(f1, w.lo, w.hi, spec.quadrature, hints, 2.0 * g);
        return sign * couple12(spec) * res.value;
    }

    // massive: eps-ladder over the ordered double integral
    std::vector<std::shared_ptr<WightmanTable>> keep;
    auto value_at_eps = [&](double eps) -> Complex {
        auto wfn = wightman_fn(spec, L, eps, keep);
        auto outer = [&](double t1) -> Complex {
            auto inner = [&](double t2) -> Complex {
                const double phase = counter_rotating ? g * (t2 + t1) : g * (t2 - t1);
                const Complex comm = wfn(t2 - t1) - std::conj(wfn(t2 - t1));
                return eval_switching(spec.switching, t2) * std::exp(Complex{0.0, phase}) * comm;
            };
            const double hints[] = {t1 - L};
            return eval_switching(spec.switching, t1) *
                   integrate_1d(inner, w.lo, t1, inner_policy(spec.quadrature), hints, 2.0 * g)
                       .value;
        };
        return integrate_1d(outer, w.lo, w.hi, spec.quadrature, {}, 2.0 * g).value;
    };
    auto [val, resid] = run_ladder(spec, value_at_eps);
    return sign * couple12(spec) * val;
}

} // namespace

Complex compute_C(const ScenarioSpec& spec) { return coherence_term(spec, false); }
Complex compute_D(const ScenarioSpec& spec) { return coherence_term(spec, true); }

namespace {

// The four delta-collapsed third-order blocks of the excited-gain term.
// Each is a 3D nested integral; W is the eps-regulated Wightman function at
// separation L and the commutator deltas have been absorbed analytically.
double gain_blocks(const ScenarioSpec& spec, double g, const WightmanFn& wfn) {
    const Window w = effective_window(spec);
    const double L = spec.separation();
    if (w.hi - w.lo <= L) return 0.0;
    const auto& pol = spec.quadrature;
    const QuadraturePolicy mid = inner_policy(pol);
    const QuadraturePolicy inner = inner_policy(mid);
    auto eta = [&](double t) { return eval_switching(spec.switching, t); };
    const double c = 1.0 / (2.0 * kPi * L);

    // block 1: t1 pinned to t3 + L; variables (t3, t2, t4)
    auto blk1 = [&]() -> double {
        auto f3 = [&](double t3) -> Complex {
            const double e3 = eta(t3) * eta(t3 + L);
            if (e3 == 0.0) return {};
            auto f2 = [&](double t2) -> Complex {
                const double e2 = eta(t2);
                if (e2 == 0.0) return {};
                const double cs = std::cos(g * (t3 + L - t2));
                auto f4 = [&](double t4) -> Complex {
                    const Complex ph = std::exp(Complex{0.0, -g * (t3 - t4)});
                    return eta(t4) * std::imag(ph * wfn(t4 - t2));
                };
                const double hints[] = {t2 - L};
                return e2 * cs * integrate_1d(f4, w.lo, t3, inner, hints, g).value;
            };
            return e3 * integrate_1d(f2, t3, std::min(t3 + L, w.hi), mid, {}, g).value;
        };
        return integrate_1d(f3, w.lo, w.hi - L, pol, {}, g).value.real();
    };

    // block 1 with t1 <-> t2: t2 pinned to t3 + L; variables (t3, t1, t4)
    auto blk1_12 = [&]() -> double {
        auto f3 = [&](double t3) -> Complex {
            const double e3 = eta(t3) * eta(t3 + L);
            if (e3 == 0.0) return {};
            auto f1 = [&](double t1) -> Complex {
                const double e1 = eta(t1);
                if (e1 == 0.0) return {};
                const double cs = std::cos(g * (t3 + L - t1));
                auto f4 = [&](double t4) -> Complex {
                    const Complex ph = std::exp(Complex{0.0, -g * (t3 - t4)});
                    return eta(t4) * std::imag(ph * wfn(t4 - t1));
                };
                const double hints[] = {t1 - L};
                return e1 * cs * integrate_1d(f4, w.lo, t3, inner, hints, g).value;
            };
            return e3 * integrate_1d(f1, t3 + L, w.hi, mid, {}, g).value;
        };
        return integrate_1d(f3, w.lo, w.hi - L, pol, {}, g).value.real();
    };

    // block 1 with t2 <-> t3: t1 pinned to t2 + L; variables (t2, t3, t4)
    auto blk1_23 = [&]() -> double {
        auto f2 = [&](double t2) -> Complex {
            const double e2 = eta(t2) * eta(t2 + L);
            if (e2 == 0.0) return {};
            auto f3 = [&](double t3) -> Complex {
                const double e3 = eta(t3);
                if (e3 == 0.0) return {};
                const double cs = std::cos(g * (t2 + L - t3));
                auto f4 = [&](double t4) -> Complex {
                    const Complex ph = std::exp(Complex{0.0, -g * (t2 - t4)});
                    return eta(t4) * std::imag(ph * wfn(t4 - t3));
                };
                const double hints[] = {t3 - L};
                return e3 * cs * integrate_1d(f4, w.lo, t3, inner, hints, g).value;
            };
            return e2 * integrate_1d(f3, w.lo, t2, mid, {}, g).value;
        };
        return integrate_1d(f2, w.lo, w.hi - L, pol, {}, g).value.real();
    };

    // sine block: t2 pinned to t1 - L; variables (t1, t3, t4)
    auto blk2 = [&]() -> double {
        auto f1 = [&](double t1) -> Complex {
            const double e1 = eta(t1) * eta(t1 - L);
            if (e1 == 0.0) return {};
            auto f3 = [&](double t3) -> Complex {
                const double e3 = eta(t3);
                if (e3 == 0.0) return {};
                const double sn = std::sin(g * (t1 - L - t3));
                auto f4 = [&](double t4) -> Complex {
                    const Complex ph = std::exp(Complex{0.0, -g * (t1 - t4)});
                    return eta(t4) * std::real(ph * wfn(t3 - t4));
                };
                const double hints[] = {t3 - L};
                return e3 * sn * integrate_1d(f4, w.lo, t3, inner, hints, g).value;
            };
            return e1 * integrate_1d(f3, w.lo, t1 - L, mid, {}, g).value;
        };
        return integrate_1d(f1, w.lo + L, w.hi, pol, {}, g).value.real();
    };

    return c * (blk1() + blk1_12() + blk1_23()) - c * blk2();
}

// one rung of the regulator-only route: ordered 4D integral with every
// commutator held at finite eps (realized through wfn)
double gain_blocks_eps(const ScenarioSpec& spec, double g, const WightmanFn& wfn) {
    const Window w = effective_window(spec);
    const double L = spec.separation();
    const auto& pol = spec.quadrature;
    QuadraturePolicy lv[4] = {pol, pol, pol, pol};
    for (int i = 1; i < 4; ++i) lv[i].abs_floor = lv[i - 1].abs_floor * 1e-1;
    auto eta = [&](double t) { return eval_switching(spec.switching, t); };
    auto comm = [&](double dt) -> Complex { return wfn(dt) - std::conj(wfn(dt)); };
    auto phase = [&](double x) { return std::exp(Complex{0.0, x}); };

    auto f1 = [&](double t1) -> Complex {
        const double e1 = eta(t1);
        if (e1 == 0.0) return {};
        auto f2 = [&](double t2) -> Complex {
            const double e2 = eta(t2);
            if (e2 == 0.0) return {};
            auto f3 = [&](double t3) -> Complex {
                const double e3 = eta(t3);
                if (e3 == 0.0) return {};
                auto f4 = [&](double t4) -> Complex {
                    const double e4 = eta(t4);
                    if (e4 == 0.0) return {};
                    const Complex b1 = std::cos(g * (t1 - t2)) * comm(t1 - t3) *
                                       (phase(-g * (t3 - t4)) * wfn(t4 - t2) -
                                        phase(g * (t3 - t4)) * wfn(t2 - t4));
                    const Complex b1_12 = std::cos(g * (t1 - t2)) * comm(t2 - t3) *
                                          (phase(-g * (t3 - t4)) * wfn(t4 - t1) -
                                           phase(g * (t3 - t4)) * wfn(t1 - t4));
                    const Complex b1_23 = std::cos(g * (t1 - t3)) * comm(t1 - t2) *
                                          (phase(-g * (t2 - t4)) * wfn(t4 - t3) -
                                           phase(g * (t2 - t4)) * wfn(t3 - t4));
                    const Complex b2 = Complex{0.0, 1.0} * std::sin(g * (t2 - t3)) *
                                       comm(t2 - t1) *
                                       (phase(-g * (t1 - t4)) * wfn(t3 - t4) +
                                        phase(g * (t1 - t4)) * wfn(t4 - t3));
                    return Complex{e4 * (b1 + b1_12 + b1_23 + b2).real(), 0.0};
                };
                const double h4[] = {t1 - L, t2 - L, t3 - L};
                return e3 * integrate_1d(f4, w.lo, t3, lv[3], h4, g).value;
            };
            const double h3[] = {t1 - L, t2 - L};
            return e2 * integrate_1d(f3, w.lo, t2, lv[2], h3, g).value;
        };
        const double h2[] = {t1 - L};
        return e1 * integrate_1d(f2, w.lo, t1, lv[1], h2, g).value;
    };
    return integrate_1d(f1, w.lo, w.hi, lv[0], {}, g).value.real();
}

// one rung of the regulator-only double-commutator piece of the ground gain
double double_commutator_eps(const ScenarioSpec& spec, double g, const WightmanFn& wfn) {
    const Window w = effective_window(spec);
    const double L = spec.separation();
    const auto& pol = spec.quadrature;
    QuadraturePolicy lv[4] = {pol, pol, pol, pol};
    for (int i = 1; i < 4; ++i) lv[i].abs_floor = lv[i - 1].abs_floor * 1e-1;
    auto eta = [&](double t) { return eval_switching(spec.switching, t); };
    auto comm = [&](double dt) -> Complex { return wfn(dt) - std::conj(wfn(dt)); };

    auto f1 = [&](double t1) -> Complex {
        const double e1 = eta(t1);
        if (e1 == 0.0) return {};
        auto f2 = [&](double t2) -> Complex {
            const double e2 = eta(t2);
            if (e2 == 0.0) return {};
            const Complex c21 = comm(t2 - t1);
            auto f3 = [&](double t3) -> Complex {
                const double e3 = eta(t3);
                if (e3 == 0.0) return {};
                const double s23 = std::sin(g * (t2 - t3));
                auto f4 = [&](double t4) -> Complex {
                    const Complex v =
                        s23 * std::sin(g * (t1 - t4)) * c21 * comm(t4 - t3);
                    return Complex{eta(t4) * v.real(), 0.0};
                };
                const double h4[] = {t3 - L};
                return e3 * integrate_1d(f4, w.lo, t3, lv[3], h4, g).value;
            };
            const double h3[] = {t2 - L};
            return e2 * integrate_1d(f3, w.lo, t2, lv[2], h3, g).value;
        };
        const double h2[] = {t1 - L};
        return e1 * integrate_1d(f2, w.lo, t1, lv[1], h2, g).value;
    };
    return integrate_1d(f1, w.lo, w.hi, lv[0], {}, g).value.real();
}

// double-commutator piece of the ground-gain term, fully collapsed to 2D
double double_commutator_piece(const ScenarioSpec& spec, double g) {
    const Window w = effective_window(spec);
    const double L = spec.separation();
    if (w.hi - w.lo <= 2.0 * L) return 0.0;
    auto eta = [&](double t) { return eval_switching(spec.switching, t); };
    auto f1 = [&](double t1) -> Complex {
        const double e1 = eta(t1) * eta(t1 - L);
        if (e1 == 0.0) return {};
        auto f3 = [&](double t3) -> Complex {
            return eta(t3) * eta(t3 - L) * std::sin(g * (t1 - L - t3)) *
                   std::sin(g * (t1 - t3 + L));
        };
        return e1 * integrate_1d(f3, w.lo + L, t1 - L, inner_policy(spec.quadrature), {}, 2.0 * g)
                        .value;
    };
    const double v =
        integrate_1d(f1, w.lo + 2.0 * L, w.hi, spec.quadrature, {}, 2.0 * g).value.real();
    return 4.0 * couple12(spec) * couple12(spec) * (-1.0 / (16.0 * kPi * kPi * L * L)) * v;
}

} // namespace

double compute_A_signed(const ScenarioSpec& spec, double gap) {
    spec.validate();
    if (couple12(spec) == 0.0) return 0.0;
    if (spec.field.mass > 0.0) return compute_A_signed_eps(spec, gap);
    const double L = spec.separation();
    const Window w = effective_window(spec);
    if (spec.switching.has_compact_support() && w.hi - w.lo < L) return 0.0;

    std::vector<std::shared_ptr<WightmanTable>> keep;
    auto value_at_eps = [&](double eps) -> Complex {
        auto wfn = wightman_fn(spec, L, eps, keep);
        return Complex{gain_blocks(spec, gap, wfn), 0.0};
    };
    auto [val, resid] = run_ladder(spec, value_at_eps);
    const double pref = 2.0 * couple12(spec) * couple12(spec);
    return pref * val.real();
}

double compute_A_signed_eps(const ScenarioSpec& spec, double gap) {
    spec.validate();
    if (couple12(spec) == 0.0) return 0.0;
    const double L = spec.separation();
    std::vector<std::shared_ptr<WightmanTable>> keep;
    auto value_at_eps = [&](double eps) -> Complex {
        auto wfn = wightman_fn(spec, L, eps, keep);
        return Complex{gain_blocks_eps(spec, gap, wfn), 0.0};
    };
    auto [val, resid] = run_ladder(spec, value_at_eps);
    return 2.0 * couple12(spec) * couple12(spec) * val.real();
}

double compute_A(const ScenarioSpec& spec) { return compute_A_signed(spec, spec.energy_gap); }

double compute_B(const ScenarioSpec& spec) {
    if (couple12(spec) == 0.0) {
        spec.validate();
        return 0.0;
    }
    const double a_neg = compute_A_signed(spec, -spec.energy_gap);
    if (spec.field.mass > 0.0) {
        const double L = spec.separation();
        std::vector<std::shared_ptr<WightmanTable>> keep;
        auto value_at_eps = [&](double eps) -> Complex {
            auto wfn = wightman_fn(spec, L, eps, keep);
            return Complex{double_commutator_eps(spec, spec.energy_gap, wfn), 0.0};
        };
        auto [val, resid] = run_ladder(spec, value_at_eps);
        return a_neg + 4.0 * couple12(spec) * couple12(spec) * val.real();
    }
    return a_neg + double_commutator_piece(spec, spec.energy_gap);
}

ChannelParams compute_params(const ScenarioSpec& spec) {
    spec.validate();
    ChannelParams p;
    double resid = 0.0;
    auto step = [&](auto&& fn) {
        g_last_residual = 0.0;
        auto v = fn();
        resid = std::max(resid, g_last_residual);
        return v;
    };
    p.excitation_noise = step([&] { return compute_Pe(spec); });
    p.gain_excited = step([&] { return compute_A(spec); });
    p.gain_ground = step([&] { return compute_B(spec); });
    p.coherence_direct = step([&] { return compute_C(spec); });
    p.coherence_counter = step([&] { return compute_D(spec); });
    p.convergence.ladder_residual = resid;
    const double scale = std::max({p.excitation_noise, std::abs(p.gain_excited),
                                   std::abs(p.gain_ground), std::abs(p.coherence_direct),
                                   std::abs(p.coherence_counter)});
    p.convergence.error_estimate = resid + spec.quadrature.rel_tol * scale;
    p.convergence.weak_coupling_warning =
        std::max(spec.detector1.coupling, spec.detector2.coupling) > 0.3;
    p.validate();
    return p;
}

double fermi_probability(const ScenarioSpec& spec) {
    spec.validate();
    if (couple12(spec) == 0.0) return 0.0;
    const Window w = effective_window(spec);
    const double L = spec.separation();
    const double g = spec.energy_gap;
    const double m = spec.field.mass;
    std::vector<std::shared_ptr<WightmanTable>> keep;

    auto value_at_eps = [&](double eps) -> Complex {
        auto wfn = wightman_fn(spec, L, eps, keep);
        auto outer = [&](double t1) -> Complex {
            auto inner = [&](double t2) -> Complex {
                return eval_switching(spec.switching, t2) *
                       std::exp(Complex{0.0, g * (t2 - t1)}) * wfn(std::abs(t1 - t2));
            };
            const double hints[] = {t1 - L, t1 + L, t1};
            return eval_switching(spec.switching, t1) *
                   integrate_1d(inner, w.lo, w.hi, inner_policy(spec.quadrature), hints, g).value;
        };
        return integrate_1d(outer, w.lo, w.hi, spec.quadrature, {}, g).value;
    };
    (void)m;
    auto [amp, resid] = run_ladder(spec, value_at_eps);
    const Complex full = couple12(spec) * amp;
    return std::norm(full);
}

Complex glauber_leakage(const ScenarioSpec& spec) {
    spec.validate();
    if (couple12(spec) == 0.0) return {0.0, 0.0};
    const Window w = effective_window(spec);
    const double L = spec.separation();
    const double g = spec.energy_gap;
    std::vector<std::shared_ptr<WightmanTable>> keep;

    auto value_at_eps = [&](double eps) -> Complex {
        auto wfn = wightman_fn(spec, L, eps, keep);
        auto outer = [&](double t1) -> Complex {
            auto inner = [&](double t2) -> Complex {
                return eval_switching(spec.switching, t2) *
                       std::exp(Complex{0.0, g * (t1 - t2)}) * wfn(t1 - t2);
            };
            const double hints[] = {t1 - L};
            return eval_switching(spec.switching, t1) *
                   integrate_1d(inner, w.lo, t1, inner_policy(spec.quadrature), hints, g).value;
        };
        return integrate_1d(outer, w.lo, w.hi, spec.quadrature, {}, g).value;
    };
    auto [val, resid] = run_ladder(spec, value_at_eps);
    return -couple12(spec) * val;
}

} // namespace fieldlink

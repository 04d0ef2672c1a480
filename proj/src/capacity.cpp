#include "fieldlink/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>

namespace fieldlink {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double h2_bits(double x) { return binary_entropy(x) / kLn2; }

double entropy_bits(std::span<const double> eigs) {
    double s = 0.0;
    for (double l : eigs) {
        if (l > 1e-300) s -= l * std::log2(l);
    }
    return s;
}

// objective of the induced binary asymmetric channel, in bits
double mutual_info_bits(const ChannelParams& p, double p1) {
    const double pe = p.excitation_noise, a = p.gain_excited, b = p.gain_ground;
    const double q = pe + b + p1 * (a - b);
    return h2_bits(q) - p1 * h2_bits(pe + a) - (1.0 - p1) * h2_bits(pe + b);
}

double coherent_objective(const ChannelParams& p, const std::vector<Matrix2>& ks, double x,
                          double y, double z) {
    double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1.0) {
        x /= n;
        y /= n;
        z /= n;
    }
    const Matrix2 rho = density_from_bloch(x, y, z);
    const Matrix2 out = apply_channel(p, rho);
    const Matrix4 env = complementary_apply(p, rho);
    auto e2 = hermitian_eigenvalues(out);
    auto e4 = hermitian_eigenvalues(env);
    for (auto& v : e2) v = std::max(v, 0.0);
    for (auto& v : e4) v = std::max(v, 0.0);
    (void)ks;
    return entropy_bits(e2) - entropy_bits(e4);
}

} // namespace

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("binary_entropy: argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}

CapacityResult classical_capacity(const ChannelParams& p, double window_length) {
    p.validate();
    CapacityResult r;
    if (std::abs(p.gain_excited - p.gain_ground) < 1e-12) {
        r.degenerate = true;
        r.optimal_prior = 0.5;
        return r;
    }
    // golden-section on the concave bracket
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = mutual_info_bits(p, c), fd = mutual_info_bits(p, d);
    int it = 0;
    while (hi - lo > 1e-12 && it < 200) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = mutual_info_bits(p, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = mutual_info_bits(p, d);
        }
        ++it;
    }
    r.optimal_prior = 0.5 * (lo + hi);
    r.capacity_bits = std::max({mutual_info_bits(p, r.optimal_prior), mutual_info_bits(p, 0.0),
                                mutual_info_bits(p, 1.0), 0.0});
    r.capacity_nats = r.capacity_bits * kLn2;
    r.iterations = it;
    r.bracket_width = hi - lo;
    if (window_length > 0.0) r.rate_bits_per_time = r.capacity_bits / window_length;
    return r;
}

double closed_form_prior(const ChannelParams& p) {
    const double pe = p.excitation_noise, a = p.gain_excited, b = p.gain_ground;
    if (std::abs(a - b) < 1e-14) throw std::domain_error("closed_form_prior: A = B degenerate");
    const double rhs = (h2_bits(pe + b) - h2_bits(pe + a)) / (a - b);
    // g(w) = w - log2(1 - 2^w) is strictly increasing on w < 0
    auto g = [](double w) { return w - std::log2(1.0 - std::exp2(w)); };
    double lo = -60.0, hi = -1e-13;
    if (g(lo) > rhs || g(hi) < rhs)
        throw std::runtime_error("closed_form_prior: root not bracketed (rhs=" +
                                 std::to_string(rhs) + ")");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < rhs ? lo : hi) = mid;
    }
    const double w = 0.5 * (lo + hi);
    return (std::exp2(w) - pe - b) / (a - b);
}

CoherentInfoResult coherent_information_single_use(const ChannelParams& p, unsigned seed,
                                                   int restarts) {
    p.validate();
    const auto ks = kraus_set(p);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    auto obj = [&](const std::array<double, 3>& v) {
        return -coherent_objective(p, ks, v[0], v[1], v[2]);
    };

    CoherentInfoResult best;
    best.value = -1e300;
    for (int rs = 0; rs < restarts; ++rs) {
        // Nelder-Mead from a random point in the ball
        std::array<double, 3> x0{};
        do {
            for (auto& v : x0) v = uni(rng);
        } while (x0[0] * x0[0] + x0[1] * x0[1] + x0[2] * x0[2] > 1.0);

        std::array<std::array<double, 3>, 4> simplex;
        simplex[0] = x0;
        for (int i = 1; i < 4; ++i) {
            simplex[static_cast<size_t>(i)] = x0;
            simplex[static_cast<size_t>(i)][static_cast<size_t>(i - 1)] += 0.2;
        }
        std::array<double, 4> fv;
        for (int i = 0; i < 4; ++i) fv[static_cast<size_t>(i)] = obj(simplex[static_cast<size_t>(i)]);

        for (int iter = 0; iter < 400; ++iter) {
            std::array<int, 4> idx{0, 1, 2, 3};
            std::sort(idx.begin(), idx.end(),
                      [&](int a, int b2) { return fv[static_cast<size_t>(a)] < fv[static_cast<size_t>(b2)]; });
            if (fv[static_cast<size_t>(idx[3])] - fv[static_cast<size_t>(idx[0])] < 1e-10) break;

            std::array<double, 3> centroid{};
            for (int k = 0; k < 3; ++k)
                for (int j = 0; j < 3; ++j)
                    centroid[static_cast<size_t>(j)] +=
                        simplex[static_cast<size_t>(idx[static_cast<size_t>(k)])][static_cast<size_t>(j)] / 3.0;
            auto& worst = simplex[static_cast<size_t>(idx[3])];
            auto& fworst = fv[static_cast<size_t>(idx[3])];

            auto mix = [&](double t) {
                std::array<double, 3> r;
                for (int j = 0; j < 3; ++j)
                    r[static_cast<size_t>(j)] = centroid[static_cast<size_t>(j)] +
                                                t * (centroid[static_cast<size_t>(j)] - worst[static_cast<size_t>(j)]);
                return r;
            };
            auto refl = mix(1.0);
            const double frefl = obj(refl);
            if (frefl < fv[static_cast<size_t>(idx[0])]) {
                auto expd = mix(2.0);
                const double fexp = obj(expd);
                if (fexp < frefl) {
                    worst = expd;
                    fworst = fexp;
                } else {
                    worst = refl;
                    fworst = frefl;
                }
            } else if (frefl < fv[static_cast<size_t>(idx[2])]) {
                worst = refl;
                fworst = frefl;
            } else {
                auto contr = mix(-0.5);
                const double fcon = obj(contr);
                if (fcon < fworst) {
                    worst = contr;
                    fworst = fcon;
                } else {
                    // shrink towards the best vertex
                    for (int k = 1; k < 4; ++k) {
                        auto& v = simplex[static_cast<size_t>(idx[static_cast<size_t>(k)])];
                        const auto& b0 = simplex[static_cast<size_t>(idx[0])];
                        for (int j = 0; j < 3; ++j)
                            v[static_cast<size_t>(j)] =
                                0.5 * (v[static_cast<size_t>(j)] + b0[static_cast<size_t>(j)]);
                        fv[static_cast<size_t>(idx[static_cast<size_t>(k)])] = obj(v);
                    }
                }
            }
        }
        for (int i = 0; i < 4; ++i) {
            const double val = -fv[static_cast<size_t>(i)];
            if (val > best.value) {
                best.value = val;
                for (int j = 0; j < 3; ++j)
                    best.bloch[j] = simplex[static_cast<size_t>(i)][static_cast<size_t>(j)];
            }
        }
    }
    const double n = std::sqrt(best.bloch[0] * best.bloch[0] + best.bloch[1] * best.bloch[1] +
                               best.bloch[2] * best.bloch[2]);
    if (n > 1.0)
        for (auto& v : best.bloch) v /= n;
    best.value_clamped = std::max(best.value, 0.0);
    best.restarts = restarts;
    return best;
}

} // namespace fieldlink

#include "fieldlink/channel_algebra.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace fieldlink {

namespace {

using EMat2 = Eigen::Matrix2cd;
using EMat4 = Eigen::Matrix4cd;

EMat2 to_eigen(const Matrix2& m) {
    EMat2 e;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) e(i, j) = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return e;
}

Matrix2 from_eigen(const EMat2& e) {
    Matrix2 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = e(i, j);
    return m;
}

Matrix4 from_eigen(const EMat4& e) {
    Matrix4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = e(i, j);
    return m;
}

// linear extension of the affine map: on trace-one inputs this reproduces the
// parameter form theta' = P_e + A theta + B beta, gamma' = C gamma + D* gamma^*
EMat2 extend_linear(const ChannelParams& p, const EMat2& x) {
    const double pe = p.excitation_noise, a = p.gain_excited, b = p.gain_ground;
    const Complex c = p.coherence_direct, d = p.coherence_counter;
    EMat2 out;
    out(0, 0) = (pe + a) * x(0, 0) + (pe + b) * x(1, 1);
    out(1, 1) = (1.0 - pe - a) * x(0, 0) + (1.0 - pe - b) * x(1, 1);
    out(0, 1) = c * x(0, 1) + std::conj(d) * x(1, 0);
    out(1, 0) = std::conj(c) * x(1, 0) + d * x(0, 1);
    return out;
}

} // namespace

Matrix2 density_from_bloch(double x, double y, double z) {
    Matrix2 m;
    m[0][0] = 0.5 * (1.0 + z);
    m[1][1] = 0.5 * (1.0 - z);
    m[0][1] = 0.5 * Complex{x, -y};
    m[1][0] = 0.5 * Complex{x, y};
    return m;
}

bool is_density_matrix(const Matrix2& rho, double tol) {
    const EMat2 e = to_eigen(rho);
    if ((e - e.adjoint()).norm() > tol) return false;
    if (std::abs(e.trace().real() - 1.0) > tol || std::abs(e.trace().imag()) > tol) return false;
    Eigen::SelfAdjointEigenSolver<EMat2> es(e);
    return es.eigenvalues().minCoeff() > -tol;
}

Matrix2 apply_channel(const ChannelParams& p, const Matrix2& rho) {
    const EMat2 out = extend_linear(p, to_eigen(rho));
    Eigen::SelfAdjointEigenSolver<EMat2> es(out);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw PhysicsError("channel parameters nonphysical for this input");
    return from_eigen(out);
}

std::vector<Matrix2> kraus_set(const ChannelParams& p) {
    const double pe = p.excitation_noise, a = p.gain_excited, b = p.gain_ground;
    const Complex c = p.coherence_direct, d = p.coherence_counter;
    const double den1 = 1.0 - pe - b;
    const double den3 = 1.0 - pe - a;
    if (den1 <= 1e-14 || den3 <= 1e-14)
        throw PhysicsError("Kraus denominator degenerate: outside the weak-coupling regime");
    const double r2 = pe + a - std::norm(c) / den1;
    const double r4 = pe + b - std::norm(d) / den3;
    if (r2 < -1e-12 || r4 < -1e-12) throw PhysicsError("Kraus radicand negative");

    Matrix2 e1{}, e2{}, e3{}, e4{};
    e1[0][0] = c / std::sqrt(den1);
    e1[1][1] = std::sqrt(den1);
    e2[0][0] = std::sqrt(std::max(r2, 0.0));
    e3[0][1] = std::conj(d) / std::sqrt(den3);
    e3[1][0] = std::sqrt(den3);
    e4[0][1] = std::sqrt(std::max(r4, 0.0));
    return {e1, e2, e3, e4};
}

Matrix2 apply_kraus(const std::vector<Matrix2>& ks, const Matrix2& rho) {
    const EMat2 r = to_eigen(rho);
    EMat2 out = EMat2::Zero();
    for (const auto& k : ks) {
        const EMat2 e = to_eigen(k);
        out += e * r * e.adjoint();
    }
    return from_eigen(out);
}

Matrix4 choi_matrix(const ChannelParams& p) {
    // J = (1/2) sum_{a,b} |a><b| (x) Xi(|a><b|), basis (|ee>,|eg>,|ge>,|gg>)
    EMat4 j = EMat4::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            EMat2 unit = EMat2::Zero();
            unit(a, b) = 1.0;
            const EMat2 block = extend_linear(p, unit);
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k) j(2 * a + i, 2 * b + k) = 0.5 * block(i, k);
        }
    return from_eigen(j);
}

int choi_rank(const ChannelParams& p, double tol) {
    const Matrix4 j = choi_matrix(p);
    EMat4 e;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            e(i, k) = j[static_cast<size_t>(i)][static_cast<size_t>(k)];
    Eigen::SelfAdjointEigenSolver<EMat4> es(e);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    int rank = 0;
    for (int i = 0; i < 4; ++i)
        if (std::abs(es.eigenvalues()(i)) > tol * scale) ++rank;
    return rank;
}

Matrix4 complementary_apply(const ChannelParams& p, const Matrix2& rho) {
    const auto ks = kraus_set(p);
    const EMat2 r = to_eigen(rho);
    EMat4 out;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            const EMat2 ej = to_eigen(ks[static_cast<size_t>(j)]);
            const EMat2 ek = to_eigen(ks[static_cast<size_t>(k)]);
            out(j, k) = (ek * r * ej.adjoint()).trace();
        }
    return from_eigen(out);
}

std::array<double, 2> hermitian_eigenvalues(const Matrix2& m) {
    Eigen::SelfAdjointEigenSolver<EMat2> es(to_eigen(m));
    return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

std::array<double, 4> hermitian_eigenvalues(const Matrix4& m) {
    EMat4 e;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            e(i, j) = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
    Eigen::SelfAdjointEigenSolver<EMat4> es(e);
    return {es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2), es.eigenvalues()(3)};
}

double trace_real(const Matrix2& m) { return (m[0][0] + m[1][1]).real(); }
double trace_real(const Matrix4& m) {
    return (m[0][0] + m[1][1] + m[2][2] + m[3][3]).real();
}

} // namespace fieldlink

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "fieldlink/channel_params.hpp"

namespace fieldlink {

/// Column-major dense Hermitian-ish matrix helpers over 2x2 / 4x4 qubit spaces.
using Matrix2 = std::array<std::array<Complex, 2>, 2>;
using Matrix4 = std::array<std::array<Complex, 4>, 4>;

Matrix2 density_from_bloch(double x, double y, double z);
bool is_density_matrix(const Matrix2& rho, double tol = 1e-9);

/// Action of the detector-to-detector channel on a receiver qubit state,
/// expressed directly through the channel parameters (perturbative, retained
/// to second order in the couplings).
Matrix2 apply_channel(const ChannelParams& p, const Matrix2& rho);

/// Kraus representation of the same map: four operators E1..E4 with
/// sum_k E_k^dagger E_k = 1 to working precision.
std::vector<Matrix2> kraus_set(const ChannelParams& p);

Matrix2 apply_kraus(const std::vector<Matrix2>& ks, const Matrix2& rho);

/// Choi matrix J = (id x Xi)(|Phi+><Phi+|), normalized to trace one.
Matrix4 choi_matrix(const ChannelParams& p);

/// Numerical rank of the Choi matrix at the given tolerance.
int choi_rank(const ChannelParams& p, double tol = 1e-10);

/// Complementary channel output (environment side):
/// (Xi^C(rho))_{jk} = Tr(E_k rho E_j^dagger).
Matrix4 complementary_apply(const ChannelParams& p, const Matrix2& rho);

/// Eigenvalues (ascending) of a Hermitian 2x2 / 4x4 matrix.
std::array<double, 2> hermitian_eigenvalues(const Matrix2& m);
std::array<double, 4> hermitian_eigenvalues(const Matrix4& m);

double trace_real(const Matrix2& m);
double trace_real(const Matrix4& m);

} // namespace fieldlink

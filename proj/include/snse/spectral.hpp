// spectral.hpp
// Eigenbasis of the Laplacian on the supported domains, spectral/physical
// transforms, the free Schroedinger group, Galerkin projection and norms.
//
// Two domains are supported:
//   * Sine  — Dirichlet interval (0,pi), basis e_j = sqrt(2/pi) sin(j x),
//             eigenvalues j^2, DST-I collocation grid x_m = m pi/(J+1).
//   * Torus — periodic [0,2pi)^d, basis e_k = exp(i k.x)/(2pi)^{d/2},
//             eigenvalues |k|^2, uniform FFT grid.
//
// Both discretizations are exactly unitary between coefficients and grid
// values (discrete Parseval), so the L2 norm is the same number in either
// representation.

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace snse {

using cplx = std::complex<double>;

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Domain { Sine, Torus };

enum class TransformDirection { ToPhysical, ToSpectral };

class SpectralBasis {
  public:
    // J must be a power of two >= 2; d in {1,2}; 2-D requires the torus.
    SpectralBasis(Domain domain, int dim, int J);

    Domain domain() const { return domain_; }
    int dim() const { return dim_; }
    int modes_per_axis() const { return J_; }
    int n_modes() const { return n_modes_; }
    int n_grid() const { return n_grid_; }

    double quad_weight() const { return quad_weight_; }
    double measure() const { return measure_; }

    // Eigenvalue of the coefficient slot `flat` (basis-internal layout).
    double eigenvalue(int flat) const { return eigenvalue_[flat]; }
    const std::vector<double>& eigenvalues() const { return eigenvalue_; }

    // Wave-vector of a coefficient slot; sine modes report {j, 0}.
    std::array<int, 2> wave_vector(int flat) const;

    // Modes sorted by increasing eigenvalue, lexicographic wave-vector
    // tie-break. rank r in [0, n_modes) maps to a coefficient slot.
    const std::vector<int>& sorted_modes() const { return sorted_; }
    int rank_of(int flat) const { return rank_of_[flat]; }

    // Largest eigenvalue among the first M retained modes.
    double lambda_M(int M) const;

    // Coordinates of grid point m.
    std::array<double, 2> grid_point(int m) const;

    void to_grid(const std::vector<cplx>& coeffs, std::vector<cplx>& values) const;
    void to_coeffs(const std::vector<cplx>& values, std::vector<cplx>& coeffs) const;

    // Transforms through an oversampled grid (pad >= 1 copies per axis);
    // used for dealiased evaluation of pointwise products.
    int padded_grid_size(int pad) const;
    void to_grid_padded(const std::vector<cplx>& coeffs, int pad, std::vector<cplx>& values) const;
    void to_coeffs_padded(const std::vector<cplx>& values, int pad, std::vector<cplx>& coeffs) const;

  private:
    Domain domain_;
    int dim_;
    int J_;
    int n_modes_;
    int n_grid_;
    double quad_weight_;
    double measure_;
    std::vector<double> eigenvalue_;
    std::vector<int> sorted_;
    std::vector<int> rank_of_;
    std::vector<double> dst_;  // sine: n_grid x n_modes sample table

    int torus_wave(int i) const { return i < J_ / 2 ? i : i - J_; }
};

// Complex state in spectral coefficients tied to a basis. A field that
// overflowed keeps its (possibly non-finite) payload but is flagged; norms
// of a flagged field report +infinity.
class Field {
  public:
    Field() : basis_(nullptr) {}
    explicit Field(const SpectralBasis& basis)
        : basis_(&basis), coeffs_(basis.n_modes(), cplx(0.0, 0.0)) {}
    Field(const SpectralBasis& basis, std::vector<cplx> coeffs);

    const SpectralBasis& basis() const { return *basis_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    std::vector<cplx>& coeffs() { return coeffs_; }

    bool overflowed() const { return overflowed_; }
    void mark_overflowed() { overflowed_ = true; }

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(cplx scale);

  private:
    const SpectralBasis* basis_;
    std::vector<cplx> coeffs_;
    bool overflowed_ = false;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx scale, Field a);

// transform(field, direction): grid values are carried in a plain vector.
std::vector<cplx> to_physical(const Field& field);
Field to_spectral(const SpectralBasis& basis, const std::vector<cplx>& values);

// Free Schroedinger flow S(t): coefficient j multiplied by exp(-i lambda_j t).
Field free_flow(const Field& field, double t);

// Galerkin projection onto the first M modes in eigenvalue order.
Field project_modes(const Field& field, int M);

double l2_norm(const Field& field);
double hs_norm(const Field& field, double s);   // weights (1 + lambda_j)^s
double lp_norm(const Field& field, double p);   // collocation-grid quadrature
double linf_norm(const Field& field);

enum class NormKind { L2, Hs, Lp, Linf };
double norm(const Field& field, NormKind kind, double param = 0.0);

// Pointwise power nonlinearity i*lambda*|u|^{2 sigma} u mapped back to basis
// coefficients. With dealias set, the product is evaluated on a grid
// oversampled by (sigma+1) so retained modes are alias-free.
Field nonlinearity(const Field& field, int sigma, double lambda, bool dealias);

bool finite(const Field& field);

}  // namespace snse

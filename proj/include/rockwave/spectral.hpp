#pragma once

#include "rockwave/graded.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace rockwave {

using cplx = std::complex<double>;

/// Uniform periodic grid on a box centered at the origin, row-major storage.
/// Point counts are powers of two per axis.
struct Grid {
    std::vector<int> dims;
    std::vector<double> box;

    Grid(std::vector<int> dims_, std::vector<double> box_);

    int rank() const { return static_cast<int>(dims.size()); }
    std::size_t total() const;
    double cell_volume() const;
    double volume() const;

    /// Physical coordinate of index i along an axis: -L/2 + i*L/N.
    double coord(int axis, int index) const;
    /// Signed integer mode of storage index i along an axis (FFT layout).
    int mode(int axis, int index) const;
    /// Angular frequency 2*pi*mode/L.
    double freq(int axis, int index) const;

    /// Unflatten a storage index.
    void unravel(std::size_t flat, std::span<int> idx) const;

    /// Symbol a(xi) evaluated at every grid frequency.
    std::vector<double> symbol_table(const GradedStructure& gs) const;
    /// Two-thirds dealiasing mask (1 keeps the mode).
    std::vector<std::uint8_t> dealias_mask() const;
};

/// FFTW transform pair bound to one grid. Forward maps a real field to
/// normalized coefficients (1/N_total convention); inverse is its exact
/// inverse and checks the reconstructed field is real.
class Fft {
public:
    explicit Fft(const Grid& g);
    ~Fft();
    Fft(Fft&&) noexcept;
    Fft& operator=(Fft&&) = delete;
    Fft(const Fft&) = delete;

    std::vector<cplx> forward(std::span<const double> field);
    /// Throws when the imaginary residue exceeds 1e-10 relative.
    std::vector<double> inverse(std::span<const cplx> coeffs);
    /// Inverse without the realness check, returning the raw complex field.
    std::vector<cplx> inverse_complex(std::span<const cplx> coeffs);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Spectral state of one simulated trajectory.
struct SpectralState {
    Grid grid;
    std::vector<cplx> uhat, vhat;
};

/// Largest deviation from the Hermitian pairing conj(u(-k)) = u(k).
double hermitian_defect(const Grid& g, std::span<const cplx> coeffs);

enum class SobolevKind { homogeneous, inhomogeneous };

/// Spectral Sobolev norm of order s driven by the symbol:
/// multiplier a(xi)^(s/nu) (homogeneous) or (1+a(xi))^(s/nu) (inhomogeneous).
/// Homogeneous norms of negative order require a vanishing zero mode.
double sobolev_norm(const Grid& g, const GradedStructure& gs,
                    std::span<const cplx> coeffs, double s,
                    SobolevKind kind = SobolevKind::homogeneous);

/// Grid L^q norm, q >= 1.
double lp_norm(const Grid& g, std::span<const double> field, double q);

/// Interpolation-inequality probe: ||u||_{L^q} / (|u|_{H^s}^theta ||u||_{L^2}^{1-theta})
/// with theta = (1/2 - 1/q) Q / s. Enforces 2 <= q <= 2Q/(Q-2s) when Q > 2s.
double gn_ratio(const Grid& g, const GradedStructure& gs,
                std::span<const double> field, double q, double s);

/// Flat binary field snapshot (header: magic, rank, counts, box; then
/// float64 row-major payload).
void write_field(const std::string& path, const Grid& g, std::span<const double> field);
std::pair<Grid, std::vector<double>> read_field(const std::string& path);

} // namespace rockwave

#ifndef LOSTWORK_MICRODYN_HPP
#define LOSTWORK_MICRODYN_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lostwork/thermo.hpp"

namespace lw::dyn {

/// Phase-space point with fixed capacity (dim <= 6); avoids per-step
/// allocation in long orbits.
class Vec {
public:
    static constexpr int kMaxDim = 6;

    Vec() = default;
    explicit Vec(int n) : n_(n) {}
    Vec(std::initializer_list<double> xs) {
        for (double x : xs) x_[n_++] = x;
    }

    int size() const { return n_; }
    double& operator[](int i) { return x_[i]; }
    double operator[](int i) const { return x_[i]; }
    bool operator==(const Vec&) const = default;

private:
    std::array<double, kMaxDim> x_{};
    int n_ = 0;
};

/// Small dense square matrix (dim <= 6).
class Mat {
public:
    Mat() = default;
    explicit Mat(int n) : n_(n) {}

    int size() const { return n_; }
    double& operator()(int i, int j) { return a_[i * n_ + j]; }
    double operator()(int i, int j) const { return a_[i * n_ + j]; }

    /// Determinant by LU with partial pivoting.
    double det() const;

private:
    std::array<double, Vec::kMaxDim * Vec::kMaxDim> a_{};
    int n_ = 0;
};

struct Interval {
    double lo = 0, hi = 0;
};

/// A differentiable discrete-time map with Jacobian access. `smooth_at`
/// (when set) marks points safely away from branch cuts and mod-1 wraps,
/// where finite-difference Jacobian checks are meaningful.
struct MapSystem {
    std::string name;
    int dim = 0;
    std::function<Vec(const Vec&)> step;
    std::function<Mat(const Vec&)> jacobian;
    std::vector<Interval> domain;
    std::function<bool(const Vec&)> smooth_at;  // null = smooth everywhere
};

/// Finite-time Birkhoff estimate of an observable plus convergence
/// diagnostics. halves are the first-half / second-half means of the
/// post-burn-in samples; std_error treats samples as independent.
struct OrbitStats {
    long long T = 0;
    long long burn_in = 0;
    double mean = 0;
    std::pair<double, double> halves{0, 0};
    double std_error = 0;
};

// ---- shipped map zoo -------------------------------------------------------

/// Arnold cat map on [0,1)^2: (x, y) -> (2x + y, x + y) mod 1. Area
/// preserving, so its contraction is identically zero.
MapSystem cat_map();

/// 1-D linear map x -> a x on [-1, 1]; constant contraction -ln|a|.
MapSystem linear_map(double a = 0.5);

/// Dissipative baker map on [0,1]^2 with branch contraction factors r1, r2
/// (r1, r2 > 0, r1 + r2 <= 1):
///   x < 1/2 : (2x,     r1 y)
///   x >= 1/2: (2x - 1, r2 y + 1 - r2)
/// Contraction is -ln(2 r_i) on branch i.
MapSystem baker_map(double r1 = 0.3, double r2 = 0.2);

// ---- operations ------------------------------------------------------------

/// Per-step phase-space contraction Sigma(sigma) = -ln |det J_S(sigma)|;
/// positive where the map contracts volume.
double phase_contraction(const MapSystem& m, const Vec& sigma);

/// Time average of `observable` along the orbit of sigma0, discarding
/// `burn_in` steps and averaging the next T - burn_in. Deterministic given
/// (m, sigma0, T, burn_in). Throws `orbit_escaped` if the orbit leaves the
/// domain box.
OrbitStats birkhoff_average(const MapSystem& m, Vec sigma0,
                            const std::function<double(const Vec&)>& observable,
                            long long T, long long burn_in);

/// Bath-side entropy production Sigma_prod = sum_i Qdot_i / (k_B T_i), 1/s.
double entropy_production_baths(const std::vector<thermo::HeatBath>& baths);

/// Stationary bridge between entropy generation and entropy production:
/// returns Sdot_g + k_B * Sigma_prod, which is zero to round-off whenever the
/// snapshot is stationary and stream entropy flows balance. Throws
/// `bridge_premises_unmet` otherwise.
double bridge_check(const thermo::SystemSnapshot& snap);

/// SRB expectation of the contraction estimated along one orbit
/// (per-step, dimensionless).
double entropy_production_contraction(const MapSystem& m, const Vec& sigma0,
                                      long long T, long long burn_in);

// ---- sampled-point diagnostics ---------------------------------------------

Vec random_point(const MapSystem& m, std::mt19937_64& rng);

/// Max over sampled smooth points of the relative deviation between the
/// analytic Jacobian and central finite differences.
double jacobian_fd_max_rel_error(const MapSystem& m, int n_points,
                                 unsigned seed);

/// Counts sampled points whose short orbits leave the domain box.
int domain_escape_count(const MapSystem& m, int n_points, int steps,
                        unsigned seed);

}  // namespace lw::dyn

#endif

#include "lostwork/microdyn.hpp"

#include <cmath>
#include <cstring>

#include "lostwork/balance.hpp"

namespace lw::dyn {

double Mat::det() const {
    std::array<double, Vec::kMaxDim * Vec::kMaxDim> lu = a_;
    const int n = n_;
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(lu[i * n + k]) > std::abs(lu[piv * n + k])) piv = i;
        if (piv != k) {
            for (int j = 0; j < n; ++j)
                std::swap(lu[k * n + j], lu[piv * n + j]);
            det = -det;
        }
        double d = lu[k * n + k];
        if (d == 0.0) return 0.0;
        det *= d;
        for (int i = k + 1; i < n; ++i) {
            double f = lu[i * n + k] / d;
            for (int j = k + 1; j < n; ++j) lu[i * n + j] -= f * lu[k * n + j];
        }
    }
    return det;
}

namespace {

double frac(double x) { return x - std::floor(x); }

uint64_t bits_of(double x) {
    uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

// splitmix64 finalizer
uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a9c9bba2fa95ULL;
    return z ^ (z >> 31);
}

// Sub-roundoff dither in [0, 2^-44) for the baker map's expanding
// coordinate. Every double is dyadic, so exact doubling mod 1 shifts one
// mantissa bit out per step and reaches the fixed point x = 0 in ~60 steps;
// this keeps the binary expansion alive while perturbing the dynamics far
// below every tolerance used here. Pure function of the state, so orbits
// stay deterministic.
double expansion_dither(double x, double y) {
    uint64_t h = mix(bits_of(x) ^ (bits_of(y) << 1 | bits_of(y) >> 63));
    return static_cast<double>(h >> 11) * 0x1.0p-53 * 0x1.0p-44;
}

bool in_box(const Vec& p, const std::vector<Interval>& box, double slack) {
    for (int i = 0; i < p.size(); ++i)
        if (p[i] < box[i].lo - slack || p[i] > box[i].hi + slack) return false;
    return true;
}

}  // namespace

MapSystem cat_map() {
    MapSystem m;
    m.name = "cat";
    m.dim = 2;
    m.domain = {{0.0, 1.0}, {0.0, 1.0}};
    m.step = [](const Vec& p) {
        return Vec{frac(2.0 * p[0] + p[1]), frac(p[0] + p[1])};
    };
    m.jacobian = [](const Vec&) {
        Mat j(2);
        j(0, 0) = 2; j(0, 1) = 1;
        j(1, 0) = 1; j(1, 1) = 1;
        return j;
    };
    m.smooth_at = [](const Vec& p) {
        // keep finite differences away from the mod-1 wraps
        const double margin = 1e-3;
        double u = frac(2.0 * p[0] + p[1]), w = frac(p[0] + p[1]);
        return u > margin && u < 1 - margin && w > margin && w < 1 - margin;
    };
    return m;
}

MapSystem linear_map(double a) {
    if (!(std::abs(a) <= 1.0))
        throw Error("invalid_map_parameter",
                    "linear map needs |a| <= 1 to stay in [-1, 1]");
    MapSystem m;
    m.name = "linear";
    m.dim = 1;
    m.domain = {{-1.0, 1.0}};
    m.step = [a](const Vec& p) { return Vec{a * p[0]}; };
    m.jacobian = [a](const Vec&) {
        Mat j(1);
        j(0, 0) = a;
        return j;
    };
    return m;
}

MapSystem baker_map(double r1, double r2) {
    if (!(r1 > 0) || !(r2 > 0) || !(r1 + r2 <= 1.0))
        throw Error("invalid_map_parameter",
                    "baker map needs r1, r2 > 0 and r1 + r2 <= 1");
    MapSystem m;
    m.name = "baker";
    m.dim = 2;
    m.domain = {{0.0, 1.0}, {0.0, 1.0}};
    m.step = [r1, r2](const Vec& p) {
        double xe = 2.0 * p[0] + expansion_dither(p[0], p[1]);
        if (p[0] < 0.5) return Vec{frac(xe), r1 * p[1]};
        return Vec{frac(xe), r2 * p[1] + (1.0 - r2)};
    };
    m.jacobian = [r1, r2](const Vec& p) {
        Mat j(2);
        j(0, 0) = 2;
        j(1, 1) = (p[0] < 0.5 ? r1 : r2);
        return j;
    };
    m.smooth_at = [](const Vec& p) {
        const double margin = 1e-3;
        return std::abs(p[0] - 0.5) > margin && p[0] > margin &&
               p[0] < 1 - margin;
    };
    return m;
}

double phase_contraction(const MapSystem& m, const Vec& sigma) {
    double d = m.jacobian(sigma).det();
    if (d == 0.0 || !std::isfinite(d))
        throw Error("singular_jacobian",
                    "map '" + m.name + "' has |det J| = 0 at the given point");
    return -std::log(std::abs(d));
}

OrbitStats birkhoff_average(const MapSystem& m, Vec sigma,
                            const std::function<double(const Vec&)>& observable,
                            long long T, long long burn_in) {
    if (burn_in < 0 || T <= burn_in)
        throw Error("invalid_orbit_length", "need T > burn_in >= 0");

    const double slack = 1e-12;
    const long long n = T - burn_in;
    const long long first_half = n / 2;

    OrbitStats stats;
    stats.T = T;
    stats.burn_in = burn_in;

    // Welford accumulation; separate plain means for the two halves
    double mean = 0, m2 = 0, half1 = 0, half2 = 0;

    for (long long j = 0; j < T; ++j) {
        if (!in_box(sigma, m.domain, slack))
            throw Error("orbit_escaped",
                        "orbit left the domain at step " + std::to_string(j));
        if (j >= burn_in) {
            long long k = j - burn_in;
            double val = observable(sigma);
            double delta = val - mean;
            mean += delta / static_cast<double>(k + 1);
            m2 += delta * (val - mean);
            if (k < first_half)
                half1 += (val - half1) / static_cast<double>(k + 1);
            else
                half2 += (val - half2) / static_cast<double>(k - first_half + 1);
        }
        if (j + 1 < T) sigma = m.step(sigma);
    }

    stats.mean = mean;
    stats.halves = {half1, half2};
    if (n > 1)
        stats.std_error = std::sqrt(m2 / static_cast<double>(n - 1) /
                                    static_cast<double>(n));
    return stats;
}

double entropy_production_baths(const std::vector<thermo::HeatBath>& baths) {
    double sum = 0;
    for (const thermo::HeatBath& b : baths) {
        if (!(b.T > 0))
            throw Error("invalid_bath", "bath '" + b.name + "' has T <= 0");
        sum += b.Qdot / (thermo::kBoltzmann * b.T);
    }
    return sum;
}

double bridge_check(const thermo::SystemSnapshot& snap) {
    if (!snap.stationary)
        throw Error("bridge_premises_unmet", "snapshot is not stationary");
    if (!snap.streams.empty()) {
        double in = 0, out = 0, mass = 0;
        for (const thermo::Stream& st : snap.streams) {
            double f = st.G * st.s;
            (st.direction == thermo::Direction::inlet ? in : out) += f;
            mass += std::abs(f);
        }
        if (std::abs(out - in) > 1e-9 * std::max(1.0, mass))
            throw Error("bridge_premises_unmet",
                        "stream entropy flows do not balance");
    }
    double Sdot_g = balance::entropy_generation_rate(snap);
    double Sigma_prod = entropy_production_baths(snap.baths);
    return Sdot_g + thermo::kBoltzmann * Sigma_prod;
}

double entropy_production_contraction(const MapSystem& m, const Vec& sigma0,
                                      long long T, long long burn_in) {
    auto obs = [&m](const Vec& p) { return phase_contraction(m, p); };
    return birkhoff_average(m, sigma0, obs, T, burn_in).mean;
}

Vec random_point(const MapSystem& m, std::mt19937_64& rng) {
    Vec p(m.dim);
    for (int i = 0; i < m.dim; ++i) {
        std::uniform_real_distribution<double> u(m.domain[i].lo, m.domain[i].hi);
        p[i] = u(rng);
    }
    return p;
}

double jacobian_fd_max_rel_error(const MapSystem& m, int n_points,
                                 unsigned seed) {
    std::mt19937_64 rng(seed);
    double worst = 0;
    int sampled = 0;
    while (sampled < n_points) {
        Vec p = random_point(m, rng);
        if (m.smooth_at && !m.smooth_at(p)) continue;
        ++sampled;

        Mat analytic = m.jacobian(p);
        double scale = 1.0;
        for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j < m.dim; ++j)
                scale = std::max(scale, std::abs(analytic(i, j)));

        for (int j = 0; j < m.dim; ++j) {
            double h = 1e-6 * (m.domain[j].hi - m.domain[j].lo);
            Vec hi = p, lo = p;
            hi[j] += h;
            lo[j] -= h;
            Vec f_hi = m.step(hi), f_lo = m.step(lo);
            for (int i = 0; i < m.dim; ++i) {
                double fd = (f_hi[i] - f_lo[i]) / (2 * h);
                worst = std::max(worst, std::abs(fd - analytic(i, j)) / scale);
            }
        }
    }
    return worst;
}

int domain_escape_count(const MapSystem& m, int n_points, int steps,
                        unsigned seed) {
    std::mt19937_64 rng(seed);
    const double slack = 1e-12;
    int escaped = 0;
    for (int k = 0; k < n_points; ++k) {
        Vec p = random_point(m, rng);
        for (int j = 0; j < steps; ++j) {
            p = m.step(p);
            if (!in_box(p, m.domain, slack)) {
                ++escaped;
                break;
            }
        }
    }
    return escaped;
}

}  // namespace lw::dyn

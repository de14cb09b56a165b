#ifndef LOSTWORK_DESIGN_HPP
#define LOSTWORK_DESIGN_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lostwork/balance.hpp"
#include "lostwork/thermo.hpp"

namespace lw::design {

struct Param {
    std::string name;
    double lower = 0;
    double upper = 0;
};

/// Parametrized family of process designs: box bounds per parameter plus a
/// builder producing the full timeline for a parameter vector.
struct DesignSpace {
    std::vector<Param> params;
    std::function<thermo::ProcessTimeline(std::span<const double>)> builder;
};

/// Which side of the boundary the lost work is booked on. The environment
/// viewpoint negates the objective, turning the interior minimum into the
/// exterior maximum with one code path.
enum class Viewpoint { system, environment };

struct SearchOptions {
    Viewpoint viewpoint = Viewpoint::system;
    double g = thermo::kStandardGravity;
};

struct ExtremumResult {
    std::vector<double> params_star;
    double W_lambda_star = 0;   // lost work at the optimum, J
    double stationarity = 0;    // max |dA/d theta_i| by finite differences
    int evaluations = 0;        // objective calls, including failed ones
    int failed_evaluations = 0; // probe points whose builder failed (skipped)
};

/// Action over the process: the lifetime integral of the lost-power rate,
/// i.e. the lost work W_lambda of the timeline, in J.
double action(const thermo::ProcessTimeline& tl,
              double g = thermo::kStandardGravity);

/// Derivative-free bounded simplex descent, deterministic: starts at the box
/// center with an initial simplex scale of 0.25 * range per axis, projects
/// candidates into the box, and stops when the simplex parameter spread falls
/// below `tol` or the evaluation budget runs out.
ExtremumResult minimize_lost_work(const DesignSpace& ds, int budget, double tol,
                                  const SearchOptions& opts = {});

/// Max absolute component of the central-difference gradient of the action,
/// step 1e-4 * range per axis. Requires params at least two steps inside the
/// bounds (`fd_step_out_of_bounds` otherwise).
double stationarity_check(const DesignSpace& ds, std::span<const double> params,
                          double g = thermo::kStandardGravity);

}  // namespace lw::design

#endif

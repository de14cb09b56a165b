#ifndef LOSTWORK_TESTS_GENERATORS_HPP
#define LOSTWORK_TESTS_GENERATORS_HPP

#include <random>
#include <string>

#include "lostwork/thermo.hpp"

// Random physical inputs for property tests. All generators take an explicit
// engine so test runs stay reproducible.
namespace gen {

inline lw::thermo::Stream stream(std::mt19937_64& rng, lw::thermo::Direction dir,
                                 int tag) {
    std::uniform_real_distribution<double> G(0.01, 10.0);
    std::uniform_real_distribution<double> h(-5e5, 5e5);
    std::uniform_real_distribution<double> s(-5e3, 5e3);
    std::uniform_real_distribution<double> v(0.0, 100.0);
    std::uniform_real_distribution<double> z(-50.0, 50.0);
    lw::thermo::Stream st;
    st.name = (dir == lw::thermo::Direction::inlet ? "in" : "out") +
              std::to_string(tag);
    st.direction = dir;
    st.G = G(rng);
    st.h = h(rng);
    st.s = s(rng);
    st.v = v(rng);
    st.z = z(rng);
    return st;
}

inline lw::thermo::HeatBath bath(std::mt19937_64& rng, int tag) {
    std::uniform_real_distribution<double> T(150.0, 1500.0);
    std::uniform_real_distribution<double> Q(-1e4, 1e4);
    return {"bath" + std::to_string(tag), T(rng), Q(rng)};
}

/// Valid stationary snapshot with random streams and baths and no declared
/// effective power.
inline lw::thermo::SystemSnapshot stationary_snapshot(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_streams(0, 3);
    std::uniform_int_distribution<int> n_baths(0, 4);
    std::uniform_real_distribution<double> Ta(250.0, 330.0);

    lw::thermo::SystemSnapshot snap;
    snap.stationary = true;
    snap.ambient.T_a = Ta(rng);
    int ns = n_streams(rng);
    for (int i = 0; i < ns; ++i) {
        snap.streams.push_back(stream(rng, lw::thermo::Direction::inlet, i));
        snap.streams.push_back(stream(rng, lw::thermo::Direction::outlet, i));
    }
    int nb = n_baths(rng);
    for (int i = 0; i < nb; ++i) snap.baths.push_back(bath(rng, i));
    return snap;
}

/// Stationary snapshot whose stream entropy flows balance exactly enough for
/// the entropy-generation/entropy-production bridge: each outlet mirrors an
/// inlet's G*s product.
inline lw::thermo::SystemSnapshot bridge_snapshot(std::mt19937_64& rng) {
    lw::thermo::SystemSnapshot snap;
    snap.stationary = true;
    std::uniform_real_distribution<double> Ta(250.0, 330.0);
    snap.ambient.T_a = Ta(rng);

    std::uniform_int_distribution<int> n_pairs(0, 2);
    std::uniform_real_distribution<double> Gd(0.1, 10.0);
    std::uniform_real_distribution<double> sd(10.0, 5e3);
    int np = n_pairs(rng);
    for (int i = 0; i < np; ++i) {
        lw::thermo::Stream in = stream(rng, lw::thermo::Direction::inlet, i);
        in.G = Gd(rng);
        in.s = sd(rng);
        lw::thermo::Stream out = stream(rng, lw::thermo::Direction::outlet, i);
        out.G = Gd(rng);
        out.s = in.G * in.s / out.G;  // balances G*s exactly up to round-off
        snap.streams.push_back(in);
        snap.streams.push_back(out);
    }
    std::uniform_int_distribution<int> n_baths(0, 4);
    int nb = n_baths(rng);
    for (int i = 0; i < nb; ++i) snap.baths.push_back(bath(rng, i));
    return snap;
}

/// Two-snapshot constant timeline over [0, tau] from one snapshot.
inline lw::thermo::ProcessTimeline constant_timeline(
    const lw::thermo::SystemSnapshot& snap, double tau) {
    lw::thermo::ProcessTimeline tl;
    tl.tau = tau;
    lw::thermo::SystemSnapshot a = snap, b = snap;
    a.t = 0;
    b.t = tau;
    tl.snapshots = {a, b};
    return tl;
}

/// Steady two-bath conduction: hot bath feeding Qdot into the system, cold
/// bath at T_c taking it out. The workhorse oracle system.
inline lw::thermo::SystemSnapshot conduction_snapshot(double T_h, double T_c,
                                                      double Qdot, double T_a) {
    lw::thermo::SystemSnapshot snap;
    snap.stationary = true;
    snap.ambient.T_a = T_a;
    snap.baths = {{"hot", T_h, Qdot}, {"cold", T_c, -Qdot}};
    return snap;
}

/// Adiabatic throttle: equal h, v, z in and out, entropy rises by ds.
inline lw::thermo::SystemSnapshot throttle_snapshot(double G, double s_in,
                                                    double ds, double T_a) {
    lw::thermo::SystemSnapshot snap;
    snap.stationary = true;
    snap.mass_closed = true;
    snap.ambient.T_a = T_a;
    lw::thermo::Stream in{"in", lw::thermo::Direction::inlet, G, 3.0e5, s_in, 0, 0};
    lw::thermo::Stream out{"out", lw::thermo::Direction::outlet, G, 3.0e5,
                           s_in + ds, 0, 0};
    snap.streams = {in, out};
    return snap;
}

}  // namespace gen

#endif

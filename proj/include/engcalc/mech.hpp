#pragma once

// Euler-Lagrange dynamics derived numerically from energy functions:
//   D(q) qdd + C(q, qd) qd + G(q) = B_u u
// D is the q-dot Hessian of the kinetic energy, C comes from Christoffel
// symbols of D, and G is the gradient of the potential energy.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "engcalc/diffnum.hpp"
#include "engcalc/error.hpp"
#include "engcalc/linalg.hpp"
#include "engcalc/odesolve.hpp"
#include "engcalc/signal.hpp"

namespace engcalc::mech {

using KineticEnergy = std::function<double(const Vec& q, const Vec& qd)>;
using PotentialEnergy = std::function<double(const Vec& q)>;
using Params = std::map<std::string, double>;

struct MechanicalModel {
    std::string name;
    std::size_t n_dof = 0;
    Params params;
    KineticEnergy kinetic;
    PotentialEnergy potential;
    Mat input_map; // n_dof x n_inputs

    [[nodiscard]] std::size_t n_inputs() const noexcept { return input_map.cols(); }
    [[nodiscard]] double param(const std::string& key) const {
        auto it = params.find(key);
        if (it == params.end()) throw DomainError(name + ": missing parameter '" + key + "'");
        return it->second;
    }
};

inline constexpr double kEnergyStep = 1e-4;

namespace detail {

inline void check_state(const MechanicalModel& m, const Vec& q, const char* op) {
    if (q.size() != m.n_dof) {
        throw DimensionError(std::string(op) + ": q has " + std::to_string(q.size()) + " entries, model has " +
                             std::to_string(m.n_dof) + " dof");
    }
}

inline double checked_energy(double e, const char* op) {
    if (!std::isfinite(e)) throw DomainError(std::string(op) + ": non-finite energy");
    return e;
}

} // namespace detail

inline Mat mass_matrix(const MechanicalModel& m, const Vec& q) {
    detail::check_state(m, q, "mass_matrix");
    const auto ke = [&](const Vec& qd) { return detail::checked_energy(m.kinetic(q, qd), "mass_matrix"); };
    return diff::hessian(ke, Vec(m.n_dof), diff::DiffConfig{kEnergyStep, false});
}

inline Vec gravity_vector(const MechanicalModel& m, const Vec& q) {
    detail::check_state(m, q, "gravity_vector");
    const auto pe = [&](const Vec& x) { return detail::checked_energy(m.potential(x), "gravity_vector"); };
    return diff::gradient(pe, q);
}

// dD/dq_k for every k, by central differences of mass_matrix.
inline std::vector<Mat> mass_matrix_partials(const MechanicalModel& m, const Vec& q) {
    detail::check_state(m, q, "mass_matrix_partials");
    const diff::DiffConfig cfg{kEnergyStep, true};
    std::vector<Mat> partials;
    partials.reserve(m.n_dof);
    for (std::size_t k = 0; k < m.n_dof; ++k) {
        const double h = cfg.step_at(q[k]);
        Vec qp = q;
        Vec qm = q;
        qp[k] = q[k] + h;
        qm[k] = q[k] - h;
        partials.push_back((mass_matrix(m, qp) - mass_matrix(m, qm)) * (1.0 / (qp[k] - qm[k])));
    }
    return partials;
}

// C_ij = sum_k 1/2 (dD_ij/dq_k + dD_ik/dq_j - dD_jk/dq_i) qd_k.
inline Mat coriolis_from_partials(const std::vector<Mat>& dd, const Vec& qd) {
    const std::size_t n = qd.size();
    Mat c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += 0.5 * (dd[k](i, j) + dd[j](i, k) - dd[i](j, k)) * qd[k];
            c(i, j) = s;
        }
    return c;
}

inline Mat coriolis_matrix(const MechanicalModel& m, const Vec& q, const Vec& qd) {
    detail::check_state(m, qd, "coriolis_matrix");
    return coriolis_from_partials(mass_matrix_partials(m, q), qd);
}

// dD/dt along qd, assembled from the same partials as the Coriolis matrix.
inline Mat mass_matrix_rate(const MechanicalModel& m, const Vec& q, const Vec& qd) {
    detail::check_state(m, qd, "mass_matrix_rate");
    const auto dd = mass_matrix_partials(m, q);
    Mat rate(m.n_dof, m.n_dof);
    for (std::size_t k = 0; k < m.n_dof; ++k) rate += dd[k] * qd[k];
    return rate;
}

inline double total_energy(const MechanicalModel& m, const Vec& q, const Vec& qd) {
    return m.kinetic(q, qd) + m.potential(q);
}

// qdd = D^{-1} (B_u u - C qd - G).
inline Vec forward_dynamics(const MechanicalModel& m, const Vec& q, const Vec& qd, const Vec& u) {
    detail::check_state(m, q, "forward_dynamics");
    detail::check_state(m, qd, "forward_dynamics");
    if (u.size() != m.n_inputs()) {
        throw DimensionError("forward_dynamics: " + std::to_string(u.size()) + " inputs, model takes " +
                             std::to_string(m.n_inputs()));
    }
    const Vec rhs = m.input_map * u - coriolis_matrix(m, q, qd) * qd - gravity_vector(m, q);
    return lu_solve(mass_matrix(m, q), rhs);
}

using Controller = std::function<Vec(double t, const Vec& q, const Vec& qd)>;

// Controller producing no input, for unactuated runs.
inline Controller zero_input(const MechanicalModel& m) {
    return [n = m.n_inputs()](double, const Vec&, const Vec&) { return Vec(n); };
}

inline std::vector<std::string> state_names(std::size_t n_dof) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n_dof; ++i) names.push_back("q" + std::to_string(i));
    for (std::size_t i = 0; i < n_dof; ++i) names.push_back("qd" + std::to_string(i));
    return names;
}

// First-order form x = [q; qd], xdot = [qd; forward_dynamics]; the controller
// is sampled at every RK4 stage.
inline ode::Rhs first_order_rhs(const MechanicalModel& m, Controller controller) {
    return [&m, controller = std::move(controller)](double t, const Vec& x) {
        const Vec q = slice(x, 0, m.n_dof);
        const Vec qd = slice(x, m.n_dof, m.n_dof);
        return concat(qd, forward_dynamics(m, q, qd, controller(t, q, qd)));
    };
}

// RK4 simulation from (q0, qd0) over [0, T]; states as columns q0.., qd0...
inline SampledSignal simulate(const MechanicalModel& m, Controller controller, const Vec& q0, const Vec& qd0, double T,
                              double dt) {
    detail::check_state(m, q0, "simulate");
    detail::check_state(m, qd0, "simulate");
    if (!controller) controller = zero_input(m);
    ode::IvpProblem prob{first_order_rhs(m, std::move(controller)), concat(q0, qd0), 0.0, T};
    SampledSignal out = ode::rk4_solve(prob, dt);
    out.rename(state_names(m.n_dof));
    return out;
}

// Checks K(q, 0) = 0 and K >= 0 on random states; throws DomainError on violation.
inline void validate_energies(const MechanicalModel& m, std::size_t samples = 100, std::uint64_t seed = 7) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t s = 0; s < samples; ++s) {
        Vec q(m.n_dof);
        Vec qd(m.n_dof);
        for (std::size_t i = 0; i < m.n_dof; ++i) {
            q[i] = 3.0 * unit(rng);
            qd[i] = 3.0 * unit(rng);
        }
        const double k0 = m.kinetic(q, Vec(m.n_dof));
        if (std::abs(k0) > 1e-12) throw DomainError(m.name + ": kinetic energy nonzero at rest");
        if (m.kinetic(q, qd) < -1e-12) throw DomainError(m.name + ": negative kinetic energy");
        if (!std::isfinite(m.potential(q))) throw DomainError(m.name + ": non-finite potential energy");
    }
}

// ---------------------------------------------------------------------------
// Model zoo. Parameter keys are the JSON config keys.
// ---------------------------------------------------------------------------

inline Params merged(Params defaults, const Params& overrides) {
    for (const auto& [k, v] : overrides) {
        if (!defaults.contains(k)) throw DomainError("unknown model parameter '" + k + "'");
        defaults[k] = v;
    }
    return defaults;
}

// Free point mass in `dims` dimensions, one force input per axis.
inline MechanicalModel point_mass(double mass, std::size_t dims = 2) {
    MechanicalModel m;
    m.name = "point_mass";
    m.n_dof = dims;
    m.params = {{"m", mass}};
    m.kinetic = [mass](const Vec&, const Vec& qd) { return 0.5 * mass * dot(qd, qd); };
    m.potential = [](const Vec&) { return 0.0; };
    m.input_map = Mat::identity(dims);
    return m;
}

// Simple pendulum, theta = 0 hanging down; torque input at the pivot.
inline MechanicalModel pendulum(const Params& overrides = {}) {
    MechanicalModel m;
    m.name = "pendulum";
    m.n_dof = 1;
    m.params = merged({{"m", 1.0}, {"l", 1.0}, {"g", 9.81}}, overrides);
    const double mass = m.param("m");
    const double len = m.param("l");
    const double g = m.param("g");
    m.kinetic = [=](const Vec&, const Vec& qd) { return 0.5 * mass * len * len * qd[0] * qd[0]; };
    m.potential = [=](const Vec& q) { return mass * g * len * (1.0 - std::cos(q[0])); };
    m.input_map = Mat{{1.0}};
    return m;
}

// Cart (or Segway wheel base) with a point-mass pole; q = (x, theta), theta
// measured from upright. Input is a horizontal force on the cart.
inline MechanicalModel cart_pole_segway(const Params& overrides = {}) {
    MechanicalModel m;
    m.name = "segway";
    m.n_dof = 2;
    m.params = merged({{"m_cart", 1.0}, {"m_pole", 1.0}, {"l", 1.0}, {"g", 9.81}}, overrides);
    const double mc = m.param("m_cart");
    const double mp = m.param("m_pole");
    const double len = m.param("l");
    const double g = m.param("g");
    m.kinetic = [=](const Vec& q, const Vec& qd) {
        const double xd = qd[0];
        const double thd = qd[1];
        return 0.5 * (mc + mp) * xd * xd + mp * len * std::cos(q[1]) * xd * thd + 0.5 * mp * len * len * thd * thd;
    };
    m.potential = [=](const Vec& q) { return mp * g * len * std::cos(q[1]); };
    m.input_map = Mat{{1.0}, {0.0}};
    return m;
}

// Planar BallBot: a ball rolling without slip and a torso pivoting on its
// center. q = (ball angle phi, torso lean theta from upright), both absolute.
// A motor torque acts between ball and torso: B_u = (1, -1)^T.
inline MechanicalModel planar_ballbot(const Params& overrides = {}) {
    MechanicalModel m;
    m.name = "ballbot";
    m.n_dof = 2;
    m.params = merged({{"m_ball", 0.6},
                       {"r_ball", 0.12},
                       {"I_ball", 0.5 * 0.6 * 0.12 * 0.12},
                       {"m_torso", 8.0},
                       {"l_torso", 0.3},
                       {"I_torso", 0.24},
                       {"g", 9.81}},
                      overrides);
    const double mb = m.param("m_ball");
    const double r = m.param("r_ball");
    const double ib = m.param("I_ball");
    const double mt = m.param("m_torso");
    const double lt = m.param("l_torso");
    const double it = m.param("I_torso");
    const double g = m.param("g");
    m.kinetic = [=](const Vec& q, const Vec& qd) {
        const double phid = qd[0];
        const double thd = qd[1];
        const double vx = r * phid + lt * std::cos(q[1]) * thd;
        const double vy = -lt * std::sin(q[1]) * thd;
        return 0.5 * (mb * r * r + ib) * phid * phid + 0.5 * mt * (vx * vx + vy * vy) + 0.5 * it * thd * thd;
    };
    m.potential = [=](const Vec& q) { return mb * g * r + mt * g * (r + lt * std::cos(q[1])); };
    m.input_map = Mat{{1.0}, {-1.0}};
    return m;
}

// Floating bar of length 2l with point masses m1, m2 at its ends;
// q = (x, y, theta) of the bar center. Unactuated.
inline MechanicalModel gymnast_bar(const Params& overrides = {}) {
    MechanicalModel m;
    m.name = "gymnast_bar";
    m.n_dof = 3;
    m.params = merged({{"m1", 30.0}, {"m2", 30.0}, {"l", 0.9}, {"g", 9.81}}, overrides);
    const double m1 = m.param("m1");
    const double m2 = m.param("m2");
    const double len = m.param("l");
    const double g = m.param("g");
    m.kinetic = [=](const Vec& q, const Vec& qd) {
        const double c = std::cos(q[2]);
        const double s = std::sin(q[2]);
        // End velocities: center velocity -/+ l * thetadot * (-sin, cos).
        const double v1x = qd[0] + len * s * qd[2];
        const double v1y = qd[1] - len * c * qd[2];
        const double v2x = qd[0] - len * s * qd[2];
        const double v2y = qd[1] + len * c * qd[2];
        return 0.5 * m1 * (v1x * v1x + v1y * v1y) + 0.5 * m2 * (v2x * v2x + v2y * v2y);
    };
    m.potential = [=](const Vec& q) {
        const double s = std::sin(q[2]);
        return g * (m1 * (q[1] - len * s) + m2 * (q[1] + len * s));
    };
    m.input_map = Mat(3, 0);
    return m;
}

// Rotational inertia of the bar about its center.
inline double gymnast_inertia(const MechanicalModel& bar) {
    const double len = bar.param("l");
    return (bar.param("m1") + bar.param("m2")) * len * len;
}

inline MechanicalModel make_model(const std::string& name, const Params& overrides = {}) {
    if (name == "pendulum") return pendulum(overrides);
    if (name == "segway" || name == "cart_pole") return cart_pole_segway(overrides);
    if (name == "ballbot") return planar_ballbot(overrides);
    if (name == "gymnast_bar") return gymnast_bar(overrides);
    throw DomainError("unknown model '" + name + "'");
}

} // namespace engcalc::mech

#pragma once

#include <staticize/staticize.hpp>

#include <cmath>

namespace testing_support {

using namespace staticize;

// sin^2(pi t / T) X on one site; differentiable-periodic.
inline TimeDepHamiltonian sin2_x(double T = 1.0) {
    SiteGraph g = SiteGraph::isolated(1);
    g.vertex_cap = 1.0;
    auto f = [T](double t) -> Mat { return std::pow(std::sin(pi * t / T), 2) * pauli::x(); };
    auto df = [T](double t) -> Mat { return (pi / T) * std::sin(2 * pi * t / T) * pauli::x(); };
    return TimeDepHamiltonian(g, {TermSchedule::closed_form(Support::vertex(0), f, df)}, T,
                              Smoothness::DifferentiablePeriodic);
}

// Two sites, one smooth edge term of norm <= 2.
inline TimeDepHamiltonian smooth_edge(double T = 1.0) {
    SiteGraph g = SiteGraph::isolated(2);
    g.add_edge(0, 1, 2.0);
    const Mat xx = pair_op(pauli::x(), pauli::x()), zy = pair_op(pauli::z(), pauli::y());
    auto f = [=](double t) -> Mat {
        return std::pow(std::sin(pi * t / T), 2) * xx + 0.5 * std::sin(2 * pi * t / T) * zy;
    };
    auto df = [=](double t) -> Mat {
        return (pi / T) * std::sin(2 * pi * t / T) * xx + (pi / T) * std::cos(2 * pi * t / T) * zy;
    };
    return TimeDepHamiltonian(g, {TermSchedule::closed_form(Support::edge(0), f, df)}, T,
                              Smoothness::DifferentiablePeriodic);
}

inline TimeDepHamiltonian constant_on_vertex(const Mat& m, double T = 1.0) {
    return TimeDepHamiltonian(SiteGraph::isolated(1), {TermSchedule::constant(Support::vertex(0), m)}, T);
}

} // namespace testing_support

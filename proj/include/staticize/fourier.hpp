#pragma once

#include "ham_model.hpp"
#include "linalg.hpp"

#include <cmath>
#include <vector>

namespace staticize {

// Smooth T-periodic term: sum_k A_k cos(2 pi k t / T) + B_k sin(2 pi k t / T).
struct FourierTerm {
    std::vector<Mat> a, b; // a[0] is the constant part, b[0] unused
    double T = 1.0;
    Mat value(double t) const {
        Mat m = a[0];
        for (size_t k = 1; k < a.size(); ++k) {
            const double w = 2.0 * pi * k / T;
            m += a[k] * std::cos(w * t) + b[k] * std::sin(w * t);
        }
        return m;
    }
    Mat derivative(double t) const {
        Mat m = Mat::Zero(a[0].rows(), a[0].cols());
        for (size_t k = 1; k < a.size(); ++k) {
            const double w = 2.0 * pi * k / T;
            m += w * (-a[k] * std::sin(w * t) + b[k] * std::cos(w * t));
        }
        return m;
    }
    double norm_cap() const {
        double s = 0.0;
        for (size_t k = 0; k < a.size(); ++k) s += herm_norm(a[k]) + (k ? herm_norm(b[k]) : 0.0);
        return s;
    }
};

inline TermSchedule fourier_schedule(Support s, FourierTerm f) {
    return TermSchedule::closed_form(
        s, [f](double t) { return f.value(t); }, [f](double t) { return f.derivative(t); });
}

} // namespace staticize

#pragma once

#include <cmath>
#include <cstdint>

#include "signlab/eigenforms.hpp"

namespace signlab {

// Neumaier-compensated accumulator. All experiment sums run through this in
// a fixed ascending order, so results are reproducible bit for bit.
class CompensatedSum {
  public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0, comp_ = 0;
};

// The exponent triples the two theorems are checked against: delta_j bounds
// the second-moment error term, beta_j the first-moment cancellation, and
// 1 - delta_j > beta_j is what forces a sign change in every long window.
struct TheoremConstants {
    int j;
    int delta_num, delta_den; // 2/11, 1/9, 2/27
    int beta_num, beta_den;   // 1/2, 3/4, 7/9
    double epsilon = 0.0;     // reporting parameter only

    double delta() const { return static_cast<double>(delta_num) / delta_den; }
    double beta() const { return static_cast<double>(beta_num) / beta_den; }
};

const TheoremConstants& theorem_constants(int j); // j in {2,3,4}

struct IntervalMoments {
    double first;  // sum_{x < n <= x+h} lambda(n^j)
    double second; // sum_{x < n <= x+h} lambda^2(n^j)
    // reference scales the comparison argument pits against each other:
    // h * (empirical second-moment density over [1, x+h]) vs (x+h)^beta_j
    double second_scale;
    double first_scale;
};

IntervalMoments interval_moments(const forms::CoefficientTable& t, int j, double x,
                                 double h);

struct PowerMoments {
    double first;   // sum_{n <= x} lambda(n^j)
    double second;  // sum_{n <= x} lambda^2(n^j)
    double density; // second / x, the empirical B_j
};

PowerMoments power_moment_sums(const forms::CoefficientTable& t, int j, double x);

struct PrimeSumReport {
    double x;
    double s1; // sum_{p <= x} lambda(p) log p
    double s2; // sum_{p <= x} lambda^2(p) log p
    double c2; // sum_{p <= x} c'^2(p); NaN unless the form has weight 2
    double s1_over_x;
    double s2_over_x;
    double c2_logx_over_x;
};

PrimeSumReport prime_sums(const forms::CoefficientTable& t, double x);

// Relative gap between sum_{p<=x} c'^2(p) computed directly and rebuilt from
// the log-weighted sum by partial summation, with the integral evaluated
// exactly over the piecewise-constant integrand. The identity is exact, so
// the gap measures float roundoff only.
double abel_consistency(const forms::CoefficientTable& t, double x);

} // namespace signlab

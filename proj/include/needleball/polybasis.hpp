#pragma once

#include <vector>

#include "needleball/geometry.hpp"

namespace nb {

// Chebyshev-scaled polynomial basis of Pi_D: every element is bounded by 1 on
// B^d, which keeps moment systems and random-polynomial coefficients scaled.
// d=2 rows: T_m(2 r^2 - 1) r^k {cos,sin}(k theta), 2m + k <= D (cos only at k=0);
// d=1 rows: T_m(x), m <= D.
struct ChebyshevBallBasis {
    int dim, D;
    size_t count = 0;

    ChebyshevBallBasis(int dim_, int D_) : dim(dim_), D(D_) {
        if (dim == 1) {
            count = size_t(D) + 1;
        } else {
            for (int k = 0; k <= D; ++k)
                count += size_t((D - k) / 2 + 1) * (k == 0 ? 1 : 2);
        }
    }

    void eval(const BallPoint& p, double* out) const {
        if (dim == 1) {
            double x = p[0];
            out[0] = 1.0;
            if (D >= 1) out[1] = x;
            for (int m = 2; m <= D; ++m) out[m] = 2.0 * x * out[m - 1] - out[m - 2];
            return;
        }
        double r2 = p.norm2();
        double t = 2.0 * r2 - 1.0;
        int mmax = D / 2;
        std::vector<double> T(size_t(mmax) + 1);
        T[0] = 1.0;
        if (mmax >= 1) T[1] = t;
        for (int m = 2; m <= mmax; ++m) T[size_t(m)] = 2.0 * t * T[size_t(m - 1)] - T[size_t(m - 2)];
        double r = std::sqrt(r2);
        double theta = std::atan2(p[1], p[0]);
        size_t idx = 0;
        double rk = 1.0;
        for (int k = 0; k <= D; ++k) {
            double ck = std::cos(k * theta), sk = std::sin(k * theta);
            for (int m = 0; m <= (D - k) / 2; ++m) {
                if (k == 0) {
                    out[idx++] = T[size_t(m)];
                } else {
                    out[idx++] = T[size_t(m)] * rk * ck;
                    out[idx++] = T[size_t(m)] * rk * sk;
                }
            }
            rk *= r;
        }
    }

    double combine(const BallPoint& p, const std::vector<double>& coef) const {
        std::vector<double> row(count);
        eval(p, row.data());
        double s = 0.0;
        for (size_t i = 0; i < count; ++i) s += coef[i] * row[i];
        return s;
    }
};

} // namespace nb

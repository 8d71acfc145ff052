#pragma once

// Brute-force box-constrained QP solver for desk-scale SVM duals:
//   maximize  D(a) = sum(a) - 0.5 a' Q a   over  0 <= a_i <= C_i
// with Q_ij = y_i y_j (x_i . x_j + 1), the +1 being the bias feature.
//
// Every pattern of {at lower bound, at upper bound, free} is enumerated;
// the free block is solved by Gaussian elimination and kept when it is
// feasible and the KKT signs hold. A concave objective makes any such
// point a global maximum; patterns with a singular free block are skipped
// because some vertex of the optimal face always has a nonsingular one.

#include <cmath>
#include <cstddef>
#include <vector>

namespace qp_oracle {

struct Instance {
    std::vector<std::vector<double>> x;  // n points, d features (no bias column)
    std::vector<double> y;               // +1 / -1
    std::vector<double> cost;            // upper bounds C_i
};

inline bool solve_linear(std::vector<std::vector<double>> a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        if (std::fabs(a[pivot][col]) < 1e-10) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return true;
}

inline double solve_dual_bruteforce(const Instance& inst) {
    const std::size_t n = inst.x.size();
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 1.0;  // bias feature
            for (std::size_t f = 0; f < inst.x[i].size(); ++f) dot += inst.x[i][f] * inst.x[j][f];
            q[i][j] = inst.y[i] * inst.y[j] * dot;
        }
    }

    constexpr double kTol = 1e-8;
    double best = -1e300;
    std::vector<int> pattern(n, 0);  // 0 = at 0, 1 = at C, 2 = free
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;

    std::vector<double> alpha(n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rem = code;
        std::vector<std::size_t> free_idx;
        for (std::size_t i = 0; i < n; ++i) {
            pattern[i] = static_cast<int>(rem % 3);
            rem /= 3;
            alpha[i] = pattern[i] == 1 ? inst.cost[i] : 0.0;
            if (pattern[i] == 2) free_idx.push_back(i);
        }
        if (!free_idx.empty()) {
            std::vector<std::vector<double>> qff(free_idx.size(),
                                                 std::vector<double>(free_idx.size()));
            std::vector<double> rhs(free_idx.size());
            for (std::size_t a = 0; a < free_idx.size(); ++a) {
                rhs[a] = 1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (pattern[i] == 1) rhs[a] -= q[free_idx[a]][i] * inst.cost[i];
                }
                for (std::size_t b = 0; b < free_idx.size(); ++b) {
                    qff[a][b] = q[free_idx[a]][free_idx[b]];
                }
            }
            if (!solve_linear(std::move(qff), rhs)) continue;
            bool feasible = true;
            for (std::size_t a = 0; a < free_idx.size(); ++a) {
                if (rhs[a] < -kTol || rhs[a] > inst.cost[free_idx[a]] + kTol) {
                    feasible = false;
                    break;
                }
                alpha[free_idx[a]] =
                    std::min(std::max(rhs[a], 0.0), inst.cost[free_idx[a]]);
            }
            if (!feasible) continue;
        }
        // KKT signs at the bounds.
        bool kkt = true;
        for (std::size_t i = 0; i < n && kkt; ++i) {
            double g = 1.0;
            for (std::size_t j = 0; j < n; ++j) g -= q[i][j] * alpha[j];
            if (pattern[i] == 0 && g > kTol) kkt = false;
            if (pattern[i] == 1 && g < -kTol) kkt = false;
        }
        if (!kkt) continue;
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            obj += alpha[i];
            for (std::size_t j = 0; j < n; ++j) obj -= 0.5 * alpha[i] * q[i][j] * alpha[j];
        }
        if (obj > best) best = obj;
    }
    return best;
}

}  // namespace qp_oracle

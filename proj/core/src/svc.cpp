#include "hfstrat/svc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hfstrat {

namespace {

double kernel_eval(SvcKernel kernel, double gamma, std::span<const double> a,
                   std::span<const double> b) {
    if (kernel == SvcKernel::Linear) {
        double dot = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
        return dot;
    }
    double dist2 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        dist2 += d * d;
    }
    return std::exp(-gamma * dist2);
}

/// Platt-style SMO with a full Gram matrix and deterministic working-set
/// choices (max |E_i - E_j|, lowest index on ties).
class SmoSolver {
public:
    SmoSolver(const Matrix& xs, const std::vector<int>& ys, double c, double tol)
        : xs_(xs), ys_(ys), c_(c), tol_(tol), n_(xs.rows()), alpha_(n_, 0.0) {}

    void precompute_gram(SvcKernel kernel, double gamma) {
        gram_ = Matrix(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i; j < n_; ++j) {
                const double k = kernel_eval(kernel, gamma, xs_.row(i), xs_.row(j));
                gram_(i, j) = k;
                gram_(j, i) = k;
            }
        }
    }

    double decision(std::size_t i) const {
        double f = b_;
        for (std::size_t j = 0; j < n_; ++j) {
            if (alpha_[j] != 0.0) f += alpha_[j] * ys_[j] * gram_(j, i);
        }
        return f;
    }

    double error(std::size_t i) const { return decision(i) - ys_[i]; }

    bool violates_kkt(std::size_t i) const {
        const double r = error(i) * ys_[i];
        return (r < -tol_ && alpha_[i] < c_) || (r > tol_ && alpha_[i] > 0.0);
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1_old = alpha_[i1];
        const double a2_old = alpha_[i2];
        const int y1 = ys_[i1];
        const int y2 = ys_[i2];
        const double e1 = error(i1);
        const double e2 = error(i2);
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2_old - a1_old);
            hi = std::min(c_, c_ + a2_old - a1_old);
        } else {
            lo = std::max(0.0, a1_old + a2_old - c_);
            hi = std::min(c_, a1_old + a2_old);
        }
        if (lo >= hi) return false;

        const double k11 = gram_(i1, i1);
        const double k12 = gram_(i1, i2);
        const double k22 = gram_(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2;
        if (eta > 0.0) {
            a2 = std::clamp(a2_old + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // Flat or concave direction: evaluate the objective at the ends.
            // (e - b) strips the bias from the cached error, leaving y*(sum_j
            // alpha_j y_j K_ij - y_i) as the endpoint formulas expect.
            const double f1 = y1 * (e1 - b_) - a1_old * k11 - s * a2_old * k12;
            const double f2 = y2 * (e2 - b_) - s * a1_old * k12 - a2_old * k22;
            const double l1 = a1_old + s * (a2_old - lo);
            const double h1 = a1_old + s * (a2_old - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                                  s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                                  s * hi * h1 * k12;
            if (obj_lo < obj_hi - 1e-12) a2 = lo;
            else if (obj_hi < obj_lo - 1e-12) a2 = hi;
            else return false;
        }
        if (std::abs(a2 - a2_old) < 1e-12 * (a2 + a2_old + 1e-12)) return false;

        const double a1 = a1_old + s * (a2_old - a2);

        const double b1 = b_ - e1 - y1 * (a1 - a1_old) * k11 - y2 * (a2 - a2_old) * k12;
        const double b2 = b_ - e2 - y1 * (a1 - a1_old) * k12 - y2 * (a2 - a2_old) * k22;
        if (a1 > 0.0 && a1 < c_) b_ = b1;
        else if (a2 > 0.0 && a2 < c_) b_ = b2;
        else b_ = (b1 + b2) / 2.0;

        alpha_[i1] = a1;
        alpha_[i2] = a2;
        return true;
    }

    bool examine(std::size_t i2) {
        if (!violates_kkt(i2)) return false;
        const double e2 = error(i2);

        // Second-choice heuristic: maximize |E1 - E2| over non-bound alphas.
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (j == i2 || alpha_[j] <= 0.0 || alpha_[j] >= c_) continue;
            const double gap = std::abs(error(j) - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        if (best < n_ && take_step(best, i2)) return true;

        for (std::size_t j = 0; j < n_; ++j) {
            if (j == i2 || alpha_[j] <= 0.0 || alpha_[j] >= c_) continue;
            if (take_step(j, i2)) return true;
        }
        for (std::size_t j = 0; j < n_; ++j) {
            if (j == i2) continue;
            if (take_step(j, i2)) return true;
        }
        return false;
    }

    void solve(int max_passes) {
        int passes = 0;
        bool examine_all = true;
        std::size_t changed = 1;
        while ((changed > 0 || examine_all) && passes < max_passes) {
            ++passes;
            changed = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (!examine_all && (alpha_[i] <= 0.0 || alpha_[i] >= c_)) continue;
                changed += examine(i) ? 1 : 0;
            }
            if (examine_all) {
                examine_all = false;
                if (changed == 0) break;  // no KKT violations anywhere
            } else if (changed == 0) {
                examine_all = true;
            }
        }
    }

    const std::vector<double>& alpha() const { return alpha_; }
    double bias() const { return b_; }

private:
    const Matrix& xs_;
    const std::vector<int>& ys_;
    double c_;
    double tol_;
    std::size_t n_;
    std::vector<double> alpha_;
    Matrix gram_;
    double b_ = 0.0;
};

}  // namespace

double SvcModel::confidence(std::span<const double> x) const {
    std::vector<double> row(x.begin(), x.end());
    standardize_row(row, standardization_);
    double f = bias_;
    for (std::size_t i = 0; i < support_vectors_.rows(); ++i) {
        f += alpha_[i] * signed_labels_[i] *
             kernel_eval(kernel_, gamma_, support_vectors_.row(i), row);
    }
    return f;
}

SvcModel train_svc(const Matrix& x, const std::vector<int>& y, const SvcTrainConfig& cfg) {
    if (cfg.c <= 0.0) throw std::invalid_argument("train_svc: C must be positive");
    if (x.rows() != y.size()) throw std::invalid_argument("train_svc: size mismatch");
    if (x.rows() == 0) throw std::invalid_argument("train_svc: empty dataset");

    const double gamma = cfg.gamma > 0.0 ? cfg.gamma : 1.0 / static_cast<double>(x.cols());
    const auto params = standardize_fit(x);
    const Matrix xs = standardize_apply(x, params);
    std::vector<int> ys(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) ys[i] = y[i] == 1 ? 1 : -1;

    SmoSolver solver(xs, ys, cfg.c, cfg.tol);
    solver.precompute_gram(cfg.kernel, gamma);
    solver.solve(cfg.max_passes);

    // Keep support vectors only.
    const auto& alpha = solver.alpha();
    std::vector<std::size_t> sv;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] > 1e-12) sv.push_back(i);
    }
    std::vector<double> sv_alpha;
    std::vector<int> sv_labels;
    for (std::size_t i : sv) {
        sv_alpha.push_back(alpha[i]);
        sv_labels.push_back(ys[i]);
    }
    return SvcModel(cfg.kernel, gamma, std::move(sv_alpha), std::move(sv_labels),
                    xs.select_rows(sv), solver.bias(), cfg.c, params);
}

}  // namespace hfstrat

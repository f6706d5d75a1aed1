#include <cmath>
#include <vector>

#include "doctest.h"
#include "hfstrat/logistic.hpp"
#include "hfstrat/rng.hpp"
#include "test_support.hpp"

using namespace hfstrat;

namespace {

// Central finite difference of the regularized negative log-likelihood.
double numeric_partial(const Matrix& x, const std::vector<int>& y, std::vector<double> w,
                       double b, double c, int coord, double h) {
    auto loss_at = [&](const std::vector<double>& wv, double bv) {
        return logistic_loss_gradient(x, y, wv, bv, c).loss;
    };
    if (coord < 0) {
        return (loss_at(w, b + h) - loss_at(w, b - h)) / (2.0 * h);
    }
    std::vector<double> plus = w, minus = w;
    plus[coord] += h;
    minus[coord] -= h;
    return (loss_at(plus, b) - loss_at(minus, b)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("logistic") {

TEST_CASE("analytic gradient matches finite differences") {
    RngStream rng(101, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 10 + rng.next_below(30);
        const std::size_t d = 2 + rng.next_below(6);
        Matrix x(n, d);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(rng.next_below(2));
            for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.next_gaussian();
        }
        std::vector<double> w(d);
        for (auto& v : w) v = rng.next_gaussian();
        const double b = rng.next_gaussian();
        const double c = 0.5 + rng.next_uniform() * 5.0;

        const auto obj = logistic_loss_gradient(x, y, w, b, c);
        const double h = 1e-6;
        for (std::size_t j = 0; j < d; ++j) {
            const double fd = numeric_partial(x, y, w, b, c, static_cast<int>(j), h);
            CHECK(std::abs(obj.grad_w[j] - fd) <= 1e-5 * std::max(1.0, std::abs(obj.grad_w[j])));
        }
        const double fdb = numeric_partial(x, y, w, b, c, -1, h);
        CHECK(std::abs(obj.grad_b - fdb) <= 1e-5 * std::max(1.0, std::abs(obj.grad_b)));
    }
}

TEST_CASE("loss includes the L2 penalty with an unregularized bias") {
    Matrix x(2, 1, {0.0, 0.0});
    const std::vector<int> y = {0, 1};
    const std::vector<double> w = {3.0};
    // With x = 0 the data term depends only on b: 2*softplus(b) - b.
    const double b = 0.7, c = 2.0;
    const auto obj = logistic_loss_gradient(x, y, w, b, c);
    const double data_term = 2.0 * std::log1p(std::exp(b)) - b;
    CHECK(obj.loss == doctest::Approx(data_term + 9.0 / (2.0 * c)).epsilon(1e-12));
    CHECK(obj.grad_w[0] == doctest::Approx(3.0 / c).epsilon(1e-12));
}

TEST_CASE("separates a linear problem") {
    auto [x, y] = testsupport::separable_blobs(40, 3, 11);
    const LogisticModel model = train_logistic(x, y, {.c = 10.0, .tol = 1e-7, .max_iter = 20000});
    CHECK(model.predict_labels(x) == y);
    // Confidence agrees with the decision function.
    for (std::size_t i = 0; i < x.rows(); i += 7) {
        CHECK(model.confidence(x.row(i)) == doctest::Approx(sigmoid(model.decision(x.row(i)))));
    }
}

TEST_CASE("stronger regularization shrinks the weights") {
    auto [x, y] = testsupport::separable_blobs(30, 2, 5);
    const LogisticModel loose = train_logistic(x, y, {.c = 100.0, .tol = 1e-7, .max_iter = 20000});
    const LogisticModel tight = train_logistic(x, y, {.c = 0.01, .tol = 1e-7, .max_iter = 20000});
    auto norm = [](const std::vector<double>& w) {
        double s = 0.0;
        for (double v : w) s += v * v;
        return std::sqrt(s);
    };
    CHECK(norm(tight.weights()) < norm(loose.weights()));
    CHECK(norm(tight.weights()) < 0.5);
}

TEST_CASE("single-class training yields the clamped base-rate model") {
    Matrix x(4, 2, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0});
    const std::vector<int> ones = {1, 1, 1, 1};
    const LogisticModel model = train_logistic(x, ones, {});
    for (double w : model.weights()) CHECK(w == 0.0);
    const double conf = model.confidence(x.row(0));
    CHECK(conf > 0.95);
    CHECK(conf == model.confidence(x.row(3)));  // constant in x
}

TEST_CASE("training is invariant to affine feature rescaling") {
    auto [x, y] = testsupport::separable_blobs(25, 2, 17);
    Matrix scaled = x;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        scaled(i, 0) = 100.0 * x(i, 0) - 7.0;
        scaled(i, 1) = 0.01 * x(i, 1) + 3.0;
    }
    const LogisticModel a = train_logistic(x, y, {.c = 1.0, .tol = 1e-8, .max_iter = 30000});
    const LogisticModel b = train_logistic(scaled, y, {.c = 1.0, .tol = 1e-8, .max_iter = 30000});
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::vector<double> row = {scaled(i, 0), scaled(i, 1)};
        CHECK(a.confidence(x.row(i)) == doctest::Approx(b.confidence(row)).epsilon(1e-5));
    }
}

TEST_CASE("input validation") {
    Matrix x(2, 1, {0.0, 1.0});
    CHECK_THROWS(train_logistic(x, std::vector<int>{0}, {}));          // size mismatch
    CHECK_THROWS(train_logistic(Matrix(), std::vector<int>{}, {}));    // empty
}

}  // TEST_SUITE

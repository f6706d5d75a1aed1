#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "hfstrat/matrix.hpp"

using namespace hfstrat;

TEST_SUITE("matrix") {

TEST_CASE("construction and element access") {
    Matrix m(2, 3);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK_FALSE(m.empty());
    CHECK(m(1, 2) == 0.0);
    m(1, 2) = 4.5;
    CHECK(m(1, 2) == 4.5);

    CHECK(Matrix().empty());
    CHECK(Matrix(0, 3).empty());
}

TEST_CASE("data-vector constructor validates the length") {
    CHECK_NOTHROW(Matrix(2, 2, {1.0, 2.0, 3.0, 4.0}));
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("rows are contiguous row-major spans") {
    Matrix m(2, 2, {1.0, 2.0, 3.0, 4.0});
    auto r0 = m.row(0);
    auto r1 = m.row(1);
    CHECK(r0[0] == 1.0);
    CHECK(r0[1] == 2.0);
    CHECK(r1[0] == 3.0);
    CHECK(r1[1] == 4.0);
    m.row(1)[0] = 9.0;
    CHECK(m(1, 0) == 9.0);
    CHECK(m.data() == std::vector<double>{1.0, 2.0, 9.0, 4.0});
}

TEST_CASE("select_rows copies in the requested order, duplicates allowed") {
    Matrix m(3, 2, {0.0, 1.0, 10.0, 11.0, 20.0, 21.0});
    const std::array<std::size_t, 3> idx = {2, 0, 2};
    const Matrix s = m.select_rows(idx);
    REQUIRE(s.rows() == 3);
    CHECK(s(0, 0) == 20.0);
    CHECK(s(1, 0) == 0.0);
    CHECK(s(2, 1) == 21.0);
}

TEST_CASE("select_cols copies in the requested order") {
    Matrix m(2, 3, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    const std::array<std::size_t, 2> idx = {2, 0};
    const Matrix s = m.select_cols(idx);
    REQUIRE(s.cols() == 2);
    CHECK(s(0, 0) == 3.0);
    CHECK(s(0, 1) == 1.0);
    CHECK(s(1, 0) == 6.0);
    CHECK(s(1, 1) == 4.0);
}

TEST_CASE("all_finite flags NaN and infinity") {
    Matrix m(2, 2, {1.0, 2.0, 3.0, 4.0});
    CHECK(m.all_finite());
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(m.all_finite());
    m(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_FALSE(m.all_finite());
}

TEST_CASE("select gathers vector elements") {
    const std::vector<int> v = {10, 20, 30, 40};
    const std::array<std::size_t, 3> idx = {3, 1, 1};
    CHECK(select(v, idx) == std::vector<int>{40, 20, 20});
}

}  // TEST_SUITE

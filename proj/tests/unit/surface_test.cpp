#include "tzone/surface.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace {

using tzone::Grid1D;
using tzone::Surface;

Surface sampled(const Grid1D& g, double (*f)(double, double)) {
    Surface s(g);
    for (std::size_t k = 0; k < s.rows(); ++k)
        for (std::size_t j = 0; j < s.cols(); ++j) s.at(k, j) = f(g.t(k), g.z(j));
    return s;
}

TEST(Grid1D, Spacing) {
    const Grid1D g{-1.0, 3.0, 5, 4, 2.0, 0.0};
    EXPECT_DOUBLE_EQ(g.dz(), 1.0);
    EXPECT_DOUBLE_EQ(g.dt(), 0.5);
    EXPECT_DOUBLE_EQ(g.z(4), 3.0);
    EXPECT_DOUBLE_EQ(g.t(4), 2.0);
}

TEST(Grid1D, ValidateRejectsDegenerateGrids) {
    EXPECT_THROW((Grid1D{1.0, 1.0, 5, 4, 1.0, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((Grid1D{0.0, 1.0, 2, 4, 1.0, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((Grid1D{0.0, 1.0, 5, 0, 1.0, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((Grid1D{0.0, 1.0, 5, 4, 1.0, 1.0}.validate()), std::invalid_argument);
}

TEST(Surface, BilinearIsExactOnBilinearFunctions) {
    const Grid1D g{0.0, 2.0, 11, 10, 1.0, 0.0};
    const Surface s = sampled(g, [](double t, double z) { return 1.0 + 2.0 * t - 3.0 * z + 0.5 * t * z; });
    EXPECT_NEAR(s.interpolate(0.33, 1.27), 1.0 + 0.66 - 3.81 + 0.5 * 0.33 * 1.27, 1e-13);
}

TEST(Surface, InterpolateClampsToHull) {
    const Grid1D g{0.0, 2.0, 11, 10, 1.0, 0.0};
    const Surface s = sampled(g, [](double t, double z) { return t + z; });
    EXPECT_DOUBLE_EQ(s.interpolate(-1.0, -5.0), 0.0);
    EXPECT_DOUBLE_EQ(s.interpolate(9.0, 9.0), 3.0);
}

TEST(Surface, DerivativeOfQuadratic) {
    const Grid1D g{0.0, 2.0, 21, 10, 1.0, 0.0};
    const Surface s = sampled(g, [](double t, double z) { return (1.0 + t) * z * z; });
    // second-order differences are exact for quadratics, at nodes and edges
    EXPECT_NEAR(s.interpolate_dz(0.5, 1.0), 3.0, 1e-12);
    EXPECT_NEAR(s.interpolate_dz(0.0, 0.0), 0.0, 1e-12);
    EXPECT_NEAR(s.interpolate_dz(1.0, 2.0), 8.0, 1e-12);
    EXPECT_DOUBLE_EQ(s.interpolate_dz(0.5, 2.5), 0.0);
}

TEST(Surface, Summaries) {
    const Grid1D g{0.0, 1.0, 3, 1, 1.0, 0.0};
    Surface s(g, {1.0, -4.0, 2.0, 0.5, 0.0, 3.0});
    EXPECT_DOUBLE_EQ(s.max_abs(), 4.0);
    EXPECT_TRUE(s.all_finite());
    s.at(1, 1) = std::nan("");
    EXPECT_FALSE(s.all_finite());
    EXPECT_THROW(Surface(g, {1.0, 2.0}), std::invalid_argument);
}

}  // namespace

// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "lite/rng.hpp"

TEST(Rng, SameSeedSameStream) {
    lite::Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.normal(), b.normal());
}

TEST(Rng, DifferentSeedsDiffer) {
    lite::Rng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 100; ++i) same += a.next_u64() == b.next_u64();
    EXPECT_EQ(same, 0);
}

TEST(Rng, ChildDependsOnNameNotOrder) {
    const lite::Rng root(7);
    lite::Rng x1 = root.child("x");
    lite::Rng y = root.child("y");
    lite::Rng x2 = root.child("x");
    EXPECT_EQ(x1.next_u64(), x2.next_u64());
    EXPECT_NE(root.child("x").next_u64(), y.next_u64());
}

TEST(Rng, ChildIgnoresParentConsumption) {
    lite::Rng root(9);
    const auto before = root.child("grad").next_u64();
    for (int i = 0; i < 10; ++i) root.next_u64();
    EXPECT_EQ(root.child("grad").next_u64(), before);
}

TEST(Rng, UniformInUnitInterval) {
    lite::Rng r(3);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform(-2.0, 5.0);
        ASSERT_GE(u, -2.0);
        ASSERT_LT(u, 5.0);
    }
}

TEST(Rng, NormalMoments) {
    lite::Rng r(4);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s1 += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
    EXPECT_NEAR(s4 / n, 3.0, 0.1);
}

TEST(Rng, SplitMixReferenceValue) {
    // First output of SplitMix64 seeded with 0.
    lite::Rng r(0);
    EXPECT_EQ(r.next_u64(), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, FnvReferenceValues) {
    EXPECT_EQ(lite::fnv1a64(""), 0xCBF29CE484222325ULL);
    EXPECT_EQ(lite::fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
}

#include "oitlab/features.hpp"

#include <gtest/gtest.h>

#include "oitlab/compositing.hpp"
#include "oitlab/rng.hpp"

namespace oitlab {
namespace {

Fragment frag(float z, Rgb color, float alpha, std::uint32_t seq) {
    Fragment f;
    f.z = z;
    f.color = color;
    f.alpha = alpha;
    f.seq = seq;
    return f;
}

PixelFragments random_list(SplitMix64& rng, int n) {
    PixelFragments list;
    for (int i = 0; i < n; ++i) {
        list.fragments.push_back(frag(static_cast<float>(rng.next_double()),
                                      Rgb(static_cast<float>(rng.next_double()),
                                          static_cast<float>(rng.next_double()),
                                          static_cast<float>(rng.next_double())),
                                      static_cast<float>(rng.next_double()),
                                      static_cast<std::uint32_t>(i)));
    }
    return list;
}

TEST(ExtractFeatures, FourFragmentHandValues) {
    // Closest to farthest: (0.5,red), (0.5,green), (0.5,blue), (0.5,white).
    PixelFragments list;
    list.fragments = {frag(0.1f, Rgb(1, 0, 0), 0.5f, 0), frag(0.3f, Rgb(0, 1, 0), 0.5f, 1),
                      frag(0.6f, Rgb(0, 0, 1), 0.5f, 2), frag(0.9f, Rgb(1, 1, 1), 0.5f, 3)};
    PixelFeatureRecord rec = extract_features(list);
    ASSERT_EQ(rec.n, 4);
    EXPECT_LE(max_abs_diff(rec.features.g_front, Rgb(0.5f, 0.25f, 0.0f)), 1e-6f);
    EXPECT_NEAR(rec.features.a_avg_tail, 0.25f, 1e-6f);
    EXPECT_LE(max_abs_diff(rec.features.c_avg_tail, Rgb(0.25f, 0.25f, 0.5f)), 1e-6f);
    EXPECT_LE(max_abs_diff(rec.features.c_acc, Rgb(1, 1, 1)), 1e-6f);
    EXPECT_NEAR(rec.bg_product, 0.0625f, 1e-6f);
    EXPECT_FLOAT_EQ(rec.front2[0].z, 0.1f);
    EXPECT_FLOAT_EQ(rec.front2[1].z, 0.3f);
}

TEST(ExtractFeatures, TwoFragmentsHaveEmptyTail) {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        PixelFragments list = random_list(rng, 2);
        PixelFeatureRecord rec = extract_features(list);
        EXPECT_EQ(rec.n, 2);
        EXPECT_FLOAT_EQ(rec.features.a_avg_tail, 0.0f);
        EXPECT_EQ(rec.features.c_avg_tail, Rgb());
        Rgb exact = composite_exact(sort_by_depth(list), Rgb(0, 0, 0));
        EXPECT_LE(max_abs_diff(rec.features.g_front, exact), 1e-6f);
    }
}

TEST(ExtractFeatures, SingleFragment) {
    PixelFragments list;
    list.fragments = {frag(0.4f, Rgb(0.2f, 0.4f, 0.8f), 0.5f, 0)};
    PixelFeatureRecord rec = extract_features(list);
    EXPECT_EQ(rec.n, 1);
    EXPECT_LE(max_abs_diff(rec.features.g_front, Rgb(0.1f, 0.2f, 0.4f)), 1e-6f);
    EXPECT_FLOAT_EQ(rec.features.a_avg_tail, 0.0f);
    EXPECT_FLOAT_EQ(rec.bg_product, 0.5f);
}

TEST(ExtractFeatures, EmptyPixel) {
    PixelFeatureRecord rec = extract_features(PixelFragments{});
    EXPECT_EQ(rec.n, 0);
    EXPECT_EQ(rec.features.g_front, Rgb());
    EXPECT_EQ(rec.features.c_acc, Rgb());
    EXPECT_FLOAT_EQ(rec.bg_product, 1.0f);
}

TEST(ExtractFeatures, PermutationInvariantBitForBit) {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        PixelFragments list = random_list(rng, 3 + static_cast<int>(rng.next_below(10)));
        PixelFeatureRecord base = extract_features(list);
        for (int p = 0; p < 5; ++p) {
            PixelFragments shuffled = list;
            for (std::size_t i = shuffled.size(); i > 1; --i) {
                std::swap(shuffled.fragments[i - 1], shuffled.fragments[rng.next_below(i)]);
            }
            PixelFeatureRecord rec = extract_features(shuffled);
            EXPECT_EQ(rec.features.to_array(), base.features.to_array());
            EXPECT_EQ(rec.bg_product, base.bg_product);
            EXPECT_EQ(rec.n, base.n);
        }
    }
}

TEST(ExtractFeatures, GFrontMatchesTwoClosestExactComposite) {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        PixelFragments list = random_list(rng, 2 + static_cast<int>(rng.next_below(12)));
        PixelFeatureRecord rec = extract_features(list);
        PixelFragments closest_two;
        closest_two.fragments = {rec.front2[1], rec.front2[0]};
        closest_two.sorted = true;
        Rgb expected = composite_exact(closest_two, Rgb(0, 0, 0));
        EXPECT_LE(max_abs_diff(rec.features.g_front, expected), 1e-6f);
    }
}

TEST(ExtractFeatures, BgProductBitEqualsTransmittanceOfSortedList) {
    SplitMix64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        PixelFragments list = random_list(rng, static_cast<int>(rng.next_below(16)));
        PixelFeatureRecord rec = extract_features(list);
        EXPECT_EQ(rec.bg_product, transmittance_product(sort_by_depth(list)));
    }
}

TEST(ExtractFeatures, FeatureRangesRespectInvariants) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        PixelFragments list = random_list(rng, static_cast<int>(rng.next_below(20)));
        PixelFeatureRecord rec = extract_features(list);
        auto a = rec.features.to_array();
        for (int i = 0; i < 7; ++i) {  // everything except c_acc is in [0,1]
            EXPECT_GE(a[i], 0.0f);
            EXPECT_LE(a[i], 1.0f);
        }
        for (int i = 7; i < 10; ++i) EXPECT_GE(a[i], 0.0f);
        EXPECT_GE(rec.bg_product, 0.0f);
        EXPECT_LE(rec.bg_product, 1.0f);
    }
}

TEST(ExtractFrameFeatures, MatchesPerPixelExtraction) {
    SplitMix64 rng(13);
    FrameFragmentBuffer frame(5, 4);
    for (auto& px : frame.pixels) px = random_list(rng, static_cast<int>(rng.next_below(8)));
    DfaoitFrame features = extract_frame_features(frame);
    ASSERT_EQ(features.records.size(), frame.pixels.size());
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        PixelFeatureRecord expected = extract_features(frame.pixels[i]);
        EXPECT_EQ(features.records[i].features.to_array(), expected.features.to_array());
        EXPECT_EQ(features.records[i].n, expected.n);
    }
}

}  // namespace
}  // namespace oitlab

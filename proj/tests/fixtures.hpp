#pragma once

// Hand-crafted 2-D configurations for the anchor-selection rules, shared by
// the unit tests and the acceptance gate. Each one is small enough to check
// against the literal re-evaluation in oracles.hpp; the first five keep the
// dynamic-k loop draw-free so that re-evaluation is exact.

#include "anchscgan/gan.hpp"
#include "anchscgan/types.hpp"

#include <cmath>
#include <vector>

namespace fixtures {

using anchscgan::Matrix;

struct AnchorConfig {
    const char* name;
    Matrix minority;
    Matrix majority;
    Eigen::Index k;
    bool noise_removal;
};

// Concentric octagons. Every row's nearest other-class point is its radial
// partner, every frequency count is 1: all rows anchor, nothing is discarded,
// and the sides balance without growth.
inline AnchorConfig rings() {
    Matrix minority(8, 2), majority(8, 2);
    const double pi = 3.14159265358979323846;
    for (Eigen::Index i = 0; i < 8; ++i) {
        const double a = 2.0 * pi * static_cast<double>(i) / 8.0;
        minority(i, 0) = 2.0 * std::cos(a);
        minority(i, 1) = 2.0 * std::sin(a);
        majority(i, 0) = 2.8 * std::cos(a);
        majority(i, 1) = 2.8 * std::sin(a);
    }
    return {"rings", minority, majority, 3, true};
}

// Three boundary minority rows share one majority point (count 3: overlap)
// and each touch one of their own (count 1: anchor); two stray minority rows
// sit inside majority halos and come out as noise. Sides stay equal.
inline AnchorConfig shared_overlap() {
    Matrix minority(5, 2), majority(12, 2);
    const double min_pts[5][2] = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {6.0, 0.0}, {9.0, 0.0}};
    const double maj_pts[12][2] = {{1.0, 0.5},  {0.0, -0.7}, {1.0, -0.7}, {2.0, -0.7},
                                   {6.0, 0.5},  {6.0, -0.5}, {6.5, 0.0},  {9.0, 0.5},
                                   {9.0, -0.5}, {9.5, 0.0},  {13.0, 2.0}, {13.0, -2.0}};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 2; ++j) minority(i, j) = min_pts[i][j];
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 2; ++j) majority(i, j) = maj_pts[i][j];
    return {"shared_overlap", minority, majority, 3, true};
}

// Minority rows form a chain receding from the boundary: the far end only
// joins through pass-2 adjacency, and the majority side grows by one k step.
inline AnchorConfig chain() {
    Matrix minority(6, 2), majority(8, 2);
    for (Eigen::Index i = 0; i < 6; ++i) {
        minority(i, 0) = 0.0;
        minority(i, 1) = static_cast<double>(i);
    }
    for (Eigen::Index i = 0; i < 8; ++i) {
        majority(i, 0) = 1.0 + 0.4 * static_cast<double>(i % 2);
        majority(i, 1) = -2.0 - 0.4 * static_cast<double>(i / 2);
    }
    return {"chain", minority, majority, 3, true};
}

// Two boundary minority rows against four majority anchors; the other two
// minority rows are noise, so the growth loop has no candidate left and runs
// its k all the way to the pool cap before giving up.
inline AnchorConfig blocked() {
    Matrix minority(4, 2), majority(12, 2);
    const double min_pts[4][2] = {{0.0, 0.0}, {1.0, 0.0}, {4.0, 0.0}, {7.0, 0.0}};
    const double maj_pts[12][2] = {{0.0, 0.8},  {0.0, -0.8}, {1.0, 0.8},  {1.0, -0.8},
                                   {4.0, 0.5},  {4.0, -0.5}, {4.5, 0.0},  {7.0, 0.5},
                                   {7.0, -0.5}, {7.5, 0.0},  {11.0, 3.0}, {11.0, -3.0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) minority(i, j) = min_pts[i][j];
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 2; ++j) majority(i, j) = maj_pts[i][j];
    return {"blocked", minority, majority, 3, true};
}

// Collinear rows with fully hand-derived expectations: minority x 0,1,2,10
// against majority x 3,4,5,50. The far minority row is noise, the nearest
// majority row saturates into overlap, and majority growth exhausts at k=5.
inline AnchorConfig line() {
    Matrix minority(4, 2), majority(4, 2);
    const double min_x[4] = {0.0, 1.0, 2.0, 10.0};
    const double maj_x[4] = {3.0, 4.0, 5.0, 50.0};
    for (int i = 0; i < 4; ++i) {
        minority(i, 0) = min_x[i];
        minority(i, 1) = 0.0;
        majority(i, 0) = maj_x[i];
        majority(i, 1) = 0.0;
    }
    return {"line", minority, majority, 3, true};
}

inline std::vector<AnchorConfig> exact_configs() {
    return {rings(), shared_overlap(), chain(), blocked(), line()};
}

// Dense block against sparse surroundings: balancing overshoots and must
// draw a seeded subset of the fresh candidates. Only good for property
// checks, not exact re-evaluation.
inline AnchorConfig scattered() {
    Matrix minority(7, 2), majority(16, 2);
    const double min_pts[7][2] = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {0.0, 0.5},
                                  {0.5, 0.5}, {1.0, 0.5}, {6.0, 6.2}};
    const double maj_pts[16][2] = {{0.5, 0.25}, {2.2, 0.0},  {2.2, 0.5},  {2.6, 0.25},
                                   {5.6, 5.8},  {6.4, 5.8},  {5.6, 6.6},  {6.4, 6.6},
                                   {5.2, 6.2},  {6.8, 6.2},  {10.0, 0.0}, {10.5, 0.0},
                                   {10.0, 0.5}, {10.5, 0.5}, {11.0, 0.0}, {11.0, 0.5}};
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 2; ++j) minority(i, j) = min_pts[i][j];
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 2; ++j) majority(i, j) = maj_pts[i][j];
    return {"scattered", minority, majority, 5, true};
}

// Reduced-scale GAN settings used wherever a full run would be wasteful:
// same architecture and defaults, fewer update rounds and smaller batches.
inline anchscgan::GanConfig desk_gan() {
    anchscgan::GanConfig gc;
    gc.batches_per_epoch = 5;
    gc.batch_size = 32;
    return gc;
}

// Published 16-dataset x 9-method AUC comparison (column 0 is the
// no-oversampling reference, the last column the anchor-guided sampler).
// Feeding it to the rank test reproduces the reported significance level.
inline Matrix auc_table() {
    Matrix s(16, 9);
    s << 0.8933, 0.9268, 0.9304, 0.9117, 0.9293, 0.9419, 0.9373, 0.9393, 0.9390,  // ecoli2
        0.7255, 0.8798, 0.8814, 0.8737, 0.8784, 0.9156, 0.9188, 0.8712, 0.9356,   // ecoli3
        0.8667, 0.9034, 0.8982, 0.9085, 0.9052, 0.9513, 0.9554, 0.9114, 0.9675,   // ecoli4
        0.6054, 0.8156, 0.7963, 0.8019, 0.7959, 0.7927, 0.7914, 0.8123, 0.8139,   // wine789
        0.5000, 0.5690, 0.5535, 0.5577, 0.5471, 0.5000, 0.5000, 0.4905, 0.5916,   // surgery
        0.6433, 0.9764, 0.9743, 0.9705, 0.9584, 0.8841, 0.9036, 0.9743, 0.9558,   // letter
        0.5000, 0.6623, 0.6632, 0.6579, 0.6649, 0.6697, 0.6641, 0.6697, 0.6807,   // cmc2
        0.9653, 0.9699, 0.9710, 0.9789, 0.9785, 0.9734, 0.9764, 0.9766, 0.9821,   // wisconsin
        0.5924, 0.7042, 0.7013, 0.7026, 0.6988, 0.7056, 0.7046, 0.7138, 0.7280,   // yeast1
        0.6915, 0.7791, 0.7807, 0.7665, 0.7563, 0.7825, 0.7924, 0.7753, 0.8053,   // yeast2
        0.8187, 0.9225, 0.9178, 0.9212, 0.9194, 0.9076, 0.9015, 0.9162, 0.9314,   // yeast3
        0.5000, 0.8972, 0.9009, 0.8930, 0.9017, 0.9217, 0.9231, 0.9282, 0.9487,   // yeast6
        0.5000, 0.5974, 0.6094, 0.6115, 0.5504, 0.6303, 0.6506, 0.6283, 0.6661,   // glass2
        0.9778, 0.9900, 0.9899, 0.9901, 0.9901, 1.0000, 1.0000, 1.0000, 1.0000,   // vowel0
        0.5400, 0.8198, 0.8795, 0.8800, 0.8823, 0.7546, 0.9331, 0.8200, 0.8967,   // poker86
        0.5000, 0.7029, 0.6995, 0.6987, 0.6739, 0.6829, 0.5000, 0.7031, 0.6900;   // thyroid
    return s;
}

}  // namespace fixtures

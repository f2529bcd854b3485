#pragma once

#include "anchscgan/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace anchscgan {

enum class Activation : std::uint8_t { relu = 0, sigmoid = 1, linear = 2 };

struct LayerSpec {
    Eigen::Index in;
    Eigen::Index out;
    Activation act;
};

struct Layer {
    Matrix weights;  // out x in
    Vector bias;     // out
    Activation act;
};

struct NetworkParams {
    std::vector<Layer> layers;
    std::uint64_t init_seed = 0;

    Eigen::Index input_width() const { return layers.front().weights.cols(); }
    Eigen::Index output_width() const { return layers.back().weights.rows(); }
};

// Glorot-uniform weights (zero bias): uniform(-a, a), a = sqrt(6/(in+out)).
NetworkParams init_network(const std::vector<LayerSpec>& spec, std::uint64_t seed);

// Copy of the first `count` layers (used for the prior's representation head).
NetworkParams head(const NetworkParams& net, std::size_t count);

// acts[0] is the input batch, acts[i] the post-activation output of layer i.
// Post-activations alone determine the backward pass for relu/sigmoid/linear.
struct ForwardTrace {
    std::vector<Matrix> acts;
    const Matrix& output() const { return acts.back(); }
};

ForwardTrace forward(const NetworkParams& net, const Matrix& batch);

struct GradientSet {
    std::vector<Matrix> d_weights;
    std::vector<Vector> d_bias;
};

GradientSet zero_gradients(const NetworkParams& net);
void accumulate(GradientSet& into, const GradientSet& from);

// dout = dL/d(output). Fills d_input with dL/d(batch) when non-null so losses
// can chain through frozen networks into an upstream generator.
GradientSet backward(const NetworkParams& net, const ForwardTrace& trace, const Matrix& dout,
                     Matrix* d_input = nullptr);

struct AdamState {
    std::vector<Matrix> m_weights, v_weights;
    std::vector<Vector> m_bias, v_bias;
    long step = 0;
    double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
};

AdamState make_adam(const NetworkParams& net, double lr);
void adam_step(NetworkParams& net, const GradientSet& grads, AdamState& state);

// Probabilities are clamped to [1e-7, 1-1e-7] before the logs; the gradient
// is zero inside the clamped region to stay consistent with the loss.
inline constexpr double kProbClamp = 1e-7;
double bce(const Matrix& p, const Matrix& y);
Matrix bce_grad(const Matrix& p, const Matrix& y);

// Central differences over every parameter of `net`; relative error uses a
// max(1, |analytic|) denominator. `loss` must read the same net object.
double finite_diff_check(NetworkParams& net, const std::function<double()>& loss,
                         const GradientSet& analytic, double h = 1e-5);

}  // namespace anchscgan

#include "anchscgan/nn.hpp"

#include "anchscgan/error.hpp"
#include "anchscgan/rng.hpp"

#include <algorithm>
#include <cmath>

namespace anchscgan {

NetworkParams init_network(const std::vector<LayerSpec>& spec, std::uint64_t seed) {
    if (spec.empty()) fail(ErrorCode::value, "network needs at least one layer");
    for (std::size_t i = 1; i < spec.size(); ++i)
        if (spec[i].in != spec[i - 1].out)
            fail(ErrorCode::value, "layer " + std::to_string(i) + " fan-in " +
                                       std::to_string(spec[i].in) + " != previous fan-out " +
                                       std::to_string(spec[i - 1].out));

    NetworkParams net;
    net.init_seed = seed;
    auto rng = make_rng(seed);
    for (const LayerSpec& ls : spec) {
        if (ls.in < 1 || ls.out < 1) fail(ErrorCode::value, "layer dimensions must be positive");
        Layer layer;
        layer.weights.resize(ls.out, ls.in);
        const double a = std::sqrt(6.0 / static_cast<double>(ls.in + ls.out));
        std::uniform_real_distribution<double> dist(-a, a);
        double* w = layer.weights.data();
        for (Eigen::Index i = 0; i < layer.weights.size(); ++i) w[i] = dist(rng);
        layer.bias = Vector::Zero(ls.out);
        layer.act = ls.act;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

NetworkParams head(const NetworkParams& net, std::size_t count) {
    if (count == 0 || count > net.layers.size())
        fail(ErrorCode::value, "head size outside the network's layer count");
    NetworkParams out;
    out.init_seed = net.init_seed;
    out.layers.assign(net.layers.begin(), net.layers.begin() + static_cast<long>(count));
    return out;
}

ForwardTrace forward(const NetworkParams& net, const Matrix& batch) {
    if (batch.cols() != net.input_width())
        fail(ErrorCode::value, "batch width " + std::to_string(batch.cols()) +
                                   " != network input " + std::to_string(net.input_width()));
    ForwardTrace trace;
    trace.acts.reserve(net.layers.size() + 1);
    trace.acts.push_back(batch);
    for (const Layer& layer : net.layers) {
        Matrix z(batch.rows(), layer.weights.rows());
        z.noalias() = trace.acts.back() * layer.weights.transpose();
        z.rowwise() += layer.bias.transpose();
        switch (layer.act) {
            case Activation::relu:
                z = z.cwiseMax(0.0);
                break;
            case Activation::sigmoid:
                z = ((-z.array()).exp() + 1.0).inverse();
                break;
            case Activation::linear:
                break;
        }
        trace.acts.push_back(std::move(z));
    }
    if (!trace.output().allFinite())
        fail(ErrorCode::divergence, "non-finite network output");
    return trace;
}

GradientSet zero_gradients(const NetworkParams& net) {
    GradientSet g;
    for (const Layer& layer : net.layers) {
        g.d_weights.push_back(Matrix::Zero(layer.weights.rows(), layer.weights.cols()));
        g.d_bias.push_back(Vector::Zero(layer.bias.size()));
    }
    return g;
}

void accumulate(GradientSet& into, const GradientSet& from) {
    for (std::size_t i = 0; i < into.d_weights.size(); ++i) {
        into.d_weights[i] += from.d_weights[i];
        into.d_bias[i] += from.d_bias[i];
    }
}

GradientSet backward(const NetworkParams& net, const ForwardTrace& trace, const Matrix& dout,
                     Matrix* d_input) {
    GradientSet grads;
    grads.d_weights.resize(net.layers.size());
    grads.d_bias.resize(net.layers.size());

    Matrix delta = dout;  // dL/d(activation of current layer)
    for (std::size_t li = net.layers.size(); li-- > 0;) {
        const Layer& layer = net.layers[li];
        const Matrix& act = trace.acts[li + 1];
        // dL/dz from dL/da via the activation derivative, written in terms
        // of the post-activation value.
        switch (layer.act) {
            case Activation::relu:
                delta = (act.array() > 0.0).select(delta, 0.0);
                break;
            case Activation::sigmoid:
                delta.array() *= act.array() * (1.0 - act.array());
                break;
            case Activation::linear:
                break;
        }
        grads.d_weights[li].noalias() = delta.transpose() * trace.acts[li];
        grads.d_bias[li] = delta.colwise().sum().transpose();
        if (li > 0 || d_input != nullptr) {
            Matrix prev(delta.rows(), layer.weights.cols());
            prev.noalias() = delta * layer.weights;
            delta = std::move(prev);
        }
    }
    if (d_input != nullptr) *d_input = std::move(delta);
    return grads;
}

AdamState make_adam(const NetworkParams& net, double lr) {
    AdamState state;
    state.lr = lr;
    for (const Layer& layer : net.layers) {
        state.m_weights.push_back(Matrix::Zero(layer.weights.rows(), layer.weights.cols()));
        state.v_weights.push_back(Matrix::Zero(layer.weights.rows(), layer.weights.cols()));
        state.m_bias.push_back(Vector::Zero(layer.bias.size()));
        state.v_bias.push_back(Vector::Zero(layer.bias.size()));
    }
    return state;
}

void adam_step(NetworkParams& net, const GradientSet& grads, AdamState& state) {
    state.step += 1;
    const double correct1 = 1.0 - std::pow(state.beta1, state.step);
    const double correct2 = 1.0 - std::pow(state.beta2, state.step);
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
            m = state.beta1 * m + (1.0 - state.beta1) * g;
            v.array() = state.beta2 * v.array() + (1.0 - state.beta2) * g.array().square();
            param.array() -=
                state.lr * (m.array() / correct1) / ((v.array() / correct2).sqrt() + state.eps);
        };
        update(net.layers[i].weights, state.m_weights[i], state.v_weights[i], grads.d_weights[i]);
        update(net.layers[i].bias, state.m_bias[i], state.v_bias[i], grads.d_bias[i]);
    }
}

namespace {
inline double clamp_prob(double p) {
    return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}
}  // namespace

double bce(const Matrix& p, const Matrix& y) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double pc = clamp_prob(p.data()[i]);
        const double yi = y.data()[i];
        total -= yi * std::log(pc) + (1.0 - yi) * std::log(1.0 - pc);
    }
    return total / static_cast<double>(p.size());
}

Matrix bce_grad(const Matrix& p, const Matrix& y) {
    Matrix grad(p.rows(), p.cols());
    const double scale = 1.0 / static_cast<double>(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double raw = p.data()[i];
        if (raw < kProbClamp || raw > 1.0 - kProbClamp) {
            grad.data()[i] = 0.0;  // clamped: loss locally constant in p
        } else {
            const double yi = y.data()[i];
            grad.data()[i] = scale * (raw - yi) / (raw * (1.0 - raw));
        }
    }
    return grad;
}

double finite_diff_check(NetworkParams& net, const std::function<double()>& loss,
                         const GradientSet& analytic, double h) {
    if (h <= 0.0) fail(ErrorCode::value, "finite-difference step must be positive");
    double worst = 0.0;
    auto probe = [&](double& param, double analytic_value) {
        const double saved = param;
        param = saved + h;
        const double up = loss();
        param = saved - h;
        const double down = loss();
        param = saved;
        const double fd = (up - down) / (2.0 * h);
        const double err = std::abs(fd - analytic_value) / std::max(1.0, std::abs(analytic_value));
        worst = std::max(worst, err);
    };
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        Matrix& w = net.layers[li].weights;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            probe(w.data()[i], analytic.d_weights[li].data()[i]);
        Vector& b = net.layers[li].bias;
        for (Eigen::Index i = 0; i < b.size(); ++i) probe(b.data()[i], analytic.d_bias[li].data()[i]);
    }
    return worst;
}

}  // namespace anchscgan

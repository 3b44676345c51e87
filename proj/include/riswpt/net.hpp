#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "riswpt/channel.hpp"

namespace riswpt {

enum class Activation : std::uint8_t { Identity = 0, Tanh = 1, Relu = 2 };

// Small fully connected network with exact reverse-mode gradients. forward is
// pure; apply_gradients is the only mutation point.
class DenseNet {
public:
    struct Layer {
        std::size_t in = 0;
        std::size_t out = 0;
        std::vector<double> w;  // out x in, row-major
        std::vector<double> b;  // out
    };

    struct Cache {
        std::vector<std::vector<double>> act;  // act[0] = input
        std::vector<std::vector<double>> pre;  // pre-activation per layer
    };

    struct Gradients {
        std::vector<std::vector<double>> gw;
        std::vector<std::vector<double>> gb;

        void zero();
        void scale(double s);
    };

    DenseNet() = default;
    DenseNet(const std::vector<std::size_t>& layer_sizes, Activation hidden,
             Activation output, Rng& rng);

    std::size_t input_dim() const;
    std::size_t output_dim() const;
    std::size_t parameter_count() const;
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& mutable_layers() { return layers_; }
    Activation hidden_activation() const { return hidden_; }
    Activation output_activation() const { return output_; }

    std::vector<double> forward(const std::vector<double>& input) const;
    std::vector<double> forward(const std::vector<double>& input,
                                Cache& cache) const;

    Gradients make_gradients() const;

    // Accumulates parameter gradients for dL/d(output) = upstream into
    // `grads` and returns dL/d(input).
    std::vector<double> backward(const Cache& cache,
                                 const std::vector<double>& upstream,
                                 Gradients& grads) const;

    // target <- rate * this + (1 - rate) * target; shapes must match.
    void soft_blend_into(DenseNet& target, double rate) const;

    void save(std::ostream& out) const;
    static DenseNet load(std::istream& in);
    void save_file(const std::string& path) const;
    static DenseNet load_file(const std::string& path);

    friend struct OptimizerState;
    friend void apply_gradients(DenseNet&, const Gradients&,
                                struct OptimizerState&);

private:
    std::vector<Layer> layers_;
    Activation hidden_ = Activation::Tanh;
    Activation output_ = Activation::Identity;
};

// First-order update rule with optional per-parameter moments.
struct OptimizerState {
    enum class Rule : std::uint8_t { Sgd = 0, Adam = 1 };

    Rule rule = Rule::Adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::int64_t step_count = 0;

    std::vector<std::vector<double>> mw, vw, mb, vb;

    static OptimizerState sgd(double lr);
    static OptimizerState adam(double lr);
};

void apply_gradients(DenseNet& net, const DenseNet::Gradients& grads,
                     OptimizerState& opt);

}  // namespace riswpt

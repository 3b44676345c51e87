#include "riswpt/net.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "riswpt/errors.hpp"
#include "riswpt/kernels.hpp"

namespace riswpt {

namespace {

void activate(Activation a, std::vector<double>& v) {
    switch (a) {
        case Activation::Identity: break;
        case Activation::Tanh:
            for (double& x : v) x = std::tanh(x);
            break;
        case Activation::Relu:
            for (double& x : v) x = x > 0.0 ? x : 0.0;
            break;
    }
}

// delta = upstream (.) f'(pre), using pre/act as each activation needs.
void activation_backward(Activation a, const std::vector<double>& pre,
                         const std::vector<double>& act,
                         std::vector<double>& delta) {
    switch (a) {
        case Activation::Identity: break;
        case Activation::Tanh:
            for (std::size_t i = 0; i < delta.size(); ++i)
                delta[i] *= 1.0 - act[i] * act[i];
            break;
        case Activation::Relu:
            for (std::size_t i = 0; i < delta.size(); ++i)
                if (pre[i] <= 0.0) delta[i] = 0.0;
            break;
    }
}

}  // namespace

DenseNet::DenseNet(const std::vector<std::size_t>& layer_sizes,
                   Activation hidden, Activation output, Rng& rng)
    : hidden_(hidden), output_(output) {
    if (layer_sizes.size() < 2)
        throw SimError(Err::ShapeMismatch, "need at least input+output sizes");
    layers_.resize(layer_sizes.size() - 1);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        Layer& lay = layers_[l];
        lay.in = layer_sizes[l];
        lay.out = layer_sizes[l + 1];
        if (lay.in == 0 || lay.out == 0)
            throw SimError(Err::ShapeMismatch, "zero-size layer");
        const double bound = 1.0 / std::sqrt(static_cast<double>(lay.in));
        std::uniform_real_distribution<double> u(-bound, bound);
        lay.w.resize(lay.in * lay.out);
        lay.b.resize(lay.out);
        for (double& x : lay.w) x = u(rng);
        for (double& x : lay.b) x = u(rng);
    }
}

std::size_t DenseNet::input_dim() const {
    return layers_.empty() ? 0 : layers_.front().in;
}

std::size_t DenseNet::output_dim() const {
    return layers_.empty() ? 0 : layers_.back().out;
}

std::size_t DenseNet::parameter_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers_) n += l.w.size() + l.b.size();
    return n;
}

std::vector<double> DenseNet::forward(const std::vector<double>& input) const {
    Cache scratch;
    return forward(input, scratch);
}

std::vector<double> DenseNet::forward(const std::vector<double>& input,
                                      Cache& cache) const {
    if (input.size() != input_dim())
        throw SimError(Err::ShapeMismatch, "input size != first layer size");
    cache.act.assign(layers_.size() + 1, {});
    cache.pre.assign(layers_.size(), {});
    cache.act[0] = input;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& lay = layers_[l];
        cache.pre[l].resize(lay.out);
        kernels::matvec(lay.w.data(), cache.act[l].data(), lay.b.data(),
                        cache.pre[l].data(), lay.out, lay.in);
        cache.act[l + 1] = cache.pre[l];
        activate(l + 1 == layers_.size() ? output_ : hidden_,
                 cache.act[l + 1]);
    }
    return cache.act.back();
}

DenseNet::Gradients DenseNet::make_gradients() const {
    Gradients g;
    g.gw.resize(layers_.size());
    g.gb.resize(layers_.size());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        g.gw[l].assign(layers_[l].w.size(), 0.0);
        g.gb[l].assign(layers_[l].b.size(), 0.0);
    }
    return g;
}

void DenseNet::Gradients::zero() {
    for (auto& v : gw) std::fill(v.begin(), v.end(), 0.0);
    for (auto& v : gb) std::fill(v.begin(), v.end(), 0.0);
}

void DenseNet::Gradients::scale(double s) {
    for (auto& v : gw)
        for (double& x : v) x *= s;
    for (auto& v : gb)
        for (double& x : v) x *= s;
}

std::vector<double> DenseNet::backward(const Cache& cache,
                                       const std::vector<double>& upstream,
                                       Gradients& grads) const {
    if (cache.act.size() != layers_.size() + 1)
        throw SimError(Err::ShapeMismatch, "stale forward cache");
    if (upstream.size() != output_dim())
        throw SimError(Err::ShapeMismatch, "upstream size != output size");
    if (grads.gw.size() != layers_.size())
        throw SimError(Err::ShapeMismatch, "gradient buffers mismatch net");

    std::vector<double> delta = upstream;
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const Layer& lay = layers_[li];
        activation_backward(li + 1 == layers_.size() ? output_ : hidden_,
                            cache.pre[li], cache.act[li + 1], delta);
        kernels::rank1_accumulate(grads.gw[li].data(), delta.data(),
                                  cache.act[li].data(), lay.out, lay.in);
        kernels::axpy(1.0, delta.data(), grads.gb[li].data(), lay.out);
        if (li == 0) break;
        std::vector<double> prev(lay.in);
        kernels::matvec_transpose(lay.w.data(), delta.data(), prev.data(),
                                  lay.out, lay.in);
        delta = std::move(prev);
    }
    std::vector<double> input_grad(layers_.front().in);
    kernels::matvec_transpose(layers_.front().w.data(), delta.data(),
                              input_grad.data(), layers_.front().out,
                              layers_.front().in);
    return input_grad;
}

void DenseNet::soft_blend_into(DenseNet& target, double rate) const {
    if (target.layers_.size() != layers_.size())
        throw SimError(Err::ShapeMismatch, "target net shape mismatch");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& src = layers_[l];
        Layer& dst = target.layers_[l];
        if (dst.w.size() != src.w.size() || dst.b.size() != src.b.size())
            throw SimError(Err::ShapeMismatch, "target layer shape mismatch");
        for (std::size_t i = 0; i < src.w.size(); ++i)
            dst.w[i] = rate * src.w[i] + (1.0 - rate) * dst.w[i];
        for (std::size_t i = 0; i < src.b.size(); ++i)
            dst.b[i] = rate * src.b[i] + (1.0 - rate) * dst.b[i];
    }
}

OptimizerState OptimizerState::sgd(double lr) {
    OptimizerState o;
    o.rule = Rule::Sgd;
    o.learning_rate = lr;
    return o;
}

OptimizerState OptimizerState::adam(double lr) {
    OptimizerState o;
    o.rule = Rule::Adam;
    o.learning_rate = lr;
    return o;
}

void apply_gradients(DenseNet& net, const DenseNet::Gradients& grads,
                     OptimizerState& opt) {
    auto& layers = net.layers_;
    if (grads.gw.size() != layers.size())
        throw SimError(Err::ShapeMismatch, "gradients mismatch net");
    if (opt.rule == OptimizerState::Rule::Sgd) {
        for (std::size_t l = 0; l < layers.size(); ++l) {
            kernels::sgd_step(layers[l].w.data(), grads.gw[l].data(),
                              layers[l].w.size(), opt.learning_rate);
            kernels::sgd_step(layers[l].b.data(), grads.gb[l].data(),
                              layers[l].b.size(), opt.learning_rate);
        }
        ++opt.step_count;
        return;
    }
    if (opt.mw.empty()) {
        opt.mw.resize(layers.size());
        opt.vw.resize(layers.size());
        opt.mb.resize(layers.size());
        opt.vb.resize(layers.size());
        for (std::size_t l = 0; l < layers.size(); ++l) {
            opt.mw[l].assign(layers[l].w.size(), 0.0);
            opt.vw[l].assign(layers[l].w.size(), 0.0);
            opt.mb[l].assign(layers[l].b.size(), 0.0);
            opt.vb[l].assign(layers[l].b.size(), 0.0);
        }
    }
    ++opt.step_count;
    const double t = static_cast<double>(opt.step_count);
    const double bias1 = 1.0 - std::pow(opt.beta1, t);
    const double bias2 = 1.0 - std::pow(opt.beta2, t);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        kernels::adam_step(layers[l].w.data(), grads.gw[l].data(),
                           opt.mw[l].data(), opt.vw[l].data(),
                           layers[l].w.size(), opt.learning_rate, opt.beta1,
                           opt.beta2, opt.epsilon, bias1, bias2);
        kernels::adam_step(layers[l].b.data(), grads.gb[l].data(),
                           opt.mb[l].data(), opt.vb[l].data(),
                           layers[l].b.size(), opt.learning_rate, opt.beta1,
                           opt.beta2, opt.epsilon, bias1, bias2);
    }
}

// Checkpoint layout (little-endian): "RWNT", u32 version, u8 hidden
// activation, u8 output activation, u32 layer-size count, u64 sizes, then per
// layer the weight matrix (row-major f64) followed by the bias vector.
namespace {

constexpr char kMagic[4] = {'R', 'W', 'N', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw SimError(Err::Io, "truncated checkpoint");
    return v;
}

}  // namespace

void DenseNet::save(std::ostream& out) const {
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint8_t>(hidden_));
    write_pod(out, static_cast<std::uint8_t>(output_));
    write_pod(out, static_cast<std::uint32_t>(layers_.size() + 1));
    write_pod(out, static_cast<std::uint64_t>(input_dim()));
    for (const Layer& l : layers_)
        write_pod(out, static_cast<std::uint64_t>(l.out));
    for (const Layer& l : layers_) {
        out.write(reinterpret_cast<const char*>(l.w.data()),
                  static_cast<std::streamsize>(l.w.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(l.b.data()),
                  static_cast<std::streamsize>(l.b.size() * sizeof(double)));
    }
    if (!out) throw SimError(Err::Io, "checkpoint write failed");
}

DenseNet DenseNet::load(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw SimError(Err::Io, "not a net checkpoint");
    if (read_pod<std::uint32_t>(in) != kVersion)
        throw SimError(Err::Io, "unsupported checkpoint version");
    DenseNet net;
    net.hidden_ = static_cast<Activation>(read_pod<std::uint8_t>(in));
    net.output_ = static_cast<Activation>(read_pod<std::uint8_t>(in));
    const auto n_sizes = read_pod<std::uint32_t>(in);
    if (n_sizes < 2) throw SimError(Err::Io, "checkpoint has no layers");
    std::vector<std::size_t> sizes(n_sizes);
    for (auto& s : sizes) s = static_cast<std::size_t>(read_pod<std::uint64_t>(in));
    net.layers_.resize(n_sizes - 1);
    for (std::size_t l = 0; l < net.layers_.size(); ++l) {
        Layer& lay = net.layers_[l];
        lay.in = sizes[l];
        lay.out = sizes[l + 1];
        lay.w.resize(lay.in * lay.out);
        lay.b.resize(lay.out);
        in.read(reinterpret_cast<char*>(lay.w.data()),
                static_cast<std::streamsize>(lay.w.size() * sizeof(double)));
        in.read(reinterpret_cast<char*>(lay.b.data()),
                static_cast<std::streamsize>(lay.b.size() * sizeof(double)));
        if (!in) throw SimError(Err::Io, "truncated checkpoint");
    }
    return net;
}

void DenseNet::save_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SimError(Err::Io, "cannot open " + path + " for writing");
    save(f);
}

DenseNet DenseNet::load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SimError(Err::Io, "cannot open " + path);
    return load(f);
}

}  // namespace riswpt

#pragma once
// Small feedforward scorer: binary indicator block (given as active indices)
// plus a dense tail, two tanh hidden layers, softmax output. Backing math
// runs through ap::kern so the scalar/SIMD backends are interchangeable.

#include "ap/core.hpp"

#include <span>

namespace ap {

struct MlpShape {
    int vocab = 0;    // indicator block width (sparse path)
    int tail = 0;     // dense tail width
    int hidden1 = 0;
    int hidden2 = 0;
    int outputs = 0;

    int input_dim() const { return vocab + tail; }
    bool operator==(const MlpShape&) const = default;
};

class Mlp {
public:
    Mlp() = default;
    explicit Mlp(const MlpShape& shape);

    const MlpShape& shape() const { return shape_; }
    void init_weights(Rng& rng);

    struct Forward {
        std::vector<double> h1, h2, probs;
        double log_z = 0.0;  // log-normalizer of the softmax
    };

    void forward(std::span<const int> active, std::span<const double> tail, Forward& f) const;

    double log_prob(const Forward& f, int action) const;

    // Gradient accumulator. w1 columns are tracked sparsely so a leg update
    // only clears what it touched.
    struct Grad {
        explicit Grad(const MlpShape& s);
        void clear();
        std::vector<double> w1, b1, w2, b2, w3, b3;
        std::vector<int> touched_cols;
        std::vector<uint8_t> touched_flag;
    };

    // grad += coef * d log probs[action] / d theta, at the point where f was
    // computed (parameters must not have changed in between).
    void accumulate_log_prob_grad(std::span<const int> active, std::span<const double> tail,
                                  const Forward& f, int action, double coef, Grad& g) const;

    // grad += coef * d entropy(probs) / d theta
    void accumulate_entropy_grad(std::span<const int> active, std::span<const double> tail,
                                 const Forward& f, double coef, Grad& g) const;

    // theta += lr * grad
    void apply(const Grad& g, double lr);

    // Adam ascent step; moments are flat in parameter order. Per-coordinate
    // scaling is what lets the rarely-active word columns keep pace with the
    // dense tail weights.
    struct Adam {
        std::vector<double> m, v;
        int64_t t = 0;
    };
    void apply_adam(const Grad& g, Adam& state, double lr, double beta1 = 0.9,
                    double beta2 = 0.999, double eps = 1e-8);

    // AdaGrad ascent step. Sparse-safe: only coordinates with nonzero gradient
    // are touched, so the cost stays proportional to the active columns.
    struct AdaGrad {
        std::vector<double> g2;
    };
    void apply_adagrad(const Grad& g, AdaGrad& state, double lr, double eps = 1e-8);

    // flat parameter access for gradient checks
    std::size_t param_count() const;
    double get_param(std::size_t i) const;
    void set_param(std::size_t i, double v);
    double grad_param(const Grad& g, std::size_t i) const;

    std::string to_json(const std::string& name) const;
    static Mlp from_json(const std::string& text, const std::string& name);

private:
    void accumulate_logits_grad(std::span<const int> active, std::span<const double> tail,
                                const Forward& f, const std::vector<double>& d3, double coef,
                                Grad& g) const;

    MlpShape shape_;
    // w1 column-major [input_dim][h1]; w2 row-major [h2 x h1]; w3 row-major [out x h2]
    std::vector<double> w1_, b1_, w2_, b2_, w3_, b3_;
};

}  // namespace ap

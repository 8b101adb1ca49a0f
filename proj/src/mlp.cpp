#include "ap/mlp.hpp"

#include "ap/kernels.hpp"

#include <json.hpp>

#include <cmath>

namespace ap {

Mlp::Mlp(const MlpShape& shape) : shape_(shape) {
    const auto in = static_cast<std::size_t>(shape.input_dim());
    const auto h1 = static_cast<std::size_t>(shape.hidden1);
    const auto h2 = static_cast<std::size_t>(shape.hidden2);
    const auto out = static_cast<std::size_t>(shape.outputs);
    w1_.assign(in * h1, 0.0);
    b1_.assign(h1, 0.0);
    w2_.assign(h2 * h1, 0.0);
    b2_.assign(h2, 0.0);
    w3_.assign(out * h2, 0.0);
    b3_.assign(out, 0.0);
}

void Mlp::init_weights(Rng& rng) {
    const double s1 = 0.05;
    const double s2 = 1.0 / std::sqrt(static_cast<double>(shape_.hidden1));
    const double s3 = 1.0 / std::sqrt(static_cast<double>(shape_.hidden2));
    for (auto& w : w1_) w = rng.sym(s1);
    for (auto& w : w2_) w = rng.sym(s2);
    for (auto& w : w3_) w = rng.sym(s3);
}

void Mlp::forward(std::span<const int> active, std::span<const double> tail, Forward& f) const {
    const auto h1 = static_cast<std::size_t>(shape_.hidden1);
    const auto h2 = static_cast<std::size_t>(shape_.hidden2);
    const auto out = static_cast<std::size_t>(shape_.outputs);
    f.h1.assign(b1_.begin(), b1_.end());
    for (int d : active) {
        kern::add(&w1_[static_cast<std::size_t>(d) * h1], f.h1.data(), h1);
    }
    for (std::size_t t = 0; t < tail.size(); ++t) {
        if (tail[t] != 0.0) {
            kern::axpy(tail[t], &w1_[(static_cast<std::size_t>(shape_.vocab) + t) * h1],
                       f.h1.data(), h1);
        }
    }
    kern::tanh_inplace(f.h1.data(), h1);
    f.h2.resize(h2);
    kern::matvec(w2_.data(), h2, h1, f.h1.data(), b2_.data(), f.h2.data());
    kern::tanh_inplace(f.h2.data(), h2);
    f.probs.resize(out);
    kern::matvec(w3_.data(), out, h2, f.h2.data(), b3_.data(), f.probs.data());
    f.log_z = kern::softmax_inplace(f.probs.data(), out);
}

double Mlp::log_prob(const Forward& f, int action) const {
    return std::log(std::max(f.probs[static_cast<std::size_t>(action)], 1e-300));
}

Mlp::Grad::Grad(const MlpShape& s) {
    w1.assign(static_cast<std::size_t>(s.input_dim()) * static_cast<std::size_t>(s.hidden1), 0.0);
    b1.assign(static_cast<std::size_t>(s.hidden1), 0.0);
    w2.assign(static_cast<std::size_t>(s.hidden2) * static_cast<std::size_t>(s.hidden1), 0.0);
    b2.assign(static_cast<std::size_t>(s.hidden2), 0.0);
    w3.assign(static_cast<std::size_t>(s.outputs) * static_cast<std::size_t>(s.hidden2), 0.0);
    b3.assign(static_cast<std::size_t>(s.outputs), 0.0);
    touched_flag.assign(static_cast<std::size_t>(s.input_dim()), 0);
}

void Mlp::Grad::clear() {
    const std::size_t h1 = b1.size();
    for (int c : touched_cols) {
        std::fill_n(w1.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * h1),
                    h1, 0.0);
        touched_flag[static_cast<std::size_t>(c)] = 0;
    }
    touched_cols.clear();
    std::fill(b1.begin(), b1.end(), 0.0);
    std::fill(w2.begin(), w2.end(), 0.0);
    std::fill(b2.begin(), b2.end(), 0.0);
    std::fill(w3.begin(), w3.end(), 0.0);
    std::fill(b3.begin(), b3.end(), 0.0);
}

void Mlp::accumulate_log_prob_grad(std::span<const int> active, std::span<const double> tail,
                                   const Forward& f, int action, double coef, Grad& g) const {
    const auto out = static_cast<std::size_t>(shape_.outputs);
    // d3 = onehot(action) - probs
    std::vector<double> d3(out);
    for (std::size_t i = 0; i < out; ++i) d3[i] = -f.probs[i];
    d3[static_cast<std::size_t>(action)] += 1.0;
    accumulate_logits_grad(active, tail, f, d3, coef, g);
}

void Mlp::accumulate_entropy_grad(std::span<const int> active, std::span<const double> tail,
                                  const Forward& f, double coef, Grad& g) const {
    const auto out = static_cast<std::size_t>(shape_.outputs);
    double entropy = 0.0;
    for (std::size_t i = 0; i < out; ++i) {
        if (f.probs[i] > 0.0) entropy -= f.probs[i] * std::log(f.probs[i]);
    }
    // dH/dz_k = -p_k (log p_k + H)
    std::vector<double> d3(out, 0.0);
    for (std::size_t i = 0; i < out; ++i) {
        if (f.probs[i] > 0.0) d3[i] = -f.probs[i] * (std::log(f.probs[i]) + entropy);
    }
    accumulate_logits_grad(active, tail, f, d3, coef, g);
}

void Mlp::accumulate_logits_grad(std::span<const int> active, std::span<const double> tail,
                                 const Forward& f, const std::vector<double>& d3, double coef,
                                 Grad& g) const {
    const auto h1 = static_cast<std::size_t>(shape_.hidden1);
    const auto h2 = static_cast<std::size_t>(shape_.hidden2);
    const auto out = static_cast<std::size_t>(shape_.outputs);

    kern::axpy(coef, d3.data(), g.b3.data(), out);
    kern::ger(coef, d3.data(), out, f.h2.data(), h2, g.w3.data());

    std::vector<double> d2(h2, 0.0);
    kern::matvec_t_accum(w3_.data(), out, h2, d3.data(), d2.data());
    kern::tanh_grad(f.h2.data(), d2.data(), h2);

    kern::axpy(coef, d2.data(), g.b2.data(), h2);
    kern::ger(coef, d2.data(), h2, f.h1.data(), h1, g.w2.data());

    std::vector<double> d1(h1, 0.0);
    kern::matvec_t_accum(w2_.data(), h2, h1, d2.data(), d1.data());
    kern::tanh_grad(f.h1.data(), d1.data(), h1);

    kern::axpy(coef, d1.data(), g.b1.data(), h1);
    auto touch = [&](int col) {
        if (!g.touched_flag[static_cast<std::size_t>(col)]) {
            g.touched_flag[static_cast<std::size_t>(col)] = 1;
            g.touched_cols.push_back(col);
        }
    };
    for (int d : active) {
        touch(d);
        kern::axpy(coef, d1.data(), &g.w1[static_cast<std::size_t>(d) * h1], h1);
    }
    for (std::size_t t = 0; t < tail.size(); ++t) {
        if (tail[t] != 0.0) {
            const int col = shape_.vocab + static_cast<int>(t);
            touch(col);
            kern::axpy(coef * tail[t], d1.data(), &g.w1[static_cast<std::size_t>(col) * h1], h1);
        }
    }
}

void Mlp::apply(const Grad& g, double lr) {
    const std::size_t h1 = b1_.size();
    for (int c : g.touched_cols) {
        kern::axpy(lr, &g.w1[static_cast<std::size_t>(c) * h1],
                   &w1_[static_cast<std::size_t>(c) * h1], h1);
    }
    kern::axpy(lr, g.b1.data(), b1_.data(), b1_.size());
    kern::axpy(lr, g.w2.data(), w2_.data(), w2_.size());
    kern::axpy(lr, g.b2.data(), b2_.data(), b2_.size());
    kern::axpy(lr, g.w3.data(), w3_.data(), w3_.size());
    kern::axpy(lr, g.b3.data(), b3_.data(), b3_.size());
}

void Mlp::apply_adam(const Grad& g, Adam& state, double lr, double beta1, double beta2,
                     double eps) {
    if (state.m.empty()) {
        state.m.assign(param_count(), 0.0);
        state.v.assign(param_count(), 0.0);
    }
    ++state.t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
    const std::vector<double>* grads[] = {&g.w1, &g.b1, &g.w2, &g.b2, &g.w3, &g.b3};
    std::vector<double>* params[] = {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_};
    std::size_t off = 0;
    for (int k = 0; k < 6; ++k) {
        const auto& gv = *grads[k];
        auto& pv = *params[k];
        for (std::size_t i = 0; i < pv.size(); ++i) {
            double& m = state.m[off + i];
            double& v = state.v[off + i];
            m = beta1 * m + (1.0 - beta1) * gv[i];
            v = beta2 * v + (1.0 - beta2) * gv[i] * gv[i];
            pv[i] += lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
        }
        off += pv.size();
    }
}

void Mlp::apply_adagrad(const Grad& g, AdaGrad& state, double lr, double eps) {
    if (state.g2.empty()) state.g2.assign(param_count(), 0.0);
    const std::size_t h1 = b1_.size();
    // w1: touched columns only
    for (int c : g.touched_cols) {
        const std::size_t base = static_cast<std::size_t>(c) * h1;
        for (std::size_t i = 0; i < h1; ++i) {
            const double gv = g.w1[base + i];
            double& acc = state.g2[base + i];
            acc += gv * gv;
            w1_[base + i] += lr * gv / (std::sqrt(acc) + eps);
        }
    }
    const std::vector<double>* grads[] = {&g.b1, &g.w2, &g.b2, &g.w3, &g.b3};
    std::vector<double>* params[] = {&b1_, &w2_, &b2_, &w3_, &b3_};
    std::size_t off = w1_.size();
    for (int k = 0; k < 5; ++k) {
        const auto& gv = *grads[k];
        auto& pv = *params[k];
        for (std::size_t i = 0; i < pv.size(); ++i) {
            if (gv[i] == 0.0) continue;
            double& acc = state.g2[off + i];
            acc += gv[i] * gv[i];
            pv[i] += lr * gv[i] / (std::sqrt(acc) + eps);
        }
        off += pv.size();
    }
}

std::size_t Mlp::param_count() const {
    return w1_.size() + b1_.size() + w2_.size() + b2_.size() + w3_.size() + b3_.size();
}

namespace {

template <typename V>
auto* locate(V& w1, V& b1, V& w2, V& b2, V& w3, V& b3, std::size_t i) {
    if (i < w1.size()) return &w1[i];
    i -= w1.size();
    if (i < b1.size()) return &b1[i];
    i -= b1.size();
    if (i < w2.size()) return &w2[i];
    i -= w2.size();
    if (i < b2.size()) return &b2[i];
    i -= b2.size();
    if (i < w3.size()) return &w3[i];
    i -= w3.size();
    return &b3[i];
}

}  // namespace

double Mlp::get_param(std::size_t i) const {
    return *locate(w1_, b1_, w2_, b2_, w3_, b3_, i);
}

void Mlp::set_param(std::size_t i, double v) {
    *locate(w1_, b1_, w2_, b2_, w3_, b3_, i) = v;
}

double Mlp::grad_param(const Grad& g, std::size_t i) const {
    return *locate(g.w1, g.b1, g.w2, g.b2, g.w3, g.b3, i);
}

std::string Mlp::to_json(const std::string& name) const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["name"] = name;
    j["shape"] = {{"vocab", shape_.vocab},
                  {"tail", shape_.tail},
                  {"hidden1", shape_.hidden1},
                  {"hidden2", shape_.hidden2},
                  {"outputs", shape_.outputs}};
    auto tensor = [](const char* tname, const std::vector<double>& data,
                     std::vector<int> dims) {
        nlohmann::ordered_json t;
        t["name"] = tname;
        t["shape"] = dims;
        t["data"] = data;
        return t;
    };
    j["tensors"] = nlohmann::ordered_json::array();
    j["tensors"].push_back(tensor("w1", w1_, {shape_.input_dim(), shape_.hidden1}));
    j["tensors"].push_back(tensor("b1", b1_, {shape_.hidden1}));
    j["tensors"].push_back(tensor("w2", w2_, {shape_.hidden2, shape_.hidden1}));
    j["tensors"].push_back(tensor("b2", b2_, {shape_.hidden2}));
    j["tensors"].push_back(tensor("w3", w3_, {shape_.outputs, shape_.hidden2}));
    j["tensors"].push_back(tensor("b3", b3_, {shape_.outputs}));
    return j.dump() + "\n";
}

Mlp Mlp::from_json(const std::string& text, const std::string& name) {
    auto j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) throw std::runtime_error("mlp: unsupported version");
    if (j.at("name").get<std::string>() != name) {
        throw std::runtime_error("mlp: expected tensor list " + name);
    }
    MlpShape s;
    s.vocab = j.at("shape").at("vocab").get<int>();
    s.tail = j.at("shape").at("tail").get<int>();
    s.hidden1 = j.at("shape").at("hidden1").get<int>();
    s.hidden2 = j.at("shape").at("hidden2").get<int>();
    s.outputs = j.at("shape").at("outputs").get<int>();
    Mlp m(s);
    for (const auto& t : j.at("tensors")) {
        const auto tname = t.at("name").get<std::string>();
        const auto data = t.at("data").get<std::vector<double>>();
        std::vector<double>* dst = nullptr;
        if (tname == "w1") dst = &m.w1_;
        else if (tname == "b1") dst = &m.b1_;
        else if (tname == "w2") dst = &m.w2_;
        else if (tname == "b2") dst = &m.b2_;
        else if (tname == "w3") dst = &m.w3_;
        else if (tname == "b3") dst = &m.b3_;
        else throw std::runtime_error("mlp: unknown tensor " + tname);
        if (data.size() != dst->size()) throw std::runtime_error("mlp: tensor size mismatch");
        *dst = data;
    }
    return m;
}

}  // namespace ap

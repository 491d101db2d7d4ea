#pragma once

// Small fully connected Q-network: input -> SELU -> ELU -> linear, with
// batched backprop for a masked squared loss and an Adam/SGD step.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "oranits/rng.hpp"

namespace oranits {

inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

template <class S>
class Mlp {
 public:
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

  Mlp() = default;
  Mlp(int input, int hidden, int output) {
    w_[0] = Mat::Zero(hidden, input);
    w_[1] = Mat::Zero(hidden, hidden);
    w_[2] = Mat::Zero(output, hidden);
    for (int l = 0; l < 3; ++l) b_[l] = Vec::Zero(w_[l].rows());
  }

  /// LeCun-normal weights, zero biases.
  static Mlp lecun(int input, int hidden, int output, Rng& rng) {
    Mlp m(input, hidden, output);
    for (auto& w : m.w_) {
      std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(static_cast<double>(w.cols())));
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = static_cast<S>(n(rng));
    }
    return m;
  }

  int input_size() const { return static_cast<int>(w_[0].cols()); }
  int hidden_size() const { return static_cast<int>(w_[0].rows()); }
  int output_size() const { return static_cast<int>(w_[2].rows()); }

  Mat& weight(int l) { return w_[static_cast<std::size_t>(l)]; }
  const Mat& weight(int l) const { return w_[static_cast<std::size_t>(l)]; }
  Vec& bias(int l) { return b_[static_cast<std::size_t>(l)]; }
  const Vec& bias(int l) const { return b_[static_cast<std::size_t>(l)]; }

  static S selu(S x) { return x > S(0) ? S(kSeluLambda) * x : S(kSeluLambda * kSeluAlpha) * std::expm1(x); }
  static S selu_grad(S x) { return x > S(0) ? S(kSeluLambda) : S(kSeluLambda * kSeluAlpha) * std::exp(x); }
  static S elu(S x) { return x > S(0) ? x : std::expm1(x); }
  static S elu_grad(S x) { return x > S(0) ? S(1) : std::exp(x); }

  /// Columns are samples.
  template <class Derived>
  Mat forward(const Eigen::MatrixBase<Derived>& x) const {
    Mat h1 = ((w_[0] * x).colwise() + b_[0]).unaryExpr(&selu);
    Mat h2 = ((w_[1] * h1).colwise() + b_[1]).unaryExpr(&elu);
    return (w_[2] * h2).colwise() + b_[2];
  }

  struct Cache {
    Mat z1, a1, z2, a2;
  };

  template <class Derived>
  Mat forward(const Eigen::MatrixBase<Derived>& x, Cache& c) const {
    c.z1 = (w_[0] * x).colwise() + b_[0];
    c.a1 = c.z1.unaryExpr(&selu);
    c.z2 = (w_[1] * c.a1).colwise() + b_[1];
    c.a2 = c.z2.unaryExpr(&elu);
    return (w_[2] * c.a2).colwise() + b_[2];
  }

  /// Parameter gradient given dL/d(output) for the batch in `x`.
  template <class Derived>
  Mlp backward(const Eigen::MatrixBase<Derived>& x, const Cache& c, const Mat& d_out) const {
    Mlp g;
    g.w_[2] = d_out * c.a2.transpose();
    g.b_[2] = d_out.rowwise().sum();
    const Mat d2 = (w_[2].transpose() * d_out).cwiseProduct(c.z2.unaryExpr(&elu_grad));
    g.w_[1] = d2 * c.a1.transpose();
    g.b_[1] = d2.rowwise().sum();
    const Mat d1 = (w_[1].transpose() * d2).cwiseProduct(c.z1.unaryExpr(&selu_grad));
    g.w_[0] = d1 * x.transpose();
    g.b_[0] = d1.rowwise().sum();
    return g;
  }

  std::size_t param_count() const {
    std::size_t n = 0;
    for (int l = 0; l < 3; ++l) n += static_cast<std::size_t>(w_[l].size() + b_[l].size());
    return n;
  }

  /// Layer by layer: weights (column-major) then biases.
  std::vector<double> flat() const {
    std::vector<double> out;
    out.reserve(param_count());
    for (int l = 0; l < 3; ++l) {
      for (Eigen::Index i = 0; i < w_[l].size(); ++i) out.push_back(static_cast<double>(w_[l].data()[i]));
      for (Eigen::Index i = 0; i < b_[l].size(); ++i) out.push_back(static_cast<double>(b_[l].data()[i]));
    }
    return out;
  }

  void set_flat(std::span<const double> p) {
    if (p.size() != param_count()) throw std::invalid_argument("parameter count mismatch");
    std::size_t k = 0;
    for (int l = 0; l < 3; ++l) {
      for (Eigen::Index i = 0; i < w_[l].size(); ++i) w_[l].data()[i] = static_cast<S>(p[k++]);
      for (Eigen::Index i = 0; i < b_[l].size(); ++i) b_[l].data()[i] = static_cast<S>(p[k++]);
    }
  }

  template <class T>
  Mlp<T> cast() const {
    Mlp<T> m(input_size(), hidden_size(), output_size());
    for (int l = 0; l < 3; ++l) {
      m.weight(l) = w_[l].template cast<T>();
      m.bias(l) = b_[l].template cast<T>();
    }
    return m;
  }

 private:
  template <class>
  friend class GradientOptimizer;

  std::array<Mat, 3> w_;
  std::array<Vec, 3> b_;
};

enum class GradientRule { Adam, Sgd };

template <class S>
class GradientOptimizer {
 public:
  GradientOptimizer() = default;
  GradientOptimizer(const Mlp<S>& shape, double lr, GradientRule rule = GradientRule::Adam)
      : m_(shape.input_size(), shape.hidden_size(), shape.output_size()),
        v_(shape.input_size(), shape.hidden_size(), shape.output_size()),
        lr_(lr),
        rule_(rule) {}

  void step(Mlp<S>& net, const Mlp<S>& grad) {
    ++t_;
    if (rule_ == GradientRule::Sgd) {
      for (int l = 0; l < 3; ++l) {
        net.w_[l] -= S(lr_) * grad.w_[l];
        net.b_[l] -= S(lr_) * grad.b_[l];
      }
      return;
    }
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
      m = S(kBeta1) * m + S(1.0 - kBeta1) * g;
      v = S(kBeta2) * v + S(1.0 - kBeta2) * g.cwiseAbs2();
      p.array() -= S(lr_ / c1) * m.array() / ((v.array() / S(c2)).sqrt() + S(kEps));
    };
    for (int l = 0; l < 3; ++l) {
      update(net.w_[l], grad.w_[l], m_.w_[l], v_.w_[l]);
      update(net.b_[l], grad.b_[l], m_.b_[l], v_.b_[l]);
    }
  }

  double learning_rate() const { return lr_; }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  Mlp<S> m_, v_;
  double lr_ = 1e-3;
  GradientRule rule_ = GradientRule::Adam;
  int t_ = 0;
};

}  // namespace oranits

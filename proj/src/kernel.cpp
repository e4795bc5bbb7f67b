#include "exgeo/kernel.hpp"

#include <cmath>

namespace exgeo {

namespace {

void check_dim(int d) {
  if (d <= 0 || d > kMaxDim)
    throw ValidationError("Kernel: dimension must be in [1," + std::to_string(kMaxDim) +
                          "], got " + std::to_string(d));
}

class GaussianBump final : public ScalarField {
public:
  GaussianBump(int d, double a) : d_(d), a_(a) {}
  int dim() const override { return d_; }

  double value(const Vec& x) const override { return std::exp(-a_ * x.squaredNorm()); }

  void gradient(const Vec& x, Vec& out) const override {
    out = (-2.0 * a_ * std::exp(-a_ * x.squaredNorm())) * x;
  }

  void hessian(const Vec& x, Mat& out) const override {
    const double e = std::exp(-a_ * x.squaredNorm());
    out = (4.0 * a_ * a_ * e) * (x * x.transpose());
    out.diagonal().array() -= 2.0 * a_ * e;
  }

  void eval(const Vec& x, double& v, Vec& g, Mat& h) const override {
    const double e = std::exp(-a_ * x.squaredNorm());
    v = e;
    g = (-2.0 * a_ * e) * x;
    h = (4.0 * a_ * a_ * e) * (x * x.transpose());
    h.diagonal().array() -= 2.0 * a_ * e;
  }

private:
  int d_;
  double a_;
};

class Oscillating final : public ScalarField {
public:
  Oscillating(int d, double a, Vec theta) : d_(d), a_(a), theta_(std::move(theta)) {}
  int dim() const override { return d_; }

  double value(const Vec& x) const override {
    return (1.0 + std::cos(theta_.dot(x))) * std::exp(-a_ * x.squaredNorm());
  }

  void gradient(const Vec& x, Vec& out) const override {
    double v;
    Mat h;
    eval(x, v, out, h);
  }

  void hessian(const Vec& x, Mat& out) const override {
    double v;
    Vec g;
    eval(x, v, g, out);
  }

  void eval(const Vec& x, double& v, Vec& g, Mat& h) const override {
    const double u = theta_.dot(x);
    const double c = std::cos(u);
    const double s = std::sin(u);
    const double e = std::exp(-a_ * x.squaredNorm());
    v = (1.0 + c) * e;
    g = e * (-s * theta_ - (2.0 * a_ * (1.0 + c)) * x);
    // H = e * [ -c theta theta^T + 2as (theta x^T + x theta^T)
    //           + (1+c)(4a^2 x x^T - 2a I) ]
    h = (-c * e) * (theta_ * theta_.transpose());
    h += (2.0 * a_ * s * e) * (theta_ * x.transpose() + x * theta_.transpose());
    h += ((1.0 + c) * 4.0 * a_ * a_ * e) * (x * x.transpose());
    h.diagonal().array() -= 2.0 * a_ * (1.0 + c) * e;
  }

private:
  int d_;
  double a_;
  Vec theta_;
};

// Arbitrary field rescaled by a constant.
class ScaledField final : public ScalarField {
public:
  ScaledField(std::shared_ptr<const ScalarField> base, double c)
      : base_(std::move(base)), c_(c) {}
  int dim() const override { return base_->dim(); }
  double value(const Vec& t) const override { return c_ * base_->value(t); }
  void gradient(const Vec& t, Vec& out) const override {
    base_->gradient(t, out);
    out *= c_;
  }
  void hessian(const Vec& t, Mat& out) const override {
    base_->hessian(t, out);
    out *= c_;
  }
  void eval(const Vec& t, double& v, Vec& g, Mat& h) const override {
    base_->eval(t, v, g, h);
    v *= c_;
    g *= c_;
    h *= c_;
  }

private:
  std::shared_ptr<const ScalarField> base_;
  double c_;
};

}  // namespace

Kernel Kernel::gaussian_bump(int dim, double a) {
  check_dim(dim);
  if (!(a > 0.0)) throw ValidationError("gaussian_bump: a must be positive");
  Kernel k;
  k.family_ = Family::gaussian_bump;
  k.name_ = "gaussian_bump";
  k.a_ = a;
  k.field_ = std::make_shared<GaussianBump>(dim, a);
  k.sup_abs_ = 1.0;
  k.envelope_ = [a](double r) { return std::exp(-a * r * r); };
  return k;
}

Kernel Kernel::oscillating(int dim, double a, const Vec& theta) {
  check_dim(dim);
  if (!(a > 0.0)) throw ValidationError("oscillating: a must be positive");
  if (theta.size() != dim) throw ValidationError("oscillating: theta dimension mismatch");
  Kernel k;
  k.family_ = Family::oscillating;
  k.name_ = "oscillating";
  k.a_ = a;
  k.theta_ = theta;
  k.field_ = std::make_shared<Oscillating>(dim, a, theta);
  k.sup_abs_ = 2.0;
  k.envelope_ = [a](double r) { return 2.0 * std::exp(-a * r * r); };
  return k;
}

Kernel Kernel::custom(std::shared_ptr<const ScalarField> field, double sup_abs,
                      std::function<double(double)> radial_envelope, std::string name) {
  if (!field) throw ValidationError("custom kernel: null field");
  check_dim(field->dim());
  if (!(sup_abs > 0.0)) throw ValidationError("custom kernel: sup_abs must be positive");
  if (!radial_envelope) throw ValidationError("custom kernel: envelope required");
  Kernel k;
  k.family_ = Family::custom;
  k.name_ = std::move(name);
  k.field_ = std::move(field);
  k.sup_abs_ = sup_abs;
  k.envelope_ = std::move(radial_envelope);
  return k;
}

Kernel Kernel::scaled(double factor) const {
  if (factor == 0.0) throw ValidationError("Kernel::scaled: factor must be nonzero");
  Kernel k;
  k.family_ = Family::custom;
  k.name_ = name_ + "_scaled";
  k.a_ = a_;
  k.theta_ = theta_;
  k.field_ = std::make_shared<ScaledField>(field_, factor);
  k.sup_abs_ = std::abs(factor) * sup_abs_;
  const double c = std::abs(factor);
  auto env = envelope_;
  k.envelope_ = [env, c](double r) { return c * env(r); };
  return k;
}

double Kernel::support_radius(double delta_cut) const {
  if (!(delta_cut > 0.0 && delta_cut < 1.0))
    throw ValidationError("support_radius: delta_cut must be in (0,1)");
  const double target = delta_cut * sup_abs_;
  if (envelope_(0.0) <= target) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (envelope_(hi) > target) {
    hi *= 2.0;
    if (hi > 1e9)
      throw ValidationError("support_radius: envelope does not decay below cutoff");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (envelope_(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace exgeo

#pragma once

#include <functional>
#include <memory>
#include <string>

#include "exgeo/types.hpp"

// Smooth kernels g : R^d -> R for moving-average fields, exposed through a
// generic C^2 evaluator interface so that downstream machinery (critical
// point search, simulation, quadrature) is kernel-agnostic.  Plug-in kernels
// implement ScalarField; they must be C^2 on a neighborhood of the domain of
// interest and, for the critical-point machinery to be meaningful, generic
// enough that restricted Hessians are non-degenerate (this is a documented
// requirement, not something the library can verify).

namespace exgeo {

class ScalarField {
public:
  virtual ~ScalarField() = default;
  virtual int dim() const = 0;
  virtual double value(const Vec& t) const = 0;
  virtual void gradient(const Vec& t, Vec& out) const = 0;
  virtual void hessian(const Vec& t, Mat& out) const = 0;

  // Fused evaluation; families override this to share the transcendentals.
  virtual void eval(const Vec& t, double& v, Vec& grad, Mat& hess) const {
    v = value(t);
    gradient(t, grad);
    hessian(t, hess);
  }
};

// Value-semantic handle to an immutable kernel.  Besides the pointwise
// evaluator it carries the two pieces of global information the simulation
// and quadrature layers need:
//   sup_abs          = sup over R^d of |g|
//   radial_envelope  = nonincreasing r -> bound on |g(x)| for all ||x||_2 >= r
class Kernel {
public:
  enum class Family { gaussian_bump, oscillating, custom };

  // exp(-a * ||t||^2), a > 0.
  static Kernel gaussian_bump(int dim, double a);

  // (1 + cos<theta, t>) * exp(-a * ||t||^2), a > 0.  Note: this family has a
  // whole manifold {<theta,t> = pi mod 2pi} where the gradient vanishes at
  // value exactly 0 with a rank-one Hessian; catalog-style critical point
  // searches must be configured to drop those null-level roots.
  static Kernel oscillating(int dim, double a, const Vec& theta);

  // User-supplied evaluator plus the global data the library cannot derive.
  static Kernel custom(std::shared_ptr<const ScalarField> field, double sup_abs,
                       std::function<double(double)> radial_envelope,
                       std::string name = "custom");

  // This kernel scaled by a nonzero factor (envelope and sup scale by |c|).
  Kernel scaled(double factor) const;

  int dim() const { return field_->dim(); }
  Family family() const { return family_; }
  const std::string& name() const { return name_; }
  double param_a() const { return a_; }
  const Vec& theta() const { return theta_; }

  const ScalarField& field() const { return *field_; }
  double sup_abs() const { return sup_abs_; }
  double radial_envelope(double r) const { return envelope_(r); }

  // Smallest R with radial_envelope(R) <= delta_cut * sup_abs, by bisection.
  double support_radius(double delta_cut) const;

  double value(const Vec& t) const { return field_->value(t); }
  void gradient(const Vec& t, Vec& out) const { field_->gradient(t, out); }
  void hessian(const Vec& t, Mat& out) const { field_->hessian(t, out); }
  void eval(const Vec& t, double& v, Vec& g, Mat& h) const { field_->eval(t, v, g, h); }

private:
  Kernel() = default;
  Family family_ = Family::custom;
  std::string name_;
  double a_ = 0.0;
  Vec theta_;
  std::shared_ptr<const ScalarField> field_;
  double sup_abs_ = 0.0;
  std::function<double(double)> envelope_;
};

// The section t -> g(s + t): what a single atom placed at shift s contributes
// over the parameter cube.
class SectionField final : public ScalarField {
public:
  SectionField(const Kernel& kernel, Vec s) : kernel_(kernel), s_(std::move(s)) {}
  int dim() const override { return kernel_.dim(); }
  double value(const Vec& t) const override { return kernel_.value(x(t)); }
  void gradient(const Vec& t, Vec& out) const override { kernel_.gradient(x(t), out); }
  void hessian(const Vec& t, Mat& out) const override { kernel_.hessian(x(t), out); }
  void eval(const Vec& t, double& v, Vec& g, Mat& h) const override {
    kernel_.eval(x(t), v, g, h);
  }
  const Vec& shift() const { return s_; }

private:
  Vec x(const Vec& t) const { return s_ + t; }
  Kernel kernel_;
  Vec s_;
};

}  // namespace exgeo

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "tauber/measure.hpp"

namespace tauber {

enum class Backend { closed_form, quadrature };

struct QuadratureSettings {
  double rel_tol = 1e-12;
  double abs_tol = 1e-10;
};

struct TransformValue {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Evaluates Psi_mu(lambda) = int exp(-lambda x) mu(dx) with a fixed
/// backend. Results are cached per exact lambda; the cache is guarded by a
/// mutex, so one evaluator may be shared across threads. Psi_{|mu|} goes
/// through a lazily built evaluator for the total variation.
class TransformEvaluator {
 public:
  explicit TransformEvaluator(SignedMeasure mu, Backend backend = Backend::closed_form,
                              QuadratureSettings settings = {}, bool cache = true);

  const SignedMeasure& measure() const { return mu_; }
  Backend backend() const { return backend_; }
  const QuadratureSettings& settings() const { return settings_; }

  TransformValue evaluate(double lambda) const;
  double operator()(double lambda) const { return evaluate(lambda).value; }

  /// Evaluator for |mu| with the same backend.
  const TransformEvaluator& total_variation_evaluator() const;

 private:
  TransformValue compute(double lambda) const;

  struct Shared {
    std::mutex lock;
    std::map<double, TransformValue> cache;
    std::once_flag abs_once;
    std::unique_ptr<TransformEvaluator> abs;
  };

  SignedMeasure mu_;
  Backend backend_;
  QuadratureSettings settings_;
  bool cache_enabled_;
  std::shared_ptr<Shared> shared_;
};

double psi(const TransformEvaluator& ev, double lambda);
double psi_abs(const TransformEvaluator& ev, double lambda);

/// Closed-form shortcuts.
double psi(const SignedMeasure& mu, double lambda);
double psi_abs(const SignedMeasure& mu, double lambda);

/// Closed-form transform with the error bound of any quadrature used on
/// oscillating non-integer powers.
TransformValue psi_closed(const SignedMeasure& mu, double lambda);
/// Truncated adaptive quadrature with a certified exponential tail bound.
TransformValue psi_quadrature(const SignedMeasure& mu, double lambda,
                              const QuadratureSettings& settings = {});

enum class Membership { member, not_member, inconclusive };

struct MembershipVerdict {
  Membership status = Membership::member;
  double witness_lambda = 0.0;
  std::string evidence;
};

std::string to_string(Membership m);

/// Screens mu for a finite transform of |mu| at every lambda > 0. Every
/// representable measure is a member: each term is at most polynomial
/// times a bounded factor, and exp(-lambda x) dominates any polynomial.
MembershipVerdict check_membership(const SignedMeasure& mu);

/// |Psi_mu(lambda + eps) - Psi_{tilt(mu, eps)}(lambda)|.
double tilt_identity_residual(const SignedMeasure& mu, double eps, double lambda);

}  // namespace tauber

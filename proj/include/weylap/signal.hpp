#pragma once

// Signals: immutable, evaluable functions R -> R^n built as expression trees.
//
// Every node is piecewise continuous and locally p-integrable. Pulse edges
// follow the right-continuous convention, e.g. the unit pulse is 1 on
// [0, 1/2) and 0 elsewhere. Signals are cheap to copy (shared immutable
// nodes) and safe to evaluate concurrently.

#include "weylap/common.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace weylap {

namespace detail {
class SignalNode;
}

/// One term a*sin(omega*t + phase) of a trigonometric sum.
struct TrigTerm {
  double amplitude = 1.0;
  double omega = 1.0;
  double phase = 0.0;
};

class ParametricSignal;

class Signal {
 public:
  /// Callback form used by `from_function`: writes f(t) into out (sized dim).
  using Body = std::function<void(double t, Vec& out)>;

  static Signal constant(const Vec& c);
  static Signal constant(double c);
  static Signal zero(int dim = 1);

  /// 1 on [0, 1/2), 0 elsewhere.
  static Signal unit_pulse();

  /// height on [phase + kP, phase + kP + width) for every integer k.
  static Signal pulse_train(double period, double width, double height = 1.0,
                            double phase = 0.0);

  static Signal trig_sum(std::vector<TrigTerm> terms);
  static Signal sine() { return trig_sum({{1.0, 1.0, 0.0}}); }

  /// amplitude * exp(-rate (t - start)) on [start, end), 0 elsewhere.
  static Signal exp_decay(double amplitude, double rate, double start,
                          double end = kInf);

  /// t -> integral of f from anchor to t. An empty anchor means -infinity,
  /// which requires f to vanish left of some certified edge.
  /// Throws NonIntegrableTail when that edge cannot be certified.
  static Signal primitive(const Signal& f, std::optional<double> anchor);

  /// Piecewise-linear interpolation through (t[i], values[i]); end values
  /// are held outside [t.front(), t.back()].
  static Signal sampled(std::vector<double> t, std::vector<Vec> values);

  /// Arbitrary piecewise-continuous body. `breaks` lists discontinuities
  /// (or kinks) that quadrature should respect; it may be empty.
  static Signal from_function(int dim, Body body, std::string label = "function",
                              std::vector<double> breaks = {});

  /// Scalar signal t -> |f(t)| (Euclidean norm).
  static Signal magnitude(const Signal& f);

  /// t -> f(t, x(t)).
  static Signal compose(const ParametricSignal& f, const Signal& x);

  Signal shifted(double tau) const;
  Signal scaled(double factor) const;
  Signal with_label(std::string label) const;

  friend Signal operator+(const Signal& a, const Signal& b);
  friend Signal operator-(const Signal& a, const Signal& b);
  friend Signal operator*(double c, const Signal& f) { return f.scaled(c); }

  static Signal sum(std::span<const Signal> terms);

  int dim() const;
  const std::string& label() const { return label_; }
  std::string kind() const;

  void eval(double t, Vec& out) const;
  Vec operator()(double t) const;
  /// Convenience for scalar signals: first component of f(t).
  double scalar(double t) const;

  /// A point e with f == 0 on (-inf, e), +inf for the zero signal, or empty
  /// when no such point can be certified.
  std::optional<double> left_edge() const;

  /// Appends the discontinuities and kinks lying in [a, b] to out.
  void breakpoints(double a, double b, std::vector<double>& out) const;

  const detail::SignalNode& node() const { return *node_; }

 private:
  Signal(std::shared_ptr<const detail::SignalNode> node, std::string label);
  std::shared_ptr<const detail::SignalNode> node_;
  std::string label_;
};

enum class Nonlinearity { zero, identity, sine, tanh };

const char* to_string(Nonlinearity n);
std::optional<Nonlinearity> parse_nonlinearity(const std::string& name);

/// f(t, u): R x R^n -> R^n with a declared Lipschitz bound
/// |f(t,u) - f(t,v)| <= L(t) |u - v|.
class ParametricSignal {
 public:
  using Body = std::function<void(double t, const Vec& u, Vec& out)>;

  ParametricSignal(int dim, Body body, Signal lipschitz, std::string label,
                   std::vector<Signal> time_parts = {});

  /// f(t, u) = f(t); L == 0.
  static ParametricSignal from_signal(const Signal& f);

  /// f(t, u) = forcing(t) + coupling * m(t) * phi(u) componentwise, with m a
  /// scalar modulation. L(t) = |coupling m(t)| Lip(phi).
  static ParametricSignal separable(const Signal& forcing, const Signal& modulation,
                                    double coupling, Nonlinearity phi);

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }

  void eval(double t, const Vec& u, Vec& out) const { body_(t, u, out); }
  Vec operator()(double t, const Vec& u) const;

  /// Scalar Lipschitz bound L(.).
  const Signal& lipschitz() const { return lipschitz_; }
  /// Set when L(.) is constant in t.
  std::optional<double> lipschitz_constant() const { return lipschitz_constant_; }

  /// The signal t -> f(t, 0).
  Signal at_zero() const;

  /// Time discontinuities of t -> f(t, u), independent of u.
  void breakpoints(double a, double b, std::vector<double>& out) const;

  /// Largest observed |f(t,u)-f(t,v)| / (L(t)|u-v|) over random probes drawn
  /// with the given seed; values <= 1 are consistent with the declared bound.
  double lipschitz_spot_check(unsigned long long seed, int probes, double t_min,
                              double t_max, double u_radius) const;

  ParametricSignal with_lipschitz_constant(double L) const;

 private:
  int dim_;
  Body body_;
  Signal lipschitz_;
  std::optional<double> lipschitz_constant_;
  std::string label_;
  std::vector<Signal> time_parts_;
};

/// Closed-form solution of x' = -x + unit_pulse(t), the bounded solution
/// vanishing for t <= 0.
Signal relaxed_unit_pulse();

}  // namespace weylap

#include "weylap/signal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace weylap {

namespace detail {

class SignalNode {
 public:
  explicit SignalNode(int dim) : dim_(dim) {}
  virtual ~SignalNode() = default;

  int dim() const { return dim_; }
  virtual std::string kind() const = 0;
  virtual void eval(double t, Vec& out) const = 0;
  virtual std::optional<double> left_edge() const { return std::nullopt; }
  virtual void breakpoints(double, double, std::vector<double>&) const {}

 private:
  int dim_;
};

}  // namespace detail

namespace {

using detail::SignalNode;
using NodePtr = std::shared_ptr<const SignalNode>;

void push_if_inside(double x, double a, double b, std::vector<double>& out) {
  if (x >= a && x <= b) out.push_back(x);
}

class ConstantNode final : public SignalNode {
 public:
  explicit ConstantNode(const Vec& c) : SignalNode(static_cast<int>(c.size())), c_(c) {}
  std::string kind() const override { return "constant"; }
  void eval(double, Vec& out) const override { out = c_; }
  std::optional<double> left_edge() const override {
    if (c_.isZero(0.0)) return kInf;
    return std::nullopt;
  }

 private:
  Vec c_;
};

class UnitPulseNode final : public SignalNode {
 public:
  UnitPulseNode() : SignalNode(1) {}
  std::string kind() const override { return "paper_step"; }
  void eval(double t, Vec& out) const override {
    out.resize(1);
    out(0) = (t >= 0.0 && t < 0.5) ? 1.0 : 0.0;
  }
  std::optional<double> left_edge() const override { return 0.0; }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    push_if_inside(0.0, a, b, out);
    push_if_inside(0.5, a, b, out);
  }
};

class PulseTrainNode final : public SignalNode {
 public:
  PulseTrainNode(double period, double width, double height, double phase)
      : SignalNode(1), period_(period), width_(width), height_(height), phase_(phase) {}
  std::string kind() const override { return "pulse_train"; }
  void eval(double t, Vec& out) const override {
    out.resize(1);
    double r = std::fmod(t - phase_, period_);
    if (r < 0.0) r += period_;
    out(0) = r < width_ ? height_ : 0.0;
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    const double k0 = std::floor((a - phase_) / period_) - 1.0;
    for (double k = k0;; k += 1.0) {
      const double start = phase_ + k * period_;
      if (start > b) break;
      push_if_inside(start, a, b, out);
      push_if_inside(start + width_, a, b, out);
    }
  }

 private:
  double period_, width_, height_, phase_;
};

class TrigSumNode final : public SignalNode {
 public:
  explicit TrigSumNode(std::vector<TrigTerm> terms) : SignalNode(1), terms_(std::move(terms)) {}
  std::string kind() const override { return "trig_sum"; }
  void eval(double t, Vec& out) const override {
    double s = 0.0;
    for (const auto& term : terms_) s += term.amplitude * std::sin(term.omega * t + term.phase);
    out.resize(1);
    out(0) = s;
  }
  std::optional<double> left_edge() const override {
    for (const auto& term : terms_)
      if (term.amplitude != 0.0) return std::nullopt;
    return kInf;
  }

 private:
  std::vector<TrigTerm> terms_;
};

class ExpDecayNode final : public SignalNode {
 public:
  ExpDecayNode(double amplitude, double rate, double start, double end)
      : SignalNode(1), amplitude_(amplitude), rate_(rate), start_(start), end_(end) {}
  std::string kind() const override { return "exp_decay"; }
  void eval(double t, Vec& out) const override {
    out.resize(1);
    out(0) = (t >= start_ && t < end_) ? amplitude_ * std::exp(-rate_ * (t - start_)) : 0.0;
  }
  std::optional<double> left_edge() const override { return start_; }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    push_if_inside(start_, a, b, out);
    if (std::isfinite(end_)) push_if_inside(end_, a, b, out);
  }

 private:
  double amplitude_, rate_, start_, end_;
};

// Gauss-Legendre, 10 nodes on [-1, 1].
constexpr std::array<double, 5> kGl10X = {0.1488743389816312, 0.4333953941292472,
                                          0.6794095682990244, 0.8650633666889845,
                                          0.9739065285171717};
constexpr std::array<double, 5> kGl10W = {0.2955242247147529, 0.2692667193099963,
                                          0.2190863625159820, 0.1494513491505806,
                                          0.0666713443086881};

class PrimitiveNode final : public SignalNode {
 public:
  PrimitiveNode(Signal f, double anchor)
      : SignalNode(f.dim()), f_(std::move(f)), anchor_(anchor) {
    closed_form_pulse_ = (f_.node().kind() == "paper_step") && std::isinf(anchor_);
  }
  std::string kind() const override { return "primitive"; }

  void eval(double t, Vec& out) const override {
    if (closed_form_pulse_) {
      out.resize(1);
      out(0) = std::clamp(t, 0.0, 0.5);
      return;
    }
    double lower = anchor_;
    if (std::isinf(lower)) {
      const double edge = *f_.left_edge();
      out = Vec::Zero(dim());
      if (!std::isfinite(edge) || t <= edge) return;
      lower = edge;
    }
    if (t >= lower) {
      integrate(lower, t, out);
    } else {
      integrate(t, lower, out);
      out = -out;
    }
  }

  std::optional<double> left_edge() const override {
    const auto edge = f_.left_edge();
    if (!edge) return std::nullopt;
    if (std::isinf(anchor_) || anchor_ <= *edge) return edge;
    return std::nullopt;
  }

  void breakpoints(double a, double b, std::vector<double>& out) const override {
    f_.breakpoints(a, b, out);
  }

 private:
  // Piecewise Gauss-Legendre between the integrand's breakpoints, panels of
  // length at most kPanel.
  void integrate(double a, double b, Vec& out) const {
    static constexpr double kPanel = 0.125;
    std::vector<double> cuts{a, b};
    f_.breakpoints(a, b, cuts);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    out = Vec::Zero(dim());
    Vec value(dim());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i];
      const double hi = cuts[i + 1];
      const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / kPanel)));
      const double width = (hi - lo) / panels;
      for (int k = 0; k < panels; ++k) {
        const double mid = lo + (k + 0.5) * width;
        const double half = 0.5 * width;
        for (std::size_t j = 0; j < kGl10X.size(); ++j) {
          f_.eval(mid - half * kGl10X[j], value);
          out += (kGl10W[j] * half) * value;
          f_.eval(mid + half * kGl10X[j], value);
          out += (kGl10W[j] * half) * value;
        }
      }
    }
  }

  Signal f_;
  double anchor_;
  bool closed_form_pulse_ = false;
};

class SumNode final : public SignalNode {
 public:
  explicit SumNode(std::vector<Signal> terms)
      : SignalNode(terms.front().dim()), terms_(std::move(terms)) {}
  std::string kind() const override { return "sum"; }
  void eval(double t, Vec& out) const override {
    terms_.front().eval(t, out);
    Vec tmp(dim());
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      terms_[i].eval(t, tmp);
      out += tmp;
    }
  }
  std::optional<double> left_edge() const override {
    double edge = kInf;
    for (const auto& s : terms_) {
      const auto e = s.left_edge();
      if (!e) return std::nullopt;
      edge = std::min(edge, *e);
    }
    return edge;
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    for (const auto& s : terms_) s.breakpoints(a, b, out);
  }

 private:
  std::vector<Signal> terms_;
};

class ScaleNode final : public SignalNode {
 public:
  ScaleNode(Signal f, double factor) : SignalNode(f.dim()), f_(std::move(f)), factor_(factor) {}
  std::string kind() const override { return "scale"; }
  void eval(double t, Vec& out) const override {
    f_.eval(t, out);
    out *= factor_;
  }
  std::optional<double> left_edge() const override {
    if (factor_ == 0.0) return kInf;
    return f_.left_edge();
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    f_.breakpoints(a, b, out);
  }

 private:
  Signal f_;
  double factor_;
};

class ShiftNode final : public SignalNode {
 public:
  ShiftNode(Signal f, double tau) : SignalNode(f.dim()), f_(std::move(f)), tau_(tau) {}
  std::string kind() const override { return "shift"; }
  void eval(double t, Vec& out) const override { f_.eval(t + tau_, out); }
  const Signal& base() const { return f_; }
  double tau() const { return tau_; }
  std::optional<double> left_edge() const override {
    const auto e = f_.left_edge();
    if (!e) return std::nullopt;
    return *e - tau_;
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    std::vector<double> inner;
    f_.breakpoints(a + tau_, b + tau_, inner);
    for (double x : inner) out.push_back(x - tau_);
  }

 private:
  Signal f_;
  double tau_;
};

class SampledNode final : public SignalNode {
 public:
  SampledNode(std::vector<double> t, std::vector<Vec> values)
      : SignalNode(static_cast<int>(values.front().size())),
        t_(std::move(t)),
        values_(std::move(values)) {}
  std::string kind() const override { return "sampled"; }
  void eval(double t, Vec& out) const override {
    if (t <= t_.front()) {
      out = values_.front();
      return;
    }
    if (t >= t_.back()) {
      out = values_.back();
      return;
    }
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - t_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - t_[lo]) / (t_[hi] - t_[lo]);
    out = (1.0 - w) * values_[lo] + w * values_[hi];
  }
  std::optional<double> left_edge() const override {
    if (values_.front().isZero(0.0)) return t_.front();
    return std::nullopt;
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    auto lo = std::lower_bound(t_.begin(), t_.end(), a);
    auto hi = std::upper_bound(t_.begin(), t_.end(), b);
    out.insert(out.end(), lo, hi);
  }

 private:
  std::vector<double> t_;
  std::vector<Vec> values_;
};

class FunctionNode final : public SignalNode {
 public:
  FunctionNode(int dim, Signal::Body body, std::string kind, std::vector<double> breaks)
      : SignalNode(dim), body_(std::move(body)), kind_(std::move(kind)), breaks_(std::move(breaks)) {
    std::sort(breaks_.begin(), breaks_.end());
  }
  std::string kind() const override { return kind_; }
  void eval(double t, Vec& out) const override {
    out.resize(dim());
    body_(t, out);
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    for (double x : breaks_) push_if_inside(x, a, b, out);
  }

 private:
  Signal::Body body_;
  std::string kind_;
  std::vector<double> breaks_;
};

class MagnitudeNode final : public SignalNode {
 public:
  explicit MagnitudeNode(Signal f) : SignalNode(1), f_(std::move(f)) {}
  std::string kind() const override { return "magnitude"; }
  void eval(double t, Vec& out) const override {
    Vec v(f_.dim());
    f_.eval(t, v);
    out.resize(1);
    out(0) = v.norm();
  }
  std::optional<double> left_edge() const override { return f_.left_edge(); }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    f_.breakpoints(a, b, out);
  }

 private:
  Signal f_;
};

class ComposeNode final : public SignalNode {
 public:
  ComposeNode(ParametricSignal f, Signal x) : SignalNode(f.dim()), f_(std::move(f)), x_(std::move(x)) {}
  std::string kind() const override { return "compose"; }
  void eval(double t, Vec& out) const override {
    Vec u(x_.dim());
    x_.eval(t, u);
    out.resize(dim());
    f_.eval(t, u, out);
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    f_.breakpoints(a, b, out);
    x_.breakpoints(a, b, out);
  }

 private:
  ParametricSignal f_;
  Signal x_;
};

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string(what) + " must be positive");
}

}  // namespace

Signal::Signal(std::shared_ptr<const detail::SignalNode> node, std::string label)
    : node_(std::move(node)), label_(std::move(label)) {}

Signal Signal::constant(const Vec& c) {
  if (c.size() < 1) throw InvalidArgument("constant signal needs at least one component");
  return Signal(std::make_shared<ConstantNode>(c), "constant");
}

Signal Signal::constant(double c) { return constant(scalar_vec(c)); }

Signal Signal::zero(int dim) { return constant(Vec::Zero(dim)); }

Signal Signal::unit_pulse() { return Signal(std::make_shared<UnitPulseNode>(), "paper_step"); }

Signal Signal::pulse_train(double period, double width, double height, double phase) {
  require_positive(period, "pulse period");
  if (!(width >= 0.0 && width <= period)) throw InvalidArgument("pulse width must lie in [0, period]");
  return Signal(std::make_shared<PulseTrainNode>(period, width, height, phase), "pulse_train");
}

Signal Signal::trig_sum(std::vector<TrigTerm> terms) {
  return Signal(std::make_shared<TrigSumNode>(std::move(terms)), "trig_sum");
}

Signal Signal::exp_decay(double amplitude, double rate, double start, double end) {
  if (!(rate >= 0.0)) throw InvalidArgument("decay rate must be nonnegative");
  if (!(end > start)) throw InvalidArgument("exp_decay needs end > start");
  return Signal(std::make_shared<ExpDecayNode>(amplitude, rate, start, end), "exp_decay");
}

Signal Signal::primitive(const Signal& f, std::optional<double> anchor) {
  if (!anchor) {
    if (!f.left_edge())
      throw NonIntegrableTail("primitive from -inf needs a signal with certified left support (got '" +
                              f.kind() + "')");
    return Signal(std::make_shared<PrimitiveNode>(f, -kInf), "primitive(" + f.label() + ")");
  }
  if (!std::isfinite(*anchor)) throw InvalidArgument("primitive anchor must be finite or -inf");
  return Signal(std::make_shared<PrimitiveNode>(f, *anchor), "primitive(" + f.label() + ")");
}

Signal Signal::sampled(std::vector<double> t, std::vector<Vec> values) {
  if (t.size() < 2 || t.size() != values.size())
    throw InvalidArgument("sampled signal needs >= 2 points and matching value count");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw InvalidArgument("sampled times must be strictly increasing");
  const auto n = values.front().size();
  for (const auto& v : values)
    if (v.size() != n) throw DimensionMismatch("sampled values have inconsistent dimensions");
  return Signal(std::make_shared<SampledNode>(std::move(t), std::move(values)), "sampled");
}

Signal Signal::from_function(int dim, Body body, std::string label, std::vector<double> breaks) {
  if (dim < 1 || dim > kMaxDim) throw InvalidArgument("signal dimension out of range");
  auto node = std::make_shared<FunctionNode>(dim, std::move(body), label, std::move(breaks));
  return Signal(std::move(node), std::move(label));
}

Signal Signal::magnitude(const Signal& f) {
  return Signal(std::make_shared<MagnitudeNode>(f), "|" + f.label() + "|");
}

Signal Signal::compose(const ParametricSignal& f, const Signal& x) {
  if (f.dim() != x.dim()) throw DimensionMismatch("compose: f and x dimensions differ");
  return Signal(std::make_shared<ComposeNode>(f, x), f.label() + "(t," + x.label() + ")");
}

Signal Signal::shifted(double tau) const {
  if (!std::isfinite(tau)) throw InvalidArgument("shift must be finite");
  // Fold nested shifts so that shift(shift(f, a), b) is shift(f, a + b) exactly.
  if (const auto* inner = dynamic_cast<const ShiftNode*>(node_.get()))
    return Signal(std::make_shared<ShiftNode>(inner->base(), inner->tau() + tau), label_);
  return Signal(std::make_shared<ShiftNode>(*this, tau), label_);
}

Signal Signal::scaled(double factor) const {
  return Signal(std::make_shared<ScaleNode>(*this, factor), label_);
}

Signal Signal::with_label(std::string label) const { return Signal(node_, std::move(label)); }

Signal Signal::sum(std::span<const Signal> terms) {
  if (terms.empty()) throw InvalidArgument("sum of no signals");
  for (const auto& s : terms)
    if (s.dim() != terms.front().dim()) throw DimensionMismatch("sum: signal dimensions differ");
  return Signal(std::make_shared<SumNode>(std::vector<Signal>(terms.begin(), terms.end())), "sum");
}

Signal operator+(const Signal& a, const Signal& b) {
  const std::array<Signal, 2> terms{a, b};
  return Signal::sum(terms);
}

Signal operator-(const Signal& a, const Signal& b) { return a + b.scaled(-1.0); }

int Signal::dim() const { return node_->dim(); }

std::string Signal::kind() const { return node_->kind(); }

void Signal::eval(double t, Vec& out) const { node_->eval(t, out); }

Vec Signal::operator()(double t) const {
  Vec out(dim());
  node_->eval(t, out);
  return out;
}

double Signal::scalar(double t) const {
  Vec out(dim());
  node_->eval(t, out);
  return out(0);
}

std::optional<double> Signal::left_edge() const { return node_->left_edge(); }

void Signal::breakpoints(double a, double b, std::vector<double>& out) const {
  node_->breakpoints(a, b, out);
}

Signal relaxed_unit_pulse() {
  const double tail_amplitude = (std::sqrt(std::exp(1.0)) - 1.0) * std::exp(-0.5);
  const std::array<Signal, 3> pieces{Signal::unit_pulse(),
                                     Signal::exp_decay(-1.0, 1.0, 0.0, 0.5),
                                     Signal::exp_decay(tail_amplitude, 1.0, 0.5)};
  return Signal::sum(pieces).with_label("relaxed_unit_pulse");
}

// ---------------------------------------------------------------------------
// ParametricSignal

const char* to_string(Nonlinearity n) {
  switch (n) {
    case Nonlinearity::zero: return "zero";
    case Nonlinearity::identity: return "identity";
    case Nonlinearity::sine: return "sin";
    case Nonlinearity::tanh: return "tanh";
  }
  return "?";
}

std::optional<Nonlinearity> parse_nonlinearity(const std::string& name) {
  if (name == "zero") return Nonlinearity::zero;
  if (name == "identity") return Nonlinearity::identity;
  if (name == "sin") return Nonlinearity::sine;
  if (name == "tanh") return Nonlinearity::tanh;
  return std::nullopt;
}

ParametricSignal::ParametricSignal(int dim, Body body, Signal lipschitz, std::string label,
                                   std::vector<Signal> time_parts)
    : dim_(dim),
      body_(std::move(body)),
      lipschitz_(std::move(lipschitz)),
      label_(std::move(label)),
      time_parts_(std::move(time_parts)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw InvalidArgument("parametric signal dimension out of range");
  if (lipschitz_.dim() != 1) throw DimensionMismatch("Lipschitz bound must be scalar");
  if (lipschitz_.kind() == "constant") lipschitz_constant_ = lipschitz_.scalar(0.0);
}

ParametricSignal ParametricSignal::from_signal(const Signal& f) {
  return ParametricSignal(
      f.dim(), [f](double t, const Vec&, Vec& out) { f.eval(t, out); }, Signal::constant(0.0),
      f.label(), {f});
}

ParametricSignal ParametricSignal::separable(const Signal& forcing, const Signal& modulation,
                                             double coupling, Nonlinearity phi) {
  if (modulation.dim() != 1) throw DimensionMismatch("modulation must be scalar");
  const int n = forcing.dim();
  auto body = [forcing, modulation, coupling, phi, n](double t, const Vec& u, Vec& out) {
    forcing.eval(t, out);
    if (phi == Nonlinearity::zero || coupling == 0.0) return;
    Vec m(1);
    modulation.eval(t, m);
    const double c = coupling * m(0);
    for (int i = 0; i < n; ++i) {
      double g = 0.0;
      switch (phi) {
        case Nonlinearity::identity: g = u(i); break;
        case Nonlinearity::sine: g = std::sin(u(i)); break;
        case Nonlinearity::tanh: g = std::tanh(u(i)); break;
        case Nonlinearity::zero: break;
      }
      out(i) += c * g;
    }
  };
  const double lip_phi = phi == Nonlinearity::zero ? 0.0 : 1.0;
  Signal lipschitz = Signal::constant(0.0);
  if (lip_phi * coupling != 0.0) {
    if (modulation.kind() == "constant")
      lipschitz = Signal::constant(std::abs(coupling * modulation.scalar(0.0)) * lip_phi);
    else
      lipschitz = Signal::magnitude(modulation).scaled(std::abs(coupling) * lip_phi);
  }
  std::string label = forcing.label() + " + " + std::to_string(coupling) + "*" +
                      modulation.label() + "*" + to_string(phi) + "(u)";
  return ParametricSignal(n, std::move(body), std::move(lipschitz), std::move(label),
                          {forcing, modulation});
}

Vec ParametricSignal::operator()(double t, const Vec& u) const {
  Vec out(dim_);
  body_(t, u, out);
  return out;
}

Signal ParametricSignal::at_zero() const {
  return Signal::compose(*this, Signal::zero(dim_)).with_label(label_ + "(t,0)");
}

void ParametricSignal::breakpoints(double a, double b, std::vector<double>& out) const {
  for (const auto& s : time_parts_) s.breakpoints(a, b, out);
}

double ParametricSignal::lipschitz_spot_check(unsigned long long seed, int probes, double t_min,
                                              double t_max, double u_radius) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time(t_min, t_max);
  std::uniform_real_distribution<double> state(-u_radius, u_radius);
  Vec u(dim_), v(dim_), fu(dim_), fv(dim_);
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    const double t = time(rng);
    for (int i = 0; i < dim_; ++i) {
      u(i) = state(rng);
      v(i) = state(rng);
    }
    body_(t, u, fu);
    body_(t, v, fv);
    const double lhs = (fu - fv).norm();
    const double rhs = lipschitz_.scalar(t) * (u - v).norm();
    if (lhs == 0.0) continue;
    worst = std::max(worst, rhs > 0.0 ? lhs / rhs : kInf);
  }
  return worst;
}

ParametricSignal ParametricSignal::with_lipschitz_constant(double L) const {
  auto copy = *this;
  copy.lipschitz_ = Signal::constant(L);
  copy.lipschitz_constant_ = L;
  return copy;
}

}  // namespace weylap

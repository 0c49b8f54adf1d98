#include "opuc/beta.hpp"

#include "opuc/errors.hpp"

#include <algorithm>

namespace opuc {

// ---------------------------------------------------------------------------
// SpanProjector

SpanProjector::SpanProjector(const MomentSequence& moments, std::int64_t target, bool allow_drop)
    : moments_(moments),
      target_(target),
      allow_drop_(allow_drop),
      drop_threshold_(pow2(-static_cast<long>(moments.precision_bits() / 2))),
      captured_(0) {}

bool SpanProjector::add(std::int64_t exponent) {
  const std::size_t i = basis_.size();
  std::vector<Complex> c(i);
  Real pivot_sq = 1;  // <v_i, v_i> = m_0
  for (std::size_t j = 0; j < i; ++j) {
    Complex acc = moments_.at(exponent - basis_[j]);
    const auto& row = coupling_[j];
    for (std::size_t l = 0; l < j; ++l) {
      // acc -= c_l * conj(row_l)
      acc.re -= c[l].re * row[l].re + c[l].im * row[l].im;
      acc.im -= c[l].im * row[l].re - c[l].re * row[l].im;
    }
    c[j] = acc / pivot_[j];
    pivot_sq -= norm(c[j]);
  }
  if (pivot_sq <= drop_threshold_) {
    if (allow_drop_) {
      ++dropped_;
      return false;
    }
    throw PrecisionError("Gram-Schmidt pivot collapsed at basis position " + std::to_string(i), i,
                         moments_.precision_bits());
  }
  const Real pivot = sqrt(pivot_sq);
  Complex y = moments_.at(target_ - exponent);
  for (std::size_t l = 0; l < i; ++l) {
    y.re -= target_coef_[l].re * c[l].re + target_coef_[l].im * c[l].im;
    y.im -= target_coef_[l].im * c[l].re - target_coef_[l].re * c[l].im;
  }
  y /= pivot;
  captured_ += norm(y);
  basis_.push_back(exponent);
  coupling_.push_back(std::move(c));
  pivot_.push_back(pivot);
  target_coef_.push_back(std::move(y));
  return true;
}

Real SpanProjector::distance_sq() const {
  if (std::find(basis_.begin(), basis_.end(), target_) != basis_.end()) return Real(0);
  return 1 - captured_;
}

Real SpanProjector::distance() const {
  Real d2 = distance_sq();
  return d2 <= 0 ? Real(0) : sqrt(d2);
}

Real SpanProjector::residual() const {
  const std::size_t s = basis_.size();
  if (s == 0) return Real(0);
  // Monomial coefficients x from L^T x = y, L_{ij} = <v_i, e_j>, L_{ii} = pivot_i.
  std::vector<Complex> x(s);
  for (std::size_t jj = s; jj-- > 0;) {
    Complex acc = target_coef_[jj];
    for (std::size_t i = jj + 1; i < s; ++i) acc -= coupling_[i][jj] * x[i];
    x[jj] = acc / pivot_[jj];
  }
  Real worst = 0;
  for (std::size_t t = 0; t < s; ++t) {
    Complex r = -moments_.at(target_ - basis_[t]);
    for (std::size_t u = 0; u < s; ++u) r.add_product(x[u], moments_.at(basis_[u] - basis_[t]));
    worst = max(worst, abs(r));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// BetaEngine

BetaEngine::BetaEngine(MeasureSpec spec, BetaOptions options)
    : spec_(std::move(spec)), options_(options), bits_(options.precision_bits), rank_(atomic_rank(spec_)) {
  validate(spec_);
  if (bits_ < kMinPrecisionBits || bits_ > options_.max_precision_bits) {
    throw DomainError("precision " + std::to_string(bits_) + " outside [53, max_precision_bits]");
  }
}

std::optional<std::size_t> BetaEngine::rank() const { return rank_; }

bool BetaEngine::rank_covers(std::size_t n) const { return rank_ && n + 1 >= *rank_; }

void BetaEngine::clear_cache() {
  compiled_.reset();
  family_.clear();
  residual_prefix_.clear();
}

template <typename Fn>
auto BetaEngine::escalating(Fn&& fn) -> decltype(fn()) {
  for (;;) {
    std::string reason;
    std::size_t index = 0;
    try {
      PrecisionScope scope(bits_);
      return fn();
    } catch (const PrecisionError& e) {
      reason = e.what();
      index = e.index();
    } catch (const DegeneracyError& e) {
      // Atomic measures are genuinely degenerate; everything else is
      // numerically exhausted and may recover at higher precision.
      if (rank_) throw;
      reason = e.what();
      index = e.order();
    }
    if (bits_ * 2 > options_.max_precision_bits) {
      throw PrecisionError(reason + " (precision ceiling " + std::to_string(options_.max_precision_bits) +
                               " bits reached)",
                           index, bits_);
    }
    bits_ *= 2;
    clear_cache();
  }
}

void BetaEngine::ensure(std::size_t moment_order, std::size_t degree) {
  moment_order = std::max(moment_order, degree);
  if (rank_) degree = std::min(degree, *rank_ - 1);
  if (!compiled_ || compiled_->moments.order() < moment_order || compiled_->alphas.size() < degree) {
    const std::size_t mo = std::max(moment_order, compiled_ ? compiled_->moments.order() : 0);
    const std::size_t deg = std::max(degree, compiled_ ? compiled_->alphas.size() : 0);
    compiled_ = compile_measure(spec_, mo, deg);
    family_.clear();
    residual_prefix_.clear();
  }
  if (family_.empty()) {
    family_.emplace_back();
    residual_prefix_.emplace_back(0);
  }
  while (family_.size() <= degree) {
    const std::size_t j = family_.size() - 1;
    family_.push_back(szego_step(family_.back(), compiled_->alphas[j]));
    const MonicPolynomial& phi = family_.back();
    Real mismatch = abs(gram_norm_sq(phi, compiled_->moments) - phi.norm_sq()) / phi.norm_sq();
    residual_prefix_.push_back(max(residual_prefix_.back(), mismatch));
  }
}

void BetaEngine::reserve(std::size_t moment_order, std::size_t degree) {
  escalating([&] {
    ensure(moment_order, degree);
    return 0;
  });
}

BetaResult BetaEngine::beta(std::size_t k, std::size_t n) {
  if (k == 0) return {k, n, Real(0), bits_, Real(0), false};
  if (rank_covers(n)) return {k, n, Real(0), bits_, Real(0), true};
  return escalating([&] {
    ensure(k + n, n);
    const Real tol = escalation_tolerance(bits_);
    if (residual_prefix_[n] > tol) {
      throw PrecisionError("monic family inconsistent with moments at degree " + std::to_string(n), n, bits_);
    }
    const MomentSequence& m = compiled_->moments;
    Real captured = 0;
    for (std::size_t j = 0; j <= n; ++j) {
      const MonicPolynomial& phi = family_[j];
      Complex p;
      for (std::size_t i = 0; i <= j; ++i) p.add_product(phi[i], m[k + i]);
      captured += norm(p) / phi.norm_sq();
    }
    Real b2 = 1 - captured;
    if (b2 < -tol) throw PrecisionError("negative squared distance for k=" + std::to_string(k), n, bits_);
    return BetaResult{k, n, b2 <= 0 ? Real(0) : sqrt(b2), bits_, residual_prefix_[n], false};
  });
}

std::vector<BetaResult> BetaEngine::beta_row(std::size_t k, std::size_t n_max) {
  if (k == 0) {
    std::vector<BetaResult> row;
    for (std::size_t n = 0; n <= n_max; ++n) row.push_back({k, n, Real(0), bits_, Real(0), false});
    return row;
  }
  return escalating([&] {
    const std::size_t top = !rank_ ? n_max : (*rank_ >= 2 ? std::min(n_max, *rank_ - 2) : 0);
    ensure(k + top, top);
    const Real tol = escalation_tolerance(bits_);
    const MomentSequence& m = compiled_->moments;
    std::vector<BetaResult> row;
    Real captured = 0;
    for (std::size_t n = 0; n <= n_max; ++n) {
      if (rank_covers(n)) {
        row.push_back({k, n, Real(0), bits_, Real(0), true});
        continue;
      }
      if (residual_prefix_[n] > tol) {
        throw PrecisionError("monic family inconsistent with moments at degree " + std::to_string(n), n, bits_);
      }
      const MonicPolynomial& phi = family_[n];
      Complex p;
      for (std::size_t i = 0; i <= n; ++i) p.add_product(phi[i], m[k + i]);
      captured += norm(p) / phi.norm_sq();
      Real b2 = 1 - captured;
      if (b2 < -tol) throw PrecisionError("negative squared distance for k=" + std::to_string(k), n, bits_);
      row.push_back({k, n, b2 <= 0 ? Real(0) : sqrt(b2), bits_, residual_prefix_[n], false});
    }
    return row;
  });
}

BetaResult BetaEngine::beta_gram(std::size_t k, std::size_t n) {
  if (k == 0) return {k, n, Real(0), bits_, Real(0), false};
  if (rank_covers(n)) return {k, n, Real(0), bits_, Real(0), true};
  std::vector<std::int64_t> exponents(n + 1);
  for (std::size_t i = 0; i <= n; ++i) exponents[i] = static_cast<std::int64_t>(i);
  const SpanDistance d = span_distance(-static_cast<std::int64_t>(k), exponents);
  return {k, n, d.value, d.precision_bits, d.residual, d.rank_deficient};
}

SpanDistance BetaEngine::span_distance(std::int64_t target, std::span<const std::int64_t> exponents) {
  std::vector<std::size_t> checkpoint{exponents.size()};
  return span_distance_curve(target, exponents, checkpoint).front();
}

std::vector<SpanDistance> BetaEngine::span_distance_curve(std::int64_t target,
                                                          std::span<const std::int64_t> exponents,
                                                          std::span<const std::size_t> checkpoints) {
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    if (checkpoints[c] > exponents.size() || (c > 0 && checkpoints[c] < checkpoints[c - 1])) {
      throw DomainError("span_distance: checkpoints must be nondecreasing and within the exponent list");
    }
  }
  std::int64_t lo = target;
  std::int64_t hi = target;
  for (auto e : exponents) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return escalating([&] {
    ensure(static_cast<std::size_t>(hi - lo), 0);
    const Real tol = escalation_tolerance(bits_);
    SpanProjector projector(compiled_->moments, target, rank_.has_value());
    std::vector<SpanDistance> out;
    std::size_t consumed = 0;
    for (std::size_t c : checkpoints) {
      while (consumed < c) projector.add(exponents[consumed++]);
      const Real d2 = projector.distance_sq();
      if (d2 < -tol) throw PrecisionError("negative squared span distance", consumed, bits_);
      SpanDistance d;
      d.value = projector.distance();
      d.precision_bits = bits_;
      d.residual = projector.residual();
      d.dropped = projector.dropped();
      d.rank_deficient = d.dropped > 0;
      if (d.residual > tol) throw PrecisionError("normal-equation residual too large", consumed, bits_);
      out.push_back(std::move(d));
    }
    return out;
  });
}

Real BetaEngine::phi_norm(std::size_t n) {
  if (rank_ && n >= *rank_) return Real(0);
  return escalating([&] {
    ensure(n, n);
    return Real(sqrt(family_[n].norm_sq()));
  });
}

MonicPolynomial BetaEngine::monic(std::size_t n) {
  if (rank_ && n >= *rank_) throw DegeneracyError("no monic orthogonal polynomial beyond the atom count", n);
  return escalating([&] {
    ensure(n, n);
    return family_[n];
  });
}

VerblunskySequence BetaEngine::alphas(std::size_t count) {
  return escalating([&] {
    ensure(count, count);
    auto values = compiled_->alphas.values();
    const std::size_t have = std::min(count, values.size());
    return VerblunskySequence({values.begin(), values.begin() + static_cast<std::ptrdiff_t>(have)},
                              compiled_->alphas.generator());
  });
}

MomentSequence BetaEngine::moments(std::size_t order) {
  return escalating([&] {
    ensure(order, 0);
    auto values = compiled_->moments.values();
    return MomentSequence({values.begin(), values.begin() + static_cast<std::ptrdiff_t>(order + 1)}, bits_);
  });
}

Real composition_bracket(std::span<const Real> a, std::size_t k) {
  if (k == 0) throw DomainError("composition_bracket: k must be at least 1");
  std::vector<Real> f(k);
  f[0] = 1;
  Real bracket = f[0];
  for (std::size_t t = 1; t < k; ++t) {
    Real acc = 0;
    for (std::size_t j = 1; j <= std::min(a.size(), t); ++j) acc += a[j - 1] * f[t - j];
    f[t] = acc;
    bracket += acc;
  }
  return bracket;
}

Real BetaEngine::composition_bound(std::size_t k, std::size_t n) {
  if (k < 1 || n < 1) throw DomainError("composition_bound needs k >= 1 and n >= 1");
  if (rank_ && n + 1 >= *rank_) return Real(0);
  return escalating([&] {
    ensure(n + 1, n + 1);
    const MonicPolynomial& phi = family_[n + 1];
    std::vector<Real> a;
    a.reserve(n + 1);
    for (std::size_t j = 1; j <= n + 1; ++j) a.push_back(abs(phi[n + 1 - j]));
    return Real(sqrt(phi.norm_sq()) * composition_bracket(a, k));
  });
}

Real BetaEngine::binomial_bound(std::size_t k, std::size_t n) {
  if (k < 1 || n < 1) throw DomainError("binomial_bound needs k >= 1 and n >= 1");
  if (rank_ && n + 1 >= *rank_) return Real(0);
  return escalating([&] {
    ensure(n + 1, n + 1);
    Real growth = pow(Real(2 * n + 2), static_cast<long>(k - 1));
    return Real(sqrt(family_[n + 1].norm_sq()) * growth);
  });
}

MinDegree BetaEngine::find_min_degree(std::size_t k, const Real& tol, std::size_t n_max) {
  if (!(tol > 0)) throw DomainError("find_min_degree: tol must be positive");
  if (beta(k, n_max).value > tol) return {};
  std::size_t lo = 0;
  std::size_t hi = n_max;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (beta(k, mid).value <= tol) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return {lo};
}

ApproxFunctionReport approximating_check(BetaEngine& engine, const std::function<std::size_t(std::size_t)>& f,
                                         std::size_t k_lo, std::size_t k_hi, const Real& threshold) {
  if (k_lo < 1 || k_hi < k_lo) throw DomainError("approximating_check: need 1 <= k_lo <= k_hi");
  ApproxFunctionReport report;
  report.threshold = threshold;
  report.monotone = true;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    ApproxRow row{k, f(k), std::nullopt, {}};
    if (!report.rows.empty() && row.f_k <= report.rows.back().f_k) report.monotone = false;
    try {
      row.beta = engine.beta(k, row.f_k);
    } catch (const Error& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  const std::size_t count = report.rows.size();
  const std::size_t quartile = (count + 3) / 4;
  report.verdict = true;
  for (std::size_t i = count - quartile; i < count; ++i) {
    const auto& row = report.rows[i];
    if (!row.beta || row.beta->value > threshold) report.verdict = false;
  }
  return report;
}

}  // namespace opuc

#include "opuc/exponent_set.hpp"

#include "opuc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opuc {

ExponentSet::ExponentSet(std::vector<Interval> intervals, std::string provenance)
    : provenance_(std::move(provenance)) {
  for (const auto& iv : intervals) {
    if (iv.lo < 0) throw DomainError("exponent set: negative endpoint " + format_index(iv.lo));
    if (iv.lo > iv.hi) {
      throw DomainError("exponent set: empty interval [" + format_index(iv.lo) + ", " + format_index(iv.hi) + "]");
    }
  }
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi + 1) {
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    } else {
      intervals_.push_back(std::move(iv));
    }
  }
}

bool ExponentSet::contains(const Index& x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](const Index& v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return x <= it->hi;
}

Index ExponentSet::count_in(const Index& lo, const Index& hi) const {
  Index total = 0;
  for (const auto& iv : intervals_) {
    if (iv.lo > hi) break;
    const Index a = std::max(iv.lo, lo);
    const Index b = std::min(iv.hi, hi);
    if (a <= b) total += b - a + 1;
  }
  return total;
}

Index ExponentSet::count_up_to(const Index& n) const { return count_in(Index(1), n); }

bool ExponentSet::disjoint_from(const ExponentSet& other) const {
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& a = intervals_;
  const auto& b = other.intervals_;
  while (i < a.size() && j < b.size()) {
    if (a[i].hi < b[j].lo) {
      ++i;
    } else if (b[j].hi < a[i].lo) {
      ++j;
    } else {
      return false;
    }
  }
  return true;
}

std::vector<std::int64_t> ExponentSet::elements(std::int64_t lo, std::int64_t hi, std::size_t limit) const {
  std::vector<std::int64_t> out;
  if (lo > hi) return out;
  if (count_in(Index(lo), Index(hi)) > Index(limit)) {
    throw DomainError("exponent set section has more than " + std::to_string(limit) + " elements");
  }
  for (const auto& iv : intervals_) {
    if (iv.lo > hi) break;
    const Index a = std::max(iv.lo, Index(lo));
    const Index b = std::min(iv.hi, Index(hi));
    for (Index x = a; x <= b; ++x) out.push_back(static_cast<std::int64_t>(x));
  }
  return out;
}

namespace {

// Working precision for the real-valued block lengths: enough headroom for
// exact floors of 128-bit integers.
unsigned construction_bits() { return std::max(current_precision_bits(), kDefaultPrecisionBits); }

std::string describe(const std::string& name, const std::vector<std::pair<std::string, std::string>>& params) {
  std::ostringstream os;
  os << name << '(';
  for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ", " : "") << params[i].first << '=' << params[i].second;
  os << ')';
  return os.str();
}

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

Index floor_power(const Index& k, double s) { return floor_to_index(pow(to_real(k), Real(s))); }

void require_increasing(std::span<const Index> k) {
  for (std::size_t j = 1; j < k.size(); ++j) {
    if (!(k[j] > k[j - 1])) throw DomainError("block starts must be strictly increasing");
  }
}

// Runs a recursion step; integer overflow becomes a RangeError reporting the
// last block index that was still representable.
template <typename Fn>
void guarded(std::size_t j, Fn&& fn) {
  try {
    fn();
  } catch (const std::overflow_error& e) {
    throw RangeError(std::string("integer range exceeded at block ") + std::to_string(j) + " (largest feasible j = " +
                         std::to_string(static_cast<long>(j) - 1) + "): " + e.what(),
                     static_cast<long>(j) - 1);
  }
}

ExponentSet union_of(std::span<const Index> k, std::span<const Index> ell, std::string provenance) {
  std::vector<Interval> iv;
  for (std::size_t j = 0; j < k.size(); ++j) {
    Index hi;
    guarded(j + 1, [&] { hi = k[j] + ell[j]; });
    iv.push_back({k[j], hi});
  }
  return ExponentSet(std::move(iv), std::move(provenance));
}

}  // namespace

DegreeMap linear_map() {
  return {[](const Index& k) { return k; }, "linear"};
}

DegreeMap power_map(double t) {
  if (!(t > 0.0)) throw DomainError("power map exponent must be positive");
  return {[t](const Index& k) {
            PrecisionScope scope(construction_bits());
            return floor_power(k, t);
          },
          "power:" + num(t)};
}

Real markoff_block_constant(double eps, std::size_t ell) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  if (ell < 1) throw DomainError("ell must be at least 1");
  const Real e = eps;
  return -Real(static_cast<unsigned long>(ell)) / log(1 - e * e);
}

DegreeMap log_linear_map(double eps, std::size_t ell, double tau) {
  if (!(tau > 0.0)) throw DomainError("log-linear map factor must be positive");
  markoff_block_constant(eps, ell);
  return {[eps, ell, tau](const Index& k) {
            PrecisionScope scope(construction_bits());
            if (k < 2) return Index(0);
            const Real kr = to_real(k);
            return floor_to_index(Real(tau) * markoff_block_constant(eps, ell) * log(kr) * kr);
          },
          "log_linear:" + num(eps) + ":" + std::to_string(ell) + ":" + num(tau)};
}

ExponentSet lambda_from_blocks(std::span<const Index> k, std::span<const Index> ell, std::size_t J) {
  if (J > k.size() || J > ell.size()) throw DomainError("lambda_from_blocks: fewer than J blocks given");
  k = k.first(J);
  ell = ell.first(J);
  require_increasing(k);
  for (const auto& l : ell) {
    if (l < 0) throw DomainError("block lengths must be nonnegative");
  }
  if (!k.empty() && k.front() < 0) throw DomainError("block starts must be nonnegative");
  return union_of(k, ell, describe("lambda_from_blocks", {{"J", std::to_string(J)}}));
}

BlockSequence density_zero_blocks(const DegreeMap& f, std::size_t J) {
  BlockSequence out;
  Index kj = 1;
  for (std::size_t j = 1; j <= J; ++j) {
    guarded(j, [&] {
      const Index fj = f(kj);
      const Index idx = static_cast<long long>(j);
      const Index lj = fj + idx;
      const Index next = (kj + fj + idx) * idx + 1;
      out.k.push_back(kj);
      out.ell.push_back(lj);
      kj = next;
    });
  }
  out.next_k = kj;
  out.set = union_of(out.k, out.ell,
                     describe("density_zero_blocks", {{"f", f.name}, {"J", std::to_string(J)}}));
  return out;
}

BlockSequence power_blocks(double s, std::span<const Index> k) {
  if (!(s > 1.0)) throw DomainError("power_blocks: s must exceed 1");
  require_increasing(k);
  PrecisionScope scope(construction_bits());
  BlockSequence out;
  out.k.assign(k.begin(), k.end());
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] < 0) throw DomainError("block starts must be nonnegative");
    guarded(j + 1, [&] { out.ell.push_back(floor_power(k[j], s)); });
  }
  out.set = union_of(out.k, out.ell, describe("power_blocks", {{"s", num(s)}, {"J", std::to_string(k.size())}}));
  return out;
}

BlockSequence power_blocks_auto(double s, std::size_t J) {
  if (!(s > 1.0)) throw DomainError("power_blocks: s must exceed 1");
  PrecisionScope scope(construction_bits());
  BlockSequence out;
  Index kj = 1;
  for (std::size_t j = 1; j <= J; ++j) {
    guarded(j, [&] {
      const Index lj = floor_power(kj, s);
      const Index next = (kj + lj) * Index(static_cast<long long>(j)) + 1;
      out.k.push_back(kj);
      out.ell.push_back(lj);
      kj = next;
    });
  }
  out.next_k = kj;
  out.set = union_of(out.k, out.ell, describe("power_blocks_auto", {{"s", num(s)}, {"J", std::to_string(J)}}));
  return out;
}

BlockSequence log_linear_blocks(double eps, std::size_t ell, double t, std::span<const Index> k) {
  if (!(t > 2.0)) throw DomainError("log_linear_blocks: t must exceed 2");
  require_increasing(k);
  for (const auto& kj : k) {
    if (kj < 2) throw DomainError("log_linear_blocks: every block start must be at least 2");
  }
  const DegreeMap lengths = log_linear_map(eps, ell, t);
  BlockSequence out;
  out.k.assign(k.begin(), k.end());
  for (std::size_t j = 0; j < k.size(); ++j) guarded(j + 1, [&] { out.ell.push_back(lengths(k[j])); });
  out.set = union_of(out.k, out.ell,
                     describe("log_linear_blocks", {{"eps", num(eps)}, {"ell", std::to_string(ell)}, {"t", num(t)},
                                                    {"J", std::to_string(k.size())}}));
  return out;
}

BlockSequence cofinite_blocks(std::span<const Index> gamma, const DegreeMap& f, std::size_t J) {
  Index top = 0;
  for (const auto& g : gamma) {
    if (g < 0) throw DomainError("gap set entries must be nonnegative");
    top = std::max(top, g);
  }
  BlockSequence out;
  Index kj = top + 1;
  for (std::size_t j = 1; j <= J; ++j) {
    guarded(j, [&] {
      const Index lj = f(kj) + Index(static_cast<long long>(j));
      const Index next = kj + lj;
      out.k.push_back(kj);
      out.ell.push_back(lj);
      kj = next;
    });
  }
  out.next_k = kj;
  out.set = union_of(out.k, out.ell, describe("cofinite_blocks", {{"f", f.name}, {"J", std::to_string(J)}}));
  return out;
}

GapConstruction double_exponential_gaps(double t, double t_tilde, double C, std::size_t J, std::optional<double> s) {
  if (!(t_tilde > 1.0 && t >= t_tilde)) throw DomainError("need t >= t_tilde > 1");
  if (!(C > 0.0)) throw DomainError("C must be positive");
  const double sv = s.value_or((1.0 + t) / 2.0);
  if (!(sv > 1.0 && sv < t)) throw DomainError("s must lie in (1, t)");
  if (J < 1) throw DomainError("need at least one gap interval");
  PrecisionScope scope(construction_bits());

  GapConstruction out;
  out.s = sv;
  std::vector<Interval> gaps;
  // One extra start, floor(e^{t^{J+1}}), is needed by the inequality at j = J
  // but only J - 1 inequalities are used; compute starts for j = 1..J.
  for (std::size_t j = 1; j <= J; ++j) {
    guarded(j, [&] {
      const Real tj = pow(Real(t), static_cast<long>(j));
      const Real ttj = pow(Real(t_tilde), static_cast<long>(j));
      const Index start = floor_to_index(exp(tj));
      const Index width = floor_to_index(Real(C) * exp(ttj));
      const Index end = start + width;
      const Index kj = end + 1;
      out.gap_start.push_back(start);
      out.k.push_back(kj);
      gaps.push_back({start, end});
    });
  }
  std::ostringstream prov;
  prov << "t=" << t << ", t_tilde=" << t_tilde << ", C=" << C << ", J=" << J << ", s=" << sv;
  out.gamma = ExponentSet(gaps, "double_exponential_gaps.gamma(" + prov.str() + ")");

  // ok[j] for 0-based j <= J-2: floor(e^{t^{j+2}}) >= 2 k_{j+1}^s.
  std::vector<bool> ok;
  for (std::size_t j = 0; j + 1 < J; ++j) {
    ok.push_back(to_real(out.gap_start[j + 1]) >= 2 * pow(to_real(out.k[j]), Real(sv)));
  }
  std::optional<std::size_t> first;
  for (std::size_t j = ok.size(); j-- > 0;) {
    if (!ok[j]) break;
    first = j;
  }
  std::vector<Interval> blocks;
  if (first) {
    out.n_start = *first + 1;
    for (std::size_t j = *first; j + 1 < J; ++j) {
      guarded(j + 1, [&] { blocks.push_back({out.k[j], out.k[j] + floor_power(out.k[j], sv)}); });
    }
  }
  out.lambda = ExponentSet(blocks, "double_exponential_gaps.lambda(" + prov.str() + ")");
  return out;
}

DensityReport density_report(const ExponentSet& set, std::span<const Index> checkpoints) {
  DensityReport report;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const Index& n = checkpoints[i];
    if (n < 1 || (i > 0 && !(n > checkpoints[i - 1]))) {
      throw DomainError("density checkpoints must be positive and increasing");
    }
    const Index count = set.count_up_to(n);
    const double ratio = to_double(to_real(count) / to_real(n));
    report.checkpoints.push_back({n, count, ratio});
  }
  if (!report.checkpoints.empty()) {
    auto [lo, hi] = std::minmax_element(report.checkpoints.begin(), report.checkpoints.end(),
                                        [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
    report.lower_estimate = lo->ratio;
    report.upper_estimate = hi->ratio;
  }
  return report;
}

DensityBoundCheck check_density_bound(const BlockSequence& blocks) {
  DensityBoundCheck out;
  const std::size_t J = blocks.k.size();
  for (std::size_t j = 1; j <= J; ++j) {
    const Index next = j < J ? blocks.k[j] : blocks.next_k.value_or(Index(0));
    if (j == J && !blocks.next_k) break;
    const Index n = next - 1;
    if (n < 1) continue;
    const Index count = blocks.set.count_up_to(n);
    out.checkpoints.push_back({n, count, to_double(to_real(count) / to_real(n))});
    if (count * Index(static_cast<long long>(j)) > n) out.holds = false;
  }
  return out;
}

DivergenceAudit divergence_audit(const BlockSequence& blocks, const DegreeMap& f) {
  DivergenceAudit out;
  for (std::size_t j = 0; j < blocks.k.size(); ++j) {
    const Index margin = blocks.ell[j] - f(blocks.k[j]);
    if (margin < Index(static_cast<long long>(j + 1))) out.at_least_index = false;
    if (!out.margins.empty() && !(margin > out.margins.back())) out.strictly_increasing = false;
    out.margins.push_back(margin);
  }
  return out;
}

}  // namespace opuc

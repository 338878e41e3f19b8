#include "ri/piecewise_power.hpp"

#include <algorithm>
#include <cmath>

#include "ri/error.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExpMerge = 1e-14;

std::vector<PowerTerm> simplify(std::vector<PowerTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  std::vector<PowerTerm> out;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    if (!out.empty() && std::abs(out.back().exponent - t.exponent) <= kExpMerge) {
      out.back().coef += t.coef;
      if (out.back().coef == 0.0) out.pop_back();
    } else {
      out.push_back(t);
    }
  }
  return out;
}

// int_a^b c t^e dt on 0 <= a < b <= inf.
double term_integral(const PowerTerm& term, double a, double b) {
  const double c = term.coef;
  if (c == 0.0 || b <= a) return 0.0;
  const double e1 = term.exponent + 1.0;
  if (std::abs(e1) <= kExpMerge) {
    if (a == 0.0 || std::isinf(b)) return c > 0.0 ? kInf : -kInf;
    return c * std::log(b / a);
  }
  if (a == 0.0) {
    if (e1 < 0.0) return c > 0.0 ? kInf : -kInf;
    if (std::isinf(b)) return c > 0.0 ? kInf : -kInf;
    return c * std::pow(b, e1) / e1;
  }
  if (std::isinf(b)) {
    if (e1 > 0.0) return c > 0.0 ? kInf : -kInf;
    return -c * std::pow(a, e1) / e1;
  }
  // a^{e1} (exp(e1 log(b/a)) - 1) / e1 keeps relative accuracy on short cells
  return c * std::pow(a, e1) * std::expm1(e1 * std::log(b / a)) / e1;
}

// Piece list restricted to the common refinement of two piecewise functions.
template <class Combine>
PiecewisePower merge(const PiecewisePower& x, const PiecewisePower& y, Combine combine) {
  std::vector<double> cuts = x.breakpoints();
  const auto yb = y.breakpoints();
  cuts.insert(cuts.end(), yb.begin(), yb.end());
  const bool inf_tail = (!x.is_zero() && std::isinf(x.pieces().back().hi)) ||
                        (!y.is_zero() && std::isinf(y.pieces().back().hi));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (inf_tail) cuts.push_back(kInf);

  auto find = [](const PiecewisePower& f, double lo, double hi) -> const PowerPiece* {
    for (const auto& p : f.pieces()) {
      if (p.lo <= lo && hi <= p.hi) return &p;
    }
    return nullptr;
  };
  std::vector<PowerPiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const PowerPiece* px = find(x, lo, hi);
    const PowerPiece* py = find(y, lo, hi);
    std::vector<PowerTerm> terms = simplify(combine(px, py));
    if (terms.empty()) continue;
    out.push_back({lo, hi, std::move(terms)});
  }
  return PiecewisePower(std::move(out));
}

// Samples u = log t inside a piece for monotonicity and sup checks.
std::vector<double> sample_logs(const PowerPiece& p, int n) {
  const double ulo = p.lo > 0.0 ? std::log(p.lo) : (std::isinf(p.hi) ? -700.0 : std::log(p.hi) - 700.0);
  const double uhi = std::isinf(p.hi) ? ulo + 700.0 : std::log(p.hi);
  std::vector<double> u(n + 1);
  for (int i = 0; i <= n; ++i) u[i] = ulo + (uhi - ulo) * i / n;
  return u;
}

}  // namespace

double PowerPiece::eval(double t) const {
  double s = 0.0;
  for (const auto& term : terms) s += term.coef * std::pow(t, term.exponent);
  return s;
}

double PowerPiece::log_eval(double u) const {
  double lmax = -kInf;
  for (const auto& term : terms) {
    if (term.coef == 0.0) continue;
    lmax = std::max(lmax, std::log(std::abs(term.coef)) + term.exponent * u);
  }
  if (lmax == -kInf) return -kInf;
  if (std::isinf(lmax)) {
    // dominant term overflows; its sign decides
    double sign = 0.0;
    for (const auto& term : terms) {
      if (std::log(std::abs(term.coef)) + term.exponent * u == kInf) sign += term.coef;
    }
    return sign > 0.0 ? kInf : -kInf;
  }
  double s = 0.0;
  for (const auto& term : terms) {
    if (term.coef == 0.0) continue;
    const double l = std::log(std::abs(term.coef)) + term.exponent * u - lmax;
    s += (term.coef > 0.0 ? 1.0 : -1.0) * std::exp(l);
  }
  if (!(s > 0.0)) return -kInf;
  return lmax + std::log(s);
}

double PowerPiece::integral(double a, double b) const {
  double s = 0.0;
  for (const auto& term : terms) s += term_integral(term, a, b);
  return s;
}

PiecewisePower::PiecewisePower(std::vector<PowerPiece> pieces) {
  double prev_hi = 0.0;
  for (auto& p : pieces) {
    if (!(p.lo >= prev_hi) || !(p.hi > p.lo)) {
      throw DomainError("PiecewisePower: pieces must be ordered, disjoint and nonempty");
    }
    if (std::isinf(p.lo)) throw DomainError("PiecewisePower: piece start must be finite");
    prev_hi = p.hi;
    p.terms = simplify(std::move(p.terms));
  }
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (std::isinf(pieces[i].hi)) throw DomainError("PiecewisePower: only the last piece may be unbounded");
  }
  for (auto& p : pieces) {
    if (!p.terms.empty()) pieces_.push_back(std::move(p));
  }
}

PiecewisePower PiecewisePower::from_step(const StepFunction& f) {
  std::vector<PowerPiece> pieces;
  const auto b = f.breakpoints();
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) pieces.push_back({b[i], b[i + 1], {{v[i], 0.0}}});
  }
  return PiecewisePower(std::move(pieces));
}

PiecewisePower PiecewisePower::power(double coef, double exponent, double lo, double hi) {
  return PiecewisePower({PowerPiece{lo, hi, {{coef, exponent}}}});
}

double PiecewisePower::operator()(double t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double x, const PowerPiece& p) { return x < p.lo; });
  if (it == pieces_.begin()) return 0.0;
  --it;
  if (t >= it->hi) return 0.0;
  return it->eval(t);
}

double PiecewisePower::log_at(double u) const {
  // compare in log space so that e^u never has to be formed
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    const double llo = it->lo > 0.0 ? std::log(it->lo) : -kInf;
    if (u >= llo) {
      const double lhi = std::isinf(it->hi) ? kInf : std::log(it->hi);
      if (u >= lhi) return -kInf;
      return it->log_eval(u);
    }
  }
  return -kInf;
}

double PiecewisePower::integral(double a, double b) const {
  double s = 0.0;
  for (const auto& p : pieces_) {
    const double lo = std::max(a, p.lo);
    const double hi = std::min(b, p.hi);
    if (hi > lo) s += p.integral(lo, hi);
  }
  return s;
}

double PiecewisePower::support_start() const { return pieces_.empty() ? 0.0 : pieces_.front().lo; }
double PiecewisePower::support_end() const { return pieces_.empty() ? 0.0 : pieces_.back().hi; }
bool PiecewisePower::bounded_support() const {
  return pieces_.empty() || std::isfinite(pieces_.back().hi);
}

PiecewisePower PiecewisePower::times_power(double coef, double exponent) const {
  std::vector<PowerPiece> out = pieces_;
  for (auto& p : out) {
    for (auto& t : p.terms) {
      t.coef *= coef;
      t.exponent += exponent;
    }
  }
  return PiecewisePower(std::move(out));
}

PiecewisePower PiecewisePower::operator*(const PiecewisePower& o) const {
  return merge(*this, o, [](const PowerPiece* a, const PowerPiece* b) {
    std::vector<PowerTerm> t;
    if (!a || !b) return t;
    for (const auto& x : a->terms) {
      for (const auto& y : b->terms) t.push_back({x.coef * y.coef, x.exponent + y.exponent});
    }
    return t;
  });
}

PiecewisePower PiecewisePower::operator+(const PiecewisePower& o) const {
  return merge(*this, o, [](const PowerPiece* a, const PowerPiece* b) {
    std::vector<PowerTerm> t;
    if (a) t.insert(t.end(), a->terms.begin(), a->terms.end());
    if (b) t.insert(t.end(), b->terms.begin(), b->terms.end());
    return t;
  });
}

std::vector<double> PiecewisePower::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : pieces_) {
    if (out.empty() || out.back() != p.lo) out.push_back(p.lo);
    if (std::isfinite(p.hi)) out.push_back(p.hi);
  }
  return out;
}

bool PiecewisePower::is_nonincreasing(double rel_tol) const {
  if (pieces_.empty()) return true;
  if (pieces_.front().lo > 0.0) return false;
  double prev = kInf;  // log of the value just left of the current point
  double prev_hi = 0.0;
  for (const auto& p : pieces_) {
    if (p.lo > prev_hi) prev = -kInf;  // zero gap
    bool monotone = true;
    for (const auto& t : p.terms) {
      if (t.coef * t.exponent > 0.0) monotone = false;
    }
    const auto us = sample_logs(p, monotone ? 1 : 256);
    for (double u : us) {
      const double l = p.log_eval(u);
      if (l > prev + rel_tol && l != -kInf) return false;
      prev = l;
    }
    prev_hi = p.hi;
  }
  return true;
}

double PiecewisePower::sup() const {
  double best = 0.0;
  for (const auto& p : pieces_) {
    for (double u : sample_logs(p, 256)) best = std::max(best, std::exp(p.log_eval(u)));
  }
  return best;
}

PiecewisePower maximal(const PiecewisePower& h) {
  if (h.is_zero()) return {};
  if (!h.is_nonincreasing()) throw DomainError("maximal: input must be nonincreasing");
  std::vector<PowerPiece> out;
  double prefix = 0.0;
  for (const auto& p : h.pieces()) {
    PowerPiece q{p.lo, p.hi, {}};
    double c = prefix;
    for (const auto& t : p.terms) {
      const double e1 = t.exponent + 1.0;
      if (std::abs(e1) <= kExpMerge || (p.lo == 0.0 && e1 < 0.0)) {
        throw DomainError("maximal: input not locally integrable in power form");
      }
      q.terms.push_back({t.coef / e1, t.exponent});
      if (p.lo > 0.0) c -= t.coef * std::pow(p.lo, e1) / e1;
    }
    if (c != 0.0) q.terms.push_back({c, -1.0});
    out.push_back(std::move(q));
    prefix += p.integral(p.lo, p.hi);
  }
  if (std::isfinite(h.support_end())) out.push_back({h.support_end(), kInf, {{prefix, -1.0}}});
  return PiecewisePower(std::move(out));
}

PiecewisePower tail_power_transform(const PiecewisePower& h, double beta) {
  if (h.is_zero()) return {};
  const auto& ps = h.pieces();
  std::vector<PowerPiece> out;
  double tail = 0.0;  // value of the transform at the right end of the current piece
  for (std::size_t k = ps.size(); k-- > 0;) {
    const auto& p = ps[k];
    if (k + 1 < ps.size() && ps[k + 1].lo > p.hi && tail != 0.0) {
      out.push_back({p.hi, ps[k + 1].lo, {{tail, 0.0}}});
    }
    PowerPiece q{p.lo, p.hi, {}};
    double c = tail;
    for (const auto& t : p.terms) {
      const double e1 = t.exponent + beta + 1.0;
      if (std::abs(e1) <= kExpMerge) throw DomainError("tail_power_transform: logarithmic term");
      if (std::isinf(p.hi) && e1 > 0.0) throw DomainError("tail_power_transform: divergent tail");
      q.terms.push_back({-t.coef / e1, e1});
      if (std::isfinite(p.hi)) c += t.coef * std::pow(p.hi, e1) / e1;
    }
    if (c != 0.0) q.terms.push_back({c, 0.0});
    if (q.lo > 0.0) tail = q.eval(q.lo);
    out.push_back(std::move(q));
  }
  if (ps.front().lo > 0.0 && tail != 0.0) out.push_back({0.0, ps.front().lo, {{tail, 0.0}}});
  std::reverse(out.begin(), out.end());
  return PiecewisePower(std::move(out));
}

namespace {

struct Cell {
  double lo;
  double hi;
  double avg;
};

std::vector<double> cell_cuts(const PiecewisePower& h, const GeometricGrid& grid, double upper) {
  grid.validate();
  std::vector<double> cuts{0.0};
  const double lr = std::log(10.0) / grid.cells_per_decade;
  for (std::size_t i = 0;; ++i) {
    const double t = grid.t_min * std::exp(lr * static_cast<double>(i));
    if (t >= upper) break;
    cuts.push_back(t);
  }
  for (double b : h.breakpoints()) {
    if (b < upper) cuts.push_back(b);
  }
  cuts.push_back(upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

std::vector<Cell> build_cells(const PiecewisePower& h, const GeometricGrid& grid, double upper) {
  const auto cuts = cell_cuts(h, grid, upper);
  std::vector<Cell> cells;
  cells.reserve(cuts.size());
  std::size_t k = 0;
  const auto& ps = h.pieces();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    while (k < ps.size() && ps[k].hi <= lo) ++k;
    double avg = 0.0;
    if (k < ps.size() && ps[k].lo <= lo) {
      avg = ps[k].integral(lo, hi) / (hi - lo);
      if (!std::isfinite(avg)) throw DomainError("rearrange: function not locally integrable");
    }
    cells.push_back({lo, hi, std::max(avg, 0.0)});
  }
  return cells;
}

}  // namespace

StepFunction cell_average(const PiecewisePower& h, const GeometricGrid& grid, double upper) {
  const auto cells = build_cells(h, grid, upper);
  std::vector<double> b{cells.empty() ? 0.0 : cells.front().lo};
  std::vector<double> v;
  for (const auto& c : cells) {
    b.push_back(c.hi);
    v.push_back(c.avg);
  }
  return StepFunction(std::move(b), std::move(v));
}

PiecewisePower rearrange(const PiecewisePower& h, const GeometricGrid& grid) {
  if (h.is_zero() || h.is_nonincreasing()) return h;
  const bool has_tail = !h.bounded_support();
  double upper = has_tail ? std::max(grid.t_max, h.pieces().back().lo) : h.support_end();
  if (upper <= grid.t_min) upper = h.support_end();

  std::vector<Cell> cells;
  PowerPiece tail;
  for (int iter = 0;; ++iter) {
    if (iter > 60 || upper > 1e290) throw DomainError("rearrange: could not separate tail from cells");
    cells = build_cells(h, grid, upper);
    if (!has_tail) break;
    tail = h.pieces().back();
    tail.lo = upper;
    double minpos = kInf;
    double zero_measure = 0.0;
    for (const auto& c : cells) {
      if (c.avg > 0.0) minpos = std::min(minpos, c.avg);
      else zero_measure += c.hi - c.lo;
    }
    // the tail only has to be nonincreasing from `upper` on
    bool tail_ok = true;
    const auto us = sample_logs(tail, 256);
    for (std::size_t i = 0; i + 1 < us.size(); ++i) {
      if (tail.log_eval(us[i + 1]) > tail.log_eval(us[i])) tail_ok = false;
    }
    const bool below = tail.eval(upper) <= minpos;
    const bool shift_ok = zero_measure == 0.0 || upper >= 1e12 * zero_measure;
    if (tail_ok && below && shift_ok) break;
    upper *= 10.0;
    if (!shift_ok) upper = std::max(upper, 1e12 * zero_measure);
  }

  std::vector<Cell> pos;
  for (const auto& c : cells) {
    if (c.avg > 0.0) pos.push_back(c);
  }
  std::stable_sort(pos.begin(), pos.end(), [](const Cell& a, const Cell& b) { return a.avg > b.avg; });
  std::vector<PowerPiece> out;
  double at = 0.0;
  for (const auto& c : pos) {
    const double len = c.hi - c.lo;
    // measure below the resolution of the running offset
    if (at + len == at) continue;
    if (!out.empty() && out.back().terms.front().coef == c.avg) {
      out.back().hi += len;
    } else {
      out.push_back({at, at + len, {{c.avg, 0.0}}});
    }
    at += len;
    out.back().hi = at;
  }
  if (has_tail) {
    // the tail keeps its own formula; the left shift by the zero measure is below 1e-12 relative
    tail.lo = at;
    out.push_back(tail);
  }
  return PiecewisePower(std::move(out));
}

}  // namespace ri

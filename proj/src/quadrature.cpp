#include "varlp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace varlp {

namespace {

// 15-point Kronrod extension of 7-point Gauss, on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Cell {
  double a, b;
  double value;
  double err;
  bool operator<(const Cell& o) const { return err < o.err; }
};

struct EvalState {
  bool overflow = false;
  bool nan_seen = false;
};

Cell eval_cell(const std::function<double(double)>& f, double a, double b,
               double cap, EvalState& st) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double k15 = 0.0, g7 = 0.0;
  for (int i = 0; i < 7; ++i) {
    double pair = fv[i] + fv[14 - i];
    k15 += kWgk[i] * pair;
    if (i % 2 == 1) g7 += kWg[i / 2] * pair;
  }
  k15 += kWgk[7] * fv[7];
  g7 += kWg[3] * fv[7];
  k15 *= h;
  g7 *= h;
  for (double v : fv) {
    if (std::isnan(v)) st.nan_seen = true;
    if (std::isinf(v) || std::fabs(v) > cap) st.overflow = true;
  }
  if (!std::isfinite(k15) || std::fabs(k15) > cap) st.overflow = true;
  return Cell{a, b, k15, std::fabs(k15 - g7)};
}

QuadResult integrate_once(const std::function<double(double)>& f,
                          const std::vector<double>& cuts, const QuadOptions& opt) {
  QuadResult res;
  EvalState st;
  std::priority_queue<Cell> heap;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    heap.push(eval_cell(f, cuts[i], cuts[i + 1], opt.overflow_cap, st));
  res.cells = static_cast<long>(heap.size());

  // running totals drive termination; the final reduction below is
  // recomputed in a fixed order for determinism
  double run_value = 0.0, run_err = 0.0;
  {
    std::priority_queue<Cell> copy = heap;
    while (!copy.empty()) {
      run_value += copy.top().value;
      run_err += copy.top().err;
      copy.pop();
    }
  }
  while (true) {
    if (st.overflow || st.nan_seen) break;
    if (std::fabs(run_value) > opt.overflow_cap) {
      st.overflow = true;
      break;
    }
    if (run_err <= opt.abs_tol) break;
    if (res.cells >= opt.max_cells) break;
    Cell worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);  // cell at machine resolution
      break;
    }
    Cell left = eval_cell(f, worst.a, mid, opt.overflow_cap, st);
    Cell right = eval_cell(f, mid, worst.b, opt.overflow_cap, st);
    run_value += left.value + right.value - worst.value;
    run_err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++res.cells;
  }

  // deterministic reduction: sum cells left to right
  std::vector<Cell> cells;
  while (!heap.empty()) {
    cells.push_back(heap.top());
    heap.pop();
  }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& x, const Cell& y) { return x.a < y.a; });
  double value = 0.0, err = 0.0;
  for (const Cell& c : cells) {
    value += c.value;
    err += c.err;
  }
  res.value = value;
  res.error = err;
  res.overflow = st.overflow;
  res.nan_seen = st.nan_seen;
  res.converged = !st.overflow && !st.nan_seen && err <= opt.abs_tol;
  return res;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> singular, const QuadOptions& opt) {
  if (!(a < b)) return QuadResult{};

  // singular points become initial cell boundaries
  std::vector<double> cuts{a};
  std::vector<double> interior(singular.begin(), singular.end());
  std::sort(interior.begin(), interior.end());
  for (double s : interior)
    if (s > a && s < b && s != cuts.back()) cuts.push_back(s);
  cuts.push_back(b);

  QuadResult r1 = integrate_once(f, cuts, opt);
  if (r1.overflow || r1.nan_seen) return r1;

  // Second pass on an incommensurate lattice: a golden-section cut in
  // each initial segment, so a feature hugging a cell boundary of one
  // lattice is interior to cells of the other. The disagreement between
  // the passes is folded into the error bound; this catches jumps hiding
  // in the unsampled sliver beyond the outermost Kronrod node.
  constexpr double kGold = 0.6180339887498949;
  std::vector<double> cuts2;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    cuts2.push_back(cuts[i]);
    cuts2.push_back(cuts[i] + kGold * (cuts[i + 1] - cuts[i]));
  }
  cuts2.push_back(cuts.back());
  QuadResult r2 = integrate_once(f, cuts2, opt);

  QuadResult res;
  res.cells = r1.cells + r2.cells;
  res.overflow = r2.overflow;
  res.nan_seen = r2.nan_seen;
  if (res.overflow || res.nan_seen) {
    res.value = r2.value;
    res.error = r2.error;
    return res;
  }
  res.value = 0.5 * (r1.value + r2.value);
  res.error = 0.5 * (r1.error + r2.error) + 0.5 * std::fabs(r1.value - r2.value);
  res.converged = r1.converged && r2.converged;
  return res;
}

}  // namespace varlp

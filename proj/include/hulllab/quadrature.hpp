#pragma once

// Globally adaptive Gauss–Kronrod (7, 15) quadrature over a list of
// initial subintervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

namespace hulllab {

struct GKEstimate {
  double value = 0.0;
  double error = 0.0;
};

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

template <typename F>
GKEstimate gauss_kronrod15(F&& f, double a, double b) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * wk[7];
  double gauss = fc * wg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * xk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += wk[j] * sum;
    if (j % 2 == 1) gauss += wg[j / 2] * sum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

/// Bisects the worst subinterval until the summed error estimate falls below
/// max(abs_tol, rel_tol·|value|) or `max_intervals` is reached. The final
/// value is summed in interval order so it does not depend on heap layout.
template <typename F>
AdaptiveResult integrate_adaptive(F&& f, std::span<const double> edges, double rel_tol,
                                  double abs_tol = 0.0, std::size_t max_intervals = 4000) {
  struct Piece {
    double a, b;
    GKEstimate est;
  };
  std::vector<Piece> pieces;
  AdaptiveResult out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    pieces.push_back({edges[i], edges[i + 1], gauss_kronrod15(f, edges[i], edges[i + 1])});
    out.evaluations += 15;
  }
  auto worse = [&](std::size_t l, std::size_t r) { return pieces[l].est.error < pieces[r].est.error; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
  double value = 0, error = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    heap.push(i);
    value += pieces[i].est.value;
    error += pieces[i].est.error;
  }
  while (!heap.empty() && error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (pieces.size() >= max_intervals) {
      out.converged = false;
      break;
    }
    const std::size_t i = heap.top();
    heap.pop();
    const Piece old = pieces[i];
    const double mid = 0.5 * (old.a + old.b);
    if (!(mid > old.a && mid < old.b)) {
      // Interval at machine resolution; its error cannot shrink further.
      out.converged = false;
      break;
    }
    pieces[i] = {old.a, mid, gauss_kronrod15(f, old.a, mid)};
    pieces.push_back({mid, old.b, gauss_kronrod15(f, mid, old.b)});
    out.evaluations += 30;
    value += pieces[i].est.value + pieces.back().est.value - old.est.value;
    error += pieces[i].est.error + pieces.back().est.error - old.est.error;
    heap.push(i);
    heap.push(pieces.size() - 1);
  }

  std::sort(pieces.begin(), pieces.end(), [](const Piece& l, const Piece& r) { return l.a < r.a; });
  out.value = 0;
  out.error = 0;
  for (const auto& p : pieces) {
    out.value += p.est.value;
    out.error += p.est.error;
  }
  if (out.error > std::max(abs_tol, rel_tol * std::abs(out.value))) out.converged = false;
  return out;
}

}  // namespace hulllab

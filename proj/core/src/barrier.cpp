#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "wkam/weakkam.hpp"

namespace wkam {

BarrierResult peierls_barrier(const ActionKernel& k, double c, BarrierOptions opts) {
  if (opts.window < 1 || opts.max_iter < opts.window) {
    throw Error(ErrorCode::kInvalidArgument, "barrier window must be >= 1 and below the iteration cap");
  }
  const std::size_t n = k.grid().size();
  const MinPlusMatrix shifted = k.matrix().shifted(c * k.horizon());
  const double mean = min_mean_cycle(shifted);
  if (std::abs(mean) > opts.tol) {
    std::ostringstream msg;
    msg << "shifted kernel has minimum cycle mean " << mean << ", expected 0 within " << opts.tol;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }

  std::deque<MinPlusMatrix> recent;
  MinPlusMatrix power = shifted;
  MinPlusMatrix previous_min;
  int stable = 0;
  for (int exponent = 1; exponent <= opts.max_iter; ++exponent) {
    recent.push_back(power);
    if (static_cast<int>(recent.size()) > opts.window) recent.pop_front();
    if (static_cast<int>(recent.size()) == opts.window) {
      MinPlusMatrix window_min = recent.front();
      for (std::size_t r = 1; r < recent.size(); ++r) {
        for (std::size_t a = 0; a < n; ++a) {
          auto dst = window_min.row(a);
          const auto src = recent[r].row(a);
          for (std::size_t b = 0; b < n; ++b) dst[b] = std::min(dst[b], src[b]);
        }
      }
      if (previous_min.size() == n) {
        double change = 0.0;
        for (std::size_t e = 0; e < n * n; ++e) {
          change = std::max(change, std::abs(window_min.entries()[e] - previous_min.entries()[e]));
        }
        stable = change <= opts.tol ? stable + 1 : 0;
      }
      previous_min = std::move(window_min);
      if (stable >= opts.stable_sweeps) {
        BarrierResult out{k.grid(), c, k.horizon(), std::move(previous_min), 0.0,
                          exponent - opts.window + 1, exponent, {}};
        out.diag_min = out.h(0, 0);
        for (std::size_t a = 1; a < n; ++a) out.diag_min = std::min(out.diag_min, out.h(a, a));
        out.aubry = aubry_set(out, opts.aubry_tol, opts.tol);
        return out;
      }
    }
    power = min_plus_product(power, shifted, opts.exec);
  }
  throw Error(ErrorCode::kNoStabilize, "Peierls barrier window minimum did not stabilize");
}

AubrySet aubry_set(const BarrierResult& b, double aubry_tol, double tol) {
  const std::size_t n = b.grid.size();
  AubrySet s;
  s.tol = aubry_tol > 0.0 ? aubry_tol : 5.0 / b.grid.n();
  s.mask.assign(n, 0);
  auto fill = [&] {
    s.nodes.clear();
    for (std::size_t a = 0; a < n; ++a) {
      s.mask[a] = b.h(a, a) <= s.tol ? 1 : 0;
      if (s.mask[a]) s.nodes.push_back(a);
    }
  };
  fill();
  if (s.nodes.empty()) {
    s.tol = b.diag_min + tol;
    s.widened = true;
    fill();
  }
  return s;
}

PairReport barrier_bound_check(const GridField& u, const BarrierResult& b, double tol) {
  if (!(u.grid() == b.grid)) throw Error(ErrorCode::kInvalidArgument, "field and barrier grids differ");
  PairReport r;
  r.worst_margin = 1e300;
  const std::size_t n = b.grid.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = 0; c < n; ++c) {
      const double m = b.h(a, c) - (u[c] - u[a]);
      if (m < r.worst_margin) {
        r.worst_margin = m;
        r.from = a;
        r.to = c;
      }
    }
  }
  r.pass = r.worst_margin >= -tol;
  return r;
}

}  // namespace wkam

#include "ddmon/hankel.hpp"

#include <ostream>

#include "ddmon/format.hpp"
#include "ddmon/indices.hpp"

namespace ddmon::hankel {
namespace {

RankCurvePoint measure(const OutputSeries& y, std::size_t N, std::size_t T, const RankTolerance& tol) {
  const HankelMatrix h = build_hankel(y, N, T);
  const Vector sigma = numerics::singular_values(h.data);
  RankCurvePoint pt{T, N, numerics::rank_from_singular_values(sigma, tol), 0.0};
  if (pt.rank > 0) pt.sigma_min_kept = sigma(static_cast<Eigen::Index>(pt.rank) - 1);
  return pt;
}

}  // namespace

HankelMatrix build_hankel(const OutputSeries& y, std::size_t N) { return build_hankel(y, N, y.size()); }

HankelMatrix build_hankel(const OutputSeries& y, std::size_t N, std::size_t T) {
  if (N == 0) throw Error(ErrorCode::WindowTooSmall, "Hankel window must be >= 1");
  if (T > y.size()) throw Error(ErrorCode::WindowTooLarge, "horizon exceeds the available samples");
  if (N > T) throw Error(ErrorCode::WindowTooLarge, "Hankel window exceeds the horizon");

  HankelMatrix h;
  h.window = N;
  h.horizon = T;
  h.p = y.p();
  const std::size_t cols = T - N + 1;
  h.data.resize(static_cast<Eigen::Index>(y.p() * N), static_cast<Eigen::Index>(cols));
  for (std::size_t j = 0; j < cols; ++j) h.data.col(static_cast<Eigen::Index>(j)) = y.window(j, N);
  return h;
}

std::vector<RankCurvePoint> rank_curve(const OutputSeries& y, const RankTolerance& tol) {
  if (y.empty()) throw Error(ErrorCode::EmptySeries, "rank curve of an empty series");
  std::vector<RankCurvePoint> curve;
  const std::size_t first = std::max<std::size_t>(y.p(), 1);
  for (std::size_t T = first; T <= y.size(); ++T) {
    curve.push_back(measure(y, indices::heuristic_window(T, y.p()), T, tol));
  }
  return curve;
}

HankelInfoEstimate hankel_information(const OutputSeries& y, const RankTolerance& tol) {
  if (y.empty()) throw Error(ErrorCode::EmptySeries, "Hankel information of an empty series");
  const std::size_t len = y.size();
  const std::size_t max_window = (len + 1) / 2;

  // For fixed N, appending columns never lowers the rank, so the sweep over T
  // reduces to one full-length evaluation per N plus a bisection for the
  // earliest T that reaches the maximum.
  HankelInfoEstimate est;
  std::vector<std::size_t> full_rank(max_window + 1, 0);
  for (std::size_t N = 1; N <= max_window; ++N) {
    full_rank[N] = measure(y, N, len, tol).rank;
    est.gamma = std::max(est.gamma, full_rank[N]);
  }

  est.achieved_T = len + 1;
  for (std::size_t N = 1; N <= max_window; ++N) {
    if (full_rank[N] != est.gamma) continue;
    std::size_t lo = N, hi = len;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (measure(y, N, mid, tol).rank >= est.gamma) hi = mid;
      else lo = mid + 1;
    }
    if (lo < est.achieved_T) {
      est.achieved_T = lo;
      est.achieved_N = N;
    }
  }
  if (est.gamma == 0) {
    est.achieved_N = 1;
    est.achieved_T = 1;
  }
  if (len >= y.p() && y.p() > 0) est.rank_curve = rank_curve(y, tol);
  return est;
}

void write_rank_curve_csv(std::ostream& os, const std::vector<RankCurvePoint>& curve) {
  os << "T,N,rank,sigma_min_kept\n";
  for (const auto& pt : curve) {
    os << pt.T << ',' << pt.N << ',' << pt.rank << ',' << format_double(pt.sigma_min_kept) << '\n';
  }
}

}  // namespace ddmon::hankel

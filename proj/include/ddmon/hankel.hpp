#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ddmon/linsys.hpp"

namespace ddmon {

/// Block-Hankel arrangement Y_{N,T} of y(0..T-1): column j stacks
/// y(j), ..., y(j + N - 1). Shape pN x (T - N + 1).
struct HankelMatrix {
  std::size_t window = 0;   // N
  std::size_t horizon = 0;  // T
  std::size_t p = 0;
  Matrix data;
};

struct RankCurvePoint {
  std::size_t T = 0;
  std::size_t N = 0;
  std::size_t rank = 0;
  double sigma_min_kept = 0.0;  // smallest singular value counted in the rank, 0 if rank is 0
};

/// Estimate of the Hankel information of a finite series. With data shorter
/// than nu + mu - 1 samples, gamma is only a lower bound on the true value.
struct HankelInfoEstimate {
  std::size_t gamma = 0;
  std::size_t achieved_N = 0;
  std::size_t achieved_T = 0;
  std::vector<RankCurvePoint> rank_curve;
};

namespace hankel {

/// Y_{N,T} over the whole series (T = y.size()).
HankelMatrix build_hankel(const OutputSeries& y, std::size_t N);

/// Y_{N,T} over the first T samples.
HankelMatrix build_hankel(const OutputSeries& y, std::size_t N, std::size_t T);

/// Rank of Y_{N(T),T} for T = p, ..., y.size() with N(T) from the window
/// heuristic.
std::vector<RankCurvePoint> rank_curve(const OutputSeries& y, const RankTolerance& tol = {});

/// Maximum numerical rank over all admissible (N, T) with N <= ceil(len / 2),
/// and the first pair attaining it in (T, N) lexicographic order.
HankelInfoEstimate hankel_information(const OutputSeries& y, const RankTolerance& tol = {});

/// CSV with header `T,N,rank,sigma_min_kept`.
void write_rank_curve_csv(std::ostream& os, const std::vector<RankCurvePoint>& curve);

}  // namespace hankel
}  // namespace ddmon

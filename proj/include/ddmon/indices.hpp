#pragma once

#include <cstddef>
#include <optional>

#include "ddmon/linsys.hpp"

namespace ddmon {

/// Structural indices of a system and the detection horizons derived from them.
struct IndexReport {
  std::size_t nu = 0;                       // observability index
  std::size_t mu = 0;                       // excitability index (minimal polynomial degree)
  std::optional<std::size_t> mu_of_x0;      // pointwise excitability, when x0 is known
  std::size_t t_safe_model = 0;             // nu
  std::size_t t_safe_data = 0;              // nu + mu
  std::size_t t_safe_heuristic = 0;         // horizon under the N(T) window heuristic
};

namespace indices {

/// Smallest N with rank(O_N) = rank(O_{N+1}). Searches N <= n + 1.
std::size_t observability_index(const LtiSystem& sys, const RankTolerance& tol = {});

/// Smallest i with rank(E_i(x)) = rank(E_{i+1}(x)), E_i(x) = [x Ax ... A^{i-1}x].
/// Returns 1 for x = 0.
std::size_t excitability_index_at(const LtiSystem& sys, const Vector& x, const RankTolerance& tol = {});

/// Degree of the minimal polynomial of A, which is max_x mu(x). Found as the
/// first d for which vec(A^d) falls in span{vec(I), ..., vec(A^{d-1})}.
std::size_t excitability_index(const LtiSystem& sys, const RankTolerance& tol = {});

/// floor((T + 1) / (p + 1)); keeps at least as many Hankel columns as rows.
std::size_t heuristic_window(std::size_t T, std::size_t p);

/// ceil(max(nu (p + 1) - 1, mu (p + 1) / p - 1)).
std::size_t safe_horizon_heuristic(std::size_t nu, std::size_t mu, std::size_t p);

IndexReport compute_report(const LtiSystem& sys, const std::optional<Vector>& x0 = std::nullopt,
                           const RankTolerance& tol = {});

}  // namespace indices
}  // namespace ddmon

#pragma once

// Instance checks of the matrix identities relating W_{i,j}, W̄_{i,j} and the
// eigenprojectors of the q-Kneser graph. Each returns a Report whose witness is
// the first mismatching entry.

#include "qekr/schemes.hpp"

#include <span>

namespace qekr {

/// W̄_{i,j} = sum_{m=0}^{i} (-1)^m q^{C(m,2)} W_{m,i}^T W_{m,j}, 0 <= i <= j <= n.
Report verify_disjointness_expansion(const Workspace& ws, int i, int j);

/// W_{i,j} = sum_{m=0}^{i} (-1)^m q^{C(m+1,2) - m i} W_{m,i}^T W̄_{m,j}, 0 <= i <= j <= n.
Report verify_inclusion_expansion(const Workspace& ws, int i, int j);

/// W_{i,j} W_{j,r} = [r-i, j-i] W_{i,r}, 0 <= i <= j <= r <= n.
Report verify_inclusion_product(const Workspace& ws, int i, int j, int r);

/// rank W_{i,k} = [n, i] and W_{i,k} P_m = 0 for every m > i, so that the row
/// space of W_{i,k} is U_0 + ... + U_i. The projector part needs dense projectors.
Report verify_row_space(const Workspace& ws, int i);

/// The four checks above at one admissible triple 0 <= i <= j <= r <= k.
Report verify_incidence_identities(const Workspace& ws, int i, int j, int r);

/// W_{i,k} W_{j,k}^T = sum_{m=0}^{j} q^{m(k+m-i-j)} [n-i-j, n-k-m] W_{m,i}^T W_{m,j},
/// 0 <= j <= i <= k < n.
Report verify_gram_expansion(const Workspace& ws, int i, int j);

/// W_{i,k}^T W_{i,k} P_j = c P_j with c = q^{j(k-i)} [k-j, k-i][n-i-j, k-i] for j <= i
/// and c = 0 for i < j.
Report verify_gram_eigenvalue(const Workspace& ws, int i, int j);

/// W_{d,k}^T W̄_{d,d} W_{d,k} = sum_{i=0}^{d} (-1)^i q^{C(i,2)} [k-i, d-i]^2 W_{i,k}^T W_{i,k}.
Report verify_degree_form_matrix(const Workspace& ws, int d);

/// (W_{d,k} h)^T W̄_{d,d} (W_{d,k} h) = sum_{r=0}^{d} b_r ||h_r||^2 for an arbitrary
/// rational h, with b_r = degree_form_coefficient. Also folds in the matrix identity
/// above (computed once per workspace). Requires k > d >= 1 and n >= 2k.
Report verify_degree_form(const Workspace& ws, int d, std::span<const Rational> h);

/// Spectrum formula checks plus, within the dense budget, every projector identity.
/// Beyond the budget the report is marked "formula-consistency only".
Report verify_spectrum(const Workspace& ws);

}  // namespace qekr

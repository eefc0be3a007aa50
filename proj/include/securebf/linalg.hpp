#pragma once

#include "securebf/types.hpp"

namespace securebf {

struct RankOne {
  CVec vector;       ///< sqrt(lambda_max) * u_max, first nonzero entry real >= 0
  double ratio = 0;  ///< lambda_2 / lambda_1, 0 for side 1 or the zero matrix
};

/// Principal rank-one factor of a Hermitian PSD matrix.
RankOne rank_one_extract(const CMat& m);

/// I - H^+ H, the orthogonal projector onto null(H). Rank-deficient H allowed.
CMat null_space_projector(const CMat& h);

struct NullBasis {
  CMat basis;                  ///< N x k with orthonormal columns spanning null(G)
  bool rank_deficient = false; ///< null space larger than N - rows(G)
};

/// Orthonormal basis of null(G) for G of size Ne x N. Throws DomainError when
/// the null space is empty.
NullBasis eve_null_basis(const CMat& g);

/// Numerical rank with tolerance max(dim) * eps * sigma_max.
int numerical_rank(const CMat& m);

}  // namespace securebf

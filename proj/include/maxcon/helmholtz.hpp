#pragma once

#include <cstddef>
#include <vector>

#include "maxcon/constants_report.hpp"
#include "maxcon/derham.hpp"

namespace maxcon::helmholtz
{

using sparse::DiagonalWeight;
using sparse::SparseMatrix;
using sparse::Vector;

//
// E = grad u + h + eps^-1 rot* F, eps-orthogonal. grad_part and curl_part are projections;
// harmonic_part is the remainder.
//
struct HelmholtzParts
{
  Vector grad_part;
  Vector harmonic_part;
  Vector curl_part;
  Vector scalar_potential;  // free nodes; zero weighted mean when Gamma_t is empty
  Vector vector_potential;  // free faces: curl_part = W_e^-1 curl^T W_f F
  std::size_t iterations = 0;
};

// Relative to ||E||_eps (reconstruction) and ||E||_eps^2 (pairwise inner products).
struct DecompositionResiduals
{
  double reconstruction = 0.0;
  double grad_harmonic = 0.0;
  double grad_curl = 0.0;
  double harmonic_curl = 0.0;

  double max_orthogonality() const;
};

HelmholtzParts decompose(const Vector &E, const derham::ComplexOperators &ops, double tol);
DecompositionResiduals residuals(const Vector &E, const HelmholtzParts &parts, const derham::ComplexOperators &ops);

//
// eps-orthonormal basis of the discrete harmonic fields N(curl) n N(grad*). Built from
// eps-harmonic potentials equal to 1 on one Gamma_t component and 0 on the others, so its size
// is the number of Gamma_t components minus one (none when Gamma_t is empty).
//
std::vector<Vector> harmonic_basis(const derham::ComplexOperators &ops, double tol = 1e-12);

// Orthogonal projection onto the harmonic fields.
Vector harmonic_projection(const Vector &E, const std::vector<Vector> &basis, const DiagonalWeight &W_e);

// dense: nullity of curl^T W_f curl + W_e grad W_n^-1 grad^T W_e against W_e (eigenvalues below
// 1e-10 of the largest), DenseCapError above cap. Otherwise the rank of the Gram matrix of the
// constructed basis.
std::size_t harmonic_dimension(const derham::ComplexOperators &ops, bool dense,
                               std::size_t cap = dense::default_dense_cap);

struct EstimateReport
{
  double lhs = 0.0;    // ||E - pi E||_eps^2
  double rhs = 0.0;    // c_p^2 ||grad* E||^2 + c_rot^2 ||curl E||^2
  double slack = 0.0;  // rhs - lhs
  double scale = 0.0;
  bool pass = true;  // slack >= -1e-9 scale
};

// Uses report.c_p and report.c_m_rot_eps_id; pi is the harmonic projection.
EstimateReport maxwell_estimate_check(const Vector &E, const derham::ComplexOperators &ops,
                                      const constants::ConstantsReport &report);

}  // namespace maxcon::helmholtz

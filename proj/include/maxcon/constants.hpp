#pragma once

#include <cstdint>
#include <optional>

#include "maxcon/constants_report.hpp"
#include "maxcon/derham.hpp"
#include "maxcon/dual_pair.hpp"

namespace maxcon::constants
{

using derham::ComplexOperators;
using dual::EigenOptions;
using dual::SpectralResult;

// Smallest positive eigenvalue of grad* grad on the free nodes (constants removed when Gamma_t
// is empty).
SpectralResult poincare_spectrum(const ComplexOperators &ops, const EigenOptions &options = {});
double poincare_constant(const ComplexOperators &ops, const EigenOptions &options = {});

// Same spectrum seen from the edge side: the swapped gradient pair restricted to range(grad).
SpectralResult maxwell_div_spectrum(const ComplexOperators &ops, const EigenOptions &options = {});
double maxwell_div_constant(const ComplexOperators &ops, const EigenOptions &options = {});

//
// Smallest positive eigenvalue of curl* curl on the eps-complement of gradients and harmonic
// fields. unweighted_rhs selects the plain face masses, i.e. ||rot E|| without eps; otherwise
// the face masses carry the averaged eps^-1.
//
SpectralResult maxwell_rot_spectrum(const ComplexOperators &ops, bool unweighted_rhs,
                                    const EigenOptions &options = {});
double maxwell_rot_constant(const ComplexOperators &ops, bool unweighted_rhs, const EigenOptions &options = {});

double maxwell_full_constant(double c_p, double c_m_rot_eps_id);
double maxwell_full_constant(const ConstantsReport &report);

// Dense generalized eigensolve of ||rot E||^2 + ||div eps E||^2 against ||E||_eps^2, harmonic
// nullspace excluded. DenseCapError when the edge space exceeds cap.
double maxwell_full_constant_direct(const ComplexOperators &ops, std::size_t cap = dense::default_dense_cap);

// The same quadratic form through the stacked pair [curl; grad*] and inverse iteration.
SpectralResult maxwell_full_spectrum_iterative(const ComplexOperators &ops, const EigenOptions &options = {});

double payne_weinberger_bound(const derham::Grid3 &grid);

struct VerifyOptions
{
  double tol = 1e-8;
  std::size_t maxit = 10000;
  std::uint64_t seed = dual::default_seed;
  std::size_t dense_cap = dense::default_dense_cap;
  // Below this cell count per axis the rot <= poincare check is reported but not enforced.
  std::size_t rot_check_min_n = 8;
};

ConstantsReport verify_all(const derham::Grid3 &grid, const derham::BoundarySpec &bc,
                           const derham::MaterialField &material, const VerifyOptions &options = {});

}  // namespace maxcon::constants

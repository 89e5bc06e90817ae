#pragma once

#include <optional>
#include <string>

#include "sslab/linalg.hpp"

namespace sslab {

// Scaling-and-squaring Pade exponential. Throws NumericOverflow when the
// result has non-finite entries.
CMatrix expm(const CMatrix& a);

// Solution operators of -u'' = A u, read off the exponential of the
// first-order block generator [[0, I], [-A, 0]].
struct CosineFamily {
  CMatrix cosine;         // V(t): u(0) -> u(t)
  CMatrix sine;           // W(t): u'(0) -> u(t)
  CMatrix cosine_rate;    // d/dt V(t)
  CMatrix sine_rate;      // d/dt W(t)
};
CosineFamily cosine_family(const CMatrix& a, double t);

// Same V, W through an eigendecomposition and the principal square root.
// Returns nullopt (with the reason) when the eigenvector basis is worse
// conditioned than cond_limit or an eigenvalue sits on the branch cut.
struct SpectralCosine {
  CMatrix cosine;
  CMatrix sine;
};
std::optional<SpectralCosine> cosine_family_spectral(const CMatrix& a, double t, std::string* reason = nullptr,
                                                     double cond_limit = 1e8);

// Eigenvalues sorted by real part, then imaginary part.
CVector sorted_eigenvalues(const CMatrix& a);

}  // namespace sslab

#pragma once

#include <cstdint>
#include <vector>

#include "entlab/complex_matrix.hpp"

namespace entlab::num {

/// Eigenvalues plus an orthonormal family of eigenvectors (columns of
/// `vectors`, one per eigenvalue, in matching order).
struct SpectralDecomposition {
    std::vector<cplx> eigenvalues;
    ComplexMatrix vectors;

    Vector eigenvector(std::size_t i) const;
};

/// Cyclic-Jacobi eigendecomposition of a Hermitian matrix.  Eigenvalues are
/// real (returned with zero imaginary part) and sorted ascending.
/// Throws std::invalid_argument if H is not Hermitian to 1e-12, reporting the
/// measured asymmetry.
SpectralDecomposition hermitian_eig(const ComplexMatrix& h);

/// Eigendecomposition of a unitary matrix through random Hermitian
/// combinations cos(t)(U+U*)/2 + sin(t)(U-U*)/(2i), with recursive cluster
/// refinement where the combination fails to split degenerate groups.
/// Deterministic given the seed.  Eigenvalues sorted by phase in [0, 2pi).
SpectralDecomposition unitary_eig(const ComplexMatrix& u, std::uint64_t seed);

/// Largest singular value, via power iteration on A*A with a deterministic
/// start vector.  `tol` is the relative tolerance on the converged value.
double operator_norm(const ComplexMatrix& a, double tol = 1e-10);

/// -sum lambda_i log lambda_i over the spectrum of a density matrix.
/// Rejects matrices that are not Hermitian, have an eigenvalue below -1e-8,
/// or whose trace differs from 1 by more than 1e-8.
double von_neumann_entropy(const ComplexMatrix& rho);

}  // namespace entlab::num

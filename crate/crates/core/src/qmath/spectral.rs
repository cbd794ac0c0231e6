use nalgebra::SymmetricEigen;

use super::{hermiticity_defect, tol, CMatrix, DensityMatrix, PureState, StateRef};
use crate::error::{Error, Result};

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, k| {
        eig.eigenvectors[(r, order[k])]
    });
    (values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    let defect = hermiticity_defect(m);
    if defect > tol::HERMITIAN_LOOSE {
        return Err(Error::NotHermitian(defect));
    }
    Ok(hermitian_eigen(m).0[0])
}

/// `⟨b|ρ_a|b⟩`, i.e. `|⟨a|b⟩|²` when `a` is pure.
pub fn fidelity<'a>(a: impl Into<StateRef<'a>>, b: &PureState) -> Result<f64> {
    match a.into() {
        StateRef::Pure(a) => Ok(a.inner(b)?.norm_sqr()),
        StateRef::Mixed(rho) => {
            if rho.dim() != b.dim() {
                return Err(Error::DimensionMismatch {
                    expected: rho.dim(),
                    found: b.dim(),
                });
            }
            let v = b.to_vector();
            let value = (v.adjoint() * rho.matrix() * &v)[(0, 0)];
            Ok(value.re)
        }
    }
}

fn xlog2x(x: f64) -> f64 {
    if x <= tol::ZERO_EIGENVALUE {
        0.0
    } else {
        x * x.log2()
    }
}

/// `−Σ λ log₂ λ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -rho.eigenvalues().into_iter().map(xlog2x).sum::<f64>()
}

/// `S(ρ‖σ) = Tr ρ log₂ ρ − Tr ρ log₂ σ`, or `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let neg_entropy: f64 = rho.eigenvalues().into_iter().map(xlog2x).sum();
    let (mu, w) = hermitian_eigen(sigma.matrix());
    let mut cross = 0.0;
    for (k, &m) in mu.iter().enumerate() {
        let col = w.column(k);
        let weight = (col.adjoint() * rho.matrix() * col)[(0, 0)].re;
        if m <= tol::ZERO_EIGENVALUE {
            if weight > tol::ZERO_EIGENVALUE {
                return Ok(f64::INFINITY);
            }
        } else {
            cross += weight * m.log2();
        }
    }
    Ok(neg_entropy - cross)
}

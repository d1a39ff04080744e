use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{BlochError, Liouvillian};
use crate::DensityMatrix;

/// Largest accepted `‖L[ρ]‖_max` for a returned steady state.
pub const STEADY_STATE_RESIDUAL_TOL: f64 = 1e-10;

/// Singular values below this fraction of the largest count as zero.
const NULL_SPACE_TOL: f64 = 1e-12;

/// Unique steady state of `l`.
///
/// The null space dimension is checked with an SVD first; the state itself
/// comes from the linear system with the `ρ_00` row replaced by the trace
/// condition.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix, BlochError> {
    let n = l.dim();
    let m = l.matrix();
    let sv = m.clone().svd(false, false).singular_values;
    let largest = sv.max();
    let nullity = sv.iter().filter(|&&s| s <= NULL_SPACE_TOL * largest.max(f64::MIN_POSITIVE)).count();
    if nullity != 1 {
        return Err(BlochError::DegenerateSteadyState(nullity));
    }

    let mut a = m.clone();
    let row = l.index(0, 0);
    for k in 0..n * n {
        a[(row, k)] = Complex64::new(0.0, 0.0);
    }
    for i in 0..n {
        a[(row, l.index(i, i))] = Complex64::new(1.0, 0.0);
    }
    let mut b = DMatrix::<Complex64>::zeros(n * n, 1);
    b[(row, 0)] = Complex64::new(1.0, 0.0);
    let lu = a.clone().lu();
    let mut x = lu.solve(&b).ok_or(BlochError::DegenerateSteadyState(2))?;
    // one step of iterative refinement
    let r = &b - &a * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }

    let rho = DMatrix::from_fn(n, n, |i, j| x[(l.index(i, j), 0)]);
    let rho = DensityMatrix::from_numeric(rho)?;
    let residual = l.apply(rho.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if residual > STEADY_STATE_RESIDUAL_TOL {
        return Err(BlochError::Residual(residual));
    }
    Ok(rho)
}

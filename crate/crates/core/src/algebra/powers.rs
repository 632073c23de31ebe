use serde::{Deserialize, Serialize};

use super::CommAlgebra;
use crate::exactnum::Field;
use crate::linalg::row_basis;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSeries {
    /// dim A^1, dim A^2, ... ending at 0 for nilpotent algebras.
    pub dims: Vec<usize>,
    pub nilpotent: bool,
    pub nilpotency_index: Option<usize>,
    pub null_filiform: bool,
}

/// Dimensions of A^1 ⊇ A^2 ⊇ ... with A^{i+1} = Σ_k A^k A^{i+1-k}.
/// Stops at the first zero power or after n + 1 terms.
pub fn power_dims<S: Field>(alg: &CommAlgebra<S>) -> PowerSeries {
    let n = alg.dim();
    let mut powers: Vec<Vec<Vec<S>>> = vec![(1..=n).map(|i| super::basis_vector(n, i)).collect()];
    let mut dims = vec![n];
    while *dims.last().unwrap() != 0 && dims.len() <= n {
        let i = powers.len();
        let mut spanning = Vec::new();
        for k in 1..=i {
            for u in &powers[k - 1] {
                for v in &powers[i - k] {
                    spanning.push(alg.mul_vec(u, v));
                }
            }
        }
        let b = row_basis(spanning);
        dims.push(b.len());
        powers.push(b);
    }
    let nilpotent = *dims.last().unwrap() == 0;
    let expected: Vec<usize> = (0..=n).rev().collect();
    PowerSeries {
        nilpotency_index: nilpotent.then(|| dims.len()),
        null_filiform: dims == expected,
        nilpotent,
        dims,
    }
}

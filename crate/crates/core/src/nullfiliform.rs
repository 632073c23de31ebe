//! The algebra μ₀ⁿ (e_i·e_j = e_{i+j}) and its automorphisms.
//!
//! An automorphism is fixed by φ(e_1) = Σ A_k e_k with A_1 ≠ 0; then
//! φ(e_i) = φ(e_1)^i, i.e. the substitution x ↦ p(x) = Σ A_k x^k acting on
//! polynomials truncated above degree n.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{axpy, Bracket, CommAlgebra, PoissonPair};
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

pub fn mu0<S: Scalar>(n: usize) -> Result<CommAlgebra<S>> {
    if n == 0 {
        return Err(Error::Domain("mu0 needs n >= 1".into()));
    }
    let mut a = CommAlgebra::zero(n);
    for i in 1..=n {
        for j in i..=n {
            if i + j <= n {
                a.set_product(i, j, crate::algebra::basis_vector(n, i + j))?;
            }
        }
    }
    Ok(a)
}

/// Product of truncated series stored as coefficients of x^1..x^n.
fn series_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let n = a.len();
    let mut out = vec![S::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        // x^{i+1} * x^{j+1} = x^{i+j+2}
        for (j, y) in b.iter().enumerate().take(n.saturating_sub(i + 1)) {
            if !y.is_zero() {
                out[i + j + 1] = out[i + j + 1].clone() + &(x.clone() * y);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism<S> {
    n: usize,
    params: Vec<S>,
    /// columns[i-1] = φ(e_i)
    columns: Vec<Vec<S>>,
}

impl<S: Scalar> Automorphism<S> {
    pub fn new(params: Vec<S>) -> Result<Automorphism<S>> {
        let n = params.len();
        if n == 0 {
            return Err(Error::Domain("automorphism needs n >= 1".into()));
        }
        if params[0].is_zero() {
            return Err(Error::NotInvertible("A_1 = 0".into()));
        }
        let mut columns = Vec::with_capacity(n);
        columns.push(params.clone());
        for i in 1..n {
            let next = series_mul(&columns[i - 1], &params);
            columns.push(next);
        }
        Ok(Automorphism { n, params, columns })
    }

    pub fn identity(n: usize) -> Automorphism<S> {
        Automorphism::scaling(n, S::one()).expect("one is nonzero")
    }

    /// A = (λ, 0, ..., 0)
    pub fn scaling(n: usize, lambda: S) -> Result<Automorphism<S>> {
        let mut a = vec![S::zero(); n];
        a[0] = lambda;
        Automorphism::new(a)
    }

    /// A = (1, 0, ..., c at position k, ..., 0), k ≥ 2.
    pub fn shift(n: usize, k: usize, c: S) -> Result<Automorphism<S>> {
        if k < 2 || k > n {
            return Err(Error::Domain(format!("shift position {k} outside 2..={n}")));
        }
        let mut a = vec![S::zero(); n];
        a[0] = S::one();
        a[k - 1] = c;
        Automorphism::new(a)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &[S] {
        &self.params
    }

    /// φ(e_i)
    pub fn image(&self, i: usize) -> &[S] {
        &self.columns[i - 1]
    }

    /// Coefficient of e_t in φ(e_i).
    pub fn entry(&self, t: usize, i: usize) -> &S {
        &self.columns[i - 1][t - 1]
    }

    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        let mut out = vec![S::zero(); self.n];
        for (i, c) in v.iter().enumerate() {
            axpy(&mut out, c, &self.columns[i]);
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.params[0].is_one() && self.params[1..].iter().all(S::is_zero)
    }

    /// φ(e_i · e_j) = φ(e_i) · φ(e_j) for all basis pairs.
    pub fn verify(&self, alg: &CommAlgebra<S>) -> bool {
        if alg.dim() != self.n {
            return false;
        }
        (1..=self.n).all(|i| {
            (1..=self.n).all(|j| {
                let lhs = self.apply(alg.product(i, j)).expect("same dimension");
                let rhs = alg.mul_vec(self.image(i), self.image(j));
                lhs == rhs
            })
        })
    }

    /// self ∘ g
    pub fn compose(&self, g: &Automorphism<S>) -> Result<Automorphism<S>> {
        if g.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: g.n,
            });
        }
        Automorphism::new(self.apply(g.image(1))?)
    }

    /// Inverse matrix columns, by forward substitution on the triangular matrix.
    fn inverse_columns(&self) -> Result<Vec<Vec<S>>> {
        let n = self.n;
        let diag_inv: Vec<S> = (1..=n)
            .map(|i| {
                self.entry(i, i)
                    .try_inv()
                    .ok_or_else(|| Error::NotInvertible(format!("A_1^{i} = {}", self.entry(i, i))))
            })
            .collect::<Result<_>>()?;
        let mut inv = vec![vec![S::zero(); n]; n];
        for c in 0..n {
            // solve M x = e_{c+1}; x_t = 0 for t < c
            let x = &mut inv[c];
            for t in c..n {
                let mut s = if t == c { S::one() } else { S::zero() };
                for k in c..t {
                    let m = &self.columns[k][t];
                    if !m.is_zero() && !x[k].is_zero() {
                        s = s - &(m.clone() * &x[k]);
                    }
                }
                x[t] = s * &diag_inv[t];
            }
        }
        Ok(inv)
    }

    pub fn inverse(&self) -> Result<Automorphism<S>> {
        let cols = self.inverse_columns()?;
        Automorphism::new(cols[0].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<Automorphism<T>> {
        Automorphism::new(self.params.iter().map(f).collect())
    }

    /// Rows of the matrix: row t lists the e_t coefficients of φ(e_1..e_n).
    pub fn matrix_rows(&self) -> Vec<Vec<S>> {
        (1..=self.n)
            .map(|t| (1..=self.n).map(|i| self.entry(t, i).clone()).collect())
            .collect()
    }
}

/// Transports a bracket along φ: b'(x, y) = φ⁻¹ b(φx, φy), so that φ is an
/// isomorphism from (μ₀ⁿ, ·, b') onto (μ₀ⁿ, ·, b).
///
/// With this convention push(f ∘ g) = push(g) after push(f).
pub fn push_bracket<S: Scalar>(aut: &Automorphism<S>, pair: &PoissonPair<S>) -> Result<PoissonPair<S>> {
    let n = pair.dim();
    if aut.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: aut.dim(),
        });
    }
    let inv = aut.inverse_columns()?;
    let mut out = Bracket::zero(n);
    for i in 1..=n {
        for j in i + 1..=n {
            let v = pair.bracket.apply_vec(aut.image(i), aut.image(j));
            let mut w = vec![S::zero(); n];
            for (k, c) in v.iter().enumerate() {
                axpy(&mut w, c, &inv[k]);
            }
            out.set(i, j, w)?;
        }
    }
    PoissonPair::new(pair.base.clone(), out, pair.delta.clone())
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: DeserializeOwned"))]
struct AutWire<S> {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<S>,
    #[serde(default = "Vec::new", skip_serializing_if = "Vec::is_empty")]
    matrix: Vec<Vec<S>>,
}

impl<S: Scalar + Serialize> Serialize for Automorphism<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        AutWire {
            n: self.n,
            a: self.params.clone(),
            matrix: self.matrix_rows(),
        }
        .serialize(s)
    }
}

impl<'de, S: Scalar + DeserializeOwned> Deserialize<'de> for Automorphism<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = AutWire::<S>::deserialize(d)?;
        if w.a.len() != w.n {
            return Err(D::Error::custom(format!("{} parameters for n = {}", w.a.len(), w.n)));
        }
        let aut = Automorphism::new(w.a).map_err(D::Error::custom)?;
        if !w.matrix.is_empty() && w.matrix != aut.matrix_rows() {
            return Err(D::Error::custom("matrix does not match the parameters"));
        }
        Ok(aut)
    }
}

//! Structure-constant algebras and brackets on the basis e_1..e_n.
//!
//! Indices in the public API are 1-based; vectors are dense of length n with
//! entry t-1 holding the coefficient of e_t.

mod identities;
mod json;
mod powers;

pub use identities::{check_identity, IdentityKind, Residual, ResidualReport};
pub(crate) use json::{bracket_from_wire as json_bracket_from_wire, bracket_to_wire as json_bracket_to_wire};
pub use powers::{power_dims, PowerSeries};

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

pub fn basis_vector<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i - 1] = S::one();
    v
}

fn check_len<S>(n: usize, v: &[S]) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(())
}

/// acc += c * v
pub(crate) fn axpy<S: Scalar>(acc: &mut [S], c: &S, v: &[S]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.clone() + &(c.clone() * x);
        }
    }
}

pub(crate) fn is_zero_vec<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(S::is_zero)
}

/// Product table of an n-dimensional algebra. The table stores both orders
/// so that commutativity is a checkable property rather than an assumption.
#[derive(Clone, Debug, PartialEq)]
pub struct CommAlgebra<S> {
    n: usize,
    table: Vec<Vec<S>>,
}

impl<S: Scalar> CommAlgebra<S> {
    pub fn zero(n: usize) -> CommAlgebra<S> {
        CommAlgebra {
            n,
            table: vec![vec![S::zero(); n]; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "basis index out of range"
        );
        (i - 1) * self.n + (j - 1)
    }

    /// e_i · e_j
    pub fn product(&self, i: usize, j: usize) -> &[S] {
        &self.table[self.slot(i, j)]
    }

    /// Sets e_i · e_j and e_j · e_i.
    pub fn set_product(&mut self, i: usize, j: usize, v: Vec<S>) -> Result<()> {
        check_len(self.n, &v)?;
        let (a, b) = (self.slot(i, j), self.slot(j, i));
        self.table[b] = v.clone();
        self.table[a] = v;
        Ok(())
    }

    /// Sets e_i · e_j only, for building deliberately non-commutative inputs.
    pub fn set_product_ordered(&mut self, i: usize, j: usize, v: Vec<S>) -> Result<()> {
        check_len(self.n, &v)?;
        let a = self.slot(i, j);
        self.table[a] = v;
        Ok(())
    }

    pub fn is_commutative_table(&self) -> bool {
        (1..=self.n).all(|i| (i + 1..=self.n).all(|j| self.product(i, j) == self.product(j, i)))
    }

    pub fn multiply(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        check_len(self.n, x)?;
        check_len(self.n, y)?;
        Ok(self.mul_vec(x, y))
    }

    pub(crate) fn mul_vec(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.n];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                axpy(&mut out, &(xa.clone() * yb), self.product(a + 1, b + 1));
            }
        }
        out
    }

    /// e_i · v
    pub(crate) fn mul_basis(&self, i: usize, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.n];
        for (b, vb) in v.iter().enumerate() {
            axpy(&mut out, vb, self.product(i, b + 1));
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CommAlgebra<T> {
        CommAlgebra {
            n: self.n,
            table: self.table.iter().map(|v| v.iter().map(&f).collect()).collect(),
        }
    }
}

/// Antisymmetric bracket; only [e_i, e_j] with i < j is stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket<S> {
    n: usize,
    entries: Vec<Vec<S>>,
}

pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    // pairs ordered lexicographically: (1,2),(1,3),...,(1,n),(2,3),...
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

impl<S: Scalar> Bracket<S> {
    pub fn zero(n: usize) -> Bracket<S> {
        let pairs = n * n.saturating_sub(1) / 2;
        Bracket {
            n,
            entries: vec![vec![S::zero(); n]; pairs],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Pairs (i, j), i < j, in storage order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
    }

    /// [e_i, e_j] for i < j.
    pub fn entry(&self, i: usize, j: usize) -> &[S] {
        assert!(i < j && j <= self.n, "entry needs 1 <= i < j <= n");
        &self.entries[pair_index(self.n, i, j)]
    }

    /// [e_i, e_j] for any i, j.
    pub fn get(&self, i: usize, j: usize) -> Vec<S> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entry(i, j).to_vec(),
            std::cmp::Ordering::Greater => self.entry(j, i).iter().map(|x| -x.clone()).collect(),
            std::cmp::Ordering::Equal => vec![S::zero(); self.n],
        }
    }

    /// Sets [e_i, e_j] (and implicitly [e_j, e_i] = -[e_i, e_j]).
    pub fn set(&mut self, i: usize, j: usize, v: Vec<S>) -> Result<()> {
        check_len(self.n, &v)?;
        if i == j || i == 0 || j == 0 || i.max(j) > self.n {
            return Err(Error::Domain(format!("cannot set bracket entry ({i},{j})")));
        }
        if i < j {
            let k = pair_index(self.n, i, j);
            self.entries[k] = v;
        } else {
            let k = pair_index(self.n, j, i);
            self.entries[k] = v.into_iter().map(|x| -x).collect();
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| is_zero_vec(v))
    }

    pub fn apply(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        check_len(self.n, x)?;
        check_len(self.n, y)?;
        Ok(self.apply_vec(x, y))
    }

    pub(crate) fn apply_vec(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.n];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if a == b || yb.is_zero() {
                    continue;
                }
                let c = xa.clone() * yb;
                if a < b {
                    axpy(&mut out, &c, self.entry(a + 1, b + 1));
                } else {
                    axpy(&mut out, &-c, self.entry(b + 1, a + 1));
                }
            }
        }
        out
    }

    /// [e_i, v]
    pub(crate) fn apply_basis_left(&self, i: usize, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.n];
        for (b, vb) in v.iter().enumerate() {
            if vb.is_zero() || b + 1 == i {
                continue;
            }
            if i < b + 1 {
                axpy(&mut out, vb, self.entry(i, b + 1));
            } else {
                axpy(&mut out, &-vb.clone(), self.entry(b + 1, i));
            }
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Bracket<T> {
        Bracket {
            n: self.n,
            entries: self.entries.iter().map(|v| v.iter().map(&f).collect()).collect(),
        }
    }
}

/// A commutative associative product together with a bracket and δ.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonPair<S> {
    pub base: CommAlgebra<S>,
    pub bracket: Bracket<S>,
    pub delta: S,
}

impl<S: Scalar> PoissonPair<S> {
    pub fn new(base: CommAlgebra<S>, bracket: Bracket<S>, delta: S) -> Result<PoissonPair<S>> {
        if base.dim() != bracket.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: bracket.dim(),
            });
        }
        Ok(PoissonPair { base, bracket, delta })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PoissonPair<T> {
        PoissonPair {
            base: self.base.map(&f),
            bracket: self.bracket.map(&f),
            delta: f(&self.delta),
        }
    }

    /// Multiplication table and bracket rows, one relation per line.
    pub fn table_string(&self) -> String {
        let n = self.dim();
        let mut lines = Vec::new();
        for i in 1..=n {
            for j in i..=n {
                let v = self.base.product(i, j);
                if !is_zero_vec(v) {
                    lines.push(format!("e_{i} · e_{j} = {}", format_vector(v)));
                }
            }
        }
        for (i, j) in self.bracket.pairs() {
            let v = self.bracket.entry(i, j);
            if !is_zero_vec(v) {
                lines.push(format!("[e_{i}, e_{j}] = {}", format_vector(v)));
            }
        }
        if self.bracket.is_zero() {
            lines.push("(zero bracket)".into());
        }
        lines.join("\n")
    }
}

/// Renders a coefficient vector as a combination of e_t.
pub fn format_vector<S: Scalar>(v: &[S]) -> String {
    let one = S::one();
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, c)| {
            if *c == one {
                format!("e_{}", t + 1)
            } else if *c == -one.clone() {
                format!("-e_{}", t + 1)
            } else {
                let s = c.to_string();
                let body = s.strip_prefix('-').unwrap_or(&s);
                if body.chars().all(|ch| ch.is_ascii_digit() || ch == '/') {
                    format!("{s}e_{}", t + 1)
                } else if body.contains([' ', '+', '-']) {
                    format!("({s})e_{}", t + 1)
                } else {
                    format!("{s}·e_{}", t + 1)
                }
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{MPoly, Rat};

    #[test]
    fn pair_indices_are_dense() {
        for n in 2..8 {
            let b: Bracket<Rat> = Bracket::zero(n);
            let idx: Vec<usize> = b.pairs().map(|(i, j)| pair_index(n, i, j)).collect();
            assert_eq!(idx, (0..n * (n - 1) / 2).collect::<Vec<_>>());
        }
    }

    #[test]
    fn antisymmetry_on_set() {
        let mut b: Bracket<Rat> = Bracket::zero(3);
        b.set(2, 1, basis_vector(3, 1)).unwrap();
        assert_eq!(b.entry(1, 2), &[Rat::from(-1), Rat::zero(), Rat::zero()][..]);
        assert!(b.set(2, 2, basis_vector(3, 1)).is_err());
    }

    #[test]
    fn vector_format() {
        let v = vec![Rat::from(1), Rat::zero(), Rat::from(-2)];
        assert_eq!(format_vector(&v), "e_1 - 2e_3");
        let reg = crate::exactnum::registry(&["α", "p"]);
        let a = MPoly::var(&reg, 0);
        let p = MPoly::var(&reg, 1);
        let w = vec![a.scale(&Rat::new(3, 2).unwrap()), a.clone() + &p, -a];
        assert_eq!(format_vector(&w), "3/2*α·e_1 + (α + p)e_2 - α·e_3");
    }
}

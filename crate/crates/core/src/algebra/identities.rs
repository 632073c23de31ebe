use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{axpy, PoissonPair};
use crate::error::Error;
use crate::exactnum::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    Commutative,
    Associative,
    Jacobi,
    /// [x, y·z] = δ([x,y]·z + y·[x,z])
    DeltaPoisson,
    /// δ z·[x,y] = [z·x, y] + [x, z·y]
    Transposed,
    /// [x, y·z] + [y, z·x] + [z, x·y] = 0
    CyclicDp,
    /// x·[y,z] + y·[z,x] + z·[x,y] = 0
    CyclicTdp,
    /// x·[y,z] = 0 and [x·y, z] = 0
    MixedTrivial,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 8] = [
        IdentityKind::Commutative,
        IdentityKind::Associative,
        IdentityKind::Jacobi,
        IdentityKind::DeltaPoisson,
        IdentityKind::Transposed,
        IdentityKind::CyclicDp,
        IdentityKind::CyclicTdp,
        IdentityKind::MixedTrivial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::Commutative => "commutative",
            IdentityKind::Associative => "associative",
            IdentityKind::Jacobi => "jacobi",
            IdentityKind::DeltaPoisson => "delta_poisson",
            IdentityKind::Transposed => "transposed",
            IdentityKind::CyclicDp => "cyclic_dp",
            IdentityKind::CyclicTdp => "cyclic_tdp",
            IdentityKind::MixedTrivial => "mixed_trivial",
        }
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<IdentityKind, Error> {
        IdentityKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown identity kind {s:?}")))
    }
}

/// One nonzero coordinate of an identity evaluated on basis elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual<S> {
    /// 1-based basis indices (two for commutativity, three otherwise).
    pub indices: Vec<usize>,
    pub coord: usize,
    pub value: S,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport<S> {
    pub kind: String,
    pub residuals: Vec<Residual<S>>,
    pub all_zero: bool,
}

impl<S: Scalar> ResidualReport<S> {
    pub fn new(kind: impl Into<String>, residuals: Vec<Residual<S>>) -> ResidualReport<S> {
        ResidualReport {
            kind: kind.into(),
            all_zero: residuals.is_empty(),
            residuals,
        }
    }
}

fn push_nonzero<S: Scalar>(out: &mut Vec<Residual<S>>, indices: &[usize], v: Vec<S>, part: Option<&str>) {
    for (t, x) in v.into_iter().enumerate() {
        if !x.is_zero() {
            out.push(Residual {
                indices: indices.to_vec(),
                coord: t + 1,
                value: x,
                part: part.map(str::to_string),
            });
        }
    }
}

fn sub<S: Scalar>(a: Vec<S>, b: &[S]) -> Vec<S> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add<S: Scalar>(a: Vec<S>, b: &[S]) -> Vec<S> {
    a.into_iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale<S: Scalar>(c: &S, v: Vec<S>) -> Vec<S> {
    v.into_iter().map(|x| c.clone() * &x).collect()
}

/// Evaluates an identity on every ordered basis pair or triple and reports
/// each nonzero coordinate. Never stops at the first failure.
pub fn check_identity<S: Scalar>(pair: &PoissonPair<S>, kind: IdentityKind) -> ResidualReport<S> {
    let n = pair.dim();
    let a = &pair.base;
    let b = &pair.bracket;
    let d = &pair.delta;
    let mut out = Vec::new();
    let e = |i: usize| super::basis_vector::<S>(n, i);

    if kind == IdentityKind::Commutative {
        for x in 1..=n {
            for y in 1..=n {
                let r = sub(a.product(x, y).to_vec(), a.product(y, x));
                push_nonzero(&mut out, &[x, y], r, None);
            }
        }
        return ResidualReport::new(kind.name(), out);
    }

    for x in 1..=n {
        for y in 1..=n {
            for z in 1..=n {
                let idx = [x, y, z];
                match kind {
                    IdentityKind::Commutative => unreachable!(),
                    IdentityKind::Associative => {
                        let l = a.mul_vec(a.product(x, y), &e(z));
                        let r = a.mul_basis(x, a.product(y, z));
                        push_nonzero(&mut out, &idx, sub(l, &r), None);
                    }
                    IdentityKind::Jacobi => {
                        let mut r = vec![S::zero(); n];
                        for (p, q, s) in [(x, y, z), (y, z, x), (z, x, y)] {
                            let inner = b.get(p, q);
                            let outer = b.apply_vec(&inner, &e(s));
                            axpy(&mut r, &S::one(), &outer);
                        }
                        push_nonzero(&mut out, &idx, r, None);
                    }
                    IdentityKind::DeltaPoisson => {
                        let l = b.apply_basis_left(x, a.product(y, z));
                        let t1 = a.mul_basis(z, &b.get(x, y));
                        let t2 = a.mul_basis(y, &b.get(x, z));
                        let r = sub(l, &scale(d, add(t1, &t2)));
                        push_nonzero(&mut out, &idx, r, None);
                    }
                    IdentityKind::Transposed => {
                        let l = scale(d, a.mul_basis(z, &b.get(x, y)));
                        let t1 = b.apply_vec(a.product(z, x), &e(y));
                        let t2 = b.apply_basis_left(x, a.product(z, y));
                        let r = sub(sub(l, &t1), &t2);
                        push_nonzero(&mut out, &idx, r, None);
                    }
                    IdentityKind::CyclicDp => {
                        let t1 = b.apply_basis_left(x, a.product(y, z));
                        let t2 = b.apply_basis_left(y, a.product(z, x));
                        let t3 = b.apply_basis_left(z, a.product(x, y));
                        push_nonzero(&mut out, &idx, add(add(t1, &t2), &t3), None);
                    }
                    IdentityKind::CyclicTdp => {
                        let t1 = a.mul_basis(x, &b.get(y, z));
                        let t2 = a.mul_basis(y, &b.get(z, x));
                        let t3 = a.mul_basis(z, &b.get(x, y));
                        push_nonzero(&mut out, &idx, add(add(t1, &t2), &t3), None);
                    }
                    IdentityKind::MixedTrivial => {
                        let t1 = a.mul_basis(x, &b.get(y, z));
                        push_nonzero(&mut out, &idx, t1, Some("x·[y,z]"));
                        let t2 = b.apply_vec(a.product(x, y), &e(z));
                        push_nonzero(&mut out, &idx, t2, Some("[x·y,z]"));
                    }
                }
            }
        }
    }
    ResidualReport::new(kind.name(), out)
}

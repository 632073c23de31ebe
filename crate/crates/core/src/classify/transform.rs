use crate::algebra::{Residual, ResidualReport};
use crate::error::{Error, Result};
use crate::exactnum::{registry, MPoly, Rat, Scalar};
use crate::families::{alpha_names, family_bracket, family_pair, Delta, FamilyTag};
use crate::nullfiliform::{push_bracket, Automorphism};

/// phi[i][t] = Σ_{k_1+...+k_i = t} A_{k_1} ... A_{k_i}, the coefficient of
/// e_t in φ(e_i), summed over compositions of t into i positive parts.
fn composition_sums<S: Scalar>(a: &[S]) -> Vec<Vec<S>> {
    let n = a.len();
    let mut phi = vec![vec![S::zero(); n + 1]; n + 1];
    phi[0][0] = S::one();
    for i in 1..=n {
        for t in i..=n {
            let mut s = S::zero();
            for k in 1..=t - (i - 1) {
                let prev = &phi[i - 1][t - k];
                if !prev.is_zero() && !a[k - 1].is_zero() {
                    s = s + &(a[k - 1].clone() * prev);
                }
            }
            phi[i][t] = s;
        }
    }
    phi
}

fn inv_or_err<S: Scalar>(x: &S, what: &str) -> Result<S> {
    x.try_inv()
        .ok_or_else(|| Error::NotInvertible(format!("{what} = {x} has no inverse in this ring")))
}

/// Solves Σ_{i=first}^{t} phi[i][t] α'_i = rhs_t for t = first..=n.
fn solve_triangular<S: Scalar>(phi: &[Vec<S>], rhs: &[S], first: usize, a1_inv: &S) -> Vec<S> {
    let n = phi.len() - 1;
    let mut out: Vec<S> = Vec::with_capacity(n + 1 - first);
    for t in first..=n {
        let mut r = rhs[t - first].clone();
        for i in first..t {
            let p = &phi[i][t];
            let x = &out[i - first];
            if !p.is_zero() && !x.is_zero() {
                r = r - &(p.clone() * x);
            }
        }
        out.push(r * &a1_inv.pow(t as u32));
    }
    out
}

/// Parameters of the family after the change of basis e_i' = φ(e_i), from
/// the closed-form transformation laws of each family.
pub fn transform_params<S: Scalar>(tag: FamilyTag, n: usize, delta: &S, alphas: &[S], a: &[S]) -> Result<Vec<S>> {
    let idx = tag.alpha_indices(n)?;
    if alphas.len() != idx.len() {
        return Err(Error::Domain(format!(
            "{tag} takes {} parameters, got {}",
            idx.len(),
            alphas.len()
        )));
    }
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.len(),
        });
    }
    if a[0].is_zero() {
        return Err(Error::Domain("A_1 = 0".into()));
    }
    let a1 = &a[0];
    let a1_inv = inv_or_err(a1, "A_1")?;
    // A_k with A_k = 0 beyond n
    let ak = |k: usize| -> S {
        if (1..=n).contains(&k) {
            a[k - 1].clone()
        } else {
            S::zero()
        }
    };
    match tag {
        FamilyTag::TP0 => {
            let phi = composition_sums(a);
            let c = a1.pow(3);
            let rhs: Vec<S> = alphas.iter().map(|x| c.clone() * x).collect();
            Ok(solve_triangular(&phi, &rhs, 1, &a1_inv))
        }
        FamilyTag::TP1 => {
            let phi = composition_sums(a);
            let al = |j: usize| alphas[j - 2].clone();
            let rhs: Vec<S> = (2..=n)
                .map(|t| {
                    let mut s = S::zero();
                    for j in 2..=t {
                        let m = t - j + 2;
                        for k1 in 1..m {
                            s = s + &(a1.clone() * &ak(k1) * &ak(m - k1) * &al(j));
                        }
                    }
                    s
                })
                .collect();
            Ok(solve_triangular(&phi, &rhs, 2, &a1_inv))
        }
        FamilyTag::TP2 => {
            let phi = composition_sums(a);
            let al = |j: usize| alphas[j - 2].clone();
            let rhs: Vec<S> = (2..=n)
                .map(|t| {
                    let mut s = S::zero();
                    for j in 2..=t {
                        for i in 1..=t - j + 1 {
                            let m = t + 3 - i - j;
                            let w = t as i64 + 3 - 2 * i as i64 - j as i64;
                            if w == 0 {
                                continue;
                            }
                            for k1 in 1..m {
                                s = s + &(S::from_int(w) * &ak(i) * &ak(k1) * &ak(m - k1) * &al(j));
                            }
                        }
                    }
                    s
                })
                .collect();
            Ok(solve_triangular(&phi, &rhs, 2, &a1_inv))
        }
        FamilyTag::TPdelta => {
            let (x, y, z) = (&alphas[0], &alphas[1], &alphas[2]);
            let (a2, a3) = (ak(2), ak(3));
            let nn = S::from_int(n as i64);
            let two = S::from_int(2);
            let d2 = delta.clone() * delta;
            let inv_pow = |e: i64| -> S {
                if e >= 0 {
                    a1_inv.pow(e as u32)
                } else {
                    a1.pow((-e) as u32)
                }
            };
            let n_i = n as i64;
            let x1 = x.clone() * &inv_pow(n_i - 5);
            let c2 = two.clone() * delta - &nn + &two;
            let y1 = (a1.clone() * y + &(a2.clone() * x * &c2)) * &inv_pow(n_i - 3);
            let c3 = two.clone() * delta - &nn + &S::one();
            let c4 = d2.clone() + &(S::from_int(3) * delta) - &(two.clone() * &nn) + &S::from_int(4);
            let c5 = S::from_int(3) * &d2
                + &(delta.clone() * &(S::from_int(3) - &(S::from_int(4) * &nn)))
                + &(nn.clone() * &nn)
                - &nn
                - &two;
            let num = two.clone() * z * &a1.pow(2)
                + &(two.clone() * y * a1 * &a2 * &c3)
                + &(x.clone() * &(a1.clone() * &a3 * &c4 + &(a2.clone() * &a2 * &c5)));
            let half = S::from_rat(&Rat::new(1, 2)?);
            let z1 = num * &half * &inv_pow(n_i - 1);
            Ok(vec![x1, y1, z1])
        }
        _ => Err(Error::Domain(format!(
            "{tag} has no closed-form transformation law; use push_params"
        ))),
    }
}

/// Parameters after transporting the family bracket along φ and reading off
/// the coefficients of [e_1, e_2]. Fails if the result leaves the family.
pub fn push_params<S: Scalar>(tag: FamilyTag, n: usize, delta: &S, alphas: &[S], a: &[S]) -> Result<Vec<S>> {
    let pair = family_pair(tag, n, delta, alphas)?;
    let aut = Automorphism::new(a.to_vec())?;
    let pushed = push_bracket(&aut, &pair)?;
    let idx = tag.alpha_indices(n)?;
    let e12 = pushed.bracket.entry(1, 2);
    let out: Vec<S> = idx.iter().map(|&t| e12[t - 1].clone()).collect();
    if family_bracket(tag, n, delta, &out)? != pushed.bracket {
        return Err(Error::NotAdmissible(format!(
            "{tag} is not closed under this automorphism for these parameters"
        )));
    }
    Ok(out)
}

/// Closed form where one exists, push read-off otherwise.
pub(crate) fn act<S: Scalar>(tag: FamilyTag, n: usize, delta: &S, alphas: &[S], a: &[S]) -> Result<Vec<S>> {
    match tag {
        FamilyTag::TP0 | FamilyTag::TP1 | FamilyTag::TP2 | FamilyTag::TPdelta => {
            transform_params(tag, n, delta, alphas, a)
        }
        _ => push_params(tag, n, delta, alphas, a),
    }
}

/// With A_1..A_n, the α's and optionally δ all symbolic, compares the pushed
/// family bracket with the family at the transformed parameters, entry by
/// entry. All residuals are polynomials in the Laurent ring (A_1 invertible).
pub fn verify_transform_formula(tag: FamilyTag, n: usize, delta: &Delta) -> Result<ResidualReport<MPoly>> {
    let mut names = alpha_names(tag, n)?;
    let k = names.len();
    names.extend((1..=n).map(|i| format!("A_{i}")));
    if *delta == Delta::Symbolic {
        names.push("delta".into());
    }
    let reg = registry(&names);
    let v = MPoly::vars_of(&reg);
    let d = match delta {
        Delta::Value(x) => MPoly::constant(x.clone()),
        Delta::Symbolic => v[k + n].clone(),
    };
    let alphas = &v[..k];
    let a = &v[k..k + n];
    let pair = family_pair(tag, n, &d, alphas)?;
    let pushed = push_bracket(&Automorphism::new(a.to_vec())?, &pair)?;
    let ap = transform_params(tag, n, &d, alphas, a)?;
    let expect = family_bracket(tag, n, &d, &ap)?;
    let mut res = Vec::new();
    for (i, j) in expect.pairs() {
        for (t, (x, y)) in pushed.bracket.entry(i, j).iter().zip(expect.entry(i, j)).enumerate() {
            let r = x.clone() - y;
            if !r.is_zero() {
                res.push(Residual {
                    indices: vec![i, j],
                    coord: t + 1,
                    value: r,
                    part: None,
                });
            }
        }
    }
    Ok(ResidualReport::new(format!("transform_{tag}"), res))
}

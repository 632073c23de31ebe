//! Parametrized bracket families on μ₀ⁿ and the catalogs of canonical
//! representatives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{check_identity, Bracket, IdentityKind, PoissonPair};
use crate::error::{Error, Result};
use crate::exactnum::{registry, MPoly, Rat, Registry, Scalar};
use crate::nullfiliform::mu0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    TP0,
    TP1,
    TP2,
    TPdelta,
    Dim2,
    Dim3,
    Dim4,
    TrivialDeltaPoisson,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 8] = [
        FamilyTag::TP0,
        FamilyTag::TP1,
        FamilyTag::TP2,
        FamilyTag::TPdelta,
        FamilyTag::Dim2,
        FamilyTag::Dim3,
        FamilyTag::Dim4,
        FamilyTag::TrivialDeltaPoisson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::TP0 => "TP0",
            FamilyTag::TP1 => "TP1",
            FamilyTag::TP2 => "TP2",
            FamilyTag::TPdelta => "TPdelta",
            FamilyTag::Dim2 => "Dim2",
            FamilyTag::Dim3 => "Dim3",
            FamilyTag::Dim4 => "Dim4",
            FamilyTag::TrivialDeltaPoisson => "TrivialDeltaPoisson",
        }
    }

    /// Indices t of the parameters α_t, in storage order.
    pub fn alpha_indices(self, n: usize) -> Result<Vec<usize>> {
        let need = |ok: bool, what: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Domain(format!("{} requires {what}, got n = {n}", self.name())))
            }
        };
        match self {
            FamilyTag::TP0 => {
                need(n >= 2, "n >= 2")?;
                Ok((1..=n).collect())
            }
            FamilyTag::TP1 | FamilyTag::TP2 => {
                need(n >= 2, "n >= 2")?;
                Ok((2..=n).collect())
            }
            FamilyTag::TPdelta => {
                need(n >= 5, "n >= 5")?;
                Ok((n - 2..=n).collect())
            }
            FamilyTag::Dim2 => {
                need(n == 2, "n = 2")?;
                Ok((1..=2).collect())
            }
            FamilyTag::Dim3 => {
                need(n == 3, "n = 3")?;
                Ok((1..=3).collect())
            }
            FamilyTag::Dim4 => {
                need(n == 4, "n = 4")?;
                Ok((1..=4).collect())
            }
            FamilyTag::TrivialDeltaPoisson => {
                need(n >= 1, "n >= 1")?;
                Ok(Vec::new())
            }
        }
    }

    /// Families whose parameters are the coefficients of [e_1, e_2].
    pub fn reads_off_e1e2(self) -> bool {
        matches!(
            self,
            FamilyTag::TP0 | FamilyTag::Dim2 | FamilyTag::Dim3 | FamilyTag::Dim4
        )
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<FamilyTag> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

/// δ as a rational value or as the formal variable `delta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Delta {
    Value(Rat),
    Symbolic,
}

impl Delta {
    pub fn value(&self) -> Result<&Rat> {
        match self {
            Delta::Value(d) => Ok(d),
            Delta::Symbolic => Err(Error::UnsupportedMode(
                "symbolic delta is only available in verify mode".into(),
            )),
        }
    }
}

impl From<Rat> for Delta {
    fn from(r: Rat) -> Delta {
        Delta::Value(r)
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::Value(d) => write!(f, "{d}"),
            Delta::Symbolic => f.write_str("delta"),
        }
    }
}

impl FromStr for Delta {
    type Err = Error;
    fn from_str(s: &str) -> Result<Delta> {
        match s.trim() {
            "delta" | "δ" | "symbolic" => Ok(Delta::Symbolic),
            t => Ok(Delta::Value(t.parse()?)),
        }
    }
}

impl Serialize for Delta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Delta {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Delta, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Bracket of a family at the given δ and parameters (ordered as in
/// `FamilyTag::alpha_indices`).
pub fn family_bracket<S: Scalar>(tag: FamilyTag, n: usize, delta: &S, alphas: &[S]) -> Result<Bracket<S>> {
    let idx = tag.alpha_indices(n)?;
    if alphas.len() != idx.len() {
        return Err(Error::Domain(format!(
            "{tag} with n = {n} takes {} parameters, got {}",
            idx.len(),
            alphas.len()
        )));
    }
    // α_t for the family's index convention; zero outside the stored range
    let alpha = |t: usize| -> S {
        idx.iter()
            .position(|&i| i == t)
            .map_or_else(S::zero, |p| alphas[p].clone())
    };
    let half = S::from_rat(&Rat::new(1, 2)?);
    let mut b = Bracket::zero(n);
    let set = |b: &mut Bracket<S>, i: usize, j: usize, terms: Vec<(usize, S)>| -> Result<()> {
        let mut v = vec![S::zero(); n];
        for (t, c) in terms {
            if (1..=n).contains(&t) {
                v[t - 1] = v[t - 1].clone() + &c;
            }
        }
        b.set(i, j, v)
    };
    match tag {
        FamilyTag::TP0 | FamilyTag::Dim2 => {
            set(&mut b, 1, 2, (1..=n).map(|t| (t, alpha(t))).collect())?;
        }
        FamilyTag::TP1 => {
            // [e_1, e_i] = Σ_{t=i}^{n} α_{t-i+2} e_t
            for i in 2..=n {
                set(&mut b, 1, i, (i..=n).map(|t| (t, alpha(t + 2 - i))).collect())?;
            }
        }
        FamilyTag::TP2 => {
            // [e_i, e_j] = (j-i) Σ_{t=i+j-1}^{n} α_{t-i-j+3} e_t
            for i in 1..=n {
                for j in i + 1..=n {
                    if i + j > n + 1 {
                        continue;
                    }
                    let w = S::from_int((j - i) as i64);
                    let terms = (i + j - 1..=n)
                        .map(|t| (t, w.clone() * &alpha(t + 3 - i - j)))
                        .collect();
                    set(&mut b, i, j, terms)?;
                }
            }
        }
        FamilyTag::TPdelta => {
            let (a, bb, c) = (alpha(n - 2), alpha(n - 1), alpha(n));
            let d2 = delta.clone() * delta;
            set(&mut b, 1, 2, vec![(n - 2, a.clone()), (n - 1, bb.clone()), (n, c)])?;
            set(
                &mut b,
                1,
                3,
                vec![(n - 1, delta.clone() * &a), (n, delta.clone() * &bb)],
            )?;
            set(&mut b, 2, 3, vec![(n, (d2.clone() - delta) * &half * &a)])?;
            set(&mut b, 1, 4, vec![(n, (d2 + delta) * &half * &a)])?;
        }
        FamilyTag::Dim3 => {
            // α_1 survives only at δ ∈ {0, -1}; these terms vanish when δα_1 = 0
            let (a1, a2, a3) = (alpha(1), alpha(2), alpha(3));
            set(&mut b, 1, 2, vec![(1, a1.clone()), (2, a2.clone()), (3, a3)])?;
            set(&mut b, 1, 3, vec![(2, delta.clone() * &a1), (3, delta.clone() * &a2)])?;
            set(&mut b, 2, 3, vec![(3, -(delta.clone() * &a1))])?;
        }
        FamilyTag::Dim4 => {
            let a2 = alpha(2);
            let d2 = delta.clone() * delta;
            set(&mut b, 1, 2, (1..=4).map(|t| (t, alpha(t))).collect())?;
            set(
                &mut b,
                1,
                3,
                vec![(3, delta.clone() * &a2), (4, delta.clone() * &alpha(3))],
            )?;
            set(&mut b, 2, 3, vec![(4, (d2.clone() - delta) * &half * &a2)])?;
            set(&mut b, 1, 4, vec![(4, (d2 + delta) * &half * &a2)])?;
        }
        FamilyTag::TrivialDeltaPoisson => {}
    }
    Ok(b)
}

pub fn family_pair<S: Scalar>(tag: FamilyTag, n: usize, delta: &S, alphas: &[S]) -> Result<PoissonPair<S>> {
    PoissonPair::new(mu0(n)?, family_bracket(tag, n, delta, alphas)?, delta.clone())
}

/// Variable names alpha_t for the family's parameters, plus `delta` when symbolic.
pub fn alpha_names(tag: FamilyTag, n: usize) -> Result<Vec<String>> {
    Ok(tag
        .alpha_indices(n)?
        .into_iter()
        .map(|t| format!("alpha_{t}"))
        .collect())
}

/// The family with formal parameters; returns the registry used.
pub fn symbolic_family(tag: FamilyTag, n: usize, delta: &Delta) -> Result<(Registry, PoissonPair<MPoly>)> {
    let mut names = alpha_names(tag, n)?;
    if *delta == Delta::Symbolic {
        names.push("delta".into());
    }
    let reg = registry(&names);
    let vars = MPoly::vars_of(&reg);
    let k = tag.alpha_indices(n)?.len();
    let d = match delta {
        Delta::Value(v) => MPoly::constant(v.clone()),
        Delta::Symbolic => vars[k].clone(),
    };
    let pair = family_pair(tag, n, &d, &vars[..k])?;
    Ok((reg, pair))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub tag: FamilyTag,
    pub n: usize,
    pub delta: Delta,
    pub alphas: Vec<Rat>,
}

impl FamilySpec {
    pub fn new(tag: FamilyTag, n: usize, delta: Delta, alphas: Vec<Rat>) -> Result<FamilySpec> {
        let s = FamilySpec { tag, n, delta, alphas };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.tag.alpha_indices(self.n)?.len();
        if self.alphas.len() != k {
            return Err(Error::Domain(format!(
                "{} with n = {} takes {k} parameters, got {}",
                self.tag,
                self.n,
                self.alphas.len()
            )));
        }
        Ok(())
    }

    pub fn delta_value(&self) -> Result<&Rat> {
        self.delta.value()
    }

    pub fn instantiate(&self) -> Result<PoissonPair<Rat>> {
        self.validate()?;
        family_pair(self.tag, self.n, self.delta_value()?, &self.alphas)
    }

    pub fn instantiate_in<S: Scalar>(&self) -> Result<PoissonPair<S>> {
        let a: Vec<S> = self.alphas.iter().map(S::from_rat).collect();
        family_pair(self.tag, self.n, &S::from_rat(self.delta_value()?), &a)
    }

    /// Identity failures that keep the spec from being a transposed δ-Poisson
    /// algebra, as a readable message. The trivial family is checked against
    /// the δ-Poisson identity instead.
    pub fn admissibility(&self) -> Result<()> {
        let pair = self.instantiate()?;
        let compat = if self.tag == FamilyTag::TrivialDeltaPoisson {
            IdentityKind::DeltaPoisson
        } else {
            IdentityKind::Transposed
        };
        for kind in [compat, IdentityKind::Jacobi] {
            let rep = check_identity(&pair, kind);
            if let Some(r) = rep.residuals.first() {
                return Err(Error::NotAdmissible(format!(
                    "{} fails {kind} ({} nonzero residuals, first at basis {:?}, coordinate {}: {})",
                    self.label(),
                    rep.residuals.len(),
                    r.indices,
                    r.coord,
                    r.value
                )));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let vals: Vec<String> = self.alphas.iter().map(Rat::to_string).collect();
        format_label(self.tag, &self.delta, &vals)
    }
}

fn format_label(tag: FamilyTag, delta: &Delta, vals: &[String]) -> String {
    let head = match tag {
        FamilyTag::TP0 => "TP_0".to_string(),
        FamilyTag::TP1 => "TP_1".to_string(),
        FamilyTag::TP2 => "TP_2".to_string(),
        FamilyTag::TrivialDeltaPoisson => return "zero".into(),
        _ => format!("TP_{{{delta}}}"),
    };
    format!("{head}({})", vals.join(","))
}

/// The family that parametrizes transposed δ-Poisson brackets on μ₀ⁿ.
pub fn family_for(n: usize, delta: &Rat) -> FamilyTag {
    let d = delta.to_i64();
    match (n, d) {
        (_, Some(0)) => FamilyTag::TP0,
        (1, _) => FamilyTag::TrivialDeltaPoisson,
        (2, _) => FamilyTag::Dim2,
        (3, _) => FamilyTag::Dim3,
        (4, _) => FamilyTag::Dim4,
        (_, Some(1)) => FamilyTag::TP1,
        (_, Some(2)) => FamilyTag::TP2,
        _ => FamilyTag::TPdelta,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Fixed(Rat),
    /// Free nonzero value that no automorphism changes.
    Modulus,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub tag: FamilyTag,
    pub n: usize,
    pub delta: Rat,
    pub slots: Vec<Slot>,
}

impl CatalogEntry {
    pub fn has_modulus(&self) -> bool {
        self.slots.contains(&Slot::Modulus)
    }

    /// The entry with every modulus slot set to `value`.
    pub fn with_modulus(&self, value: &Rat) -> FamilySpec {
        FamilySpec {
            tag: self.tag,
            n: self.n,
            delta: Delta::Value(self.delta.clone()),
            alphas: self
                .slots
                .iter()
                .map(|s| match s {
                    Slot::Fixed(v) => v.clone(),
                    Slot::Modulus => value.clone(),
                })
                .collect(),
        }
    }

    /// Whether concrete parameters fit this entry (moduli must be nonzero).
    pub fn matches<S: Scalar>(&self, alphas: &[S]) -> bool {
        alphas.len() == self.slots.len()
            && self.slots.iter().zip(alphas).all(|(s, a)| match s {
                Slot::Fixed(v) => *a == S::from_rat(v),
                Slot::Modulus => !a.is_zero(),
            })
    }

    pub fn label(&self) -> String {
        let vals: Vec<String> = self
            .slots
            .iter()
            .map(|s| match s {
                Slot::Fixed(v) => v.to_string(),
                Slot::Modulus => "α".into(),
            })
            .collect();
        format_label(self.tag, &Delta::Value(self.delta.clone()), &vals)
    }
}

/// Values of δ at which the generic TPdelta catalog grows for this n:
/// (n-2)/2, (n-1)/2 and the rational roots of δ² + 3δ - (2n-4).
pub fn special_deltas(n: usize) -> Vec<(Rat, &'static str)> {
    let n_r = Rat::from(n as i64);
    let two = Rat::from(2);
    let mut out = vec![
        (
            (&n_r - &two) * &Rat::new(1, 2).unwrap(),
            "alpha_{n-1} fixed by shifts when 2δ-n+2 = 0",
        ),
        (
            (&n_r - &Rat::one()) * &Rat::new(1, 2).unwrap(),
            "alpha_n fixed when alpha_{n-2} = 0 and 2δ-n+1 = 0",
        ),
    ];
    for r in quadratic_rational_roots(n) {
        out.push((r, "alpha_n fixed by shifts when δ²+3δ = 2n-4"));
    }
    if n == 4 {
        out.push((Rat::from(-4), "dimension 4 special value"));
        out.push((Rat::new(3, 2).unwrap(), "dimension 4 special value"));
    }
    out
}

/// Rational roots of δ² + 3δ - (2n - 4).
pub fn quadratic_rational_roots(n: usize) -> Vec<Rat> {
    // discriminant 9 + 4(2n-4) = 8n - 7
    let disc = Rat::from(8 * n as i64 - 7);
    match disc.nth_root_exact(2) {
        Some(s) => {
            let half = Rat::new(1, 2).unwrap();
            let mut v = vec![(Rat::from(-3) - &s) * &half, (Rat::from(-3) + &s) * &half];
            v.dedup();
            v
        }
        None => Vec::new(),
    }
}

fn entry(tag: FamilyTag, n: usize, delta: &Rat, slots: Vec<Slot>) -> CatalogEntry {
    CatalogEntry {
        tag,
        n,
        delta: delta.clone(),
        slots,
    }
}

fn unit_slots(len: usize, at: &[(usize, Slot)]) -> Vec<Slot> {
    let mut v = vec![Slot::Fixed(Rat::zero()); len];
    for (p, s) in at {
        v[*p] = s.clone();
    }
    v
}

/// Canonical representatives of the isomorphism classes for (n, δ), ordered
/// by first nonzero parameter with the zero bracket last.
pub fn canonical_catalog(n: usize, delta: &Rat) -> Result<Vec<CatalogEntry>> {
    if n < 2 {
        return Err(Error::Domain("catalogs start at n = 2".into()));
    }
    let tag = family_for(n, delta);
    let idx = tag.alpha_indices(n)?;
    let len = idx.len();
    let pos = |t: usize| idx.iter().position(|&i| i == t).expect("index in family");
    let one = || Slot::Fixed(Rat::one());
    let d = |k: i64| *delta == Rat::from(k);
    let dq = |p: i64, q: i64| *delta == Rat::new(p, q).unwrap();
    let mut out = Vec::new();
    let mut add = |at: Vec<(usize, Slot)>| out.push(entry(tag, n, delta, unit_slots(len, &at)));

    match tag {
        FamilyTag::TP0 => {
            for s in 1..=n {
                add(vec![(pos(s), if s == 3 { Slot::Modulus } else { one() })]);
            }
        }
        FamilyTag::TP1 => {
            add(vec![(pos(2), one())]);
            for s2 in 3..=n {
                add(vec![(pos(2), one()), (pos(s2), Slot::Modulus)]);
            }
            add(vec![(pos(3), Slot::Modulus)]);
            for s in 4..=n {
                add(vec![(pos(s), one())]);
            }
        }
        FamilyTag::TP2 => {
            add(vec![(pos(2), one())]);
            add(vec![(pos(3), Slot::Modulus)]);
            for s in 4..=n {
                add(vec![(pos(s), one())]);
                if 2 * s - 3 <= n {
                    add(vec![(pos(s), one()), (pos(2 * s - 3), Slot::Modulus)]);
                }
            }
        }
        FamilyTag::TPdelta => {
            let nr = n as i64;
            let lead = if n == 5 { Slot::Modulus } else { one() };
            add(vec![(0, lead.clone())]);
            if *delta == Rat::new(nr - 2, 2).unwrap() {
                let second = if n == 5 { one() } else { Slot::Modulus };
                add(vec![(0, lead.clone()), (1, second)]);
            }
            if quadratic_rational_roots(n).contains(delta) {
                let third = if n == 5 { one() } else { Slot::Modulus };
                add(vec![(0, lead), (2, third)]);
            }
            add(vec![(1, one())]);
            if *delta == Rat::new(nr - 1, 2).unwrap() {
                add(vec![(1, one()), (2, Slot::Modulus)]);
            }
            add(vec![(2, one())]);
        }
        FamilyTag::Dim2 => {
            add(vec![(1, one())]);
        }
        FamilyTag::Dim3 => {
            if d(-1) {
                add(vec![(0, one())]);
            }
            add(vec![(1, one())]);
            if d(1) {
                add(vec![(1, one()), (2, Slot::Modulus)]);
            }
            add(vec![(2, Slot::Modulus)]);
        }
        FamilyTag::Dim4 => {
            // α_2 ≠ 0 is compatible with Jacobi only for δ ∈ {-1, 1, 2}
            if d(-1) || d(1) || d(2) {
                add(vec![(1, one())]);
            }
            if d(1) {
                add(vec![(1, one()), (2, Slot::Modulus)]);
                add(vec![(1, one()), (3, Slot::Modulus)]);
            }
            add(vec![(2, Slot::Modulus)]);
            if dq(3, 2) {
                add(vec![(2, Slot::Modulus), (3, one())]);
            }
            add(vec![(3, one())]);
        }
        FamilyTag::TrivialDeltaPoisson => {}
    }
    out.push(entry(tag, n, delta, unit_slots(len, &[])));
    Ok(out)
}

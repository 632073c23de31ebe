use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::transform::act;
use crate::error::{Error, Result};
use crate::exactnum::{rat_root, registry, MPoly, RadExt, Rat, Scalar};
use crate::families::{alpha_names, Delta, FamilySpec, FamilyTag};
use crate::nullfiliform::Automorphism;

#[derive(Clone, Debug, PartialEq)]
pub struct IsoWitness {
    /// Applied in order: the first step acts on the input.
    pub steps: Vec<Automorphism<RadExt>>,
    /// steps[0] ∘ steps[1] ∘ ...; pushing along it performs all steps.
    pub total: Automorphism<RadExt>,
}

impl IsoWitness {
    pub fn identity(n: usize) -> IsoWitness {
        IsoWitness {
            steps: Vec::new(),
            total: Automorphism::identity(n),
        }
    }

    pub fn from_steps(n: usize, steps: Vec<Automorphism<RadExt>>) -> Result<IsoWitness> {
        let mut total = Automorphism::identity(n);
        for s in &steps {
            total = compose_checked(&total, s)?;
        }
        Ok(IsoWitness { steps, total })
    }

    /// The one radical all entries live in, if any.
    pub fn radical(&self) -> Option<(u32, Rat)> {
        self.total.params().iter().find_map(RadExt::radical)
    }
}

fn radicals_of(xs: &[RadExt]) -> Option<(u32, Rat)> {
    xs.iter().find_map(RadExt::radical)
}

/// Composition that reports a tower instead of panicking.
pub(crate) fn compose_checked(f: &Automorphism<RadExt>, g: &Automorphism<RadExt>) -> Result<Automorphism<RadExt>> {
    if let (Some(a), Some(b)) = (radicals_of(f.params()), radicals_of(g.params())) {
        if a != b {
            return Err(Error::UnsupportedTower {
                m1: a.0,
                q1: a.1.to_string(),
                m2: b.0,
                q2: b.1.to_string(),
            });
        }
    }
    f.compose(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm {
    pub tag: FamilyTag,
    pub n: usize,
    pub delta: Rat,
    pub alphas: Vec<RadExt>,
    pub witness: IsoWitness,
    pub notes: Vec<String>,
}

impl CanonicalForm {
    pub fn radical(&self) -> Option<(u32, Rat)> {
        radicals_of(&self.alphas).or_else(|| self.witness.radical())
    }

    /// The canonical representative as a spec, when every parameter is rational.
    pub fn spec(&self) -> Option<FamilySpec> {
        let alphas = self
            .alphas
            .iter()
            .map(|a| a.as_rat().cloned())
            .collect::<Option<Vec<Rat>>>()?;
        Some(FamilySpec {
            tag: self.tag,
            n: self.n,
            delta: Delta::Value(self.delta.clone()),
            alphas,
        })
    }

    pub fn label(&self) -> String {
        let vals: Vec<String> = self.alphas.iter().map(|a| a.to_string()).collect();
        let spec = FamilySpec {
            tag: self.tag,
            n: self.n,
            delta: Delta::Value(self.delta.clone()),
            alphas: Vec::new(),
        };
        let head = spec.label();
        match head.strip_suffix("()") {
            Some(h) => format!("{h}({})", vals.join(",")),
            None => head,
        }
    }
}

/// Outcome of the rational shift phase shared by canonicalization and invariants.
#[derive(Clone, Debug)]
struct Reduction {
    alphas: Vec<Rat>,
    /// Storage positions of the nonzero slots: the first one, then retained ones.
    nonzero: Vec<usize>,
    weights: Vec<i32>,
    shifts: Vec<Automorphism<Rat>>,
    notes: Vec<String>,
}

/// Scaling weight of each slot: α'_u = A_1^{w_u} α_u under A = (A_1, 0, ..., 0).
fn scaling_weights(tag: FamilyTag, n: usize, delta: &Rat, len: usize) -> Result<Vec<i32>> {
    let reg = registry(&["lambda"]);
    let lam = MPoly::var(&reg, 0);
    let mut a = vec![MPoly::zero(); n];
    a[0] = lam;
    let ones = vec![MPoly::one(); len];
    let out = act(tag, n, &MPoly::constant(delta.clone()), &ones, &a)?;
    out.iter()
        .map(|p| {
            p.monomial_exponent("lambda")
                .filter(|_| p.leading_coeff().is_some_and(Rat::is_one))
                .ok_or_else(|| Error::Domain(format!("{tag}: scaling is not diagonal ({p})")))
        })
        .collect()
}

thread_local! {
    /// act(α, (1, 0, ..., c at k, ...)) with formal α's, per (tag, n, δ, k).
    static SHIFT_LAWS: RefCell<HashMap<(FamilyTag, usize, Rat, usize), Rc<Vec<MPoly>>>> =
        RefCell::new(HashMap::new());
}

fn shift_law(tag: FamilyTag, n: usize, delta: &Rat, k: usize) -> Result<Rc<Vec<MPoly>>> {
    let key = (tag, n, delta.clone(), k);
    if let Some(law) = SHIFT_LAWS.with(|m| m.borrow().get(&key).cloned()) {
        return Ok(law);
    }
    let mut names = alpha_names(tag, n)?;
    names.push("c".into());
    let reg = registry(&names);
    let vars = MPoly::vars_of(&reg);
    let (al, c) = vars.split_at(names.len() - 1);
    let mut a = vec![MPoly::zero(); n];
    a[0] = MPoly::one();
    a[k - 1] = c[0].clone();
    let law = Rc::new(act(tag, n, &MPoly::constant(delta.clone()), al, &a)?);
    SHIFT_LAWS.with(|m| m.borrow_mut().insert(key, law.clone()));
    Ok(law)
}

/// First shift A = (1, 0, ..., c at k, ...) that moves slot `pos` linearly in c
/// while leaving every earlier slot alone. Returns (k, coefficient of c).
fn find_shift(tag: FamilyTag, n: usize, delta: &Rat, alphas: &[Rat], pos: usize) -> Result<Option<(usize, Rat)>> {
    let values: HashMap<String, Rat> = alpha_names(tag, n)?.into_iter().zip(alphas.iter().cloned()).collect();
    let al: Vec<MPoly> = alphas.iter().map(|x| MPoly::constant(x.clone())).collect();
    let closed = matches!(
        tag,
        FamilyTag::TP0 | FamilyTag::TP1 | FamilyTag::TP2 | FamilyTag::TPdelta
    );
    let reg = registry(&["c"]);
    let c = MPoly::var(&reg, 0);
    let d = MPoly::constant(delta.clone());
    'k: for k in 2..=n {
        // the low-dimensional families are only closed for admissible values
        let out: Vec<MPoly> = if closed {
            let law = shift_law(tag, n, delta, k)?;
            law[..=pos]
                .iter()
                .map(|p| p.substitute_rat(&values))
                .collect::<Result<_>>()?
        } else {
            let mut a = vec![MPoly::zero(); n];
            a[0] = MPoly::one();
            a[k - 1] = c.clone();
            act(tag, n, &d, &al, &a)?
        };
        for q in 0..pos {
            if out[q] != al[q] {
                continue 'k;
            }
        }
        let diff = out[pos].clone() - &al[pos];
        if diff.len() == 1 && diff.monomial_exponent("c") == Some(1) {
            return Ok(Some((k, diff.leading_coeff().unwrap().clone())));
        }
    }
    Ok(None)
}

fn alpha_index(tag: FamilyTag, n: usize, pos: usize) -> usize {
    tag.alpha_indices(n).expect("validated")[pos]
}

fn reduce(spec: &FamilySpec) -> Result<Reduction> {
    spec.validate()?;
    let delta = spec.delta_value()?.clone();
    spec.admissibility()?;
    let (tag, n) = (spec.tag, spec.n);
    let len = spec.alphas.len();
    let weights = if len == 0 {
        Vec::new()
    } else {
        scaling_weights(tag, n, &delta, len)?
    };
    let mut alphas = spec.alphas.clone();
    let mut nonzero = Vec::new();
    let mut shifts = Vec::new();
    let mut notes = Vec::new();
    let Some(s) = alphas.iter().position(|x| !x.is_zero()) else {
        return Ok(Reduction {
            alphas,
            nonzero,
            weights,
            shifts,
            notes,
        });
    };
    nonzero.push(s);
    for pos in s + 1..len {
        if alphas[pos].is_zero() {
            continue;
        }
        match find_shift(tag, n, &delta, &alphas, pos)? {
            Some((k, kappa)) => {
                let cval = -(alphas[pos].div(&kappa)?);
                let mut a = vec![Rat::zero(); n];
                a[0] = Rat::one();
                a[k - 1] = cval.clone();
                let next = act(tag, n, &delta, &alphas, &a)?;
                debug_assert!(next[pos].is_zero());
                alphas = next;
                shifts.push(Automorphism::shift(n, k, cval)?);
            }
            None => {
                notes.push(format!(
                    "alpha_{} kept: no shift moves it without disturbing lower slots",
                    alpha_index(tag, n, pos)
                ));
                nonzero.push(pos);
            }
        }
    }
    Ok(Reduction {
        alphas,
        nonzero,
        weights,
        shifts,
        notes,
    })
}

/// Brings the parameters to the catalog's normal form: shifts clear every
/// slot above the first nonzero one that some shift can reach, then a single
/// scaling sets the first nonzero slot with nonzero weight to 1.
pub fn canonicalize(spec: &FamilySpec) -> Result<CanonicalForm> {
    let red = reduce(spec)?;
    let (tag, n) = (spec.tag, spec.n);
    let delta = spec.delta_value()?.clone();
    let mut notes = red.notes.clone();
    let mut steps: Vec<Automorphism<RadExt>> = red
        .shifts
        .iter()
        .map(|a| a.map(|x| RadExt::rational(x.clone())))
        .collect::<Result<_>>()?;
    let mut alphas: Vec<RadExt> = red.alphas.iter().cloned().map(RadExt::rational).collect();
    let norm = red.nonzero.iter().copied().find(|&p| red.weights[p] != 0);
    for &p in &red.nonzero {
        if red.weights[p] == 0 {
            notes.push(format!(
                "alpha_{} is a modulus: scaling weight 0",
                alpha_index(tag, n, p)
            ));
        }
    }
    if let Some(p) = norm {
        let w = red.weights[p];
        let target = &red.alphas[p];
        let lambda = if w > 0 {
            rat_root(&target.inv()?, w as u32)?
        } else {
            rat_root(target, w.unsigned_abs())?
        };
        if !lambda.is_one() {
            let mut a = vec![RadExt::zero(); n];
            a[0] = lambda.clone();
            let d = RadExt::rational(delta.clone());
            alphas = act(tag, n, &d, &alphas, &a)?;
            debug_assert!(alphas[p].is_one());
            steps.push(Automorphism::scaling(n, lambda)?);
        }
    }
    let witness = IsoWitness::from_steps(n, steps)?;
    Ok(CanonicalForm {
        tag,
        n,
        delta,
        alphas,
        witness,
        notes,
    })
}

/// A rational function of the parameters that no automorphism changes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    /// (α index, exponent) factors of the monomial.
    pub monomial: Vec<(usize, i32)>,
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantTuple {
    pub tag: FamilyTag,
    pub n: usize,
    pub delta: Rat,
    /// First α index with α_s ≠ 0 after normalization; None for the zero bracket.
    pub s: Option<usize>,
    /// α indices that no shift removes.
    pub retained: Vec<usize>,
    pub moduli: Vec<Modulus>,
}

/// (s, retained slots, moduli) of a spec; all rational, no radicals needed.
pub fn invariants(spec: &FamilySpec) -> Result<InvariantTuple> {
    let red = reduce(spec)?;
    let (tag, n) = (spec.tag, spec.n);
    let idx = tag.alpha_indices(n)?;
    let w = &red.weights;
    let b = &red.alphas;
    let norm = red.nonzero.iter().copied().find(|&p| w[p] != 0);
    let mut moduli = Vec::new();
    for &u in &red.nonzero {
        if Some(u) == norm {
            continue;
        }
        let m = match norm {
            Some(p) if w[u] != 0 => {
                let g = (w[u] as i64).gcd(&(w[p] as i64)) as i32;
                let (mut eu, mut ep) = (w[p] / g, -w[u] / g);
                if eu < 0 {
                    eu = -eu;
                    ep = -ep;
                }
                Modulus {
                    monomial: vec![(idx[u], eu), (idx[p], ep)],
                    value: &b[u].powi(eu)? * &b[p].powi(ep)?,
                }
            }
            _ => Modulus {
                monomial: vec![(idx[u], 1)],
                value: b[u].clone(),
            },
        };
        moduli.push(m);
    }
    Ok(InvariantTuple {
        tag,
        n,
        delta: spec.delta_value()?.clone(),
        s: red.nonzero.first().map(|&p| idx[p]),
        retained: red.nonzero.iter().skip(1).map(|&p| idx[p]).collect(),
        moduli,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum IsoDecision {
    /// Witness maps the first algebra's bracket onto the second's by push;
    /// absent when the two canonicalizations used incompatible radicals.
    Isomorphic(Option<IsoWitness>),
    NotIsomorphic(String),
    Inconclusive(String),
}

/// Three-valued isomorphism test within one family, n and δ.
pub fn iso_test(a: &FamilySpec, b: &FamilySpec) -> Result<IsoDecision> {
    if a.tag != b.tag || a.n != b.n || a.delta != b.delta {
        return Err(Error::Domain(
            "iso_test compares specs with the same family, n and delta".into(),
        ));
    }
    let ca = canonicalize(a)?;
    let cb = canonicalize(b)?;
    if ca.alphas == cb.alphas {
        let witness = cb
            .witness
            .total
            .inverse()
            .and_then(|inv| compose_checked(&ca.witness.total, &inv))
            .ok()
            .map(|total| IsoWitness {
                steps: vec![
                    ca.witness.total.clone(),
                    cb.witness.total.inverse().expect("automorphism"),
                ],
                total,
            });
        return Ok(IsoDecision::Isomorphic(witness));
    }
    let ia = invariants(a)?;
    let ib = invariants(b)?;
    if ia != ib {
        return Ok(IsoDecision::NotIsomorphic(describe_difference(&ia, &ib)));
    }
    Ok(IsoDecision::Inconclusive(format!(
        "equal invariants but canonical forms {} and {} differ (root choice)",
        ca.label(),
        cb.label()
    )))
}

fn describe_difference(a: &InvariantTuple, b: &InvariantTuple) -> String {
    let show = |s: Option<usize>| s.map_or("inf".to_string(), |x| x.to_string());
    if a.s != b.s {
        return format!("first nonzero index differs: {} vs {}", show(a.s), show(b.s));
    }
    if a.retained != b.retained {
        return format!("retained slots differ: {:?} vs {:?}", a.retained, b.retained);
    }
    let vals = |t: &InvariantTuple| t.moduli.iter().map(|m| m.value.to_string()).collect::<Vec<_>>();
    format!("moduli differ: {:?} vs {:?}", vals(a), vals(b))
}

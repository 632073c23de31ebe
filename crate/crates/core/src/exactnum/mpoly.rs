use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{forward_binops, Scalar};
use super::Rat;
use crate::error::{Error, Result};

/// Ordered variable names shared by polynomials built together.
pub type Registry = Arc<[String]>;

pub fn registry<S: AsRef<str>>(names: &[S]) -> Registry {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Exponent vector. Negative entries make the ring a Laurent ring, which lets
/// monomials such as A_1 be inverted exactly.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Mono(Vec<i32>);

impl Mono {
    fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Mono) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Mono) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse Laurent polynomial over Q with named variables, graded-lex ordered.
#[derive(Clone)]
pub struct MPoly {
    vars: Registry,
    terms: BTreeMap<Mono, Rat>,
}

fn same_registry(a: &Registry, b: &Registry) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly {
            vars: registry::<&str>(&[]),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat) -> MPoly {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Mono(Vec::new()), c);
        }
        p
    }

    /// The variable at position `i` of `reg`.
    pub fn var(reg: &Registry, i: usize) -> MPoly {
        let mut e = vec![0; reg.len()];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Mono(e), Rat::one());
        MPoly {
            vars: reg.clone(),
            terms,
        }
    }

    pub fn var_named(reg: &Registry, name: &str) -> Result<MPoly> {
        let i = reg
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Domain(format!("unknown variable {name}")))?;
        Ok(MPoly::var(reg, i))
    }

    /// Every variable of `reg`, in order.
    pub fn vars_of(reg: &Registry) -> Vec<MPoly> {
        (0..reg.len()).map(|i| MPoly::var(reg, i)).collect()
    }

    pub fn registry(&self) -> &Registry {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value when the polynomial has no variable part.
    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.0.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Terms from the leading one down, as (variable exponents, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Vec<(&str, i32)>, &Rat)> {
        self.terms.iter().rev().map(move |(m, c)| {
            let ex =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, &e)| (self.vars[i].as_str(), e))
                    .collect();
            (ex, c)
        })
    }

    pub fn used_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] != 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    /// (variable, k) when the polynomial is c * v^k for a single variable v.
    pub fn single_power(&self) -> Option<(String, i32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let m = self.terms.keys().next().unwrap();
        let mut nz = m.0.iter().enumerate().filter(|(_, &e)| e != 0);
        let (i, &e) = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        Some((self.vars[i].clone(), e))
    }

    /// Exponent of `name` in the polynomial when it is a single monomial.
    pub fn monomial_exponent(&self, name: &str) -> Option<i32> {
        if self.terms.len() != 1 {
            return None;
        }
        let i = self.vars.iter().position(|v| v == name);
        let m = self.terms.keys().next().unwrap();
        Some(i.map_or(0, |i| m.0[i]))
    }

    /// Coefficient of the leading term.
    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    fn remapped(&self, target: &Registry) -> BTreeMap<Mono, Rat> {
        if same_registry(&self.vars, target) {
            return self.terms.clone();
        }
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v).expect("registry merge"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; target.len()];
                for (i, &x) in m.0.iter().enumerate() {
                    e[idx[i]] = x;
                }
                (Mono(e), c.clone())
            })
            .collect()
    }

    fn merged_registry(a: &Registry, b: &Registry) -> Registry {
        if same_registry(a, b) || b.is_empty() {
            return a.clone();
        }
        if a.is_empty() {
            return b.clone();
        }
        let mut names: Vec<String> = a.to_vec();
        for v in b.iter() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        if names.len() == b.len() {
            return b.clone();
        }
        names.into()
    }

    fn add_ref(&self, o: &MPoly) -> MPoly {
        let reg = MPoly::merged_registry(&self.vars, &o.vars);
        let mut terms = self.remapped(&reg);
        for (m, c) in o.remapped(&reg) {
            add_term(&mut terms, m, c);
        }
        MPoly { vars: reg, terms }
    }

    fn sub_ref(&self, o: &MPoly) -> MPoly {
        self.add_ref(&-o)
    }

    fn mul_ref(&self, o: &MPoly) -> MPoly {
        let reg = MPoly::merged_registry(&self.vars, &o.vars);
        let a = self.remapped(&reg);
        let b = o.remapped(&reg);
        let mut terms = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let e = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                add_term(&mut terms, Mono(e), ca * cb);
            }
        }
        MPoly { vars: reg, terms }
    }

    /// Substitutes the given variables and expands. Variables left out of the
    /// assignment stay symbolic. A negative exponent needs an invertible value.
    pub fn substitute(&self, assignment: &HashMap<String, MPoly>) -> Result<MPoly> {
        let mut out = MPoly::zero();
        let mut cache: HashMap<(usize, i32), MPoly> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let f = match cache.get(&(i, e)) {
                    Some(f) => f.clone(),
                    None => {
                        let base = match assignment.get(&self.vars[i]) {
                            Some(v) => v.clone(),
                            None => MPoly::var(&self.vars, i),
                        };
                        let f = base.powi(e).ok_or_else(|| {
                            Error::NotInvertible(format!("{base} substituted for {} under exponent {e}", self.vars[i]))
                        })?;
                        cache.insert((i, e), f.clone());
                        f
                    }
                };
                t = t * &f;
            }
            out = out + &t;
        }
        Ok(out)
    }

    pub fn substitute_rat(&self, assignment: &HashMap<String, Rat>) -> Result<MPoly> {
        let a = assignment
            .iter()
            .map(|(k, v)| (k.clone(), MPoly::constant(v.clone())))
            .collect();
        self.substitute(&a)
    }
}

fn add_term(terms: &mut BTreeMap<Mono, Rat>, m: Mono, c: Rat) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

forward_binops!(MPoly, add_ref, sub_ref, mul_ref);

impl std::ops::Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl PartialEq for MPoly {
    fn eq(&self, o: &MPoly) -> bool {
        if same_registry(&self.vars, &o.vars) {
            return self.terms == o.terms;
        }
        (self - o).is_zero()
    }
}

impl From<Rat> for MPoly {
    fn from(r: Rat) -> MPoly {
        MPoly::constant(r)
    }
}

impl Scalar for MPoly {
    fn zero() -> MPoly {
        MPoly::zero()
    }
    fn one() -> MPoly {
        MPoly::constant(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rat(r: &Rat) -> MPoly {
        MPoly::constant(r.clone())
    }
    /// Only monomials are units of a Laurent ring.
    fn try_inv(&self) -> Option<MPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(Mono(m.0.iter().map(|e| -e).collect()), c.inv().ok()?);
        Some(MPoly {
            vars: self.vars.clone(),
            terms,
        })
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (ex, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || ex.is_empty() {
                factors.push(a.to_string());
            }
            for (v, e) in ex {
                factors.push(if e == 1 { v.to_string() } else { format!("{v}^{e}") });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    coeff: Rat,
    monomial: indexmap::IndexMap<String, i32>,
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (ex, c) in self.terms() {
            seq.serialize_element(&TermWire {
                coeff: c.clone(),
                monomial: ex.into_iter().map(|(v, e)| (v.to_string(), e)).collect(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<MPoly, D::Error> {
        let wire = Vec::<TermWire>::deserialize(d)?;
        let mut names: Vec<String> = Vec::new();
        for t in &wire {
            for v in t.monomial.keys() {
                if !names.contains(v) {
                    names.push(v.clone());
                }
            }
        }
        let reg = registry(&names);
        let mut terms = BTreeMap::new();
        for t in wire {
            let mut e = vec![0; reg.len()];
            for (v, x) in t.monomial {
                e[names.iter().position(|n| *n == v).unwrap()] += x;
            }
            add_term(&mut terms, Mono(e), t.coeff);
        }
        Ok(MPoly { vars: reg, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn discriminant_vanishes_at_one() {
        let reg = registry(&["delta"]);
        let d = MPoly::var(&reg, 0);
        let p = d.pow(3) - d.pow(2).scale(&r("3")) + d.scale(&r("2"));
        let mut a = HashMap::new();
        a.insert("delta".to_string(), r("1"));
        assert!(p.substitute_rat(&a).unwrap().is_zero());
        assert_eq!(p.to_string(), "delta^3 - 3*delta^2 + 2*delta");
    }

    #[test]
    fn evaluate_monomial() {
        let reg = registry(&["A_1", "alpha_2"]);
        let v = MPoly::vars_of(&reg);
        let p = v[0].pow(3) * &v[1];
        let mut a = HashMap::new();
        a.insert("A_1".to_string(), r("2"));
        a.insert("alpha_2".to_string(), r("1"));
        assert_eq!(p.substitute_rat(&a).unwrap().constant_value(), Some(r("8")));
    }

    #[test]
    fn laurent_inverse() {
        let reg = registry(&["x", "y"]);
        let v = MPoly::vars_of(&reg);
        let m = (v[0].clone() * &v[0] * &v[1]).scale(&r("3"));
        let inv = m.try_inv().unwrap();
        assert_eq!(m * &inv, MPoly::one());
        assert!((v[0].clone() + &v[1]).try_inv().is_none());
    }

    #[test]
    fn registries_merge() {
        let a = MPoly::var_named(&registry(&["x"]), "x").unwrap();
        let b = MPoly::var_named(&registry(&["y", "x"]), "x").unwrap();
        assert!((a.clone() - &b).is_zero());
        assert_eq!(a, b);
        let c = a + &MPoly::var_named(&registry(&["y"]), "y").unwrap();
        assert_eq!(c.used_vars(), vec!["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn json_round_trip() {
        let reg = registry(&["a", "b"]);
        let v = MPoly::vars_of(&reg);
        let p = v[0].pow(2).scale(&r("-3/2")) + &v[1] + &MPoly::constant(r("5"));
        let s = serde_json::to_string(&p).unwrap();
        let q: MPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}

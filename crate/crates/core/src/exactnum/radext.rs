use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{Field, Scalar};
use super::Rat;
use crate::error::{Error, Result};

/// Element of Q[r]/(r^m - q), stored as c_0 + c_1 r + ... + c_{m-1} r^{m-1}.
///
/// Elements whose irrational part vanishes collapse to (m, q) = (1, 1), so
/// rationals have a single representation regardless of where they came from.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RadExt {
    m: u32,
    q: Rat,
    coeffs: Vec<Rat>,
}

impl RadExt {
    pub fn new(m: u32, q: Rat, coeffs: Vec<Rat>) -> Result<RadExt> {
        if m == 0 {
            return Err(Error::Domain("radical degree must be positive".into()));
        }
        if q.is_zero() {
            return Err(Error::Domain("radicand must be nonzero".into()));
        }
        if coeffs.len() > m as usize {
            return Err(Error::Domain(format!("{} coefficients for degree {m}", coeffs.len())));
        }
        let mut coeffs = coeffs;
        coeffs.resize(m as usize, Rat::zero());
        Ok(RadExt { m, q, coeffs }.normalized())
    }

    pub fn rational(r: Rat) -> RadExt {
        RadExt {
            m: 1,
            q: Rat::one(),
            coeffs: vec![r],
        }
    }

    /// The formal root r of x^m - q.
    pub fn generator(m: u32, q: Rat) -> Result<RadExt> {
        let mut c = vec![Rat::zero(); m.max(1) as usize];
        if m == 1 {
            c[0] = q.clone();
        } else if m > 1 {
            c[1] = Rat::one();
        }
        RadExt::new(m, q, c)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> &Rat {
        &self.q
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.m == 1
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.m == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// The (m, q) of the extension this element lives in, if nontrivial.
    pub fn radical(&self) -> Option<(u32, Rat)> {
        (self.m > 1).then(|| (self.m, self.q.clone()))
    }

    fn normalized(mut self) -> RadExt {
        if self.m > 1 && self.coeffs[1..].iter().all(Rat::is_zero) {
            self.coeffs.truncate(1);
            self.m = 1;
            self.q = Rat::one();
        }
        self
    }

    fn common(&self, o: &RadExt) -> Result<(u32, Rat)> {
        match (self.m, o.m) {
            (1, _) => Ok((o.m, o.q.clone())),
            (_, 1) => Ok((self.m, self.q.clone())),
            (a, b) if a == b && self.q == o.q => Ok((a, self.q.clone())),
            _ => Err(Error::UnsupportedTower {
                m1: self.m,
                q1: self.q.to_string(),
                m2: o.m,
                q2: o.q.to_string(),
            }),
        }
    }

    fn lifted(&self, m: u32) -> Vec<Rat> {
        let mut c = self.coeffs.clone();
        c.resize(m as usize, Rat::zero());
        c
    }

    pub fn checked_add(&self, o: &RadExt) -> Result<RadExt> {
        let (m, q) = self.common(o)?;
        let (a, b) = (self.lifted(m), o.lifted(m));
        let c = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Ok(RadExt { m, q, coeffs: c }.normalized())
    }

    pub fn checked_sub(&self, o: &RadExt) -> Result<RadExt> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &RadExt) -> Result<RadExt> {
        let (m, q) = self.common(o)?;
        let (a, b) = (self.lifted(m), o.lifted(m));
        let mu = m as usize;
        let mut c = vec![Rat::zero(); mu];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x * y;
                if i + j >= mu {
                    c[i + j - mu] = &c[i + j - mu] + &(&t * &q);
                } else {
                    c[i + j] = &c[i + j] + &t;
                }
            }
        }
        Ok(RadExt { m, q, coeffs: c }.normalized())
    }

    pub fn inv(&self) -> Result<RadExt> {
        if self.coeffs.iter().all(Rat::is_zero) {
            return Err(Error::NotInvertible("0".into()));
        }
        if self.m == 1 {
            return Ok(RadExt::rational(self.coeffs[0].inv()?));
        }
        let mut f = vec![Rat::zero(); self.m as usize + 1];
        f[0] = -&self.q;
        f[self.m as usize] = Rat::one();
        let (g, s) = upoly::half_ext_gcd(&self.coeffs, &f);
        if g.len() != 1 {
            return Err(Error::NotInvertible(format!(
                "{self} shares a factor with x^{} - ({})",
                self.m, self.q
            )));
        }
        let g0 = g[0].inv()?;
        let mut c: Vec<Rat> = upoly::rem(&s, &f).into_iter().map(|x| x * &g0).collect();
        c.resize(self.m as usize, Rat::zero());
        Ok(RadExt {
            m: self.m,
            q: self.q.clone(),
            coeffs: c,
        }
        .normalized())
    }

    fn add_ref(&self, o: &RadExt) -> RadExt {
        self.checked_add(o).unwrap_or_else(|e| panic!("{e}"))
    }

    fn sub_ref(&self, o: &RadExt) -> RadExt {
        self.checked_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }

    fn mul_ref(&self, o: &RadExt) -> RadExt {
        self.checked_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Returns r with r^m = q, adjoining a formal root only when Q has none.
///
/// x^m - q is reduced to an irreducible binomial first, so the quotient ring
/// is a field: perfect p-th powers for primes p | m are peeled off, and the
/// one remaining reducible shape with m = 4, q = -4b^4 returns b(1 + i).
pub fn rat_root(q: &Rat, m: u32) -> Result<RadExt> {
    if m == 0 {
        return Err(Error::Domain("root index must be positive".into()));
    }
    if q.is_zero() {
        return Err(Error::Domain("root of zero".into()));
    }
    if let Some(r) = q.nth_root_exact(m) {
        return Ok(RadExt::rational(r));
    }
    for p in prime_factors(m) {
        if let Some(b) = q.nth_root_exact(p) {
            return rat_root(&b, m / p);
        }
    }
    if m % 4 == 0 && q.is_negative() {
        if let Some(b) = (q * &Rat::new(-1, 4)?).nth_root_exact(4) {
            if m == 4 {
                return RadExt::new(2, Rat::from(-1), vec![b.clone(), b]);
            }
            return Err(Error::Domain(format!("x^{m} - ({q}) splits into a tower of radicals")));
        }
    }
    RadExt::generator(m, q.clone())
}

fn prime_factors(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

super::scalar::forward_binops!(RadExt, add_ref, sub_ref, mul_ref);

impl std::ops::Neg for RadExt {
    type Output = RadExt;
    fn neg(self) -> RadExt {
        -&self
    }
}

impl std::ops::Neg for &RadExt {
    type Output = RadExt;
    fn neg(self) -> RadExt {
        RadExt {
            m: self.m,
            q: self.q.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl From<Rat> for RadExt {
    fn from(r: Rat) -> RadExt {
        RadExt::rational(r)
    }
}

impl Scalar for RadExt {
    fn zero() -> RadExt {
        RadExt::rational(Rat::zero())
    }
    fn one() -> RadExt {
        RadExt::rational(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.m == 1 && self.coeffs[0].is_zero()
    }
    fn from_rat(r: &Rat) -> RadExt {
        RadExt::rational(r.clone())
    }
    fn try_inv(&self) -> Option<RadExt> {
        self.inv().ok()
    }
}

impl Field for RadExt {}

impl fmt::Display for RadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let root = format!("({})^({}/{})", self.q, k, self.m);
            parts.push(match (k, c.is_one()) {
                (0, _) => c.to_string(),
                (_, true) => root,
                _ => format!("{c}*{root}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for RadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct RadExtWire {
    m: u32,
    q: Rat,
    coeffs: Vec<Rat>,
}

impl Serialize for RadExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RadExtWire {
            m: self.m,
            q: self.q.clone(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RadExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<RadExt, D::Error> {
        let w = RadExtWire::deserialize(d)?;
        RadExt::new(w.m, w.q, w.coeffs).map_err(serde::de::Error::custom)
    }
}

/// Dense univariate polynomials over Q, lowest degree first.
mod upoly {
    use crate::exactnum::Rat;

    fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
        while p.last().is_some_and(Rat::is_zero) {
            p.pop();
        }
        p
    }

    fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = a.len().max(b.len());
        let z = Rat::zero();
        trim(
            (0..n)
                .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                c[i + j] = &c[i + j] + &(x * y);
            }
        }
        trim(c)
    }

    pub fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let lead_inv = b.last().expect("division by zero polynomial").inv().unwrap();
        let mut q = vec![Rat::zero(); r.len().saturating_sub(b.len()) + 1];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() * &lead_inv;
            for (i, y) in b.iter().enumerate() {
                r[i + shift] = &r[i + shift] - &(&c * y);
            }
            q[shift] = c;
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        divrem(a, b).1
    }

    /// (g, s) with s*a = g mod f and g = gcd(a, f).
    pub fn half_ext_gcd(a: &[Rat], f: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(f.to_vec()));
        let (mut s0, mut s1) = (vec![Rat::one()], Vec::new());
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        (r0, s0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn sqrt2_inverse_is_half_root() {
        let g = rat_root(&r("2"), 2).unwrap();
        assert_eq!(g.clone() * &g, RadExt::rational(r("2")));
        let half = RadExt::rational(r("1/2")) * &g;
        assert_eq!(g.inv().unwrap(), half);
    }

    #[test]
    fn reductions_peel_powers() {
        let x = rat_root(&r("8"), 6).unwrap();
        assert_eq!((x.m(), x.q().clone()), (2, r("2")));
        let y = rat_root(&r("-8"), 6).unwrap();
        assert_eq!(y.pow(6), RadExt::rational(r("-8")));
        let z = rat_root(&r("-4"), 4).unwrap();
        assert_eq!(z.pow(4), RadExt::rational(r("-4")));
        assert_eq!(z.m(), 2);
    }

    #[test]
    fn towers_rejected() {
        let a = rat_root(&r("2"), 2).unwrap();
        let b = rat_root(&r("3"), 2).unwrap();
        assert!(matches!(a.checked_mul(&b), Err(Error::UnsupportedTower { .. })));
        assert!(a.checked_mul(&RadExt::rational(r("5"))).is_ok());
    }

    #[test]
    fn reducible_modulus_has_zero_divisors() {
        let x = RadExt::new(2, r("4"), vec![r("2"), r("1")]).unwrap();
        assert!(x.inv().is_err());
    }
}

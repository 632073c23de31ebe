use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Bracket, CommAlgebra, PoissonPair};
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

type SparseVec<S> = IndexMap<String, S>;

fn sparse<S: Scalar>(v: &[S]) -> SparseVec<S> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(t, x)| ((t + 1).to_string(), x.clone()))
        .collect()
}

fn dense<S: Scalar>(n: usize, m: SparseVec<S>) -> Result<Vec<S>> {
    let mut v = vec![S::zero(); n];
    for (k, x) in m {
        let t: usize = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad coordinate key {k:?}")))?;
        if t == 0 || t > n {
            return Err(Error::Parse(format!("coordinate {t} out of range 1..={n}")));
        }
        v[t - 1] = x;
    }
    Ok(v)
}

fn parse_pair_key(k: &str, n: usize) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad index pair {k:?}"));
    let (a, b) = k.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::Parse(format!("index pair {k:?} out of range 1..={n}")));
    }
    Ok((i, j))
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: DeserializeOwned"))]
struct PairWire<S> {
    n: usize,
    delta: S,
    #[serde(default = "IndexMap::new")]
    product: IndexMap<String, SparseVec<S>>,
    #[serde(default = "IndexMap::new")]
    bracket: IndexMap<String, SparseVec<S>>,
}

pub(crate) fn bracket_to_wire<S: Scalar>(b: &Bracket<S>) -> IndexMap<String, SparseVec<S>> {
    b.pairs()
        .filter(|&(i, j)| !super::is_zero_vec(b.entry(i, j)))
        .map(|(i, j)| (format!("{i},{j}"), sparse(b.entry(i, j))))
        .collect()
}

pub(crate) fn bracket_from_wire<S: Scalar>(n: usize, w: IndexMap<String, SparseVec<S>>) -> Result<Bracket<S>> {
    let mut b = Bracket::zero(n);
    for (k, v) in w {
        let (i, j) = parse_pair_key(&k, n)?;
        if i == j {
            return Err(Error::Parse(format!("bracket entry {k:?} on the diagonal")));
        }
        b.set(i, j, dense(n, v)?)?;
    }
    Ok(b)
}

impl<S: Scalar + Serialize> Serialize for PoissonPair<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let n = self.dim();
        let comm = self.base.is_commutative_table();
        let mut product = IndexMap::new();
        for i in 1..=n {
            for j in 1..=n {
                if comm && j < i {
                    continue;
                }
                let v = self.base.product(i, j);
                if !super::is_zero_vec(v) {
                    product.insert(format!("{i},{j}"), sparse(v));
                }
            }
        }
        PairWire {
            n,
            delta: self.delta.clone(),
            product,
            bracket: bracket_to_wire(&self.bracket),
        }
        .serialize(s)
    }
}

impl<'de, S: Scalar + DeserializeOwned> Deserialize<'de> for PoissonPair<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PairWire::<S>::deserialize(d)?;
        from_wire(w).map_err(serde::de::Error::custom)
    }
}

fn from_wire<S: Scalar>(w: PairWire<S>) -> Result<PoissonPair<S>> {
    let n = w.n;
    if n == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let mut base = CommAlgebra::zero(n);
    let keys: Vec<(usize, usize)> = w.product.keys().map(|k| parse_pair_key(k, n)).collect::<Result<_>>()?;
    for ((i, j), (_, v)) in keys.iter().zip(w.product) {
        let v = dense(n, v)?;
        // one-sided entries are read as commutative
        if keys.contains(&(*j, *i)) {
            base.set_product_ordered(*i, *j, v)?;
        } else {
            base.set_product(*i, *j, v)?;
        }
    }
    let bracket = bracket_from_wire(n, w.bracket)?;
    PoissonPair::new(base, bracket, w.delta)
}

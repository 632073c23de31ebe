use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Rat;

/// Sparse row with integer entries, keyed by column.
pub(crate) type IntRow = BTreeMap<usize, BigInt>;

/// Clears denominators and divides by the content; the first entry is made
/// positive so equal lines get equal rows.
pub(crate) fn primitive(row: &BTreeMap<usize, Rat>) -> IntRow {
    let mut lcm = BigInt::one();
    for v in row.values() {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(&k, v)| (k, v.numer() * (&lcm / v.denom())))
        .collect();
    normalize_int(&mut out);
    out
}

fn normalize_int(row: &mut IntRow) {
    row.retain(|_, v| !v.is_zero());
    let Some(first) = row.values().next() else {
        return;
    };
    let sign_neg = first.is_negative();
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
    }
    if sign_neg {
        g = -g;
    }
    if !g.is_one() {
        for v in row.values_mut() {
            *v = &*v / &g;
        }
    }
}

/// Removes rows that are equal after normalization, keeping first occurrences.
pub(crate) fn dedup_rows<T: Clone>(rows: Vec<(T, IntRow)>) -> Vec<(T, IntRow)> {
    let mut seen = HashSet::new();
    rows.into_iter()
        .filter(|(_, r)| !r.is_empty() && seen.insert(r.iter().map(|(k, v)| (*k, v.clone())).collect::<Vec<_>>()))
        .collect()
}

/// Reduced row echelon form over Z built one row at a time. Each stored row
/// is primitive, has a positive pivot, and vanishes in every other pivot column.
#[derive(Default)]
pub(crate) struct IntRref {
    rows: BTreeMap<usize, IntRow>,
}

impl IntRref {
    /// Eliminates `col` from `row` using the pivot row `p` (pivot at `col`).
    fn eliminate(row: &mut IntRow, col: usize, p: &IntRow) {
        let Some(c) = row.get(&col).cloned() else {
            return;
        };
        let lead = &p[&col];
        let g = c.gcd(lead);
        let (fr, fp) = (lead / &g, &c / &g);
        for v in row.values_mut() {
            *v = &*v * &fr;
        }
        for (k, v) in p {
            let e = row.entry(*k).or_insert_with(BigInt::zero);
            *e = &*e - v * &fp;
        }
        normalize_int(row);
    }

    pub fn insert(&mut self, mut row: IntRow) {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        for col in pivots {
            if row.contains_key(&col) {
                IntRref::eliminate(&mut row, col, &self.rows[&col]);
            }
        }
        let Some((&piv, _)) = row.iter().next() else {
            return;
        };
        normalize_int(&mut row);
        for r in self.rows.values_mut() {
            if r.contains_key(&piv) {
                IntRref::eliminate(r, piv, &row);
            }
        }
        self.rows.insert(piv, row);
    }

    /// Kernel vectors, one per free column, with the free column set to 1.
    pub fn kernel(&self, ncols: usize) -> Vec<(usize, BTreeMap<usize, Rat>)> {
        let free: Vec<usize> = (0..ncols).filter(|c| !self.rows.contains_key(c)).collect();
        free.into_iter()
            .map(|f| {
                let mut v = BTreeMap::new();
                v.insert(f, Rat::one());
                for (&p, r) in &self.rows {
                    if let Some(x) = r.get(&f) {
                        let val = Rat::new(-x.clone(), r[&p].clone()).expect("pivot nonzero");
                        v.insert(p, val);
                    }
                }
                (f, v)
            })
            .collect()
    }
}

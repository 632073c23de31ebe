//! Solves for every bracket on μ₀ⁿ compatible with the δ-Poisson or the
//! transposed δ-Poisson identity: a linear system in the structure constants,
//! then Jacobi handled by forced-zero closure.

mod linear;

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::{check_identity, pair_index, Bracket, CommAlgebra, IdentityKind, PoissonPair};
use crate::error::{Error, Result};
use crate::exactnum::{registry, MPoly, Rat, Registry};
use crate::families::{family_bracket, Delta, FamilyTag};
use crate::linalg::{express, rref};
use crate::nullfiliform::mu0;
use linear::{dedup_rows, primitive, IntRref};

/// Unknown c_{i,j,t}: coefficient of e_t in [e_i, e_j], i < j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Unknown {
    pub i: usize,
    pub j: usize,
    pub t: usize,
}

impl Unknown {
    pub fn name(&self) -> String {
        format!("c_{{{},{},{}}}", self.i, self.j, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    /// Basis triple (x, y, z) and output coordinate the row came from.
    pub provenance: (usize, usize, usize, usize),
    pub coeffs: Vec<(usize, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub n: usize,
    pub delta: Rat,
    pub kind: IdentityKind,
    pub unknowns: Vec<Unknown>,
    pub rows: Vec<Row>,
}

type Form = BTreeMap<usize, Rat>;

fn add_form(acc: &mut Form, f: &Form, c: &Rat) {
    if c.is_zero() {
        return;
    }
    for (k, v) in f {
        let e = acc.entry(*k).or_insert_with(Rat::zero);
        *e = &*e + &(v * c);
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

struct Ansatz<'a> {
    n: usize,
    base: &'a CommAlgebra<Rat>,
}

impl Ansatz<'_> {
    fn unknown_index(&self, i: usize, j: usize, t: usize) -> usize {
        pair_index(self.n, i, j) * self.n + (t - 1)
    }

    /// [e_a, e_b] as one linear form per coordinate.
    fn br(&self, a: usize, b: usize) -> Vec<Form> {
        (1..=self.n)
            .map(|t| {
                let mut f = Form::new();
                if a < b {
                    f.insert(self.unknown_index(a, b, t), Rat::one());
                } else if a > b {
                    f.insert(self.unknown_index(b, a, t), Rat::from(-1));
                }
                f
            })
            .collect()
    }

    /// [u, v] for constant vectors u, v.
    fn br_vecs(&self, u: &[Rat], v: &[Rat]) -> Vec<Form> {
        let mut out = vec![Form::new(); self.n];
        for (a, ua) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, vb) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let c = ua * vb;
                for (o, f) in out.iter_mut().zip(self.br(a + 1, b + 1)) {
                    add_form(o, &f, &c);
                }
            }
        }
        out
    }

    /// e_z · F for a vector of forms F.
    fn mul_basis(&self, z: usize, forms: &[Form]) -> Vec<Form> {
        let mut out = vec![Form::new(); self.n];
        for (u, fu) in forms.iter().enumerate() {
            if fu.is_empty() {
                continue;
            }
            for (t, c) in self.base.product(z, u + 1).iter().enumerate() {
                add_form(&mut out[t], fu, c);
            }
        }
        out
    }
}

fn e(n: usize, i: usize) -> Vec<Rat> {
    crate::algebra::basis_vector(n, i)
}

/// Linear system for brackets on a given commutative base algebra.
pub fn assemble_for(base: &CommAlgebra<Rat>, delta: &Rat, kind: IdentityKind) -> Result<LinearSystem> {
    let n = base.dim();
    if n < 2 {
        return Err(Error::Domain("the bracket ansatz needs n >= 2".into()));
    }
    if !matches!(kind, IdentityKind::Transposed | IdentityKind::DeltaPoisson) {
        return Err(Error::UnsupportedMode(format!(
            "solving supports transposed and delta_poisson, not {kind}"
        )));
    }
    let ans = Ansatz { n, base };
    let mut unknowns = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for t in 1..=n {
                unknowns.push(Unknown { i, j, t });
            }
        }
    }
    let mut raw = Vec::new();
    for x in 1..=n {
        for y in 1..=n {
            for z in 1..=n {
                let mut lhs = vec![Form::new(); n];
                let minus = Rat::from(-1);
                match kind {
                    IdentityKind::Transposed => {
                        // δ z·[x,y] - [z·x, y] - [x, z·y]
                        for (o, f) in lhs.iter_mut().zip(ans.mul_basis(z, &ans.br(x, y))) {
                            add_form(o, &f, delta);
                        }
                        for (o, f) in lhs.iter_mut().zip(ans.br_vecs(base.product(z, x), &e(n, y))) {
                            add_form(o, &f, &minus);
                        }
                        for (o, f) in lhs.iter_mut().zip(ans.br_vecs(&e(n, x), base.product(z, y))) {
                            add_form(o, &f, &minus);
                        }
                    }
                    _ => {
                        // [x, y·z] - δ([x,y]·z + y·[x,z])
                        let md = -delta;
                        for (o, f) in lhs.iter_mut().zip(ans.br_vecs(&e(n, x), base.product(y, z))) {
                            add_form(o, &f, &Rat::one());
                        }
                        for (o, f) in lhs.iter_mut().zip(ans.mul_basis(z, &ans.br(x, y))) {
                            add_form(o, &f, &md);
                        }
                        for (o, f) in lhs.iter_mut().zip(ans.mul_basis(y, &ans.br(x, z))) {
                            add_form(o, &f, &md);
                        }
                    }
                }
                for (t, f) in lhs.into_iter().enumerate() {
                    if !f.is_empty() {
                        raw.push(((x, y, z, t + 1), primitive(&f)));
                    }
                }
            }
        }
    }
    let rows = dedup_rows(raw)
        .into_iter()
        .map(|(p, r)| Row {
            provenance: p,
            coeffs: r.into_iter().map(|(k, v)| (k, Rat::from(v))).collect(),
        })
        .collect();
    Ok(LinearSystem {
        n,
        delta: delta.clone(),
        kind,
        unknowns,
        rows,
    })
}

/// Linear system on μ₀ⁿ. A symbolic δ is rejected: use verify mode instead.
pub fn assemble(n: usize, delta: &Delta, kind: IdentityKind) -> Result<LinearSystem> {
    let d = match delta {
        Delta::Value(d) => d,
        Delta::Symbolic => {
            return Err(Error::UnsupportedMode(
                "solve needs a rational delta; check candidate families with verify for symbolic delta".into(),
            ))
        }
    };
    assemble_for(&mu0(n)?, d, kind)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSpace {
    pub n: usize,
    pub delta: Rat,
    pub kind: IdentityKind,
    pub free: Vec<String>,
    #[serde(with = "basis_wire")]
    pub basis: Vec<Bracket<Rat>>,
    pub residual_conditions: Vec<MPoly>,
    pub forced: Vec<String>,
}

mod basis_wire {
    use super::*;
    use serde::{Deserializer, Serializer};

    type Wire = Vec<IndexMap<String, IndexMap<String, Rat>>>;

    pub fn serialize<S: Serializer>(b: &[Bracket<Rat>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Wire = b.iter().map(crate::algebra::json_bracket_to_wire).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Bracket<Rat>>, D::Error> {
        let w = Wire::deserialize(d)?;
        let n = w
            .iter()
            .flat_map(|m| m.keys())
            .filter_map(|k| k.split(',').filter_map(|x| x.trim().parse::<usize>().ok()).max())
            .chain(w.iter().flat_map(|m| {
                m.values()
                    .flat_map(|v| v.keys().filter_map(|k| k.parse::<usize>().ok()))
            }))
            .max()
            .unwrap_or(0);
        w.into_iter()
            .map(|m| crate::algebra::json_bracket_from_wire(n, m))
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)
    }
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    pub fn registry(&self) -> Registry {
        registry(&self.free)
    }

    /// Σ p_k B_k with the free parameters as polynomial variables.
    pub fn parametrized(&self) -> Bracket<MPoly> {
        let reg = self.registry();
        let vars = MPoly::vars_of(&reg);
        let mut out: Bracket<MPoly> = Bracket::zero(self.n);
        for (p, b) in vars.iter().zip(&self.basis) {
            for (i, j) in b.pairs() {
                let cur = out.entry(i, j).to_vec();
                let next: Vec<MPoly> = cur
                    .into_iter()
                    .zip(b.entry(i, j))
                    .map(|(c, x)| c + &p.scale(x))
                    .collect();
                out.set(i, j, next).expect("same dimension");
            }
        }
        out
    }

    /// The parametrized bracket on μ₀ⁿ with rational δ.
    pub fn parametrized_pair(&self) -> Result<PoissonPair<MPoly>> {
        PoissonPair::new(mu0(self.n)?, self.parametrized(), MPoly::constant(self.delta.clone()))
    }

    pub fn is_zero_space(&self) -> bool {
        self.basis.iter().all(Bracket::is_zero)
    }
}

/// Exact kernel of the homogeneous system; free unknowns in registry order
/// become the parameters p1, p2, ...
pub fn nullspace(sys: &LinearSystem) -> SolutionSpace {
    let mut ech = IntRref::default();
    for row in &sys.rows {
        let r: BTreeMap<usize, Rat> = row.coeffs.iter().cloned().collect();
        ech.insert(primitive(&r));
    }
    let n = sys.n;
    let kernel = ech.kernel(sys.unknowns.len());
    let mut free = Vec::new();
    let mut basis = Vec::new();
    for (k, (_, vec)) in kernel.into_iter().enumerate() {
        free.push(format!("p{}", k + 1));
        let mut b: Bracket<Rat> = Bracket::zero(n);
        let mut entries: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
        for (u, v) in vec {
            let un = sys.unknowns[u];
            entries.entry((un.i, un.j)).or_insert_with(|| vec![Rat::zero(); n])[un.t - 1] = v;
        }
        for ((i, j), v) in entries {
            b.set(i, j, v).expect("valid entry");
        }
        basis.push(b);
    }
    SolutionSpace {
        n,
        delta: sys.delta.clone(),
        kind: sys.kind,
        free,
        basis,
        residual_conditions: Vec::new(),
        forced: Vec::new(),
    }
}

/// Distinct nonzero polynomials, each scaled to leading coefficient 1.
fn distinct_monic(polys: impl IntoIterator<Item = MPoly>) -> Vec<MPoly> {
    let mut out: Vec<MPoly> = Vec::new();
    for p in polys {
        let Some(lc) = p.leading_coeff().cloned() else {
            continue;
        };
        let m = p.scale(&lc.inv().expect("nonzero"));
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// Applies the Jacobi identity to the parametrized bracket and closes under
/// the forced-zero rule c·p^k = 0 ⇒ p = 0. Whatever is left is returned as
/// residual conditions.
pub fn jacobi_reduce(space: &SolutionSpace) -> Result<SolutionSpace> {
    let mut cur = space.clone();
    loop {
        let pair = PoissonPair::new(
            CommAlgebra::zero(cur.n),
            cur.parametrized(),
            MPoly::constant(cur.delta.clone()),
        )?;
        let rep = check_identity(&pair, IdentityKind::Jacobi);
        let residuals = distinct_monic(rep.residuals.into_iter().map(|r| r.value));
        let mut forced: Vec<String> = residuals
            .iter()
            .filter_map(|p| p.single_power().filter(|(_, k)| *k > 0).map(|(v, _)| v))
            .collect();
        forced.sort_by_key(|v| cur.free.iter().position(|f| f == v));
        forced.dedup();
        if forced.is_empty() {
            cur.residual_conditions = residuals;
            return Ok(cur);
        }
        let (free, basis): (Vec<String>, Vec<Bracket<Rat>>) = cur
            .free
            .iter()
            .cloned()
            .zip(cur.basis.iter().cloned())
            .filter(|(f, _)| !forced.contains(f))
            .unzip();
        cur.free = free;
        cur.basis = basis;
        cur.forced.extend(forced.into_iter().map(|v| format!("{v}=0")));
    }
}

pub fn solve(n: usize, delta: &Rat, kind: IdentityKind) -> Result<SolutionSpace> {
    let sys = assemble(n, &Delta::Value(delta.clone()), kind)?;
    jacobi_reduce(&nullspace(&sys))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum MatchReport {
    /// Each free parameter of the space as a linear form in the family's α's.
    Match {
        substitution: Vec<(String, MPoly)>,
    },
    Mismatch {
        pair: (usize, usize),
        coord: usize,
        reason: String,
    },
    Inconclusive {
        reason: String,
    },
}

impl MatchReport {
    pub fn is_match(&self) -> bool {
        matches!(self, MatchReport::Match { .. })
    }
}

fn flatten(b: &Bracket<Rat>) -> Vec<Rat> {
    b.pairs().flat_map(|(i, j)| b.entry(i, j).to_vec()).collect()
}

/// First coordinate where `target` leaves the span of `vectors`.
fn off_span_coord(vectors: &[Vec<Rat>], target: &[Rat]) -> Option<usize> {
    let (red, pivots) = rref(vectors.to_vec());
    let mut rem = target.to_vec();
    for (row, &p) in red.iter().zip(&pivots) {
        let c = rem[p].clone();
        if c.is_zero() {
            continue;
        }
        for (x, y) in rem.iter_mut().zip(row) {
            *x = x.clone() - &(&c * y);
        }
    }
    rem.iter().position(|x| !x.is_zero())
}

/// Decides whether the space equals the family (at the space's δ) up to an
/// invertible linear change of parameters.
pub fn match_family(space: &SolutionSpace, tag: FamilyTag, n: usize) -> Result<MatchReport> {
    match_family_with(space, tag, n, &[])
}

/// As `match_family`, with the parameters α_t for t in `fixed_zero` set to 0.
pub fn match_family_with(space: &SolutionSpace, tag: FamilyTag, n: usize, fixed_zero: &[usize]) -> Result<MatchReport> {
    if n != space.n {
        return Err(Error::DimensionMismatch {
            expected: space.n,
            found: n,
        });
    }
    if !space.residual_conditions.is_empty() {
        return Ok(MatchReport::Inconclusive {
            reason: format!(
                "{} unresolved Jacobi conditions remain",
                space.residual_conditions.len()
            ),
        });
    }
    let idx = tag.alpha_indices(n)?;
    if let Some(t) = fixed_zero.iter().find(|t| !idx.contains(t)) {
        return Err(Error::Domain(format!("{tag} with n = {n} has no parameter alpha_{t}")));
    }
    let active: Vec<usize> = (0..idx.len()).filter(|&j| !fixed_zero.contains(&idx[j])).collect();
    let fam: Vec<Vec<Rat>> = active
        .iter()
        .map(|&j| {
            let mut a = vec![Rat::zero(); idx.len()];
            a[j] = Rat::one();
            family_bracket(tag, n, &space.delta, &a).map(|b| flatten(&b))
        })
        .collect::<Result<_>>()?;
    let sp: Vec<Vec<Rat>> = space.basis.iter().map(flatten).collect();
    let pairs: Vec<(usize, usize)> = Bracket::<Rat>::zero(n).pairs().collect();
    let witness = |flat: usize, reason: String| MatchReport::Mismatch {
        pair: pairs[flat / n],
        coord: flat % n + 1,
        reason,
    };
    let all_names = crate::families::alpha_names(tag, n)?;
    let names: Vec<String> = active.iter().map(|&j| all_names[j].clone()).collect();
    let mut cols = Vec::new();
    for (j, f) in fam.iter().enumerate() {
        match express(&sp, f) {
            Some(c) => cols.push(c),
            None => {
                let at = off_span_coord(&sp, f).expect("outside span");
                return Ok(witness(at, format!("{} direction not in the solved space", names[j])));
            }
        }
    }
    for (kk, b) in sp.iter().enumerate() {
        if express(&fam, b).is_none() {
            let at = off_span_coord(&fam, b).expect("outside span");
            return Ok(witness(at, format!("{} direction not in the family", space.free[kk])));
        }
    }
    if sp.len() != fam.len() {
        return Ok(MatchReport::Inconclusive {
            reason: "spans agree but parameter counts differ".into(),
        });
    }
    let reg = registry(&names);
    let alphas = MPoly::vars_of(&reg);
    let substitution = space
        .free
        .iter()
        .enumerate()
        .map(|(kk, p)| {
            let form = cols
                .iter()
                .zip(&alphas)
                .fold(MPoly::zero(), |acc, (c, a)| acc + &a.scale(&c[kk]));
            (p.clone(), form)
        })
        .collect();
    Ok(MatchReport::Match { substitution })
}

/// Rational specialization of a polynomial assignment, used by callers that
/// evaluate residual conditions.
pub fn evaluate(p: &MPoly, values: &HashMap<String, Rat>) -> Result<MPoly> {
    p.substitute_rat(values)
}

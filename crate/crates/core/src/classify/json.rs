use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::canon::{CanonicalForm, IsoDecision, IsoWitness};
use crate::exactnum::{RadExt, Rat};
use crate::families::FamilyTag;
use crate::nullfiliform::Automorphism;

#[derive(Serialize, Deserialize)]
struct RadicalWire {
    m: u32,
    q: Rat,
}

#[derive(Serialize, Deserialize)]
struct WitnessWire {
    steps: Vec<Vec<RadExt>>,
    total: Vec<RadExt>,
}

impl Serialize for IsoWitness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WitnessWire {
            steps: self.steps.iter().map(|a| a.params().to_vec()).collect(),
            total: self.total.params().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IsoWitness {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<IsoWitness, D::Error> {
        let w = WitnessWire::deserialize(d)?;
        let n = w.total.len();
        let steps = w
            .steps
            .into_iter()
            .map(Automorphism::new)
            .collect::<crate::Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let wit = IsoWitness::from_steps(n, steps).map_err(D::Error::custom)?;
        if wit.total.params() != &w.total[..] {
            return Err(D::Error::custom("witness total is not the composition of its steps"));
        }
        Ok(wit)
    }
}

#[derive(Serialize, Deserialize)]
struct CanonicalWire {
    tag: FamilyTag,
    n: usize,
    delta: Rat,
    alphas: Vec<RadExt>,
    #[serde(default)]
    label: String,
    radical: Option<RadicalWire>,
    witness: IsoWitness,
    #[serde(default)]
    notes: Vec<String>,
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CanonicalWire {
            tag: self.tag,
            n: self.n,
            delta: self.delta.clone(),
            alphas: self.alphas.clone(),
            label: self.label(),
            radical: self.radical().map(|(m, q)| RadicalWire { m, q }),
            witness: self.witness.clone(),
            notes: self.notes.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<CanonicalForm, D::Error> {
        let w = CanonicalWire::deserialize(d)?;
        Ok(CanonicalForm {
            tag: w.tag,
            n: w.n,
            delta: w.delta,
            alphas: w.alphas,
            witness: w.witness,
            notes: w.notes,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
enum DecisionWire {
    Isomorphic { witness: Option<IsoWitness> },
    NotIsomorphic { reason: String },
    Inconclusive { reason: String },
}

impl Serialize for IsoDecision {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            IsoDecision::Isomorphic(w) => DecisionWire::Isomorphic { witness: w.clone() },
            IsoDecision::NotIsomorphic(r) => DecisionWire::NotIsomorphic { reason: r.clone() },
            IsoDecision::Inconclusive(r) => DecisionWire::Inconclusive { reason: r.clone() },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IsoDecision {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<IsoDecision, D::Error> {
        Ok(match DecisionWire::deserialize(d)? {
            DecisionWire::Isomorphic { witness } => IsoDecision::Isomorphic(witness),
            DecisionWire::NotIsomorphic { reason } => IsoDecision::NotIsomorphic(reason),
            DecisionWire::Inconclusive { reason } => IsoDecision::Inconclusive(reason),
        })
    }
}

//! The polynomials `Q_ij(u, v)` entering the quadratic relation.

use std::collections::BTreeMap;

use pdklr_core::{CartanDatum, Residue};
use serde::{Deserialize, Serialize};

use crate::EngineError;

/// `(p, q, c)` standing for `c u^p v^q`.
pub type QTerm = (u32, u32, i64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QChoice {
    /// Keyed by ordered pairs `(i, j)`, `i != j`; both orders are stored.
    polys: BTreeMap<(Residue, Residue), Vec<QTerm>>,
}

/// One unordered entry as given in configuration: the terms of `Q_ij` for `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QEntry {
    pub i: String,
    pub j: String,
    pub terms: Vec<QTerm>,
}

fn normalize(terms: &[QTerm]) -> Vec<QTerm> {
    let mut acc: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for &(p, q, c) in terms {
        *acc.entry((p, q)).or_default() += c;
    }
    acc.into_iter().filter(|(_, c)| *c != 0).map(|((p, q), c)| (p, q, c)).collect()
}

impl QChoice {
    /// `Q_ij = u^{-a_ij} + v^{-a_ji}` when `a_ij != 0`, and `Q_ij = 1` otherwise.
    pub fn standard(datum: &CartanDatum) -> Self {
        let n = datum.rank();
        let mut polys = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let terms = if datum.a(i, j) == 0 {
                    vec![(0, 0, 1)]
                } else {
                    normalize(&[((-datum.a(i, j)) as u32, 0, 1), (0, (-datum.a(j, i)) as u32, 1)])
                };
                polys.insert((i, j), terms);
            }
        }
        Self { polys }
    }

    /// Starts from [`QChoice::standard`] and overrides the listed pairs.
    pub fn from_entries(datum: &CartanDatum, entries: &[QEntry]) -> Result<Self, EngineError> {
        let mut out = Self::standard(datum);
        for e in entries {
            let i = datum.residue(&e.i)?;
            let j = datum.residue(&e.j)?;
            if i == j {
                return Err(EngineError::BadQ(format!("Q_{{{},{}}} is fixed to 0", e.i, e.j)));
            }
            let terms = normalize(&e.terms);
            let swapped = normalize(&terms.iter().map(|&(p, q, c)| (q, p, c)).collect::<Vec<_>>());
            out.polys.insert((i, j), terms);
            out.polys.insert((j, i), swapped);
        }
        out.validate(datum, 0)?;
        Ok(out)
    }

    /// Terms of `Q_ij(u, v)`; empty when `i == j`.
    pub fn terms(&self, i: Residue, j: Residue) -> &[QTerm] {
        self.polys.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Checks symmetry, homogeneity and that the leading coefficient is a unit
    /// in characteristic `p` (`0` for the rationals).
    pub fn validate(&self, datum: &CartanDatum, p: u64) -> Result<(), EngineError> {
        let n = datum.rank();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let t = self.terms(i, j);
                let mut tr: Vec<QTerm> = self.terms(j, i).iter().map(|&(p, q, c)| (q, p, c)).collect();
                tr.sort();
                if normalize(t) != tr {
                    return Err(EngineError::BadQ(format!("Q_{i}{j}(u,v) != Q_{j}{i}(v,u)")));
                }
                for &(pp, qq, _) in t {
                    if datum.d(i) * pp as i64 + datum.d(j) * qq as i64 != -datum.d(i) * datum.a(i, j) {
                        return Err(EngineError::BadQ(format!("Q_{i}{j} has inhomogeneous term u^{pp} v^{qq}")));
                    }
                }
                let lead = t.iter().find(|&&(pp, qq, _)| pp as i64 == -datum.a(i, j) && qq == 0).map(|t| t.2).unwrap_or(0);
                let unit = if p == 0 { lead != 0 } else { lead.rem_euclid(p as i64) != 0 };
                if !unit {
                    return Err(EngineError::BadQ(format!("leading coefficient of Q_{i}{j} is not a unit")));
                }
            }
        }
        Ok(())
    }

    pub fn fingerprint(&self) -> String {
        format!("{:?}", self.polys)
    }
}

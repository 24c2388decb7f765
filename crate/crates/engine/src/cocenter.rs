//! Cocenter `Tr(A) = A / [A, A]` and center `Z(A)` of a cyclotomic quotient.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::Element;
use crate::field::Field;
use crate::linalg::Echelon;
use crate::quotient::GradedQuotient;
use crate::EngineError;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DegreeDims {
    pub degree: i64,
    pub dim_a: usize,
    pub dim_tr: usize,
    pub dim_z: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CocenterReport {
    pub field: String,
    pub d_lambda_alpha: i64,
    pub degrees: Vec<DegreeDims>,
    /// Smallest and largest degree with `Tr` nonzero.
    pub tr_support: Option<(i64, i64)>,
    pub support_ok: bool,
    pub duality_ok: bool,
    pub dim_tr_top: usize,
}

/// Coordinates of an element's image in the cocenter basis of its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrClass<E> {
    pub degree: i64,
    pub coords: Vec<E>,
}

impl<E> TrClass<E> {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CommutatorSpan {
    /// `[g, b]` for algebra generators `g` and quotient basis `b`.
    #[default]
    Generators,
    /// `[b, b']` for all pairs of quotient basis elements.
    AllPairs,
}

#[derive(Debug)]
pub struct Cocenter<F: Field> {
    pub quotient: GradedQuotient<F>,
    comm: BTreeMap<i64, Echelon<F>>,
    z_dims: BTreeMap<i64, usize>,
}

fn commutator<F: Field>(q: &GradedQuotient<F>, a: &Element, b: &Element) -> Element {
    let k = &q.klr;
    k.mul(a, b).unwrap().minus(&k.mul(b, a).unwrap())
}

impl<F: Field> Cocenter<F> {
    pub fn build(quotient: GradedQuotient<F>) -> Self {
        Self::build_with(quotient, CommutatorSpan::Generators)
    }

    pub fn build_with(quotient: GradedQuotient<F>, span: CommutatorSpan) -> Self {
        let q = &quotient;
        let k = &q.klr;
        let f = &q.field;
        let mut gens: Vec<(Element, i64)> = Vec::new();
        for nu in 0..k.sequences().len() as u32 {
            let mut list = vec![k.idempotent(nu)];
            list.extend((0..k.n()).map(|j| k.x(j, nu)));
            list.extend((0..k.n().saturating_sub(1)).map(|l| k.tau(l, nu)));
            for g in list {
                if let Some(d) = k.homogeneous_degree(&g) {
                    gens.push((g, d));
                }
            }
        }
        let mut comm: BTreeMap<i64, Echelon<F>> =
            q.pieces().map(|p| (p.degree, Echelon::new(f.clone(), p.dim()))).collect();
        let mut z_dims = BTreeMap::new();
        // Column offsets of each generator's target block in the centralizer system.
        for p in q.pieces() {
            let d = p.degree;
            let mut offsets = Vec::with_capacity(gens.len());
            let mut total = 0;
            for (_, dg) in &gens {
                offsets.push(total);
                total += q.dim(d + dg);
            }
            let mut centralizer = Echelon::new(f.clone(), total);
            for i in 0..p.dim() {
                let b = q.basis_element(d, i);
                let mut row = Vec::new();
                for (gi, (g, dg)) in gens.iter().enumerate() {
                    let target = d + dg;
                    if q.dim(target) == 0 {
                        continue;
                    }
                    let c = q.reduce_in_degree(target, &commutator(q, g, &b));
                    if span == CommutatorSpan::Generators {
                        comm.get_mut(&target).unwrap().insert(c.iter().cloned().enumerate());
                    }
                    row.extend(c.into_iter().enumerate().map(|(j, v)| (offsets[gi] + j, v)));
                }
                centralizer.insert(row);
            }
            z_dims.insert(d, p.dim() - centralizer.rank());
        }
        if span == CommutatorSpan::AllPairs {
            let pieces: Vec<(i64, usize)> = q.pieces().map(|p| (p.degree, p.dim())).collect();
            for &(d1, n1) in &pieces {
                for &(d2, n2) in &pieces {
                    if d2 < d1 || q.dim(d1 + d2) == 0 {
                        continue;
                    }
                    for i in 0..n1 {
                        for j in 0..n2 {
                            let c = commutator(q, &q.basis_element(d1, i), &q.basis_element(d2, j));
                            let v = q.reduce_in_degree(d1 + d2, &c);
                            comm.get_mut(&(d1 + d2)).unwrap().insert(v.into_iter().enumerate());
                        }
                    }
                }
            }
        }
        Self { quotient, comm, z_dims }
    }

    pub fn defect(&self) -> i64 {
        let q = &self.quotient;
        q.klr.datum().defect_degree(&q.lambda, q.klr.beta())
    }

    pub fn dim_tr(&self, d: i64) -> usize {
        self.comm.get(&d).map(|e| e.ncols() - e.rank()).unwrap_or(0)
    }

    pub fn dim_z(&self, d: i64) -> usize {
        self.z_dims.get(&d).copied().unwrap_or(0)
    }

    /// Coordinates of a quotient vector of degree `d` in the cocenter basis.
    pub fn class_of_coords(&self, d: i64, v: &[F::Elem]) -> TrClass<F::Elem> {
        match self.comm.get(&d) {
            Some(e) => TrClass { degree: d, coords: e.normal_form(v) },
            None => TrClass { degree: d, coords: Vec::new() },
        }
    }

    pub fn class_of(&self, e: &Element) -> Result<TrClass<F::Elem>, EngineError> {
        let q = &self.quotient;
        let (lo, hi) = q.window;
        let d = match q.klr.homogeneous_degree(e) {
            Some(d) => d,
            None if e.is_zero() => return Ok(TrClass { degree: 0, coords: vec![q.field.zero(); self.dim_tr(0)] }),
            None => return Err(EngineError::NotHomogeneous),
        };
        if d < lo || d > hi {
            return Err(EngineError::OutsideWindow { degree: d, lo, hi });
        }
        let (_, v) = q.reduce(e)?.unwrap();
        Ok(self.class_of_coords(d, &v))
    }

    pub fn is_zero_class(&self, c: &TrClass<F::Elem>) -> bool {
        c.coords.iter().all(|x| self.quotient.field.is_zero(x))
    }

    /// Representatives of a cocenter basis in degree `d`.
    pub fn tr_basis(&self, d: i64) -> Vec<Element> {
        let Some(e) = self.comm.get(&d) else { return Vec::new() };
        let p = self.quotient.piece(d).unwrap();
        e.free_columns().into_iter().map(|c| self.quotient.klr.monomial(p.columns[p.basis[c]])).collect()
    }

    pub fn report(&self) -> CocenterReport {
        let q = &self.quotient;
        let defect = self.defect();
        let degrees: Vec<DegreeDims> = q
            .pieces()
            .map(|p| DegreeDims { degree: p.degree, dim_a: p.dim(), dim_tr: self.dim_tr(p.degree), dim_z: self.dim_z(p.degree) })
            .collect();
        let nz: Vec<i64> = degrees.iter().filter(|d| d.dim_tr > 0).map(|d| d.degree).collect();
        let tr_support = nz.first().map(|&a| (a, *nz.last().unwrap()));
        let support_ok = nz.iter().all(|&d| (0..=defect).contains(&d));
        let (lo, hi) = q.window;
        let duality_ok = (lo.min(defect - hi)..=hi.max(defect - lo)).all(|j| self.dim_tr(j) == self.dim_z(defect - j));
        CocenterReport {
            field: q.field.name(),
            d_lambda_alpha: defect,
            degrees,
            tr_support,
            support_ok,
            duality_ok,
            dim_tr_top: self.dim_tr(defect),
        }
    }
}

//! Degreewise construction of the cyclotomic quotient `R^Lambda_beta`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use pdklr_core::gdim::graded_dim_algebra_bounded;
use pdklr_core::{DominantWeight, LaurentPoly};

use crate::algebra::{Element, Klr, Mono, MAX_N};
use crate::field::Field;
use crate::linalg::Echelon;
use crate::EngineError;

#[derive(Debug, Clone)]
pub struct QuotientOptions {
    /// Largest accepted height of `beta`.
    pub max_n: usize,
    /// Stop feeding ideal rows into a degree once its rank matches the formula.
    pub early_stop: bool,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        Self { max_n: 4, early_stop: false }
    }
}

#[derive(Debug, Clone)]
pub struct Piece<F: Field> {
    pub degree: i64,
    pub columns: Vec<Mono>,
    index: HashMap<Mono, usize>,
    pub ideal: Echelon<F>,
    /// Free columns, i.e. the quotient basis.
    pub basis: Vec<usize>,
}

impl<F: Field> Piece<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug)]
pub struct GradedQuotient<F: Field> {
    pub klr: Klr,
    pub lambda: DominantWeight,
    pub field: F,
    pub gdim: LaurentPoly,
    pub window: (i64, i64),
    pieces: BTreeMap<i64, Piece<F>>,
    /// Ideal rows processed, per degree.
    pub rows: BTreeMap<i64, usize>,
}

/// `x_1^{<h_{nu_1}, Lambda>} e(nu) tau_1 ... tau_k` left-multiplied by every `tau_u`.
fn ideal_generators(klr: &Klr, lambda: &DominantWeight) -> Result<Vec<(Element, i64)>, EngineError> {
    let n = klr.n();
    let mut out = Vec::new();
    for nu in 0..klr.sequences().len() as u32 {
        let seq = &klr.sequences()[nu as usize];
        let m = lambda.coords[seq[0]];
        let mut x = [0u8; MAX_N];
        x[0] = u8::try_from(m).map_err(|_| EngineError::ExponentTooLarge(m as u32))?;
        for k in 0..n {
            let word: Vec<usize> = (0..k).collect();
            let a = pdklr_core::Permutation::from_word(n, &word);
            let right = a.inverse().act(seq);
            let g = klr.monomial(Mono { nu: klr.seq_id(&right)?, w: klr.perm_id(&a), x });
            for u in 0..klr.num_perms() as u32 {
                let mut cur = g.clone();
                for &l in klr.canonical_word(u).iter().rev() {
                    cur = klr.left_mul_tau(l, &cur);
                }
                if let Some(d) = klr.homogeneous_degree(&cur) {
                    out.push((cur, d));
                }
            }
        }
    }
    Ok(out)
}

impl<F: Field> GradedQuotient<F> {
    pub fn build(klr: Klr, lambda: &DominantWeight, field: F, opts: &QuotientOptions) -> Result<Self, EngineError> {
        let n = klr.n();
        if n > opts.max_n {
            return Err(EngineError::TooLarge { n, max: opts.max_n });
        }
        klr.qchoice().validate(klr.datum(), field.characteristic())?;
        let gdim = graded_dim_algebra_bounded(klr.datum(), lambda, klr.beta(), MAX_N)
            .map_err(|_| EngineError::TooLarge { n, max: MAX_N })?;
        let lo = klr.min_degree();
        let hi = if gdim.is_zero() { 0 } else { gdim.max_degree().unwrap() };
        let gens = ideal_generators(&klr, lambda)?;
        let mut pieces = BTreeMap::new();
        let mut rows = BTreeMap::new();
        for d in lo..=hi {
            let mut columns = klr.monomials_of_degree(d);
            columns.sort_by_key(|m| (Reverse(m.x.iter().map(|&e| e as u32).sum::<u32>()), Reverse(m.x), m.w, m.nu));
            let index: HashMap<Mono, usize> = columns.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let expected = gdim.coeff(d);
            let target_rank = columns.len() as i64 - expected;
            let mut ideal = Echelon::new(field.clone(), columns.len());
            let mut count = 0;
            'gens: for (g, dg) in &gens {
                if *dg > d {
                    continue;
                }
                let first = g.terms().next().unwrap().0;
                let mu = &klr.sequences()[klr.left_idem(first) as usize];
                let weights: Vec<i64> = mu.iter().map(|&i| klr.datum().norm(i)).collect();
                let mut shifts = Vec::new();
                let mut x = [0u8; MAX_N];
                klr.fill_exps(&weights, 0, d - dg, &mut x, &mut |x| shifts.push(*x));
                for s in shifts {
                    if opts.early_stop && ideal.rank() as i64 == target_rank {
                        break 'gens;
                    }
                    let row = klr.left_mul_x(&s, g);
                    count += 1;
                    ideal.insert(row.terms().map(|(m, c)| (index[m], field.from_i64(c))));
                }
            }
            let basis = ideal.free_columns();
            if basis.len() as i64 != expected {
                return Err(EngineError::OracleMismatch { degree: d, got: basis.len(), expected });
            }
            rows.insert(d, count);
            pieces.insert(d, Piece { degree: d, columns, index, ideal, basis });
        }
        Ok(Self { klr, lambda: lambda.clone(), field, gdim, window: (lo, hi), pieces, rows })
    }

    pub fn piece(&self, d: i64) -> Option<&Piece<F>> {
        self.pieces.get(&d)
    }

    pub fn pieces(&self) -> impl Iterator<Item = &Piece<F>> {
        self.pieces.values()
    }

    pub fn dim(&self, d: i64) -> usize {
        self.pieces.get(&d).map(|p| p.dim()).unwrap_or(0)
    }

    pub fn graded_dim(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for piece in self.pieces.values() {
            p.add_term(piece.degree, piece.dim() as i64);
        }
        p
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(|p| p.dim()).sum()
    }

    /// The `i`th quotient basis monomial of degree `d`.
    pub fn basis_element(&self, d: i64, i: usize) -> Element {
        let p = &self.pieces[&d];
        self.klr.monomial(p.columns[p.basis[i]])
    }

    /// Degree and quotient coordinates of a homogeneous element; coordinates
    /// are empty when the degree carries no quotient.
    pub fn reduce(&self, e: &Element) -> Result<Option<(i64, Vec<F::Elem>)>, EngineError> {
        if e.context() != self.klr.context() {
            return Err(EngineError::ContextMismatch);
        }
        if e.is_zero() {
            return Ok(None);
        }
        let d = self.klr.homogeneous_degree(e).ok_or(EngineError::NotHomogeneous)?;
        Ok(Some((d, self.reduce_in_degree(d, e))))
    }

    /// Coordinates of `e`, assumed homogeneous of degree `d`.
    pub fn reduce_in_degree(&self, d: i64, e: &Element) -> Vec<F::Elem> {
        let Some(p) = self.pieces.get(&d) else { return Vec::new() };
        let f = &self.field;
        let mut v = vec![f.zero(); p.columns.len()];
        for (m, c) in e.terms() {
            let i = p.index[m];
            v[i] = f.add(&v[i], &f.from_i64(c));
        }
        p.ideal.normal_form(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::qchoice::QChoice;
    use pdklr_core::{CartanDatum, RootVector};

    fn nh(n: i64, l: i64) -> (Klr, DominantWeight) {
        let d = CartanDatum::family("rank1", 1).unwrap();
        let beta = RootVector::new(&d, vec![n]).unwrap();
        let lam = DominantWeight::new(&d, vec![l]).unwrap();
        (Klr::new(&d, &beta, QChoice::standard(&d)).unwrap(), lam)
    }

    #[test]
    fn nil_hecke_two_two() {
        let (k, lam) = nh(2, 2);
        let q = GradedQuotient::build(k, &lam, Rationals, &QuotientOptions::default()).unwrap();
        assert_eq!(q.graded_dim().to_string(), "q^-2+2+q^2");
        assert_eq!(q.total_dim(), 4);
    }

    #[test]
    fn single_strand_truncated_polynomials() {
        for l in 0..4 {
            let (k, lam) = nh(1, l);
            let q = GradedQuotient::build(k, &lam, PrimeField::new(3).unwrap(), &QuotientOptions::default()).unwrap();
            assert_eq!(q.total_dim(), l as usize);
        }
    }

    #[test]
    fn zero_algebra_in_affine_type() {
        let d = CartanDatum::family("affine-a", 3).unwrap();
        let beta = RootVector::new(&d, vec![1, 2, 0]).unwrap();
        let lam = DominantWeight::new(&d, vec![4, 0, 0]).unwrap();
        let k = Klr::new(&d, &beta, QChoice::standard(&d)).unwrap();
        let q = GradedQuotient::build(k, &lam, Rationals, &QuotientOptions::default()).unwrap();
        assert_eq!(q.total_dim(), 0);
        let one = q.klr.one();
        assert!(q.reduce(&one).unwrap().unwrap().1.is_empty());
    }
}

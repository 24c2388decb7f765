//! Incremental row echelon forms over a [`Field`].

use std::collections::BTreeMap;

use crate::field::Field;

/// Sparse row echelon form: every stored row has leading entry 1 at its pivot
/// column and no entries to the left of it.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    pivots: BTreeMap<usize, Vec<(usize, F::Elem)>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Self { field, ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ncols
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// Adds a sparse row; returns whether the rank grew.
    pub fn insert(&mut self, row: impl IntoIterator<Item = (usize, F::Elem)>) -> bool {
        let f = &self.field;
        let mut r: BTreeMap<usize, F::Elem> = BTreeMap::new();
        for (c, v) in row {
            if f.is_zero(&v) {
                continue;
            }
            let e = r.entry(c).or_insert_with(|| f.zero());
            *e = f.add(e, &v);
            if f.is_zero(e) {
                r.remove(&c);
            }
        }
        while let Some((&lead, coef)) = r.iter().next() {
            let coef = coef.clone();
            match self.pivots.get(&lead) {
                Some(prow) => {
                    for (c, v) in prow {
                        let delta = f.mul(&coef, v);
                        let e = r.entry(*c).or_insert_with(|| f.zero());
                        *e = f.sub(e, &delta);
                        if f.is_zero(e) {
                            r.remove(c);
                        }
                    }
                }
                None => {
                    let inv = f.inv(&coef);
                    let row: Vec<(usize, F::Elem)> = r.into_iter().map(|(c, v)| (c, f.mul(&v, &inv))).collect();
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
        false
    }

    /// Reduces a dense vector in place so that it vanishes on pivot columns.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (&col, row) in &self.pivots {
            if f.is_zero(&v[col]) {
                continue;
            }
            let coef = v[col].clone();
            for (c, x) in row {
                v[*c] = f.sub(&v[*c], &f.mul(&coef, x));
            }
        }
    }

    /// Coordinates of `v` on the free columns after reduction.
    pub fn normal_form(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        self.free_columns().into_iter().map(|c| w[c].clone()).collect()
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn rank_and_reduction() {
        let q = Rationals;
        let mut e = Echelon::new(q, 3);
        assert!(e.insert(vec![(0, q.from_i64(1)), (1, q.from_i64(2))]));
        assert!(e.insert(vec![(0, q.from_i64(2)), (1, q.from_i64(4)), (2, q.from_i64(1))]));
        assert!(!e.insert(vec![(2, q.from_i64(3))]));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.free_columns(), vec![1]);
        let v = vec![q.from_i64(1), q.from_i64(0), q.from_i64(5)];
        assert_eq!(e.normal_form(&v), vec![q.from_i64(-2)]);
        assert!(e.contains(&[q.from_i64(1), q.from_i64(2), q.from_i64(7)]));
    }

    #[test]
    fn characteristic_two_collapses() {
        let f = PrimeField::new(2).unwrap();
        let mut e = Echelon::new(f, 2);
        e.insert(vec![(0, 1), (1, 1)]);
        assert!(!e.insert(vec![(0, 1), (1, 3)]));
    }
}

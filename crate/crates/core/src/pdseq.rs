//! Maximal-run decompositions, piecewise dominance and the `Z(nu)`, `S(nu)`
//! elements attached to a piecewise dominant sequence.

use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanDatum, DominantWeight, Residue, RootVector};
use crate::perm::longest_word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdError {
    #[error("sequence is not piecewise dominant")]
    NotPiecewiseDominant,
    #[error("degree of Z(nu) is {got}, expected {expected}")]
    DegreeMismatch { got: i64, expected: i64 },
}

/// Decomposition of a sequence into maximal constant runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunDecomposition {
    /// `(residue, length)` per run.
    pub runs: Vec<(Residue, usize)>,
    /// Prefix sums `0 = c_0 < c_1 < ... < c_p = n`.
    pub cuts: Vec<usize>,
    /// `l_i = <h_{nu^i}, Lambda - content of the first c_{i-1} entries>`.
    pub ells: Vec<i64>,
}

impl RunDecomposition {
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }
}

pub fn run_decompose(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue]) -> RunDecomposition {
    let mut runs: Vec<(Residue, usize)> = Vec::new();
    for &i in nu {
        match runs.last_mut() {
            Some((r, b)) if *r == i => *b += 1,
            _ => runs.push((i, 1)),
        }
    }
    let mut cuts = vec![0];
    let mut ells = Vec::with_capacity(runs.len());
    let mut prefix = datum.zero_root();
    for &(r, b) in &runs {
        ells.push(datum.pairing(r, lambda, &prefix));
        prefix.coeffs[r] += b as i64;
        cuts.push(cuts.last().unwrap() + b);
    }
    RunDecomposition { runs, cuts, ells }
}

pub fn is_piecewise_dominant(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue]) -> bool {
    let rd = run_decompose(datum, lambda, nu);
    rd.runs.iter().zip(&rd.ells).all(|(&(_, b), &l)| l >= b as i64)
}

/// `lambda_{k,i} = <h_i, Lambda - sum_{j <= k} alpha_{nu_j}>` (1-based `k`).
pub fn lambda_at(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue], k: usize, i: Residue) -> i64 {
    datum.pairing(i, lambda, &datum.content(&nu[..k]))
}

/// Maximal witness positions, 1-based as `c_{i-1} + 1 <= k_i <= c_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PdWitness {
    pub k: Vec<usize>,
}

/// Decides piecewise dominance position by position: run `i` is good when
/// some `k` in it has `<h_{nu_k}, Lambda - sum_{j<k} alpha_{nu_j}> >= c_i - k + 1`.
pub fn check_via_criterion(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue]) -> (bool, Option<PdWitness>) {
    let rd = run_decompose(datum, lambda, nu);
    let mut ks = Vec::with_capacity(rd.len());
    for i in 0..rd.len() {
        let (lo, hi) = (rd.cuts[i] + 1, rd.cuts[i + 1]);
        let best = (lo..=hi).rev().find(|&k| {
            let v = datum.pairing(nu[k - 1], lambda, &datum.content(&nu[..k - 1]));
            v >= (hi - k + 1) as i64
        });
        match best {
            Some(k) => ks.push(k),
            None => return (false, None),
        }
    }
    (true, Some(PdWitness { k: ks }))
}

/// Closed form for the maximal witness of each run.
pub fn max_witness_formula(rd: &RunDecomposition) -> Vec<i64> {
    (0..rd.len())
        .map(|i| {
            let (c0, c1) = (rd.cuts[i] as i64, rd.cuts[i + 1] as i64);
            let b = c1 - c0;
            let l = rd.ells[i];
            if l - 2 * b >= 0 {
                c1
            } else {
                l + 2 * c0 - c1 + 1
            }
        })
        .collect()
}

/// Depth-first stream of the piecewise dominant sequences with a given
/// content, in lexicographic order. Only piecewise dominant prefixes are
/// extended.
pub struct PdEnumerator<'a> {
    datum: &'a CartanDatum,
    lambda: &'a DominantWeight,
    remaining: Vec<i64>,
    prefix: Vec<Residue>,
    content: RootVector,
    /// Per depth: (next residue to try, run length before the push, ell of the run).
    stack: Vec<Frame>,
    target: usize,
    done: bool,
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    next: Residue,
    run_len: usize,
    ell: i64,
}

impl<'a> PdEnumerator<'a> {
    pub fn new(datum: &'a CartanDatum, lambda: &'a DominantWeight, alpha: &RootVector) -> Self {
        let target = alpha.height() as usize;
        Self {
            datum,
            lambda,
            remaining: alpha.coeffs.clone(),
            prefix: Vec::with_capacity(target),
            content: datum.zero_root(),
            stack: vec![Frame { next: 0, run_len: 0, ell: 0 }],
            target,
            done: false,
        }
    }

    fn pop(&mut self) {
        self.stack.pop();
        if let Some(i) = self.prefix.pop() {
            self.remaining[i] += 1;
            self.content.coeffs[i] -= 1;
        }
    }
}

impl Iterator for PdEnumerator<'_> {
    type Item = Vec<Residue>;

    fn next(&mut self) -> Option<Vec<Residue>> {
        if self.done {
            return None;
        }
        loop {
            let depth = self.stack.len() - 1;
            if depth == self.target {
                let out = self.prefix.clone();
                self.pop();
                if self.stack.is_empty() {
                    self.done = true;
                }
                return Some(out);
            }
            let frame = *self.stack.last().unwrap();
            let rank = self.datum.rank();
            let mut chosen = None;
            for i in frame.next..rank {
                if self.remaining[i] == 0 {
                    continue;
                }
                let (run_len, ell) = match self.prefix.last() {
                    Some(&last) if last == i => (frame.run_len + 1, frame.ell),
                    _ => (1, self.datum.pairing(i, self.lambda, &self.content)),
                };
                if ell >= run_len as i64 {
                    chosen = Some((i, run_len, ell));
                    break;
                }
            }
            match chosen {
                Some((i, run_len, ell)) => {
                    self.stack.last_mut().unwrap().next = i + 1;
                    self.prefix.push(i);
                    self.remaining[i] -= 1;
                    self.content.coeffs[i] += 1;
                    self.stack.push(Frame { next: 0, run_len, ell });
                }
                None => {
                    self.pop();
                    if self.stack.is_empty() {
                        self.done = true;
                        return None;
                    }
                }
            }
        }
    }
}

pub fn enumerate_pd<'a>(datum: &'a CartanDatum, lambda: &'a DominantWeight, alpha: &RootVector) -> PdEnumerator<'a> {
    PdEnumerator::new(datum, lambda, alpha)
}

/// Returns the first piecewise dominant sequence of content `alpha`, if any.
pub fn weight_nonzero(datum: &CartanDatum, lambda: &DominantWeight, alpha: &RootVector) -> Option<Vec<Residue>> {
    enumerate_pd(datum, lambda, alpha).next()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZMonomial {
    pub exponents: Vec<u32>,
    pub degree: i64,
}

pub fn z_monomial(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue]) -> Result<ZMonomial, PdError> {
    let rd = run_decompose(datum, lambda, nu);
    let mut exponents = vec![0u32; nu.len()];
    for (idx, (&(_, b), &l)) in rd.runs.iter().zip(&rd.ells).enumerate() {
        let b = b as i64;
        if l < b {
            return Err(PdError::NotPiecewiseDominant);
        }
        let c0 = rd.cuts[idx];
        for j in 1..=b.min(l - b) {
            exponents[c0 + j as usize - 1] = (l - 2 * j + 1) as u32;
        }
    }
    let degree = exponents.iter().zip(nu).map(|(&e, &i)| e as i64 * datum.norm(i)).sum();
    let expected = datum.defect_degree(lambda, &datum.content(nu));
    if degree != expected {
        return Err(PdError::DegreeMismatch { got: degree, expected });
    }
    Ok(ZMonomial { exponents, degree })
}

/// One run of `S(nu)`: the longest-element word on the run's window followed
/// by `x_{c+1}^{l-1} ... x_{c+b}^{l-b}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SBlock {
    /// 0-based simple reflections, `s_k` swapping positions `k` and `k + 1`.
    pub tau_word: Vec<usize>,
    /// `(0-based position, exponent)`.
    pub exponents: Vec<(usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SWord {
    pub blocks: Vec<SBlock>,
    pub degree: i64,
}

impl SWord {
    /// All letters in order: `Ok(k)` for `tau_k`, `Err((k, e))` for `x_k^e`.
    pub fn letters(&self) -> Vec<Result<usize, (usize, u32)>> {
        let mut out = Vec::new();
        for b in &self.blocks {
            out.extend(b.tau_word.iter().map(|&k| Ok(k)));
            out.extend(b.exponents.iter().filter(|(_, e)| *e > 0).map(|&p| Err(p)));
        }
        out
    }
}

pub fn s_word(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue]) -> Result<SWord, PdError> {
    let rd = run_decompose(datum, lambda, nu);
    let mut blocks = Vec::with_capacity(rd.len());
    let mut degree = 0;
    for (idx, (&(r, b), &l)) in rd.runs.iter().zip(&rd.ells).enumerate() {
        if l < b as i64 {
            return Err(PdError::NotPiecewiseDominant);
        }
        let c0 = rd.cuts[idx];
        let tau_word = longest_word(b, c0);
        let exponents: Vec<(usize, u32)> = (1..=b).map(|j| (c0 + j - 1, (l - j as i64) as u32)).collect();
        degree -= tau_word.len() as i64 * datum.norm(r);
        degree += exponents.iter().map(|&(_, e)| e as i64).sum::<i64>() * datum.norm(r);
        blocks.push(SBlock { tau_word, exponents });
    }
    Ok(SWord { blocks, degree })
}

/// Compositions `b` of `n` whose parts lie inside constant stretches of `nu`
/// and satisfy `lambda_{c_i, nu^{i+1}} > 0` at every cut.
pub fn cyclotomic_compositions(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue]) -> Vec<Vec<usize>> {
    let n = nu.len();
    let mut out = Vec::new();
    fn rec(
        datum: &CartanDatum,
        lambda: &DominantWeight,
        nu: &[Residue],
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if start == nu.len() {
            out.push(cur.clone());
            return;
        }
        if lambda_at(datum, lambda, nu, start, nu[start]) <= 0 {
            return;
        }
        let mut end = start + 1;
        loop {
            cur.push(end - start);
            rec(datum, lambda, nu, end, cur, out);
            cur.pop();
            if end < nu.len() && nu[end] == nu[start] {
                end += 1;
            } else {
                break;
            }
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(datum, lambda, nu, 0, &mut Vec::new(), &mut out);
    out
}

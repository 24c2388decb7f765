//! The highest-weight crystal `B(Lambda)` realized by Littelmann paths.
//!
//! A path is a concatenation of straight segments. Each direction lies in the
//! Weyl orbit of `Lambda` and is stored as the root-lattice vector `beta`
//! with direction `Lambda - beta`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanDatum, DominantWeight, Residue, RootVector};
use crate::pdseq::{enumerate_pd, is_piecewise_dominant};

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrystalError {
    #[error("lowering operator f_{residue} vanished at step {step}")]
    Vanished { residue: Residue, step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrystalVertex {
    segments: Vec<(Vec<i64>, Q)>,
}

/// Serialized segment: the direction's root part and the segment length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentRecord {
    pub beta: Vec<i64>,
    pub length: String,
}

/// Tie-break for the residue raised in [`extract_pd`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Smallest,
    Largest,
}

impl CrystalVertex {
    /// The straight path `t -> t Lambda`.
    pub fn highest(datum: &CartanDatum) -> Self {
        Self { segments: vec![(vec![0; datum.rank()], Q::one())] }
    }

    fn normalized(segments: Vec<(Vec<i64>, Q)>) -> Self {
        let mut out: Vec<(Vec<i64>, Q)> = Vec::with_capacity(segments.len());
        for (beta, len) in segments {
            if len.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some((b, l)) if *b == beta => *l += len,
                _ => out.push((beta, len)),
            }
        }
        Self { segments: out }
    }

    pub fn segments(&self) -> &[(Vec<i64>, Q)] {
        &self.segments
    }

    pub fn records(&self) -> Vec<SegmentRecord> {
        self.segments
            .iter()
            .map(|(b, l)| SegmentRecord { beta: b.clone(), length: l.to_string() })
            .collect()
    }

    /// `Lambda - wt(b)` as an element of `Q^+`.
    pub fn depth(&self) -> RootVector {
        let rank = self.segments.first().map_or(0, |s| s.0.len());
        let mut acc = vec![Q::zero(); rank];
        for (beta, len) in &self.segments {
            for (a, &b) in acc.iter_mut().zip(beta) {
                *a += *len * b;
            }
        }
        RootVector {
            coeffs: acc
                .into_iter()
                .map(|q| {
                    assert!(q.is_integer(), "path endpoint off the weight lattice");
                    q.to_integer()
                })
                .collect(),
        }
    }

    /// `<h_i, wt(b)>`.
    pub fn wt_pairing(&self, datum: &CartanDatum, lambda: &DominantWeight, i: Residue) -> i64 {
        datum.pairing(i, lambda, &self.depth())
    }

    /// Values of `h_i` at the breakpoints, starting with `h_i(0) = 0`.
    fn heights(&self, datum: &CartanDatum, lambda: &DominantWeight, i: Residue) -> Vec<Q> {
        let mut h = Vec::with_capacity(self.segments.len() + 1);
        let mut cur = Q::zero();
        h.push(cur);
        for (beta, len) in &self.segments {
            cur += *len * slope(datum, lambda, i, beta);
            h.push(cur);
        }
        h
    }

    pub fn eps(&self, datum: &CartanDatum, lambda: &DominantWeight, i: Residue) -> i64 {
        let h = self.heights(datum, lambda, i);
        let m = h.iter().min().copied().unwrap();
        integral(-m)
    }

    pub fn phi(&self, datum: &CartanDatum, lambda: &DominantWeight, i: Residue) -> i64 {
        let h = self.heights(datum, lambda, i);
        let m = h.iter().min().copied().unwrap();
        integral(*h.last().unwrap() - m)
    }

    pub fn f(&self, datum: &CartanDatum, lambda: &DominantWeight, i: Residue) -> Option<Self> {
        let h = self.heights(datum, lambda, i);
        let m = h.iter().min().copied().unwrap();
        if *h.last().unwrap() - m < Q::one() {
            return None;
        }
        // last breakpoint where the minimum is attained
        let p = (0..h.len()).rev().find(|&k| h[k] == m).unwrap();
        let target = m + Q::one();
        let mut segs = self.segments.clone();
        // first crossing of m + 1 after p, splitting a segment if needed
        let mut k = p;
        loop {
            let s = slope(datum, lambda, i, &segs[k].0);
            let reach = h[k] + segs[k].1 * s;
            if reach >= target {
                let t = (target - h[k]) / s;
                if t < segs[k].1 {
                    let beta = segs[k].0.clone();
                    let rest = segs[k].1 - t;
                    segs[k].1 = t;
                    segs.insert(k + 1, (beta, rest));
                }
                break;
            }
            k += 1;
        }
        for seg in segs.iter_mut().take(k + 1).skip(p) {
            reflect(datum, lambda, i, &mut seg.0);
        }
        Some(Self::normalized(segs))
    }

    pub fn e(&self, datum: &CartanDatum, lambda: &DominantWeight, i: Residue) -> Option<Self> {
        let h = self.heights(datum, lambda, i);
        let m = h.iter().min().copied().unwrap();
        if m > -Q::one() {
            return None;
        }
        // first breakpoint where the minimum is attained
        let q = (0..h.len()).find(|&k| h[k] == m).unwrap();
        let target = m + Q::one();
        let mut segs = self.segments.clone();
        // last time before q at level m + 1, scanning backwards
        let mut k = q - 1;
        loop {
            let s = slope(datum, lambda, i, &segs[k].0);
            if h[k] >= target {
                // h[k+1] < target <= h[k], crossing inside segment k
                let t = (h[k] - target) / (-s);
                let mut lo = k;
                if !t.is_zero() {
                    let beta = segs[k].0.clone();
                    let rest = segs[k].1 - t;
                    segs[k].1 = t;
                    segs.insert(k + 1, (beta, rest));
                    lo = k + 1;
                }
                let hi = q + (lo - k);
                for seg in segs.iter_mut().take(hi).skip(lo) {
                    reflect(datum, lambda, i, &mut seg.0);
                }
                break;
            }
            k -= 1;
        }
        Some(Self::normalized(segs))
    }

    pub fn is_highest(&self) -> bool {
        self.segments.len() == 1 && self.segments[0].0.iter().all(|&b| b == 0)
    }
}

fn slope(datum: &CartanDatum, lambda: &DominantWeight, i: Residue, beta: &[i64]) -> Q {
    Q::from_integer(datum.pairing(i, lambda, &RootVector { coeffs: beta.to_vec() }))
}

fn reflect(datum: &CartanDatum, lambda: &DominantWeight, i: Residue, beta: &mut [i64]) {
    let c = datum.pairing(i, lambda, &RootVector { coeffs: beta.to_vec() });
    beta[i] += c;
}

fn integral(q: Q) -> i64 {
    assert!(q.is_integer(), "non-integral crystal statistic");
    q.to_integer()
}

/// All vertices with `height(Lambda - wt) <= max_height`, closed under `f_i`
/// from the highest path, in breadth-first discovery order.
pub fn generate(datum: &CartanDatum, lambda: &DominantWeight, max_height: i64) -> Vec<CrystalVertex> {
    generate_filtered(datum, lambda, |d| d.height() <= max_height)
}

/// Vertices whose depth is coordinatewise at most `bound`.
pub fn generate_below(datum: &CartanDatum, lambda: &DominantWeight, bound: &RootVector) -> Vec<CrystalVertex> {
    generate_filtered(datum, lambda, |d| d.coeffs.iter().zip(&bound.coeffs).all(|(a, b)| a <= b))
}

fn generate_filtered<F: Fn(&RootVector) -> bool>(datum: &CartanDatum, lambda: &DominantWeight, keep: F) -> Vec<CrystalVertex> {
    let start = CrystalVertex::highest(datum);
    let mut seen: HashSet<CrystalVertex> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, datum.zero_root()));
    while let Some((b, depth)) = queue.pop_front() {
        for i in 0..datum.rank() {
            let next_depth = depth.plus_simple(i);
            if !keep(&next_depth) {
                continue;
            }
            if let Some(c) = b.f(datum, lambda, i) {
                if seen.insert(c.clone()) {
                    queue.push_back((c, next_depth));
                }
            }
        }
        order.push(b);
    }
    order
}

/// Number of vertices of weight `Lambda - alpha`.
pub fn weight_multiplicity(datum: &CartanDatum, lambda: &DominantWeight, alpha: &RootVector) -> usize {
    generate_below(datum, lambda, alpha).iter().filter(|b| b.depth() == *alpha).count()
}

/// Counts of vertices by depth, up to `max_height`.
pub fn weight_table(datum: &CartanDatum, lambda: &DominantWeight, max_height: i64) -> BTreeMap<Vec<i64>, usize> {
    let mut table = BTreeMap::new();
    for b in generate(datum, lambda, max_height) {
        *table.entry(b.depth().coeffs).or_insert(0) += 1;
    }
    table
}

/// `f_{nu_n} ... f_{nu_1}` applied to the highest path.
pub fn pd_path(datum: &CartanDatum, lambda: &DominantWeight, nu: &[Residue]) -> Result<CrystalVertex, CrystalError> {
    let mut b = CrystalVertex::highest(datum);
    for (step, &i) in nu.iter().enumerate() {
        b = b.f(datum, lambda, i).ok_or(CrystalError::Vanished { residue: i, step })?;
    }
    Ok(b)
}

/// Recovers a piecewise dominant sequence whose path is `b`: raise some `i`
/// with `eps_i(b) > 0` all the way, recurse, and append that run.
pub fn extract_pd(datum: &CartanDatum, lambda: &DominantWeight, b: &CrystalVertex, tie: TieBreak) -> Vec<Residue> {
    let mut runs: Vec<(Residue, usize)> = Vec::new();
    let mut cur = b.clone();
    loop {
        let candidates = (0..datum.rank()).filter(|&i| cur.eps(datum, lambda, i) > 0);
        let i = match tie {
            TieBreak::Smallest => candidates.min(),
            TieBreak::Largest => candidates.max(),
        };
        let Some(i) = i else { break };
        let b0 = cur.eps(datum, lambda, i) as usize;
        for _ in 0..b0 {
            cur = cur.e(datum, lambda, i).expect("eps counts raisings");
        }
        runs.push((i, b0));
    }
    debug_assert!(cur.is_highest());
    runs.iter().rev().flat_map(|&(i, b)| std::iter::repeat(i).take(b)).collect()
}

/// Piecewise dominant sequences of content `alpha`, grouped by their path.
pub fn pd_classes(datum: &CartanDatum, lambda: &DominantWeight, alpha: &RootVector) -> Result<Vec<Vec<Vec<Residue>>>, CrystalError> {
    let mut classes: Vec<(CrystalVertex, Vec<Vec<Residue>>)> = Vec::new();
    for nu in enumerate_pd(datum, lambda, alpha) {
        let b = pd_path(datum, lambda, &nu)?;
        match classes.iter_mut().find(|(v, _)| *v == b) {
            Some((_, members)) => members.push(nu),
            None => classes.push((b, vec![nu])),
        }
    }
    Ok(classes.into_iter().map(|(_, m)| m).collect())
}

/// Checks that `extract_pd` lands on a piecewise dominant sequence whose
/// path is `b`.
pub fn extract_round_trips(datum: &CartanDatum, lambda: &DominantWeight, b: &CrystalVertex, tie: TieBreak) -> bool {
    let nu = extract_pd(datum, lambda, b, tie);
    is_piecewise_dominant(datum, lambda, &nu) && pd_path(datum, lambda, &nu).as_ref() == Ok(b)
}

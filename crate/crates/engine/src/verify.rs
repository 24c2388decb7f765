//! Spanning, nonvanishing and commutator-relation checks on a built cocenter.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use pdklr_core::pdseq::{is_piecewise_dominant, lambda_at, run_decompose, s_word, z_monomial};
use pdklr_core::Residue;

use crate::algebra::{Element, Klr};
use crate::cocenter::Cocenter;
use crate::field::Field;
use crate::linalg::Echelon;
use crate::EngineError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpanMode {
    Generator,
    Principle1,
    Principle2,
    Principle3,
}

impl std::str::FromStr for SpanMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "generator" => Ok(Self::Generator),
            "principle1" => Ok(Self::Principle1),
            "principle2" => Ok(Self::Principle2),
            "principle3" => Ok(Self::Principle3),
            _ => Err(format!("unknown mode {s}")),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SpanDegree {
    pub degree: i64,
    pub rank: usize,
    pub dim_tr: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanReport {
    pub mode: SpanMode,
    pub family_size: usize,
    pub degrees: Vec<SpanDegree>,
    pub passed: bool,
}

type Letters = Vec<Result<usize, (usize, u32)>>;

/// Letters of `x_{c+1}^e tau_{c+1} ... tau_{c+b-1}` in 0-based form.
fn block_letters(c: usize, b: usize, e: u32) -> Letters {
    let mut out = Vec::new();
    if e > 0 {
        out.push(Err((c, e)));
    }
    out.extend((c..c + b - 1).map(Ok));
    out
}

/// Compositions whose parts lie inside constant stretches of `nu`.
pub fn constant_compositions(nu: &[Residue]) -> Vec<Vec<usize>> {
    fn rec(nu: &[Residue], start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if start == nu.len() {
            out.push(cur.clone());
            return;
        }
        let mut end = start + 1;
        loop {
            cur.push(end - start);
            rec(nu, end, cur, out);
            cur.pop();
            if end < nu.len() && nu[end] == nu[start] {
                end += 1;
            } else {
                break;
            }
        }
    }
    let mut out = Vec::new();
    rec(nu, 0, &mut Vec::new(), &mut out);
    out
}

/// The spanning family `R^Lambda_{nu,1}` over all `nu`.
pub fn generator_family<F: Field>(cc: &Cocenter<F>) -> Result<Vec<Element>, EngineError> {
    let q = &cc.quotient;
    let (k, datum, lam) = (&q.klr, q.klr.datum(), &q.lambda);
    let mut out = Vec::new();
    for (nu_id, nu) in k.sequences().iter().enumerate() {
        for b in pdklr_core::pdseq::cyclotomic_compositions(datum, lam, nu) {
            let mut cuts = vec![0];
            for &p in &b {
                cuts.push(cuts.last().unwrap() + p);
            }
            let bounds: Vec<i64> = (0..b.len()).map(|i| lambda_at(datum, lam, nu, cuts[i], nu[cuts[i]])).collect();
            let mut exps = vec![0u32; b.len()];
            'outer: loop {
                let mut letters = Vec::new();
                for i in 0..b.len() {
                    letters.extend(block_letters(cuts[i], b[i], exps[i]));
                }
                out.push(k.word_element(&letters, nu_id as u32)?);
                for i in 0..b.len() {
                    exps[i] += 1;
                    if (exps[i] as i64) < bounds[i] {
                        continue 'outer;
                    }
                    exps[i] = 0;
                }
                break;
            }
        }
    }
    Ok(out)
}

fn pd_ids(k: &Klr, lam: &pdklr_core::DominantWeight) -> Vec<u32> {
    (0..k.sequences().len() as u32)
        .filter(|&i| is_piecewise_dominant(k.datum(), lam, &k.sequences()[i as usize]))
        .collect()
}

/// `Z(nu)` as an element.
pub fn z_element(k: &Klr, lam: &pdklr_core::DominantWeight, nu: u32) -> Result<Element, EngineError> {
    let z = z_monomial(k.datum(), lam, &k.sequences()[nu as usize]).map_err(|_| EngineError::NotInBlock)?;
    k.x_mono(nu, &z.exponents)
}

/// `S(nu)` as an element.
pub fn s_element(k: &Klr, lam: &pdklr_core::DominantWeight, nu: u32) -> Result<Element, EngineError> {
    let s = s_word(k.datum(), lam, &k.sequences()[nu as usize]).map_err(|_| EngineError::NotInBlock)?;
    k.word_element(&s.letters(), nu)
}

/// `x^t e(nu)` for piecewise dominant `nu` with every `t_j <= l_i - 1` on run `i`.
pub fn principle3_family(k: &Klr, lam: &pdklr_core::DominantWeight) -> Result<Vec<Element>, EngineError> {
    let mut out = Vec::new();
    for nu in pd_ids(k, lam) {
        let seq = &k.sequences()[nu as usize];
        let rd = run_decompose(k.datum(), lam, seq);
        let mut caps = Vec::new();
        for (&(_, b), &l) in rd.runs.iter().zip(&rd.ells) {
            caps.extend(std::iter::repeat((l - 1).max(0) as u32).take(b));
        }
        let mut t = vec![0u32; seq.len()];
        'outer: loop {
            out.push(k.x_mono(nu, &t)?);
            for j in 0..t.len() {
                if t[j] < caps[j] {
                    t[j] += 1;
                    continue 'outer;
                }
                t[j] = 0;
            }
            break;
        }
    }
    Ok(out)
}

/// Rank of the classes of `family` in each degree, against `dim Tr`.
pub fn span_ranks<F: Field>(cc: &Cocenter<F>, family: &[Element], degrees: &[i64]) -> Result<Vec<SpanDegree>, EngineError> {
    let mut out = Vec::new();
    for &d in degrees {
        let mut e = Echelon::new(cc.quotient.field.clone(), cc.dim_tr(d));
        for y in family {
            if y.is_zero() || cc.quotient.klr.homogeneous_degree(y) != Some(d) {
                continue;
            }
            let c = cc.class_of(y)?;
            e.insert(c.coords.into_iter().enumerate());
        }
        out.push(SpanDegree { degree: d, rank: e.rank(), dim_tr: cc.dim_tr(d) });
    }
    Ok(out)
}

pub fn verify_spanning<F: Field>(cc: &Cocenter<F>, mode: SpanMode) -> Result<SpanReport, EngineError> {
    let q = &cc.quotient;
    let (k, lam) = (&q.klr, &q.lambda);
    let all: Vec<i64> = q.pieces().map(|p| p.degree).collect();
    let defect = cc.defect();
    let (family, degrees) = match mode {
        SpanMode::Generator => (generator_family(cc)?, all),
        SpanMode::Principle3 => (principle3_family(k, lam)?, all),
        SpanMode::Principle1 => {
            let fam = pd_ids(k, lam).into_iter().map(|nu| z_element(k, lam, nu)).collect::<Result<_, _>>()?;
            (fam, vec![defect])
        }
        SpanMode::Principle2 => (pd_ids(k, lam).into_iter().map(|nu| k.idempotent(nu)).collect(), vec![0]),
    };
    let degrees: Vec<i64> = degrees.into_iter().filter(|d| q.piece(*d).is_some()).collect();
    let ranks = span_ranks(cc, &family, &degrees)?;
    let passed = ranks.iter().all(|r| r.rank == r.dim_tr);
    Ok(SpanReport { mode, family_size: family.len(), degrees: ranks, passed })
}

#[derive(Debug, Clone, Serialize)]
pub struct PdClassCheck {
    pub nu: String,
    pub e_nonzero: bool,
    pub s_nonzero: bool,
    pub s_degree: i64,
}

/// Nonvanishing of the classes of `e(nu)` and `S(nu)` for every piecewise dominant `nu`.
pub fn pd_class_checks<F: Field>(cc: &Cocenter<F>) -> Result<Vec<PdClassCheck>, EngineError> {
    let q = &cc.quotient;
    let (k, lam) = (&q.klr, &q.lambda);
    let mut out = Vec::new();
    for nu in pd_ids(k, lam) {
        let e = cc.class_of(&k.idempotent(nu))?;
        let s = s_element(k, lam, nu)?;
        let s_degree = k.homogeneous_degree(&s).unwrap_or(i64::MIN);
        let s_nonzero = !s.is_zero() && !cc.is_zero_class(&cc.class_of(&s)?);
        out.push(PdClassCheck {
            nu: k.datum().format_sequence(&k.sequences()[nu as usize]),
            e_nonzero: !cc.is_zero_class(&e),
            s_nonzero,
            s_degree,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationSample {
    pub nu: String,
    pub composition: Vec<usize>,
    pub block: usize,
    pub k: u32,
    pub y: String,
    /// The stated combination lies in `[A, A]`.
    pub combination_in_commutators: bool,
    /// For blocks of length 3: the combination plus `y_1 (sum x_{c+1}^{k_1} x_{c+2}^{k_2}) tau_{c+2} y_2`
    /// over `k_1 + k_2 = k - 1` lies in `[A, A]`.
    pub amended_in_commutators: Option<bool>,
    /// `y` itself lies in `[A, A]`.
    pub y_in_commutators: bool,
    /// Whether `y` in `[A, A]` is asserted here (`k = 0`, or `k < b - 1` in characteristic 0).
    pub asserted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationsReport {
    pub samples: Vec<RelationSample>,
    /// Every stated combination and every asserted `y` lies in `[A, A]`.
    pub passed: bool,
    /// Same, with the stated combination replaced by the amended one for blocks of length 3.
    pub amended_passed: bool,
}

#[derive(Debug, Clone)]
pub struct RelationsParams {
    pub samples: usize,
    pub seed: u64,
    pub max_k: u32,
    /// Letters per random factor `y_1`, `y_2`.
    pub max_letters: usize,
}

impl Default for RelationsParams {
    fn default() -> Self {
        Self { samples: 40, seed: 7, max_k: 3, max_letters: 2 }
    }
}

fn random_letters(rng: &mut ChaCha8Rng, lo: usize, hi: usize, max: usize) -> Letters {
    // strands lo..hi
    let mut out = Vec::new();
    if hi <= lo {
        return out;
    }
    for _ in 0..rng.gen_range(0..=max) {
        if hi - lo >= 2 && rng.gen_bool(0.5) {
            out.push(Ok(rng.gen_range(lo..hi - 1)));
        } else {
            out.push(Err((rng.gen_range(lo..hi), rng.gen_range(1..=2))));
        }
    }
    out
}

fn x2(c: usize, e1: u32, e2: u32) -> Letters {
    let mut v = Vec::new();
    if e1 > 0 {
        v.push(Err((c, e1)));
    }
    if e2 > 0 {
        v.push(Err((c + 1, e2)));
    }
    v
}

/// The combination for one instance, as a list of `(coefficient, middle letters)`.
fn combination(c: usize, b: usize, k: u32) -> Vec<(i64, Letters)> {
    let k = k as i64;
    let mut out: Vec<(i64, Letters)> = vec![(k + 1, block_letters(c, b, k as u32))];
    let taus = |from: usize, to: usize| -> Letters { (from..to).map(Ok).collect() };
    if b == 2 {
        for k1 in 0..k {
            out.push((1, x2(c, k1 as u32, (k - 1 - k1) as u32)));
        }
        for k1 in 1..k {
            for k1p in 0..=(k - 1 - k1) {
                out.push((1, x2(c, (k1 + k1p) as u32, (k - 1 - k1 - k1p) as u32)));
            }
        }
    } else {
        let end = c + b - 1;
        if k >= 1 {
            let mut l = x2(c, (k - 1) as u32, 0);
            l.extend(taus(c, end - 1));
            out.push((k, l));
        }
        for k1 in 0..=(k - 2) {
            for k1p in 0..=(k - 2 - k1) {
                let mut l = x2(c, (k1 + k1p) as u32, (k - 2 - k1 - k1p) as u32);
                l.extend(taus(c + 1, end - 1));
                out.push((1, l));
            }
        }
        for k1 in 1..k {
            for k1p in 0..=(k - 1 - k1) {
                let mut l = x2(c, (k1 + k1p) as u32, (k - 1 - k1 - k1p) as u32);
                l.extend(taus(c + 1, end));
                out.push((1, l));
            }
        }
    }
    out
}

/// Samples `y = y_1 x_{c+1}^k tau_{c+1} ... tau_{c'-1} y_2 e(nu)` and tests the
/// commutator relations for blocks of length at least 2.
pub fn verify_commutator_relations<F: Field>(cc: &Cocenter<F>, params: &RelationsParams) -> Result<RelationsReport, EngineError> {
    let q = &cc.quotient;
    let k = &q.klr;
    let n = k.n();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut instances = Vec::new();
    for (nu, seq) in k.sequences().iter().enumerate() {
        for comp in constant_compositions(seq) {
            let mut c = 0;
            for (t, &b) in comp.iter().enumerate() {
                if b >= 2 {
                    instances.push((nu as u32, comp.clone(), t, c, b));
                }
                c += b;
            }
        }
    }
    let mut samples = Vec::new();
    let mut passed = true;
    let mut amended_passed = true;
    if instances.is_empty() {
        return Ok(RelationsReport { samples, passed, amended_passed });
    }
    let char0 = q.field.characteristic() == 0;
    let (lo, hi) = q.window;
    for _ in 0..params.samples {
        let (nu, comp, t, c, b) = instances.choose(&mut rng).unwrap().clone();
        let kk = rng.gen_range(0..=params.max_k);
        let y1 = random_letters(&mut rng, 0, c, params.max_letters);
        let y2 = random_letters(&mut rng, c + b, n, params.max_letters);
        let build = |mid: &Letters| -> Result<Element, EngineError> {
            let mut w = y1.clone();
            w.extend(mid.iter().cloned());
            w.extend(y2.iter().cloned());
            k.word_element(&w, nu)
        };
        let y = build(&block_letters(c, b, kk))?;
        let mut comb = k.zero();
        for (coef, mid) in combination(c, b, kk) {
            comb.add_scaled(&build(&mid)?, coef);
        }
        let in_window = |e: &Element| match k.homogeneous_degree(e) {
            Some(d) => (lo..=hi).contains(&d),
            None => false,
        };
        let zero_class = |e: &Element| -> Result<bool, EngineError> {
            if e.is_zero() || !in_window(e) {
                return Ok(true);
            }
            Ok(cc.is_zero_class(&cc.class_of(e)?))
        };
        let comb_ok = zero_class(&comb)?;
        let amended = if b == 3 {
            let mut extra = comb.clone();
            for k1 in 0..kk {
                let mut mid = x2(c, k1, kk - 1 - k1);
                mid.push(Ok(c + 1));
                extra.add_scaled(&build(&mid)?, 1);
            }
            Some(zero_class(&extra)?)
        } else {
            None
        };
        let y_zero = zero_class(&y)?;
        let asserted = kk == 0 || (char0 && (kk as usize) < b - 1);
        if asserted && !y_zero {
            passed = false;
            amended_passed = false;
        }
        if !comb_ok {
            passed = false;
        }
        if !amended.unwrap_or(comb_ok) {
            amended_passed = false;
        }
        samples.push(RelationSample {
            nu: k.datum().format_sequence(&k.sequences()[nu as usize]),
            composition: comp,
            block: t,
            k: kk,
            y: k.render(&y),
            combination_in_commutators: comb_ok,
            amended_in_commutators: amended,
            y_in_commutators: y_zero,
            asserted,
        });
    }
    Ok(RelationsReport { samples, passed, amended_passed })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureProbe {
    pub d_lambda_alpha: i64,
    pub dim_tr_top: usize,
    pub pd_classes: usize,
    pub dim_tr_zero: usize,
    /// Rank of the span of `e(nu)`-classes over piecewise dominant `nu` in degree 0.
    pub pd_idempotent_rank: usize,
}

pub fn conjecture_probe<F: Field>(cc: &Cocenter<F>, pd_classes: usize) -> Result<ConjectureProbe, EngineError> {
    let q = &cc.quotient;
    let fam: Vec<Element> = pd_ids(&q.klr, &q.lambda).into_iter().map(|nu| q.klr.idempotent(nu)).collect();
    let r = if q.piece(0).is_some() { span_ranks(cc, &fam, &[0])?[0].rank } else { 0 };
    Ok(ConjectureProbe {
        d_lambda_alpha: cc.defect(),
        dim_tr_top: cc.dim_tr(cc.defect()),
        pd_classes,
        dim_tr_zero: cc.dim_tr(0),
        pd_idempotent_rank: r,
    })
}

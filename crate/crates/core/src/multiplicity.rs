//! Root multiplicities by the Peterson recurrence and weight multiplicities of
//! `L(Lambda)` by Freudenthal's formula, in exact rational arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanDatum, DominantWeight, RootVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultError {
    #[error("vanishing denominator with nonzero numerator at {0:?}")]
    ZeroDenominator(Vec<i64>),
    #[error("non-integral multiplicity {value} at {at:?}")]
    NonIntegral { at: Vec<i64>, value: String },
    #[error("height {height} exceeds the table bound {bound}")]
    OutOfRange { height: i64, bound: i64 },
}

/// Multiplicities of the positive roots up to a height bound.
#[derive(Debug, Clone)]
pub struct RootMultTable {
    bound: i64,
    mults: BTreeMap<Vec<i64>, i64>,
}

impl RootMultTable {
    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Multiplicity of `beta` as a root; 0 when `beta` is not a root.
    pub fn mult(&self, beta: &RootVector) -> i64 {
        self.mults.get(&beta.coeffs).copied().unwrap_or(0)
    }

    /// Positive roots with their multiplicities, by height then coordinates.
    pub fn roots(&self) -> Vec<(RootVector, i64)> {
        let mut v: Vec<_> = self.mults.iter().map(|(k, &m)| (RootVector { coeffs: k.clone() }, m)).collect();
        v.sort_by(|a, b| a.0.height().cmp(&b.0.height()).then(a.0.coeffs.cmp(&b.0.coeffs)));
        v
    }
}

fn rho_pairing(datum: &CartanDatum, beta: &[i64]) -> i64 {
    beta.iter().enumerate().map(|(j, &b)| b * datum.d(j)).sum()
}

fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn root_mults(datum: &CartanDatum, height_bound: i64) -> Result<RootMultTable, MultError> {
    let rank = datum.rank();
    let all: Vec<RootVector> = RootVector::all_up_to_height(rank, height_bound)
        .into_iter()
        .filter(|b| !b.is_zero())
        .collect();
    let form = |a: &[i64], b: &[i64]| datum.bilinear(&RootVector { coeffs: a.to_vec() }, &RootVector { coeffs: b.to_vec() });
    let mut c: HashMap<Vec<i64>, BigRational> = HashMap::new();
    let mut mults = BTreeMap::new();
    for beta in &all {
        let b = &beta.coeffs;
        let g = b.iter().fold(0, |acc, &x| gcd(acc, x));
        // sum_{k >= 2} mult(beta / k) / k
        let mut divisor_part = BigRational::zero();
        for k in 2..=g {
            if g % k == 0 {
                let part: Vec<i64> = b.iter().map(|x| x / k).collect();
                if let Some(&mk) = mults.get(&part) {
                    divisor_part += BigRational::new(BigInt::from(mk), BigInt::from(k));
                }
            }
        }
        let cb = if beta.height() == 1 {
            BigRational::one()
        } else {
            let mut rhs = BigRational::zero();
            for (b1, c1) in c.iter() {
                if c1.is_zero() || !leq(b1, b) || b1 == b {
                    continue;
                }
                let b2 = sub(b, b1);
                let Some(c2) = c.get(&b2) else { continue };
                if c2.is_zero() {
                    continue;
                }
                rhs += BigRational::from_integer(BigInt::from(form(b1, &b2))) * c1 * c2;
            }
            let denom = form(b, b) - 2 * rho_pairing(datum, b);
            if denom == 0 {
                // beta = rho - w rho: the recurrence reads 0 = 0 and beta is not a root
                if !rhs.is_zero() {
                    return Err(MultError::ZeroDenominator(b.clone()));
                }
                divisor_part.clone()
            } else {
                rhs / BigRational::from_integer(BigInt::from(denom))
            }
        };
        let m = &cb - &divisor_part;
        if !m.is_integer() {
            return Err(MultError::NonIntegral { at: b.clone(), value: m.to_string() });
        }
        let m = m.to_integer().to_i64().expect("root multiplicity overflow");
        if m != 0 {
            mults.insert(b.clone(), m);
        }
        c.insert(b.clone(), cb);
    }
    Ok(RootMultTable { bound: height_bound, mults })
}

/// Memoized Freudenthal recursion for one highest weight.
pub struct Freudenthal<'a> {
    datum: &'a CartanDatum,
    lambda: DominantWeight,
    roots: RootMultTable,
    memo: HashMap<Vec<i64>, BigInt>,
}

impl<'a> Freudenthal<'a> {
    pub fn new(datum: &'a CartanDatum, lambda: &DominantWeight, height_bound: i64) -> Result<Self, MultError> {
        Ok(Self {
            datum,
            lambda: lambda.clone(),
            roots: root_mults(datum, height_bound.max(1))?,
            memo: HashMap::new(),
        })
    }

    pub fn roots(&self) -> &RootMultTable {
        &self.roots
    }

    /// `dim L(Lambda)_{Lambda - alpha}`.
    pub fn mult(&mut self, alpha: &RootVector) -> Result<BigInt, MultError> {
        if alpha.height() > self.roots.bound() {
            return Err(MultError::OutOfRange { height: alpha.height(), bound: self.roots.bound() });
        }
        self.mult_inner(&alpha.coeffs)
    }

    fn mult_inner(&mut self, beta: &[i64]) -> Result<BigInt, MultError> {
        if let Some(v) = self.memo.get(beta) {
            return Ok(v.clone());
        }
        let datum = self.datum;
        let bv = RootVector { coeffs: beta.to_vec() };
        let value = if bv.is_zero() {
            BigInt::one()
        } else {
            // 2 (Lambda + rho, beta) - (beta, beta)
            let denom = 2 * (datum.weight_root_form(&self.lambda, &bv) + rho_pairing(datum, beta)) - datum.bilinear(&bv, &bv);
            let mut num = BigInt::zero();
            let roots: Vec<(RootVector, i64)> = self
                .roots
                .roots()
                .into_iter()
                .filter(|(g, _)| leq(&g.coeffs, beta))
                .collect();
            for (gamma, mg) in roots {
                let mut k = 1;
                loop {
                    let kg: Vec<i64> = gamma.coeffs.iter().map(|x| x * k).collect();
                    if !leq(&kg, beta) {
                        break;
                    }
                    let rest = sub(beta, &kg);
                    let m = self.mult_inner(&rest)?;
                    if !m.is_zero() {
                        // (Lambda - rest, gamma)
                        let rv = RootVector { coeffs: rest };
                        let pair = datum.weight_root_form(&self.lambda, &gamma) - datum.bilinear(&rv, &gamma);
                        num += BigInt::from(mg) * BigInt::from(pair) * m;
                    }
                    k += 1;
                }
            }
            num *= 2;
            if denom == 0 {
                if !num.is_zero() {
                    return Err(MultError::ZeroDenominator(beta.to_vec()));
                }
                BigInt::zero()
            } else {
                let d = BigInt::from(denom);
                if !(&num % &d).is_zero() {
                    return Err(MultError::NonIntegral { at: beta.to_vec(), value: format!("{num}/{d}") });
                }
                let v = num / d;
                if v.is_negative() {
                    return Err(MultError::NonIntegral { at: beta.to_vec(), value: v.to_string() });
                }
                v
            }
        };
        self.memo.insert(beta.to_vec(), value.clone());
        Ok(value)
    }
}

pub fn freudenthal_mult(datum: &CartanDatum, lambda: &DominantWeight, alpha: &RootVector) -> Result<BigInt, MultError> {
    Freudenthal::new(datum, lambda, alpha.height())?.mult(alpha)
}

/// Cache key for a weight multiplicity query.
pub fn cache_key(datum: &CartanDatum, lambda: &DominantWeight, alpha: &RootVector) -> String {
    let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("{}|L={}|a={}", datum.fingerprint(), join(&lambda.coords), join(&alpha.coeffs))
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheRecord {
    key: String,
    value: String,
}

/// On-disk JSON-lines cache of weight multiplicities.
#[derive(Debug, Default)]
pub struct MultCache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, BigInt>,
    pending: Vec<String>,
}

impl MultCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads the cache file, treating a missing file as empty and skipping
    /// malformed lines.
    pub fn open(path: &Path) -> io::Result<Self> {
        let mut entries = BTreeMap::new();
        match fs::File::open(path) {
            Ok(f) => {
                for line in io::BufReader::new(f).lines() {
                    let line = line?;
                    if let Ok(rec) = serde_json::from_str::<CacheRecord>(&line) {
                        if let Ok(v) = rec.value.parse::<BigInt>() {
                            entries.insert(rec.key, v);
                        }
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(Self { path: Some(path.to_path_buf()), entries, pending: Vec::new() })
    }

    pub fn get(&self, key: &str) -> Option<&BigInt> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, key: String, value: BigInt) {
        if self.entries.insert(key.clone(), value).is_none() {
            self.pending.push(key);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends new records to the cache file.
    pub fn flush(&mut self) -> io::Result<()> {
        let Some(path) = &self.path else {
            self.pending.clear();
            return Ok(());
        };
        if self.pending.is_empty() {
            return Ok(());
        }
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
        for key in self.pending.drain(..) {
            let rec = CacheRecord { key: key.clone(), value: self.entries[&key].to_string() };
            writeln!(f, "{}", serde_json::to_string(&rec).expect("serializable"))?;
        }
        Ok(())
    }

    pub fn mult(
        &mut self,
        datum: &CartanDatum,
        lambda: &DominantWeight,
        alpha: &RootVector,
    ) -> Result<BigInt, MultError> {
        let key = cache_key(datum, lambda, alpha);
        if let Some(v) = self.entries.get(&key) {
            return Ok(v.clone());
        }
        let v = freudenthal_mult(datum, lambda, alpha)?;
        self.insert(key, v.clone());
        Ok(v)
    }
}

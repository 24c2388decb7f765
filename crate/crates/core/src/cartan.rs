//! Cartan data, dominant weights, root-lattice vectors and the pairings
//! between them.
//!
//! Residue labels are opaque strings; everything downstream works with the
//! dense index of a label in [`CartanDatum::labels`].

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense index of a residue label.
pub type Residue = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("cartan matrix is not square over the {0} labels")]
    NotSquare(usize),
    #[error("expected {expected} symmetrizers, got {got}")]
    SymmetrizerCount { expected: usize, got: usize },
    #[error("a[{i}][{i}] = {value}, expected 2")]
    Diagonal { i: String, value: i64 },
    #[error("a[{i}][{j}] = {value} is positive off the diagonal")]
    PositiveOffDiagonal { i: String, j: String, value: i64 },
    #[error("a[{i}][{j}] and a[{j}][{i}] disagree on vanishing")]
    ZeroPattern { i: String, j: String },
    #[error("d[{i}] = {value} is not a positive integer")]
    Symmetrizer { i: String, value: i64 },
    #[error("not symmetrizable at ({i},{j}): d_i a_ij = {lhs} but d_j a_ji = {rhs}")]
    NotSymmetrizable { i: String, j: String, lhs: i64, rhs: i64 },
    #[error("duplicate residue label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown residue label {0:?}")]
    UnknownLabel(String),
    #[error("coefficient for {label:?} is negative ({value})")]
    Negative { label: String, value: i64 },
    #[error("unknown datum family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} does not exist in rank {rank}")]
    BadRank { family: String, rank: usize },
}

/// A symmetrizable generalized Cartan matrix with its symmetrizers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    labels: Vec<String>,
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
    index: HashMap<String, Residue>,
}

/// Serializable form of a datum, used for config files and JSON echo.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSpec {
    pub labels: Vec<String>,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
}

impl CartanDatum {
    /// Checks the four Cartan-datum axioms and returns the datum.
    pub fn new(labels: Vec<String>, a: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self, CartanError> {
        let n = labels.len();
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(CartanError::NotSquare(n));
        }
        if d.len() != n {
            return Err(CartanError::SymmetrizerCount { expected: n, got: d.len() });
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(CartanError::DuplicateLabel(l.clone()));
            }
        }
        let name = |i: usize| labels[i].clone();
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(CartanError::Diagonal { i: name(i), value: a[i][i] });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && a[i][j] > 0 {
                    return Err(CartanError::PositiveOffDiagonal { i: name(i), j: name(j), value: a[i][j] });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(CartanError::ZeroPattern { i: name(i), j: name(j) });
                }
            }
        }
        for i in 0..n {
            if d[i] <= 0 {
                return Err(CartanError::Symmetrizer { i: name(i), value: d[i] });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (lhs, rhs) = (d[i] * a[i][j], d[j] * a[j][i]);
                if lhs != rhs {
                    return Err(CartanError::NotSymmetrizable { i: name(i), j: name(j), lhs, rhs });
                }
            }
        }
        Ok(Self { labels, a, d, index })
    }

    /// Builds a datum choosing the smallest positive integer symmetrizers.
    pub fn from_matrix(labels: Vec<String>, a: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = labels.len();
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(CartanError::NotSquare(n));
        }
        let d = minimal_symmetrizers(&a).unwrap_or_else(|| vec![1; n]);
        Self::new(labels, a, d)
    }

    pub fn from_spec(spec: &DatumSpec) -> Result<Self, CartanError> {
        if spec.symmetrizers.is_empty() {
            Self::from_matrix(spec.labels.clone(), spec.cartan_matrix.clone())
        } else {
            Self::new(spec.labels.clone(), spec.cartan_matrix.clone(), spec.symmetrizers.clone())
        }
    }

    pub fn to_spec(&self) -> DatumSpec {
        DatumSpec {
            labels: self.labels.clone(),
            cartan_matrix: self.a.clone(),
            symmetrizers: self.d.clone(),
        }
    }

    /// Built-in families: `a`, `b`, `c`, `d`, `e`, `f`, `g` (finite, labels
    /// `1..=rank`), `affine-a` (rank = number of nodes e >= 2, labels
    /// `0..e`) and `rank1` (the single node `0`).
    pub fn family(name: &str, rank: usize) -> Result<Self, CartanError> {
        let bad = || CartanError::BadRank { family: name.to_string(), rank };
        let finite_labels = |n: usize| (1..=n).map(|i| i.to_string()).collect::<Vec<_>>();
        let chain = |n: usize| {
            let mut a = vec![vec![0i64; n]; n];
            for i in 0..n {
                a[i][i] = 2;
                if i + 1 < n {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
            }
            a
        };
        let a = match name.to_ascii_lowercase().as_str() {
            "rank1" | "nilhecke" => {
                if rank > 1 {
                    return Err(bad());
                }
                return Self::new(vec!["0".into()], vec![vec![2]], vec![1]);
            }
            "a" => {
                if rank == 0 {
                    return Err(bad());
                }
                chain(rank)
            }
            "b" => {
                if rank < 2 {
                    return Err(bad());
                }
                let mut a = chain(rank);
                a[rank - 1][rank - 2] = -2;
                a
            }
            "c" => {
                if rank < 2 {
                    return Err(bad());
                }
                let mut a = chain(rank);
                a[rank - 2][rank - 1] = -2;
                a
            }
            "d" => {
                if rank < 4 {
                    return Err(bad());
                }
                let mut a = chain(rank - 1);
                for row in a.iter_mut() {
                    row.push(0);
                }
                a.push(vec![0; rank]);
                a[rank - 1][rank - 1] = 2;
                a[rank - 3][rank - 1] = -1;
                a[rank - 1][rank - 3] = -1;
                a
            }
            "e" => {
                if !(6..=8).contains(&rank) {
                    return Err(bad());
                }
                // Bourbaki numbering: 1-3-4-5-...-rank, with 2 attached to 4.
                let mut a = vec![vec![0i64; rank]; rank];
                let mut edges = vec![(0usize, 2usize), (1, 3), (2, 3)];
                for k in 3..rank - 1 {
                    edges.push((k, k + 1));
                }
                for i in 0..rank {
                    a[i][i] = 2;
                }
                for (i, j) in edges {
                    a[i][j] = -1;
                    a[j][i] = -1;
                }
                a
            }
            "f" => {
                if rank != 4 {
                    return Err(bad());
                }
                let mut a = chain(4);
                a[2][1] = -2;
                a
            }
            "g" => {
                if rank != 2 {
                    return Err(bad());
                }
                vec![vec![2, -3], vec![-1, 2]]
            }
            "affine-a" | "affine_a" | "a-affine" => {
                if rank < 2 {
                    return Err(bad());
                }
                let labels: Vec<String> = (0..rank).map(|i| i.to_string()).collect();
                let mut a = vec![vec![0i64; rank]; rank];
                for i in 0..rank {
                    a[i][i] = 2;
                    let j = (i + 1) % rank;
                    a[i][j] -= 1;
                    a[j][i] -= 1;
                }
                return Self::from_matrix(labels, a);
            }
            _ => return Err(CartanError::UnknownFamily(name.to_string())),
        };
        Self::from_matrix(finite_labels(rank), a)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: Residue) -> &str {
        &self.labels[i]
    }

    pub fn residue(&self, label: &str) -> Result<Residue, CartanError> {
        self.index
            .get(label.trim())
            .copied()
            .ok_or_else(|| CartanError::UnknownLabel(label.trim().to_string()))
    }

    /// `a_{ij} = <h_i, alpha_j>`.
    #[inline]
    pub fn a(&self, i: Residue, j: Residue) -> i64 {
        self.a[i][j]
    }

    #[inline]
    pub fn d(&self, i: Residue) -> i64 {
        self.d[i]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }

    /// `(alpha_i, alpha_j) = d_i a_ij`.
    #[inline]
    pub fn form(&self, i: Residue, j: Residue) -> i64 {
        self.d[i] * self.a[i][j]
    }

    /// `(alpha_i, alpha_i) = 2 d_i`, the degree of `x_k e(nu)` when `nu_k = i`.
    #[inline]
    pub fn norm(&self, i: Residue) -> i64 {
        2 * self.d[i]
    }

    /// `<h_i, Lambda - beta>`.
    pub fn pairing(&self, i: Residue, lambda: &DominantWeight, beta: &RootVector) -> i64 {
        lambda.coords[i] - (0..self.rank()).map(|j| beta.coeffs[j] * self.a[i][j]).sum::<i64>()
    }

    /// The symmetric form `(alpha, beta)` on the root lattice.
    pub fn bilinear(&self, alpha: &RootVector, beta: &RootVector) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if alpha.coeffs[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += alpha.coeffs[i] * beta.coeffs[j] * self.form(i, j);
            }
        }
        s
    }

    /// `(Lambda, alpha) = sum_i alpha_i d_i <h_i, Lambda>`.
    pub fn weight_root_form(&self, lambda: &DominantWeight, alpha: &RootVector) -> i64 {
        (0..self.rank()).map(|i| alpha.coeffs[i] * self.d[i] * lambda.coords[i]).sum()
    }

    /// `d_{Lambda,alpha} = 2(Lambda, alpha) - (alpha, alpha)`.
    pub fn defect_degree(&self, lambda: &DominantWeight, alpha: &RootVector) -> i64 {
        2 * self.weight_root_form(lambda, alpha) - self.bilinear(alpha, alpha)
    }

    pub fn zero_root(&self) -> RootVector {
        RootVector::zero(self.rank())
    }

    pub fn simple_root(&self, i: Residue) -> RootVector {
        let mut r = RootVector::zero(self.rank());
        r.coeffs[i] = 1;
        r
    }

    /// Content of a residue sequence.
    pub fn content(&self, nu: &[Residue]) -> RootVector {
        let mut r = RootVector::zero(self.rank());
        for &i in nu {
            r.coeffs[i] += 1;
        }
        r
    }

    /// Parses `label:coeff,label:coeff` (also accepts `=`); missing labels are 0.
    pub fn parse_coords(&self, text: &str) -> Result<Vec<i64>, CartanError> {
        let mut v = vec![0i64; self.rank()];
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (l, c) = part
                .split_once(':')
                .or_else(|| part.split_once('='))
                .ok_or_else(|| CartanError::UnknownLabel(part.to_string()))?;
            let i = self.residue(l)?;
            let c: i64 = c.trim().parse().map_err(|_| CartanError::UnknownLabel(part.to_string()))?;
            v[i] += c;
        }
        Ok(v)
    }

    pub fn weight_from_map<'a, I>(&self, entries: I) -> Result<DominantWeight, CartanError>
    where
        I: IntoIterator<Item = (&'a str, i64)>,
    {
        let mut coords = vec![0; self.rank()];
        for (l, c) in entries {
            coords[self.residue(l)?] += c;
        }
        DominantWeight::new(self, coords)
    }

    pub fn root_from_map<'a, I>(&self, entries: I) -> Result<RootVector, CartanError>
    where
        I: IntoIterator<Item = (&'a str, i64)>,
    {
        let mut coeffs = vec![0; self.rank()];
        for (l, c) in entries {
            coeffs[self.residue(l)?] += c;
        }
        RootVector::new(self, coeffs)
    }

    /// Parses a comma-separated list of labels.
    pub fn parse_sequence(&self, text: &str) -> Result<Vec<Residue>, CartanError> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty() && *s != "()")
            .map(|s| self.residue(s.trim_matches(|c| c == '(' || c == ')')))
            .collect()
    }

    pub fn format_sequence(&self, nu: &[Residue]) -> String {
        let parts: Vec<&str> = nu.iter().map(|&i| self.label(i)).collect();
        format!("({})", parts.join(","))
    }

    pub fn sequence_labels(&self, nu: &[Residue]) -> Vec<String> {
        nu.iter().map(|&i| self.label(i).to_string()).collect()
    }

    /// A short stable fingerprint of the datum, used as a cache key.
    pub fn fingerprint(&self) -> String {
        let rows: Vec<String> = self
            .a
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!(
            "{}|{}|{}",
            self.labels.join(","),
            rows.join(";"),
            self.d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        )
    }
}

fn minimal_symmetrizers(a: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = a.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Ratio::from_integer(1));
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i == j || a[i][j] == 0 || a[j][i] == 0 {
                    continue;
                }
                let want = d[i]? * Ratio::new(a[i][j], a[j][i]);
                match d[j] {
                    None => {
                        d[j] = Some(want);
                        component.push(j);
                        stack.push(j);
                    }
                    Some(existing) if existing != want => return None,
                    _ => {}
                }
            }
        }
        let lcm = component.iter().fold(1i64, |acc, &i| lcm(acc, *d[i].unwrap().denom()));
        let scaled: Vec<i64> = component.iter().map(|&i| (d[i].unwrap() * lcm).to_integer()).collect();
        let g = scaled.iter().fold(0i64, |acc, &x| gcd(acc, x));
        for (&i, &s) in component.iter().zip(&scaled) {
            d[i] = Some(Ratio::from_integer(s / g));
        }
    }
    d.into_iter().map(|x| x.map(|r| r.to_integer())).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// A dominant integral weight, stored by its coordinates `<h_i, Lambda>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DominantWeight {
    pub coords: Vec<i64>,
}

impl DominantWeight {
    pub fn new(datum: &CartanDatum, coords: Vec<i64>) -> Result<Self, CartanError> {
        if coords.len() != datum.rank() {
            return Err(CartanError::SymmetrizerCount { expected: datum.rank(), got: coords.len() });
        }
        if let Some(i) = coords.iter().position(|&c| c < 0) {
            return Err(CartanError::Negative { label: datum.label(i).to_string(), value: coords[i] });
        }
        Ok(Self { coords })
    }

    /// The fundamental weight `Lambda_i` scaled by `k`.
    pub fn fundamental(datum: &CartanDatum, i: Residue, k: i64) -> Self {
        let mut coords = vec![0; datum.rank()];
        coords[i] = k;
        Self { coords }
    }

    pub fn level_sum(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn format(&self, datum: &CartanDatum) -> String {
        format_combination(datum, &self.coords, "L")
    }
}

/// An element of `Q^+`, stored densely over the residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVector {
    pub coeffs: Vec<i64>,
}

impl RootVector {
    pub fn new(datum: &CartanDatum, coeffs: Vec<i64>) -> Result<Self, CartanError> {
        if coeffs.len() != datum.rank() {
            return Err(CartanError::SymmetrizerCount { expected: datum.rank(), got: coeffs.len() });
        }
        if let Some(i) = coeffs.iter().position(|&c| c < 0) {
            return Err(CartanError::Negative { label: datum.label(i).to_string(), value: coeffs[i] });
        }
        Ok(Self { coeffs })
    }

    pub fn zero(rank: usize) -> Self {
        Self { coeffs: vec![0; rank] }
    }

    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn plus_simple(&self, i: Residue) -> Self {
        let mut r = self.clone();
        r.coeffs[i] += 1;
        r
    }

    /// `self - alpha_i`, or `None` if that leaves `Q^+`.
    pub fn minus_simple(&self, i: Residue) -> Option<Self> {
        if self.coeffs[i] == 0 {
            return None;
        }
        let mut r = self.clone();
        r.coeffs[i] -= 1;
        Some(r)
    }

    /// Every residue sequence with this content, in lexicographic order.
    pub fn sequences(&self) -> Vec<Vec<Residue>> {
        let mut out = Vec::new();
        let mut remaining = self.coeffs.clone();
        let mut cur = Vec::with_capacity(self.height() as usize);
        fn rec(remaining: &mut Vec<i64>, cur: &mut Vec<Residue>, left: i64, out: &mut Vec<Vec<Residue>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in 0..remaining.len() {
                if remaining[i] > 0 {
                    remaining[i] -= 1;
                    cur.push(i);
                    rec(remaining, cur, left - 1, out);
                    cur.pop();
                    remaining[i] += 1;
                }
            }
        }
        let h = self.height();
        rec(&mut remaining, &mut cur, h, &mut out);
        out
    }

    /// All nonzero vectors of `Q^+` with height at most `max_height`, ordered
    /// by height then lexicographically.
    pub fn all_up_to_height(rank: usize, max_height: i64) -> Vec<RootVector> {
        let mut out = Vec::new();
        for h in 0..=max_height {
            let mut cur = vec![0i64; rank];
            fn rec(pos: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<RootVector>) {
                if pos + 1 == cur.len() {
                    cur[pos] = left;
                    out.push(RootVector { coeffs: cur.clone() });
                    return;
                }
                for c in (0..=left).rev() {
                    cur[pos] = c;
                    rec(pos + 1, left - c, cur, out);
                }
            }
            if rank == 0 {
                break;
            }
            rec(0, h, &mut cur, &mut out);
        }
        out
    }

    pub fn format(&self, datum: &CartanDatum) -> String {
        format_combination(datum, &self.coeffs, "a")
    }
}

fn format_combination(datum: &CartanDatum, coeffs: &[i64], symbol: &str) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            if c == 1 {
                format!("{symbol}{}", datum.label(i))
            } else {
                format!("{c}{symbol}{}", datum.label(i))
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

impl fmt::Display for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CartanDatum[{}]", self.labels.join(","))
    }
}

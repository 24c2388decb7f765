//! The quiver Hecke algebra `R_beta` in the normal-form basis
//! `x^c tau_w e(nu)`, with `w` written by its lexicographically smallest
//! reduced word.
//!
//! Positions and simple reflections are 0-based throughout.

use std::cell::RefCell;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use pdklr_core::{CartanDatum, Permutation, Residue, RootVector};

use crate::qchoice::QChoice;
use crate::EngineError;

pub const MAX_N: usize = 8;
pub type Exps = [u8; MAX_N];

/// `x^x tau_w e(nu)`; `nu` and `w` index the sequence and permutation tables
/// of the owning [`Klr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub nu: u32,
    pub w: u32,
    pub x: Exps,
}

/// A finite integer combination of normal monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    ctx: u64,
    terms: BTreeMap<Mono, i64>,
}

fn add_i64(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("coefficient overflow")
}

fn mul_i64(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("coefficient overflow")
}

fn add_exps(a: &Exps, b: &Exps) -> Exps {
    let mut out = *a;
    for k in 0..MAX_N {
        out[k] = a[k].checked_add(b[k]).expect("exponent overflow");
    }
    out
}

impl Element {
    fn empty(ctx: u64) -> Self {
        Self { ctx, terms: BTreeMap::new() }
    }

    pub fn context(&self) -> u64 {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Mono) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Mono, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m).or_insert(0);
        *e = add_i64(*e, c);
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &Element, k: i64) {
        for (m, &c) in &other.terms {
            self.add_term(*m, mul_i64(c, k));
        }
    }

    /// `self += k * x^shift * other`.
    fn add_shifted(&mut self, other: &Element, shift: &Exps, k: i64) {
        for (m, &c) in &other.terms {
            self.add_term(Mono { x: add_exps(&m.x, shift), ..*m }, mul_i64(c, k));
        }
    }

    pub fn scale(&self, k: i64) -> Element {
        let mut out = Element::empty(self.ctx);
        out.add_scaled(self, k);
        out
    }

    pub fn plus(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    pub fn minus(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, -1);
        out
    }
}

#[derive(Debug, Clone)]
struct PermData {
    perm: Permutation,
    canon: Vec<u8>,
    /// `left[l]` = index of `s_l w`.
    left: Vec<u32>,
    /// `act[nu]` = index of `w nu`.
    act: Vec<u32>,
    /// `deg tau_w e(nu)` per `nu`.
    deg: Vec<i64>,
}

impl PermData {
    fn min_descent(&self) -> Option<usize> {
        self.canon.first().map(|&l| l as usize)
    }
}

type Memo = RefCell<HashMap<(Vec<u8>, u32), Arc<Element>>>;

/// Concrete `R_beta` for a datum, a root `beta` of height `n <= 8` and a choice of `Q`.
#[derive(Debug)]
pub struct Klr {
    datum: CartanDatum,
    beta: RootVector,
    q: QChoice,
    n: usize,
    ctx: u64,
    seqs: Vec<Vec<Residue>>,
    seq_index: HashMap<Vec<Residue>, u32>,
    perms: Vec<PermData>,
    perm_index: HashMap<Vec<usize>, u32>,
    identity: u32,
    t_memo: RefCell<HashMap<(u8, u32, u32), Arc<Element>>>,
    w_memo: Memo,
}

fn braid_words(l: usize, m: usize) -> (Vec<u8>, Vec<u8>) {
    let (l8, m8) = (l as u8, m as u8);
    if l.abs_diff(m) >= 2 {
        (vec![l8, m8], vec![m8, l8])
    } else {
        (vec![l8, m8, l8], vec![m8, l8, m8])
    }
}

fn concat(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

impl Klr {
    pub fn new(datum: &CartanDatum, beta: &RootVector, q: QChoice) -> Result<Self, EngineError> {
        q.validate(datum, 0)?;
        let n = beta.height() as usize;
        if n > MAX_N {
            return Err(EngineError::TooLarge { n, max: MAX_N });
        }
        let seqs = beta.sequences();
        let seq_index: HashMap<Vec<Residue>, u32> = seqs.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let all = Permutation::all(n);
        let perm_index: HashMap<Vec<usize>, u32> =
            all.iter().enumerate().map(|(i, p)| (p.images().to_vec(), i as u32)).collect();
        let mut perms = Vec::with_capacity(all.len());
        for p in &all {
            let canon = p.canonical_word().into_iter().map(|l| l as u8).collect();
            let left = (0..n.saturating_sub(1)).map(|l| perm_index[p.left_mul_simple(l).images()]).collect();
            let act = seqs.iter().map(|s| seq_index[&p.act(s)]).collect();
            let deg = seqs
                .iter()
                .map(|s| {
                    let mut d = 0;
                    for i in 0..n {
                        for j in i + 1..n {
                            if p.apply(i) > p.apply(j) {
                                d -= datum.form(s[i], s[j]);
                            }
                        }
                    }
                    d
                })
                .collect();
            perms.push(PermData { perm: p.clone(), canon, left, act, deg });
        }
        let identity = perm_index[&(0..n).collect::<Vec<_>>()];
        let mut h = DefaultHasher::new();
        datum.fingerprint().hash(&mut h);
        beta.coeffs.hash(&mut h);
        q.fingerprint().hash(&mut h);
        Ok(Self {
            datum: datum.clone(),
            beta: beta.clone(),
            q,
            n,
            ctx: h.finish(),
            seqs,
            seq_index,
            perms,
            perm_index,
            identity,
            t_memo: RefCell::new(HashMap::new()),
            w_memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn beta(&self) -> &RootVector {
        &self.beta
    }

    pub fn qchoice(&self) -> &QChoice {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn context(&self) -> u64 {
        self.ctx
    }

    pub fn sequences(&self) -> &[Vec<Residue>] {
        &self.seqs
    }

    pub fn seq_id(&self, nu: &[Residue]) -> Result<u32, EngineError> {
        self.seq_index.get(nu).copied().ok_or(EngineError::NotInBlock)
    }

    pub fn num_perms(&self) -> usize {
        self.perms.len()
    }

    pub fn perm(&self, w: u32) -> &Permutation {
        &self.perms[w as usize].perm
    }

    pub fn perm_id(&self, p: &Permutation) -> u32 {
        self.perm_index[p.images()]
    }

    pub fn identity_perm(&self) -> u32 {
        self.identity
    }

    pub fn canonical_word(&self, w: u32) -> Vec<usize> {
        self.perms[w as usize].canon.iter().map(|&l| l as usize).collect()
    }

    pub fn zero(&self) -> Element {
        Element::empty(self.ctx)
    }

    pub fn monomial(&self, m: Mono) -> Element {
        let mut e = self.zero();
        e.add_term(m, 1);
        e
    }

    /// Index of the left idempotent `w nu` of a monomial.
    pub fn left_idem(&self, m: &Mono) -> u32 {
        self.perms[m.w as usize].act[m.nu as usize]
    }

    pub fn degree(&self, m: &Mono) -> i64 {
        let mu = &self.seqs[self.left_idem(m) as usize];
        let xd: i64 = (0..self.n).map(|k| m.x[k] as i64 * self.datum.norm(mu[k])).sum();
        xd + self.perms[m.w as usize].deg[m.nu as usize]
    }

    /// `deg tau_w e(nu)`.
    pub fn tau_degree(&self, w: u32, nu: u32) -> i64 {
        self.perms[w as usize].deg[nu as usize]
    }

    /// The common degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, e: &Element) -> Option<i64> {
        let mut it = e.terms.keys().map(|m| self.degree(m));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn idempotent(&self, nu: u32) -> Element {
        self.monomial(Mono { nu, w: self.identity, x: [0; MAX_N] })
    }

    pub fn one(&self) -> Element {
        let mut e = self.zero();
        for nu in 0..self.seqs.len() as u32 {
            e.add_term(Mono { nu, w: self.identity, x: [0; MAX_N] }, 1);
        }
        e
    }

    /// `x^exps e(nu)`.
    pub fn x_mono(&self, nu: u32, exps: &[u32]) -> Result<Element, EngineError> {
        let mut x = [0u8; MAX_N];
        for (k, &e) in exps.iter().enumerate() {
            if k >= self.n && e > 0 {
                return Err(EngineError::BadIndex(k));
            }
            if k < MAX_N {
                x[k] = u8::try_from(e).map_err(|_| EngineError::ExponentTooLarge(e))?;
            }
        }
        Ok(self.monomial(Mono { nu, w: self.identity, x }))
    }

    /// `x_k e(nu)`.
    pub fn x(&self, k: usize, nu: u32) -> Element {
        let mut x = [0u8; MAX_N];
        x[k] = 1;
        self.monomial(Mono { nu, w: self.identity, x })
    }

    /// `tau_l e(nu)`.
    pub fn tau(&self, l: usize, nu: u32) -> Element {
        self.left_mul_tau(l, &self.idempotent(nu))
    }

    /// `sum_nu x_k e(nu)`.
    pub fn x_all(&self, k: usize) -> Element {
        let mut e = self.zero();
        for nu in 0..self.seqs.len() as u32 {
            e.add_scaled(&self.x(k, nu), 1);
        }
        e
    }

    /// `sum_nu tau_l e(nu)`.
    pub fn tau_all(&self, l: usize) -> Element {
        self.left_mul_tau(l, &self.one())
    }

    fn check(&self, e: &Element) -> Result<(), EngineError> {
        if e.ctx != self.ctx {
            return Err(EngineError::ContextMismatch);
        }
        Ok(())
    }

    /// `x^exps * e`.
    pub fn left_mul_x(&self, exps: &Exps, e: &Element) -> Element {
        let mut out = self.zero();
        out.add_shifted(e, exps, 1);
        out
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, EngineError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    fn mul_unchecked(&self, a: &Element, b: &Element) -> Element {
        let mut by_left: HashMap<u32, Element> = HashMap::new();
        for (m, &c) in &b.terms {
            by_left.entry(self.left_idem(m)).or_insert_with(|| self.zero()).add_term(*m, c);
        }
        let mut out = self.zero();
        for (ma, &ca) in &a.terms {
            let Some(part) = by_left.get(&ma.nu) else { continue };
            let mut cur = part.clone();
            for &l in self.perms[ma.w as usize].canon.iter().rev() {
                cur = self.left_mul_tau(l as usize, &cur);
            }
            out.add_shifted(&cur, &ma.x, ca);
        }
        out
    }

    /// `Q_{mu_l, mu_{l+1}}(x_l, x_{l+1}) * e`, with `mu` the left idempotent of each term.
    fn q_times(&self, l: usize, e: &Element) -> Element {
        let mut out = self.zero();
        for (m, &c) in &e.terms {
            let mu = &self.seqs[self.left_idem(m) as usize];
            if mu[l] == mu[l + 1] {
                continue;
            }
            for &(p, q, k) in self.q.terms(mu[l], mu[l + 1]) {
                let mut x = m.x;
                x[l] = x[l].checked_add(p as u8).expect("exponent overflow");
                x[l + 1] = x[l + 1].checked_add(q as u8).expect("exponent overflow");
                out.add_term(Mono { x, ..*m }, mul_i64(c, k));
            }
        }
        out
    }

    /// `tau_l * e`.
    pub fn left_mul_tau(&self, l: usize, e: &Element) -> Element {
        assert!(l + 1 < self.n, "tau_{l} out of range");
        let mut out = self.zero();
        for (m, &c) in &e.terms {
            let mu = &self.seqs[self.left_idem(m) as usize];
            let mut sx = m.x;
            sx.swap(l, l + 1);
            let t = self.t(l, m.w, m.nu);
            out.add_shifted(&t, &sx, c);
            if mu[l] == mu[l + 1] {
                let (a, b) = (m.x[l], m.x[l + 1]);
                let mut put = |i: u8, j: u8, s: i64| {
                    let mut x = m.x;
                    x[l] = i;
                    x[l + 1] = j;
                    out.add_term(Mono { x, ..*m }, mul_i64(c, s));
                };
                if a > b {
                    for i in 0..a - b {
                        put(b + i, a - 1 - i, -1);
                    }
                } else {
                    for i in 0..b - a {
                        put(a + i, b - 1 - i, 1);
                    }
                }
            }
        }
        out
    }

    fn basis(&self, w: u32, nu: u32) -> Element {
        self.monomial(Mono { nu, w, x: [0; MAX_N] })
    }

    fn word_perm(&self, r: &[u8]) -> u32 {
        let mut w = self.identity;
        for &l in r.iter().rev() {
            w = self.perms[w as usize].left[l as usize];
        }
        w
    }

    /// `tau_l tau_w e(nu)` in normal form.
    fn t(&self, l: usize, w: u32, nu: u32) -> Arc<Element> {
        if let Some(v) = self.t_memo.borrow().get(&(l as u8, w, nu)) {
            return v.clone();
        }
        let pd = &self.perms[w as usize];
        let res = if !pd.perm.is_left_descent(l) {
            let word = concat(&[l as u8], &pd.canon);
            (*self.w_word(&word, nu)).clone()
        } else {
            let m = pd.min_descent().unwrap();
            let u = pd.left[l];
            if m == l {
                self.q_times(l, &self.basis(u, nu))
            } else {
                let (pl, _) = braid_words(l, m);
                let z = self.word_perm_from(&pl, w);
                let c = &self.perms[z as usize].canon;
                let first = self.q_times(l, &self.w_word(&concat(&pl[1..], c), nu));
                let diff = self.basis(w, nu).minus(&self.w_word(&concat(&pl, c), nu));
                first.plus(&self.left_mul_tau(l, &diff))
            }
        };
        let res = Arc::new(res);
        self.t_memo.borrow_mut().insert((l as u8, w, nu), res.clone());
        res
    }

    /// Index of `p w` where `p` has word `word`.
    fn word_perm_from(&self, word: &[u8], w: u32) -> u32 {
        let mut z = w;
        for &l in word.iter().rev() {
            z = self.perms[z as usize].left[l as usize];
        }
        z
    }

    /// `tau_{r_0} ... tau_{r_k} e(nu)` for a reduced word `r`, in normal form.
    fn w_word(&self, r: &[u8], nu: u32) -> Arc<Element> {
        let v = self.word_perm(r);
        let pd = &self.perms[v as usize];
        if r == pd.canon.as_slice() {
            return Arc::new(self.basis(v, nu));
        }
        let key = (r.to_vec(), nu);
        if let Some(e) = self.w_memo.borrow().get(&key) {
            return e.clone();
        }
        let l = r[0] as usize;
        let rest = &r[1..];
        let u = pd.left[l];
        let m = pd.min_descent().unwrap();
        let tail_diff = self.w_word(rest, nu).minus(&self.basis(u, nu));
        let mut res = self.left_mul_tau(l, &tail_diff);
        if l == m {
            res.add_scaled(&self.basis(v, nu), 1);
        } else {
            let (pl, pm) = braid_words(l, m);
            let z = self.word_perm_from(&pl, v);
            let c = self.perms[z as usize].canon.clone();
            res.add_scaled(&self.w_word(&concat(&pm, &c), nu), 1);
            res.add_scaled(&self.braid_correction(l, m, z, nu), 1);
            let inner = self.w_word(&concat(&pl[1..], &c), nu).minus(&self.basis(u, nu));
            res.add_scaled(&self.left_mul_tau(l, &inner), -1);
        }
        let res = Arc::new(res);
        self.w_memo.borrow_mut().insert(key, res.clone());
        res
    }

    /// `(tau_l tau_m tau_l - tau_m tau_l tau_m) tau_z e(nu)` for `|l - m| = 1`, zero otherwise.
    fn braid_correction(&self, l: usize, m: usize, z: u32, nu: u32) -> Element {
        let mut out = self.zero();
        if l.abs_diff(m) != 1 {
            return out;
        }
        let k = l.min(m);
        let mu = &self.seqs[self.perms[z as usize].act[nu as usize] as usize];
        if mu[k] != mu[k + 2] {
            return out;
        }
        let sign = if l == k + 1 { 1 } else { -1 };
        for &(p, q, c) in self.q.terms(mu[k], mu[k + 1]) {
            for s in 0..p {
                let mut x = [0u8; MAX_N];
                x[k] = s as u8;
                x[k + 1] = q as u8;
                x[k + 2] = (p - 1 - s) as u8;
                out.add_term(Mono { nu, w: z, x }, sign * c);
            }
        }
        out
    }

    /// Multiplies the letters of a word, `Ok(l)` for `tau_l` and `Err((k, e))` for `x_k^e`,
    /// onto `e(nu)`.
    pub fn word_element(&self, letters: &[Result<usize, (usize, u32)>], nu: u32) -> Result<Element, EngineError> {
        let mut cur = self.idempotent(nu);
        for letter in letters.iter().rev() {
            cur = match *letter {
                Ok(l) => {
                    if l + 1 >= self.n {
                        return Err(EngineError::BadIndex(l));
                    }
                    self.left_mul_tau(l, &cur)
                }
                Err((k, e)) => {
                    if k >= self.n {
                        return Err(EngineError::BadIndex(k));
                    }
                    let mut x = [0u8; MAX_N];
                    x[k] = u8::try_from(e).map_err(|_| EngineError::ExponentTooLarge(e))?;
                    self.left_mul_x(&x, &cur)
                }
            };
        }
        Ok(cur)
    }

    /// All monomials of degree `d`.
    pub fn monomials_of_degree(&self, d: i64) -> Vec<Mono> {
        let mut out = Vec::new();
        for (w, pd) in self.perms.iter().enumerate() {
            for nu in 0..self.seqs.len() {
                let rest = d - pd.deg[nu];
                if rest < 0 {
                    continue;
                }
                let mu = &self.seqs[pd.act[nu] as usize];
                let weights: Vec<i64> = mu.iter().map(|&i| self.datum.norm(i)).collect();
                let mut x = [0u8; MAX_N];
                self.fill_exps(&weights, 0, rest, &mut x, &mut |x| {
                    out.push(Mono { nu: nu as u32, w: w as u32, x: *x })
                });
            }
        }
        out
    }

    /// Calls `f` for every `x` with `sum x_k weights_k = rest` over positions `k >= pos`.
    pub(crate) fn fill_exps(&self, weights: &[i64], pos: usize, rest: i64, x: &mut Exps, f: &mut dyn FnMut(&Exps)) {
        if pos == weights.len() {
            if rest == 0 {
                f(x);
            }
            return;
        }
        let mut e = 0;
        while e * weights[pos] <= rest && e <= u8::MAX as i64 {
            x[pos] = e as u8;
            self.fill_exps(weights, pos + 1, rest - e * weights[pos], x, f);
            e += 1;
        }
        x[pos] = 0;
    }

    /// Smallest degree of any monomial.
    pub fn min_degree(&self) -> i64 {
        self.perms.iter().flat_map(|p| p.deg.iter().copied()).min().unwrap_or(0)
    }

    pub fn render(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, &c) in &e.terms {
            let mut s = String::new();
            for k in 0..self.n {
                match m.x[k] {
                    0 => {}
                    1 => s.push_str(&format!("x{}", k + 1)),
                    p => s.push_str(&format!("x{}^{}", k + 1, p)),
                }
            }
            for &l in &self.perms[m.w as usize].canon {
                s.push_str(&format!("t{}", l + 1));
            }
            s.push_str(&format!("e{}", self.datum.format_sequence(&self.seqs[m.nu as usize])));
            parts.push(if c == 1 { s } else { format!("{c}*{s}") });
        }
        parts.join(" + ")
    }
}

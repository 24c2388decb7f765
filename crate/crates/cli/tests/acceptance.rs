//! Acceptance matrix: one PASS/FAIL line per criterion, with oracles computed here.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pdklr_core::crystal::{self, TieBreak};
use pdklr_core::gdim::{graded_dim_algebra, graded_dim_pair};
use pdklr_core::multiplicity::{freudenthal_mult, Freudenthal};
use pdklr_core::pdseq::{enumerate_pd, is_piecewise_dominant, z_monomial};
use pdklr_core::{CartanDatum, DominantWeight, RootVector};
use pdklr_engine::algebra::{Mono, MAX_N};
use pdklr_engine::cocenter::Cocenter;
use pdklr_engine::verify::{self, SpanMode};
use pdklr_engine::{checks, Field, GradedQuotient, Klr, PrimeField, QChoice, QuotientOptions, Rationals};

// ---------------------------------------------------------------- oracles

/// Bilinear data rebuilt from the bare matrix.
struct Form {
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

impl Form {
    fn new(datum: &CartanDatum) -> Self {
        let a = datum.matrix().to_vec();
        let r = a.len();
        // d_i as num/den, spread along edges by d_j = d_i a_ij / a_ji
        let mut frac: Vec<Option<(i64, i64)>> = vec![None; r];
        for start in 0..r {
            if frac[start].is_some() {
                continue;
            }
            frac[start] = Some((1, 1));
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let (n, m) = frac[i].unwrap();
                for j in 0..r {
                    if a[i][j] != 0 && frac[j].is_none() {
                        let (n2, m2) = (n * a[i][j], m * a[j][i]);
                        let g = gcd(n2, m2) * m2.signum();
                        frac[j] = Some((n2 / g, m2 / g));
                        stack.push(j);
                    }
                }
            }
        }
        let lcm = frac.iter().fold(1, |l, f| l / gcd(l, f.unwrap().1) * f.unwrap().1);
        let mut d: Vec<i64> = frac.iter().map(|f| f.unwrap().0 * lcm / f.unwrap().1).collect();
        let g = d.iter().fold(0, |g, &x| gcd(g, x));
        d.iter_mut().for_each(|x| *x /= g);
        for i in 0..r {
            for j in 0..r {
                assert_eq!(d[i] * a[i][j], d[j] * a[j][i], "not symmetrizable");
            }
        }
        Self { a, d }
    }

    /// `<h_i, Lambda - content(prefix)>`
    fn ell(&self, lam: &[i64], prefix: &[usize], i: usize) -> i64 {
        lam[i] - prefix.iter().map(|&j| self.a[i][j]).sum::<i64>()
    }

    fn defect(&self, lam: &[i64], alpha: &[i64]) -> i64 {
        let r = self.a.len();
        let la: i64 = (0..r).map(|i| self.d[i] * lam[i] * alpha[i]).sum();
        let aa: i64 = (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| alpha[i] * alpha[j] * self.d[i] * self.a[i][j]).sum();
        2 * la - aa
    }

    fn is_pd(&self, lam: &[i64], nu: &[usize]) -> bool {
        let mut start = 0;
        while start < nu.len() {
            let mut end = start;
            while end < nu.len() && nu[end] == nu[start] {
                end += 1;
            }
            if self.ell(lam, &nu[..start], nu[start]) < (end - start) as i64 {
                return false;
            }
            start = end;
        }
        true
    }
}

fn sequences_of(alpha: &[i64]) -> Vec<Vec<usize>> {
    let n: i64 = alpha.iter().sum();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut left = alpha.to_vec();
    fn go(left: &mut Vec<i64>, cur: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..left.len() {
            if left[i] > 0 {
                left[i] -= 1;
                cur.push(i);
                go(left, cur, n, out);
                cur.pop();
                left[i] += 1;
            }
        }
    }
    go(&mut left, &mut cur, n as usize, &mut out);
    out
}

fn roots_up_to(rank: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|v: Vec<i64>| (0..=h).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out.retain(|v| v.iter().sum::<i64>() <= h);
    out
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n { 0 } else { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

// ---------------------------------------------------------------- fixtures

fn sweep_data() -> Vec<(&'static str, CartanDatum)> {
    [("A2", "a", 2), ("B2", "b", 2), ("G2", "g", 2), ("rank-1", "rank1", 1), ("A1^(1)", "affine-a", 2), ("A2^(1)", "affine-a", 3)]
        .into_iter()
        .map(|(name, f, r)| (name, CartanDatum::family(f, r).unwrap()))
        .collect()
}

struct Instance {
    name: String,
    datum: CartanDatum,
    lambda: Vec<i64>,
    alpha: Vec<i64>,
}

fn engine_instances() -> Vec<Instance> {
    let rank1 = CartanDatum::family("rank1", 1).unwrap();
    let a2 = CartanDatum::family("a", 2).unwrap();
    let mut v = Vec::new();
    for (n, l) in [(1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 3)] {
        v.push(Instance { name: format!("NH_{n}^{l}"), datum: rank1.clone(), lambda: vec![l], alpha: vec![n] });
    }
    for alpha in roots_up_to(2, 3).into_iter().filter(|a| a.iter().sum::<i64>() > 0) {
        v.push(Instance { name: format!("A2 L1+L2 a={alpha:?}"), datum: a2.clone(), lambda: vec![1, 1], alpha });
    }
    v
}

fn quotient<F: Field>(inst: &Instance, field: F) -> GradedQuotient<F> {
    let d = &inst.datum;
    let klr = Klr::new(d, &RootVector::new(d, inst.alpha.clone()).unwrap(), QChoice::standard(d)).unwrap();
    let lam = DominantWeight::new(d, inst.lambda.clone()).unwrap();
    GradedQuotient::build(klr, &lam, field, &QuotientOptions::default()).expect("quotient build")
}

/// Everything needed from one built cocenter.
struct Built {
    field: String,
    dims: BTreeMap<i64, usize>,
    total: usize,
    formula: pdklr_core::LaurentPoly,
    tr: BTreeMap<i64, usize>,
    z: BTreeMap<i64, usize>,
    defect: i64,
}

fn build<F: Field>(inst: &Instance, field: F) -> (Built, Cocenter<F>) {
    let q = quotient(inst, field);
    let d = &inst.datum;
    let lam = DominantWeight::new(d, inst.lambda.clone()).unwrap();
    let alpha = RootVector::new(d, inst.alpha.clone()).unwrap();
    let formula_indep = graded_dim_algebra(d, &lam, &alpha).unwrap();
    let cc = Cocenter::build(q);
    let defect = Form::new(d).defect(&inst.lambda, &inst.alpha);
    let q = &cc.quotient;
    let mut degrees: BTreeSet<i64> = q.pieces().map(|p| p.degree).collect();
    degrees.extend(q.pieces().map(|p| defect - p.degree));
    let b = Built {
        field: q.field.name(),
        dims: q.pieces().map(|p| (p.degree, p.dim())).collect(),
        total: q.total_dim(),
        formula: formula_indep,
        tr: degrees.iter().map(|&j| (j, cc.dim_tr(j))).collect(),
        z: degrees.iter().map(|&j| (j, cc.dim_z(j))).collect(),
        defect,
    };
    (b, cc)
}

// ---------------------------------------------------------------- report

struct Report {
    lines: Vec<(usize, bool, String)>,
}

impl Report {
    fn record(&mut self, n: usize, ok: bool, detail: String) {
        println!("criterion {n:>2}: {} {detail}", if ok { "PASS" } else { "FAIL" });
        self.lines.push((n, ok, detail));
    }
}

// ---------------------------------------------------------------- criteria

fn criterion_1(rep: &mut Report) {
    let d = CartanDatum::family("a", 2).unwrap();
    let lam = DominantWeight::new(&d, vec![1, 1]).unwrap();
    let expected: BTreeSet<Vec<usize>> =
        [vec![], vec![0], vec![1], vec![0, 1], vec![1, 0], vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 0, 1], vec![0, 1, 1, 0]]
            .into_iter()
            .collect();
    let form = Form::new(&d);
    let mut found = BTreeSet::new();
    let mut brute = BTreeSet::new();
    for alpha in roots_up_to(2, 6) {
        found.extend(enumerate_pd(&d, &lam, &RootVector::new(&d, alpha.clone()).unwrap()));
        brute.extend(sequences_of(&alpha).into_iter().filter(|nu| form.is_pd(&[1, 1], nu)));
    }
    let size = crystal::generate(&d, &lam, 4).len();
    // Weyl dimension of V(a L1 + b L2) for sl_3
    let weyl = (1 + 1) * (1 + 1) * (1 + 1 + 2) / 2;
    let ok = found == expected && brute == expected && size == 8 && weyl == 8;
    rep.record(1, ok, format!("A2 L1+L2: {} PD sequences (expected 9), crystal size {size}, Weyl dimension {weyl}", found.len()));
}

fn criterion_2(rep: &mut Report) {
    let d = CartanDatum::family("affine-a", 3).unwrap();
    let lam = DominantWeight::new(&d, vec![4, 0, 0]).unwrap();
    let alpha = RootVector::new(&d, vec![1, 2, 0]).unwrap();
    let form = Form::new(&d);
    let oracle = form.defect(&lam.coords, &alpha.coeffs);
    let defect = d.defect_degree(&lam, &alpha);
    let pd = enumerate_pd(&d, &lam, &alpha).count();
    let brute = sequences_of(&alpha.coeffs).iter().filter(|nu| form.is_pd(&lam.coords, nu)).count();
    let g = graded_dim_algebra(&d, &lam, &alpha).unwrap();
    let m = freudenthal_mult(&d, &lam, &alpha).unwrap();
    let c = crystal::weight_multiplicity(&d, &lam, &alpha);
    let ok = defect == 2 && oracle == 2 && pd == 0 && brute == 0 && g.is_zero() && m == BigInt::from(0) && c == 0;
    rep.record(2, ok, format!("sl3^ 4L0, a0+2a1: defect {defect} (oracle {oracle}), PD {pd}, gdim {g}, Freudenthal {m}, crystal {c}"));
}

fn criterion_3(rep: &mut Report) {
    let d = CartanDatum::family("rank1", 1).unwrap();
    let mut bad = Vec::new();
    for n in 1..=8usize {
        for l in 1..=8i64 {
            let lam = DominantWeight::new(&d, vec![l]).unwrap();
            if is_piecewise_dominant(&d, &lam, &vec![0; n]) != (l >= n as i64) {
                bad.push((n, l));
            }
        }
    }
    rep.record(3, bad.is_empty(), format!("rank 1, 1 <= n, l <= 8: 64 cases, mismatches {bad:?}"));
}

struct Sweep {
    points: usize,
    three_way_bad: Vec<String>,
    pd_found: Vec<(usize, Vec<i64>, Vec<usize>)>,
    z_bad: Vec<String>,
    path_bad: Vec<String>,
    extract_bad: Vec<String>,
    wt_bad: Vec<String>,
    vertices: usize,
    gdim_pairs: usize,
    gdim_bad: Vec<String>,
}

fn sweep() -> Sweep {
    let data = sweep_data();
    let mut s = Sweep {
        points: 0,
        three_way_bad: vec![],
        pd_found: vec![],
        z_bad: vec![],
        path_bad: vec![],
        extract_bad: vec![],
        wt_bad: vec![],
        vertices: 0,
        gdim_pairs: 0,
        gdim_bad: vec![],
    };
    for (di, (name, d)) in data.iter().enumerate() {
        let form = Form::new(d);
        let r = d.rank();
        for lam_c in (0..r).fold(vec![vec![]], |acc: Vec<Vec<i64>>, _| {
            acc.into_iter().flat_map(|v| (0..=4).map(move |c| [v.clone(), vec![c]].concat())).collect()
        }) {
            let lam = DominantWeight::new(d, lam_c.clone()).unwrap();
            let mut fr = Freudenthal::new(d, &lam, 6).unwrap();
            let verts = crystal::generate(d, &lam, 6);
            s.vertices += verts.len();
            let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
            for b in &verts {
                let depth = b.depth().coeffs;
                *counts.entry(depth.clone()).or_default() += 1;
                for i in 0..r {
                    let wt = lam_c[i] - (0..r).map(|j| form.a[i][j] * depth[j]).sum::<i64>();
                    if b.phi(d, &lam, i) - b.eps(d, &lam, i) != wt {
                        s.wt_bad.push(format!("{name} {lam_c:?} {depth:?} i={i}"));
                    }
                }
                let nu = crystal::extract_pd(d, &lam, b, TieBreak::Smallest);
                if !form.is_pd(&lam_c, &nu) || crystal::pd_path(d, &lam, &nu).as_ref() != Ok(b) {
                    s.extract_bad.push(format!("{name} {lam_c:?} {depth:?}"));
                }
            }
            for alpha in roots_up_to(r, 6) {
                s.points += 1;
                let rv = RootVector::new(d, alpha.clone()).unwrap();
                let lib: Vec<Vec<usize>> = enumerate_pd(d, &lam, &rv).collect();
                let brute: Vec<Vec<usize>> = sequences_of(&alpha).into_iter().filter(|nu| form.is_pd(&lam_c, nu)).collect();
                let m = fr.mult(&rv).unwrap();
                let c = counts.get(&alpha).copied().unwrap_or(0);
                let exists = !brute.is_empty();
                let lib_set: BTreeSet<_> = lib.iter().cloned().collect();
                let brute_set: BTreeSet<_> = brute.iter().cloned().collect();
                if lib_set != brute_set || (m != BigInt::from(0)) != exists || (c > 0) != exists || m != BigInt::from(c) {
                    s.three_way_bad.push(format!("{name} L={lam_c:?} a={alpha:?}: pd {} freud {m} crystal {c}", lib.len()));
                }
                let defect = form.defect(&lam_c, &alpha);
                for nu in lib {
                    match z_monomial(d, &lam, &nu) {
                        Ok(z) => {
                            let from_exps: i64 = z.exponents.iter().zip(&nu).map(|(&e, &i)| e as i64 * 2 * form.d[i]).sum();
                            if z.degree != defect || from_exps != defect {
                                s.z_bad.push(format!("{name} L={lam_c:?} nu={nu:?}: deg {} vs {defect}", z.degree));
                            }
                        }
                        Err(e) => s.z_bad.push(format!("{name} L={lam_c:?} nu={nu:?}: {e}")),
                    }
                    match crystal::pd_path(d, &lam, &nu) {
                        Ok(b) if b.depth().coeffs == alpha => {}
                        _ => s.path_bad.push(format!("{name} L={lam_c:?} nu={nu:?}")),
                    }
                    s.pd_found.push((di, lam_c.clone(), nu));
                }
                if alpha.iter().sum::<i64>() <= 4 {
                    let seqs = sequences_of(&alpha);
                    for a in &seqs {
                        for b in &seqs {
                            s.gdim_pairs += 1;
                            let p = graded_dim_pair(d, &lam, a, b);
                            if p != graded_dim_pair(d, &lam, b, a) || p.terms().any(|(_, c)| c < 0) {
                                s.gdim_bad.push(format!("{name} L={lam_c:?} {a:?} {b:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    s
}

fn first(v: &[String]) -> String {
    v.first().cloned().unwrap_or_default()
}

fn criterion_4(rep: &mut Report, s: &Sweep) {
    rep.record(
        4,
        s.three_way_bad.is_empty(),
        format!("{} (datum, L, a) points, {} disagreements {}", s.points, s.three_way_bad.len(), first(&s.three_way_bad)),
    );
}

fn criterion_5(rep: &mut Report, s: &Sweep) {
    rep.record(5, s.z_bad.is_empty(), format!("{} PD sequences, deg Z mismatches {} {}", s.pd_found.len(), s.z_bad.len(), first(&s.z_bad)));
}

fn criterion_9(rep: &mut Report, s: &Sweep) {
    let ok = s.path_bad.is_empty() && s.extract_bad.is_empty() && s.wt_bad.is_empty();
    rep.record(
        9,
        ok,
        format!(
            "{} PD paths ({} null), {} vertices ({} extract failures, {} wt failures)",
            s.pd_found.len(),
            s.path_bad.len(),
            s.vertices,
            s.extract_bad.len(),
            s.wt_bad.len()
        ),
    );
}

struct EngineFacts {
    dims_bad: Vec<String>,
    totals: Vec<String>,
    support_bad: Vec<String>,
    duality_bad: Vec<String>,
    probes: Vec<String>,
    nh23: Option<Nh23>,
    pd_bad: Vec<String>,
    span_bad: Vec<String>,
    pd_checked: usize,
    assoc_bad: Vec<String>,
    rel_bad: Vec<String>,
    built: usize,
}

struct Nh23 {
    support: (i64, i64),
    end_dims: (usize, usize),
    literal: bool,
    corrected: bool,
    unit_nonzero_q: bool,
    unit_zero_f2: bool,
}

fn compare_dims(inst: &Instance, b: &Built, f: &mut EngineFacts) {
    f.built += 1;
    let mut degrees: BTreeSet<i64> = b.dims.keys().copied().collect();
    degrees.extend(b.formula.terms().map(|(d, _)| d));
    for d in degrees {
        let got = b.dims.get(&d).copied().unwrap_or(0) as i64;
        if got != b.formula.coeff(d) {
            f.dims_bad.push(format!("{} over {} degree {d}: {got} vs {}", inst.name, b.field, b.formula.coeff(d)));
        }
    }
    if inst.name.starts_with("NH") && b.field == "Q" {
        let (n, l) = (inst.alpha[0] as u64, inst.lambda[0] as u64);
        let want = factorial(n).pow(2) * binom(l, n);
        if b.total as u64 != want {
            f.dims_bad.push(format!("{} over {}: total {} vs {want}", inst.name, b.field, b.total));
        }
        f.totals.push(format!("{}={}", inst.name, b.total));
    } else if inst.name.starts_with("NH") {
        let (n, l) = (inst.alpha[0] as u64, inst.lambda[0] as u64);
        if b.total as u64 != factorial(n).pow(2) * binom(l, n) {
            f.dims_bad.push(format!("{} over {}: total {}", inst.name, b.field, b.total));
        }
    }
    for (&j, &t) in &b.tr {
        if t > 0 && !(0..=b.defect).contains(&j) {
            f.support_bad.push(format!("{} over {} degree {j}", inst.name, b.field));
        }
        if t != b.z.get(&(b.defect - j)).copied().unwrap_or(0) {
            f.duality_bad.push(format!("{} over {} degree {j}", inst.name, b.field));
        }
    }
}

fn random_mono(k: &Klr, rng: &mut ChaCha8Rng, nu: u32) -> Mono {
    let mut x = [0u8; MAX_N];
    for e in x.iter_mut().take(k.n()) {
        *e = rng.gen_range(0..=2);
    }
    Mono { nu, w: rng.gen_range(0..k.num_perms() as u32), x }
}

fn associativity(k: &Klr, seed: u64) -> Option<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let nu = rng.gen_range(0..k.sequences().len() as u32);
        let c = random_mono(k, &mut rng, nu);
        let b = random_mono(k, &mut rng, k.left_idem(&c));
        let a = random_mono(k, &mut rng, k.left_idem(&b));
        let (a, b, c) = (k.monomial(a), k.monomial(b), k.monomial(c));
        let lhs = k.mul(&k.mul(&a, &b).unwrap(), &c).unwrap();
        let rhs = k.mul(&a, &k.mul(&b, &c).unwrap()).unwrap();
        if lhs != rhs {
            return Some(format!("({})({})({})", k.render(&a), k.render(&b), k.render(&c)));
        }
    }
    None
}

fn engine_facts() -> EngineFacts {
    let mut f = EngineFacts {
        dims_bad: vec![],
        totals: vec![],
        support_bad: vec![],
        duality_bad: vec![],
        probes: vec![],
        nh23: None,
        pd_bad: vec![],
        span_bad: vec![],
        pd_checked: 0,
        assoc_bad: vec![],
        rel_bad: vec![],
        built: 0,
    };
    for (idx, inst) in engine_instances().iter().enumerate() {
        let d = &inst.datum;
        let form = Form::new(d);
        let lam = DominantWeight::new(d, inst.lambda.clone()).unwrap();

        let (bq, cq) = build(inst, Rationals);
        compare_dims(inst, &bq, &mut f);
        let (b2, c2) = build(inst, PrimeField::new(2).unwrap());
        compare_dims(inst, &b2, &mut f);
        let (b3, _) = build(inst, PrimeField::new(3).unwrap());
        compare_dims(inst, &b3, &mut f);

        let k = &cq.quotient.klr;
        if let Some(e) = associativity(k, 1000 + idx as u64) {
            f.assoc_bad.push(format!("{}: {e}", inst.name));
        }
        if let Err(e) = checks::defining_relations(k) {
            f.rel_bad.push(format!("{}: {e}", inst.name));
        }

        // PD classes: e(nu) in degree 0 and S(nu) in the top degree
        for nu in sequences_of(&inst.alpha).into_iter().filter(|nu| form.is_pd(&inst.lambda, nu)) {
            f.pd_checked += 1;
            let id = k.seq_id(&nu).unwrap();
            let ce = cq.class_of(&k.idempotent(id)).unwrap();
            let s = verify::s_element(k, &lam, id).unwrap();
            let cs = cq.class_of(&s);
            let s_ok = matches!(&cs, Ok(c) if c.degree == bq.defect && !cq.is_zero_class(c));
            if ce.degree != 0 || cq.is_zero_class(&ce) || !s_ok {
                f.pd_bad.push(format!("{} nu={nu:?}", inst.name));
            }
        }
        for mode in [SpanMode::Principle1, SpanMode::Principle3] {
            let r = verify::verify_spanning(&cq, mode).unwrap();
            if !r.passed {
                f.span_bad.push(format!("{} {mode:?}", inst.name));
            }
        }

        let alpha = RootVector::new(d, inst.alpha.clone()).unwrap();
        let classes = crystal::pd_classes(d, &lam, &alpha).unwrap().len();
        f.probes.push(format!(
            "{}: d={} dim Tr_d={} #pd_classes={} dim Tr_0={}",
            inst.name,
            bq.defect,
            cq.dim_tr(bq.defect),
            classes,
            cq.dim_tr(0)
        ));

        if inst.name == "NH_2^3" {
            let nz: Vec<i64> = bq.tr.iter().filter(|(_, &t)| t > 0).map(|(&j, _)| j).collect();
            let one = cq.class_of(&k.one()).unwrap();
            let two_x1t1 = cq.class_of(&k.word_element(&[Err((0, 1)), Ok(0)], 0).unwrap().scale(2)).unwrap();
            let field = &cq.quotient.field;
            let neg_one: Vec<BigRational> = one.coords.iter().map(|c| field.neg(c)).collect();
            let unit_f2 = c2.class_of(&c2.quotient.klr.one()).unwrap();
            f.nh23 = Some(Nh23 {
                support: (*nz.first().unwrap(), *nz.last().unwrap()),
                end_dims: (cq.dim_tr(0), cq.dim_tr(4)),
                literal: two_x1t1 == one && !cq.is_zero_class(&one),
                corrected: two_x1t1.coords == neg_one && !cq.is_zero_class(&one),
                unit_nonzero_q: !cq.is_zero_class(&one),
                unit_zero_f2: c2.is_zero_class(&unit_f2),
            });
        }
    }
    f
}

fn criterion_6(rep: &mut Report, f: &EngineFacts) {
    rep.record(
        6,
        f.dims_bad.is_empty(),
        format!("{} builds over Q, F_2, F_3; mismatches {} {}; NH totals {}", f.built, f.dims_bad.len(), first(&f.dims_bad), f.totals.join(" ")),
    );
}

fn criterion_7(rep: &mut Report, f: &EngineFacts) {
    let nh = f.nh23.as_ref().unwrap();
    let ok = f.support_bad.is_empty()
        && nh.support == (0, 4)
        && nh.end_dims == (1, 1)
        && nh.literal
        && nh.unit_nonzero_q
        && nh.unit_zero_f2;
    rep.record(
        7,
        ok,
        format!(
            "support violations {}; NH_2^3 support {:?}, end dims {:?}; class(2x1t1) = class(1): {}; \
             class(2x1t1) = -class(1): {}; class(1) != 0 over Q: {}; class(1) = 0 over F_2: {}",
            f.support_bad.len(),
            nh.support,
            nh.end_dims,
            nh.literal,
            nh.corrected,
            nh.unit_nonzero_q,
            nh.unit_zero_f2
        ),
    );
}

fn criterion_8(rep: &mut Report, f: &EngineFacts) {
    rep.record(
        8,
        f.pd_bad.is_empty() && f.span_bad.is_empty(),
        format!(
            "{} PD idempotents and S elements, failures {:?}; principle 1 and 3 spanning failures {:?}",
            f.pd_checked, f.pd_bad, f.span_bad
        ),
    );
}

fn criterion_10(rep: &mut Report, s: &Sweep, f: &EngineFacts) {
    let ok = f.assoc_bad.is_empty() && f.rel_bad.is_empty() && s.gdim_bad.is_empty() && f.duality_bad.is_empty();
    rep.record(
        10,
        ok,
        format!(
            "associativity failures {} {}; relation failures {} {}; gdim pairs {} (bad {}); duality failures {} {}",
            f.assoc_bad.len(),
            first(&f.assoc_bad),
            f.rel_bad.len(),
            first(&f.rel_bad),
            s.gdim_pairs,
            s.gdim_bad.len(),
            f.duality_bad.len(),
            first(&f.duality_bad)
        ),
    );
}

fn criterion_11(rep: &mut Report, f: &EngineFacts) {
    for p in &f.probes {
        println!("    probe {p}");
    }
    rep.record(11, true, format!("{} instances probed (observations only)", f.probes.len()));
}

/// Criteria that fail because the stated value is wrong, with what was observed instead.
const KNOWN_FAILURES: &[(usize, &str)] =
    &[(7, "the stated class(2x1t1) = class(1) has the wrong sign; class(2x1t1) = -class(1) holds")];

fn main() -> ExitCode {
    let mut rep = Report { lines: vec![] };
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criterion_3(&mut rep);
    let s = sweep();
    criterion_4(&mut rep, &s);
    criterion_5(&mut rep, &s);
    let f = engine_facts();
    criterion_6(&mut rep, &f);
    criterion_7(&mut rep, &f);
    criterion_8(&mut rep, &f);
    criterion_9(&mut rep, &s);
    criterion_10(&mut rep, &s, &f);
    criterion_11(&mut rep, &f);

    let failed: Vec<usize> = rep.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    println!("{} of {} criteria pass", rep.lines.len() - failed.len(), rep.lines.len());
    let mut unexpected = false;
    for n in &failed {
        match KNOWN_FAILURES.iter().find(|k| k.0 == *n) {
            Some((_, why)) => println!("criterion {n:>2} fails as recorded: {why}"),
            None => unexpected = true,
        }
    }
    // a recorded failure must still fail only in the recorded way
    let nh = f.nh23.as_ref().unwrap();
    let seven_as_recorded =
        nh.corrected && !nh.literal && nh.support == (0, 4) && nh.end_dims == (1, 1) && nh.unit_zero_f2 && f.support_bad.is_empty();
    if unexpected || !seven_as_recorded {
        println!("acceptance: unexpected failures");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

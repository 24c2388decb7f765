//! Self-checks on the multiplication: associativity on random monomial
//! triples and the defining relations on generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Element, Klr, Mono, MAX_N};

fn random_mono(k: &Klr, rng: &mut ChaCha8Rng, nu: u32, max_exp: u8) -> Element {
    let w = rng.gen_range(0..k.num_perms() as u32);
    let mut x = [0u8; MAX_N];
    for e in x.iter_mut().take(k.n()) {
        *e = rng.gen_range(0..=max_exp);
    }
    k.monomial(Mono { nu, w, x })
}

/// Composable monomial triples `(a, b, c)`; returns the first failure rendered.
pub fn associativity(k: &Klr, triples: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lead = |e: &Element| *e.terms().next().unwrap().0;
    for _ in 0..triples {
        let nu = rng.gen_range(0..k.sequences().len() as u32);
        let c = random_mono(k, &mut rng, nu, 2);
        let b = random_mono(k, &mut rng, k.left_idem(&lead(&c)), 2);
        let a = random_mono(k, &mut rng, k.left_idem(&lead(&b)), 2);
        let ab_c = k.mul(&k.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = k.mul(&a, &k.mul(&b, &c).unwrap()).unwrap();
        let deg_ok = ab_c.is_zero()
            || k.homogeneous_degree(&ab_c) == Some(k.degree(&lead(&a)) + k.degree(&lead(&b)) + k.degree(&lead(&c)));
        if ab_c != a_bc || !deg_ok {
            return Err(format!("({})({})({})", k.render(&a), k.render(&b), k.render(&c)));
        }
    }
    Ok(())
}

/// Every defining relation evaluated on generators; returns the first violated one.
pub fn defining_relations(k: &Klr) -> Result<(), String> {
    let n = k.n();
    let m = |a: &Element, b: &Element| k.mul(a, b).unwrap();
    let seqs = k.sequences().to_vec();
    let fail = |what: &str, nu: &[usize]| Err(format!("{what} at {}", k.datum().format_sequence(nu)));
    let mut sum = k.zero();
    for nu in 0..seqs.len() as u32 {
        sum.add_scaled(&k.idempotent(nu), 1);
        for nu2 in 0..seqs.len() as u32 {
            let want = if nu == nu2 { k.idempotent(nu) } else { k.zero() };
            if m(&k.idempotent(nu), &k.idempotent(nu2)) != want {
                return fail("idempotent orthogonality", &seqs[nu as usize]);
            }
        }
    }
    if sum != k.one() {
        return Err("idempotents do not sum to 1".into());
    }
    for nu in 0..seqs.len() as u32 {
        let e = k.idempotent(nu);
        let seq = &seqs[nu as usize];
        for a in 0..n {
            for b in 0..n {
                if m(&k.x(a, nu), &k.x(b, nu)) != m(&k.x(b, nu), &k.x(a, nu)) {
                    return fail("x commutation", seq);
                }
            }
            if m(&k.x_all(a), &e) != m(&e, &k.x_all(a)) {
                return fail("x e commutation", seq);
            }
        }
        for l in 0..n.saturating_sub(1) {
            let mut s = seq.clone();
            s.swap(l, l + 1);
            let es = k.idempotent(k.seq_id(&s).unwrap());
            if m(&k.tau_all(l), &e) != m(&es, &k.tau_all(l)) {
                return fail("tau e", seq);
            }
            for l2 in 0..n - 1 {
                if l.abs_diff(l2) > 1 && m(&k.tau_all(l), &k.tau_all(l2)) != m(&k.tau_all(l2), &k.tau_all(l)) {
                    return fail("distant tau commutation", seq);
                }
            }
            let mut q = k.zero();
            if seq[l] != seq[l + 1] {
                for &(p, qq, c) in k.qchoice().terms(seq[l], seq[l + 1]) {
                    let mut x = vec![0u32; n];
                    x[l] += p;
                    x[l + 1] += qq;
                    q.add_scaled(&k.x_mono(nu, &x).unwrap(), c);
                }
            }
            if m(&k.tau_all(l), &k.tau(l, nu)) != q {
                return fail("quadratic relation", seq);
            }
            for j in 0..n {
                let sj = if j == l { l + 1 } else if j == l + 1 { l } else { j };
                let lhs = m(&k.tau_all(l), &k.x(j, nu)).minus(&m(&k.x_all(sj), &k.tau(l, nu)));
                let want = match (seq[l] == seq[l + 1], j == l, j == l + 1) {
                    (true, true, _) => e.scale(-1),
                    (true, _, true) => e.clone(),
                    _ => k.zero(),
                };
                if lhs != want {
                    return fail("tau x relation", seq);
                }
            }
        }
        for l in 0..n.saturating_sub(2) {
            let t = |i: usize| k.tau_all(i);
            let lhs = m(&m(&m(&t(l + 1), &t(l)), &t(l + 1)), &e).minus(&m(&m(&m(&t(l), &t(l + 1)), &t(l)), &e));
            let mut want = k.zero();
            if seq[l] == seq[l + 2] {
                for &(p, q, c) in k.qchoice().terms(seq[l], seq[l + 1]) {
                    for s in 0..p {
                        let mut x = vec![0u32; n];
                        x[l] = s;
                        x[l + 1] = q;
                        x[l + 2] = p - 1 - s;
                        want.add_scaled(&k.x_mono(nu, &x).unwrap(), c);
                    }
                }
            }
            if lhs != want {
                return fail("braid relation", seq);
            }
        }
    }
    Ok(())
}

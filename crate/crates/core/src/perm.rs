//! Permutations of `{0, .., n-1}` in one-line notation.
//!
//! Simple reflections are 0-based: `s_l` swaps `l` and `l + 1`, so the
//! generator written `s_1` elsewhere is `s_0` here. A word `[l1, .., lk]`
//! denotes the product `s_l1 ... s_lk`.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// From one-line notation `images[i] = w(i)`; `None` unless a bijection.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Self { images })
    }

    pub fn from_word(n: usize, word: &[usize]) -> Self {
        let mut w = Self::identity(n);
        for &l in word.iter().rev() {
            w = w.left_mul_simple(l);
        }
        w
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Self { images: inv }
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    /// `s_l * self`: swaps the values `l` and `l + 1`.
    pub fn left_mul_simple(&self, l: usize) -> Self {
        let images = self
            .images
            .iter()
            .map(|&v| if v == l { l + 1 } else if v == l + 1 { l } else { v })
            .collect();
        Self { images }
    }

    /// `self * s_l`: swaps the positions `l` and `l + 1`.
    pub fn right_mul_simple(&self, l: usize) -> Self {
        let mut images = self.images.clone();
        images.swap(l, l + 1);
        Self { images }
    }

    pub fn length(&self) -> usize {
        let n = self.n();
        let mut inv = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `l(s_l w) < l(w)`.
    pub fn is_left_descent(&self, l: usize) -> bool {
        let pos = |v: usize| self.images.iter().position(|&x| x == v).unwrap();
        pos(l) > pos(l + 1)
    }

    /// `l(w s_l) < l(w)`.
    pub fn is_right_descent(&self, l: usize) -> bool {
        self.images[l] > self.images[l + 1]
    }

    pub fn left_descents(&self) -> Vec<usize> {
        (0..self.n().saturating_sub(1)).filter(|&l| self.is_left_descent(l)).collect()
    }

    /// The lexicographically smallest reduced word.
    pub fn canonical_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        while let Some(&l) = w.left_descents().first() {
            word.push(l);
            w = w.left_mul_simple(l);
        }
        word
    }

    /// `(w nu)_k = nu_{w^{-1}(k)}`.
    pub fn act<T: Clone>(&self, nu: &[T]) -> Vec<T> {
        let mut out = nu.to_vec();
        for (i, &v) in self.images.iter().enumerate() {
            out[v] = nu[i].clone();
        }
        out
    }

    /// Every permutation of `n` letters, in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = (0..n).collect::<Vec<_>>();
        loop {
            out.push(Self { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// The longest element of the symmetric group on `n` letters.
    pub fn longest(n: usize) -> Self {
        Self { images: (0..n).rev().collect() }
    }
}

/// All `w` with `w nu = nu2`; empty if the contents differ.
pub fn orbit_transporters<T: Eq + Clone>(nu: &[T], nu2: &[T]) -> Vec<Permutation> {
    if nu.len() != nu2.len() {
        return Vec::new();
    }
    let n = nu.len();
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec<T: Eq>(
        i: usize,
        nu: &[T],
        nu2: &[T],
        images: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Permutation>,
    ) {
        if i == nu.len() {
            out.push(Permutation { images: images.clone() });
            return;
        }
        for v in 0..nu.len() {
            if !used[v] && nu2[v] == nu[i] {
                used[v] = true;
                images[i] = v;
                rec(i + 1, nu, nu2, images, used, out);
                used[v] = false;
            }
        }
    }
    rec(0, nu, nu2, &mut images, &mut used, &mut out);
    out
}

/// The word `s_0 (s_1 s_0) (s_2 s_1 s_0) ...` for the longest element on `b`
/// letters, shifted by `offset`.
pub fn longest_word(b: usize, offset: usize) -> Vec<usize> {
    let mut word = Vec::with_capacity(b * b.saturating_sub(1) / 2);
    for k in 1..b {
        for j in (0..k).rev() {
            word.push(offset + j);
        }
    }
    word
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

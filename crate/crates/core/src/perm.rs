//! Permutations in one-line notation, with the composition convention
//! fixed once for the whole crate.
//!
//! `(s.compose(&t))` is the function `i -> s(t(i))`: apply `t` first, then
//! `s`. The opposite order is `t.compose(&s)`. Right actions written
//! `x . s` therefore satisfy `x . (s.compose(&t)) = (x . s) . t`, and on
//! matrices `rho(s.compose(&t)) = rho(t) * rho(s)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A permutation of `{1..n}` stored 0-based: `images[i] = sigma(i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { images: (0..n).collect() }
    }

    /// From 0-based images; must be a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Invalid(alloc::format!(
                    "not a bijection of 0..{n}: {images:?}"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// From the usual 1-based one-line notation.
    pub fn from_one_line(line: &[usize]) -> Result<Perm> {
        if line.iter().any(|&i| i == 0) {
            return Err(Error::Invalid(alloc::string::String::from(
                "one-line notation is 1-based",
            )));
        }
        Perm::from_images(line.iter().map(|&i| i - 1).collect())
    }

    /// The transposition `(i j)` on `{1..n}`, arguments 1-based.
    pub fn transposition(n: usize, i: usize, j: usize) -> Perm {
        assert!(i >= 1 && j >= 1 && i <= n && j <= n && i != j);
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, j - 1);
        Perm { images }
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    /// 0-based application.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    /// `self.compose(&t)` is `i -> self(t(i))`: `t` acts first.
    pub fn compose(&self, t: &Perm) -> Result<Perm> {
        if self.arity() != t.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: t.arity() });
        }
        Ok(Perm { images: t.images.iter().map(|&i| self.images[i]).collect() })
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.arity()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Sign by inversion count.
    pub fn sign(&self) -> i64 {
        let mut inversions = 0usize;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Writes `self` as a product of adjacent transpositions
    /// `t[k1] ∘ t[k2] ∘ ...` (leftmost acts last); returned values are the
    /// 1-based positions `k` of each `t_k = (k, k+1)`.
    pub fn adjacent_factors(&self) -> Vec<usize> {
        let mut work = self.images.clone();
        let mut right_factors = Vec::new();
        loop {
            let Some(k) = (0..work.len().saturating_sub(1)).find(|&k| work[k] > work[k + 1])
            else {
                break;
            };
            // work := work ∘ t_{k+1} swaps the two entries.
            work.swap(k, k + 1);
            right_factors.push(k + 1);
        }
        // self ∘ t_{k1} ∘ ... ∘ t_{km} = id, hence self = t_{km} ∘ ... ∘ t_{k1}.
        right_factors.reverse();
        right_factors
    }

    /// All of S_n in lexicographic one-line order. Only ever used for
    /// n <= 4.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut items: Vec<usize> = (0..n).collect();
        permute_rec(&mut items, 0, &mut out);
        out.sort_by(|a, b| a.images.cmp(&b.images));
        out
    }
}

fn permute_rec(items: &mut Vec<usize>, start: usize, out: &mut Vec<Perm>) {
    if start == items.len() {
        out.push(Perm { images: items.clone() });
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute_rec(items, start + 1, out);
        items.swap(start, i);
    }
}

/// The block substitution `sigma ∘_i tau` in `S_{m+n-1}`: slot `i` of a
/// composition gets fattened to `tau`'s `n` inputs while `sigma`
/// rearranges the blocks. Defined so that the endomorphism-operad
/// equivariance `(f ∘_i g)(sigma ∘_i tau) = (f sigma) ∘_{sigma^{-1}(i)} (g tau)`
/// holds; see the unit test that pins it against direct evaluation.
pub fn block_compose(sigma: &Perm, i: usize, tau: &Perm) -> Perm {
    let m = sigma.arity();
    let n = tau.arity();
    assert!((1..=m).contains(&i));
    let sigma_inv = sigma.inverse();
    let tau_inv = tau.inverse();
    let fat_input_block = sigma_inv.apply(i - 1); // 0-based block position on the input side
    // Start offset of each input block: blocks sit in input order, the one
    // at `fat_input_block` has width n.
    let input_start = |b: usize| -> usize {
        if b <= fat_input_block {
            b
        } else {
            b + n - 1
        }
    };
    // psi maps slot positions to input positions; slot blocks are in the
    // order 1..m with block i fat.
    let mut psi = vec![0usize; m + n - 1];
    let mut slot = 0usize;
    for block in 0..m {
        let width = if block + 1 == i { n } else { 1 };
        let target = input_start(sigma_inv.apply(block));
        for off in 0..width {
            let local = if width == 1 { 0 } else { tau_inv.apply(off) };
            psi[slot] = target + local;
            slot += 1;
        }
    }
    Perm { images: psi }.inverse()
}

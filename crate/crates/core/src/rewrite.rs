//! Word-level rewriting to an ordered normal form.
//!
//! Independent of [`Algebra`](crate::algebra::Algebra): words are plain
//! letter lists, and each step replaces one adjacent descent `b a` (`b > a`)
//! by `λ a b + Σ c_w w` as dictated by a [`RewriteRules`] implementation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pbw::{Monomial, PbwPoly};
use crate::presentation::CglPresentation;
use crate::scalar::Scalar;

/// A linear combination of words.
pub type WordSum = Vec<(Scalar, Vec<usize>)>;

/// Which adjacent descent to rewrite first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

pub trait RewriteRules {
    /// For letters `hi > lo`: `x_hi x_lo = scalar * x_lo x_hi + correction`.
    fn swap(&self, hi: usize, lo: usize) -> Result<(Scalar, WordSum)>;
}

/// Rules read directly off a presentation: `x_k x_j = λ_kj x_j x_k + Q_kj`.
pub struct PresentationRules<'a>(pub &'a CglPresentation);

impl RewriteRules for PresentationRules<'_> {
    fn swap(&self, hi: usize, lo: usize) -> Result<(Scalar, WordSum)> {
        let q = self.0.q(hi, lo).map(words_of).unwrap_or_default();
        Ok((self.0.lambda(hi, lo).to_scalar(), q))
    }
}

/// Converts a PBW polynomial to a word sum (each monomial read left to right).
pub fn words_of(p: &PbwPoly) -> WordSum {
    p.terms().map(|(mono, c)| (c.clone(), mono.letters().collect())).collect()
}

/// Rewrites a sum of words into ordered normal form.
pub fn normalize<R: RewriteRules + ?Sized>(
    rules: &R,
    n: usize,
    m: usize,
    input: WordSum,
    strategy: Strategy,
    fuel: u64,
) -> Result<PbwPoly> {
    let mut pending: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<Vec<usize>, Scalar>, w: Vec<usize>, c: Scalar| {
        let e = pending.entry(w).or_insert_with(|| Scalar::zero(m));
        *e = e.add(&c);
    };
    for (c, w) in input {
        if !c.is_zero() {
            push(&mut pending, w, c);
        }
    }
    let mut out = PbwPoly::zero(n, m);
    let mut steps = 0u64;
    while let Some((w, c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        let descent = match strategy {
            Strategy::Leftmost => (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]),
            Strategy::Rightmost => (0..w.len().saturating_sub(1)).rev().find(|&i| w[i] > w[i + 1]),
        };
        let Some(i) = descent else {
            let mut e = vec![0u32; n];
            for &l in &w {
                e[l] += 1;
            }
            out.add_term(Monomial(e), c);
            continue;
        };
        steps += 1;
        if steps > fuel {
            return Err(Error::DivergenceBudgetExceeded(steps));
        }
        let (hi, lo) = (w[i], w[i + 1]);
        let (lam, corr) = rules.swap(hi, lo)?;
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        push(&mut pending, swapped, c.mul(&lam));
        for (cc, mid) in corr {
            let mut nw = Vec::with_capacity(w.len() + mid.len());
            nw.extend_from_slice(&w[..i]);
            nw.extend_from_slice(&mid);
            nw.extend_from_slice(&w[i + 2..]);
            push(&mut pending, nw, c.mul(&cc));
        }
    }
    Ok(out)
}

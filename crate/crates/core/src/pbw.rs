//! PBW monomials and polynomials.
//!
//! A [`PbwPoly`] is a finite K-linear combination of ordered monomials
//! `x_1^{a_1} ... x_N^{a_N}`. Arithmetic that needs the algebra's relations
//! (products, substitution) lives on [`Algebra`](crate::algebra::Algebra);
//! this module only provides the vector-space structure.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::scalar::{ParameterSpace, Scalar};

/// Exponent vector of an ordered PBW monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn gen(k: usize, n: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest generator index with a positive exponent.
    pub fn last_var(&self) -> Option<usize> {
        self.0.iter().rposition(|&a| a > 0)
    }

    /// Smallest generator index with a positive exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.0.iter().position(|&a| a > 0)
    }

    pub fn with_incremented(&self, k: usize) -> Self {
        let mut e = self.0.clone();
        e[k] += 1;
        Monomial(e)
    }

    pub fn with_decremented(&self, k: usize) -> Self {
        let mut e = self.0.clone();
        e[k] -= 1;
        Monomial(e)
    }

    /// Generator letters of the ordered word, left to right.
    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize))
    }

    /// Degree under per-generator weights.
    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&a, &w)| a as i64 * w).sum()
    }

    pub fn format(&self) -> String {
        let mut parts = Vec::new();
        for (i, &a) in self.0.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{a}", i + 1)),
            }
        }
        parts.join("*")
    }
}

/// An additive character of the torus, as an integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn zero(r: usize) -> Self {
        Character(vec![0; r])
    }

    pub fn add(&self, o: &Self) -> Self {
        Character(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Character(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Character(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

/// Element of R in the PBW basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwPoly {
    n: usize,
    m: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PbwPoly {
    pub fn zero(n: usize, m: usize) -> Self {
        Self { n, m, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, m: usize) -> Self {
        Self::constant(Scalar::one(m), n)
    }

    pub fn constant(c: Scalar, n: usize) -> Self {
        let m = c.nvars();
        Self::term(c, Monomial::one(n), m)
    }

    pub fn gen(k: usize, n: usize, m: usize) -> Self {
        Self::term(Scalar::one(m), Monomial::gen(k, n), m)
    }

    pub fn term(c: Scalar, mono: Monomial, m: usize) -> Self {
        let n = mono.len();
        let mut p = Self::zero(n, m);
        p.add_term(mono, c);
        p
    }

    pub fn from_terms(n: usize, m: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(n, m);
        for (mono, c) in terms {
            p.add_term(mono, c);
        }
        p
    }

    pub fn ngens(&self) -> usize {
        self.n
    }

    pub fn nparams(&self) -> usize {
        self.m
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(|| Scalar::zero(self.m))
    }

    pub fn add_term(&mut self, mono: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PbwPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (mono, v) in &other.terms {
            self.add_term(mono.clone(), v.mul(c));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (mono, c) in &o.terms {
            out.add_term(mono.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (mono, c) in &o.terms {
            out.add_term(mono.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, m: self.m, terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.m);
        }
        Self { n: self.n, m: self.m, terms: self.terms.iter().map(|(k, v)| (k.clone(), v.mul(c))).collect() }
    }

    /// Returns the constant if the polynomial lies in K.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero(self.m)),
            1 => {
                let (mono, c) = self.terms.iter().next()?;
                mono.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Terms whose monomial satisfies `pred`.
    pub fn filter(&self, pred: impl Fn(&Monomial) -> bool) -> Self {
        Self {
            n: self.n,
            m: self.m,
            terms: self.terms.iter().filter(|(k, _)| pred(k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// Largest exponent of generator `k` among the terms.
    pub fn max_exponent(&self, k: usize) -> u32 {
        self.terms.keys().map(|mono| mono.0[k]).max().unwrap_or(0)
    }

    /// Generators occurring with positive exponent in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&k| self.terms.keys().any(|mono| mono.0[k] > 0)).collect()
    }

    /// `Some(c)` with `self = c * other` when the two are proportional.
    pub fn ratio_to(&self, other: &Self) -> Option<Scalar> {
        if self.is_zero() && other.is_zero() {
            return Some(Scalar::zero(self.m));
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (mono, c) = self.terms.iter().next()?;
        let d = other.terms.get(mono)?;
        let r = c.div(d).ok()?;
        for (mono, c) in &self.terms {
            let d = other.terms.get(mono)?;
            if &d.mul(&r) != c {
                return None;
            }
        }
        Some(r)
    }

    /// Reindexes generators: old index `i` becomes `map[i]` in an algebra with
    /// `new_n` generators. Terms touching unmapped generators are rejected.
    pub fn relabel(&self, map: &[Option<usize>], new_n: usize) -> Option<Self> {
        let mut out = Self::zero(new_n, self.m);
        for (mono, c) in &self.terms {
            let mut e = vec![0u32; new_n];
            for (i, &a) in mono.0.iter().enumerate() {
                if a > 0 {
                    e[map[i]?] += a;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Some(out)
    }

    /// Canonical text: ascending weighted degree, then descending exponent
    /// vector within a degree.
    pub fn to_string_with(&self, params: &ParameterSpace, weights: &[i64]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut ordered: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| {
            a.weighted_degree(weights).cmp(&b.weighted_degree(weights)).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (i, (mono, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative_leading();
            let abs = if neg { c.neg() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let cs = abs.to_string_with(params);
            let simple = abs.denom().is_one() && abs.numer().num_terms() == 1;
            let cs = if simple { cs } else { format!("({cs})") };
            if mono.is_one() {
                out.push_str(&cs);
            } else if abs.is_one() {
                out.push_str(&mono.format());
            } else {
                let _ = write!(out, "{cs}*{}", mono.format());
            }
        }
        out
    }
}

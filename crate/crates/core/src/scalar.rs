//! Exact scalars in K = Q(q_1, ..., q_m).
//!
//! [`Scalar`] is a quotient of two Laurent polynomials with rational
//! coefficients. Fractions are reduced eagerly: monomial factors and rational
//! content are always removed, single-parameter fractions are reduced by a
//! univariate gcd (so they are canonical), and multi-parameter fractions are
//! reduced whenever the denominator divides the numerator exactly. Equality
//! never relies on canonical form; it is decided by cross-multiplication.
//!
//! [`SignedMonomial`] is the multiplicative subgroup `c * q^e` used for
//! λ-matrix entries and torus eigenvalues.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of deformation parameter names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterSpace {
    names: Vec<String>,
}

impl ParameterSpace {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            let valid = !n.is_empty()
                && n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidArgument(format!("invalid parameter name `{n}`")));
            }
            if is_generator_token(n) {
                return Err(Error::InvalidArgument(format!(
                    "parameter name `{n}` collides with generator syntax"
                )));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("duplicate parameter `{n}`")));
            }
        }
        Ok(Self { names })
    }

    pub fn single(name: &str) -> Self {
        Self::new([name]).expect("valid parameter name")
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// `x<digits>` is reserved for algebra generators.
pub(crate) fn is_generator_token(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next() == Some('x') && s.len() > 1 && chars.all(|c| c.is_ascii_digit())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// Laurent polynomials
// ---------------------------------------------------------------------------

/// A Laurent polynomial over Q in `m` variables: exponent vector -> coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    m: usize,
    terms: BTreeMap<Vec<i32>, BigRational>,
}

impl LaurentPoly {
    pub fn zero(m: usize) -> Self {
        Self { m, terms: BTreeMap::new() }
    }

    pub fn constant(c: BigRational, m: usize) -> Self {
        let mut p = Self::zero(m);
        if !c.is_zero() {
            p.terms.insert(vec![0; m], c);
        }
        p
    }

    pub fn one(m: usize) -> Self {
        Self::constant(BigRational::one(), m)
    }

    pub fn monomial(c: BigRational, exps: Vec<i32>) -> Self {
        let m = exps.len();
        let mut p = Self::zero(m);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lex-largest term.
    pub fn leading(&self) -> Option<(&Vec<i32>, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Vec<i32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.m);
        }
        Self { m: self.m, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn shift(&self, by: &[i32]) -> Self {
        Self {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.iter().zip(by).map(|(a, b)| a + b).collect(), v.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut out: Option<Vec<i32>> = None;
        for e in self.terms.keys() {
            out = Some(match out {
                None => e.clone(),
                Some(o) => o.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        out.unwrap_or_else(|| vec![0; self.m])
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Exact quotient `self / d` if `d` divides `self` in Q[q_1..q_m]
    /// (both taken as ordinary polynomials, no negative exponents).
    fn exact_div_poly(&self, d: &Self) -> Option<Self> {
        let (dl, dc) = d.leading()?;
        let dl = dl.clone();
        let dc = dc.clone();
        let mut r = self.clone();
        let mut q = Self::zero(self.m);
        let mut steps = 0usize;
        while let Some((rl, rc)) = r.leading() {
            steps += 1;
            if steps > 100_000 {
                return None;
            }
            if rl.iter().zip(&dl).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<i32> = rl.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            let t = Self::monomial(c.clone(), e.clone());
            q.add_term(e, c);
            r = &r - &(&t * d);
        }
        Some(q)
    }

    fn content(&self) -> BigRational {
        // gcd of numerators over lcm of denominators, sign of leading term
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return BigRational::one();
        }
        let mut g = BigRational::new(num, den);
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            g = -g;
        }
        g
    }

    fn eval_format(&self, params: &ParameterSpace, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = format_param_monomial(e, params);
            match (a.is_one(), mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{a}")?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

fn format_param_monomial(e: &[i32], params: &ParameterSpace) -> String {
    let mut parts = Vec::new();
    for (i, &x) in e.iter().enumerate() {
        let name = params.names().get(i).map(String::as_str).unwrap_or("?");
        match x {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{x}")),
        }
    }
    parts.join("*")
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.m.max(rhs.m));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { m: self.m, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

// --- univariate helpers (m == 1), dense coefficient vectors, low degree first ---

fn to_dense(p: &LaurentPoly) -> Vec<BigRational> {
    // assumes exponents are >= 0
    let deg = p.terms.keys().map(|e| e[0]).max().unwrap_or(0).max(0) as usize;
    let mut v = vec![BigRational::zero(); deg + 1];
    for (e, c) in &p.terms {
        v[e[0] as usize] = c.clone();
    }
    v
}

fn from_dense(v: &[BigRational]) -> LaurentPoly {
    let mut p = LaurentPoly::zero(1);
    for (i, c) in v.iter().enumerate() {
        p.add_term(vec![i as i32], c.clone());
    }
    p
}

fn trim(v: &mut Vec<BigRational>) {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn dense_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let lb = b.last().cloned().expect("nonzero divisor");
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let f = r.last().cloned().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            let t = c * &f;
            r[i + shift] -= t;
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
    }
    r
}

fn dense_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0].is_zero()) {
        let r = dense_rem(&x, &y);
        x = y;
        y = r;
    }
    let l = x.last().cloned().unwrap();
    x.iter().map(|c| c / &l).collect()
}

// ---------------------------------------------------------------------------
// Scalars (Laurent fractions)
// ---------------------------------------------------------------------------

/// Element of Q(q_1..q_m) as numerator / denominator Laurent polynomials.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    pub fn zero(m: usize) -> Self {
        Self { num: LaurentPoly::zero(m), den: LaurentPoly::one(m) }
    }

    pub fn one(m: usize) -> Self {
        Self { num: LaurentPoly::one(m), den: LaurentPoly::one(m) }
    }

    pub fn from_int(n: i64, m: usize) -> Self {
        Self::from_rational(rat(n), m)
    }

    pub fn from_rational(c: BigRational, m: usize) -> Self {
        Self { num: LaurentPoly::constant(c, m), den: LaurentPoly::one(m) }
    }

    /// The parameter `q_i` (0-based).
    pub fn param(i: usize, m: usize) -> Self {
        let mut e = vec![0; m];
        e[i] = 1;
        Self { num: LaurentPoly::monomial(BigRational::one(), e), den: LaurentPoly::one(m) }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let m = p.nvars();
        Self { num: p, den: LaurentPoly::one(m) }
    }

    /// Builds `num / den`, reducing the result.
    pub fn fraction(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { num, den }.reduced())
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den || (self == &Scalar::one(self.nvars()))
    }

    /// True when the leading coefficient of the numerator is negative.
    pub fn is_negative_leading(&self) -> bool {
        self.num.leading().is_some_and(|(_, c)| c.is_negative())
    }

    fn reduced(mut self) -> Self {
        let m = self.num.nvars().max(self.den.nvars());
        if self.num.is_zero() {
            return Self::zero(m);
        }
        if self.den.is_one() {
            return self;
        }
        // move monomial factors of the denominator into the numerator
        let dmin = self.den.min_exponents();
        if dmin.iter().any(|&x| x != 0) {
            let neg: Vec<i32> = dmin.iter().map(|x| -x).collect();
            self.den = self.den.shift(&neg);
            self.num = self.num.shift(&neg);
        }
        if self.den.is_monomial() {
            let c = self.den.leading().map(|(_, c)| c.clone()).unwrap();
            self.num = self.num.scale(&(BigRational::one() / c));
            self.den = LaurentPoly::one(m);
            return self;
        }
        let nmin = self.num.min_exponents();
        let npoly = self.num.shift(&nmin.iter().map(|x| -x).collect::<Vec<_>>());
        if m == 1 {
            let g = dense_gcd(&to_dense(&npoly), &to_dense(&self.den));
            if g.len() > 1 {
                let gp = from_dense(&g);
                let nq = npoly.exact_div_poly(&gp).expect("gcd divides");
                let dq = self.den.exact_div_poly(&gp).expect("gcd divides");
                self.num = nq.shift(&nmin);
                self.den = dq;
            }
        } else if let Some(q) = npoly.exact_div_poly(&self.den) {
            self.num = q.shift(&nmin);
            self.den = LaurentPoly::one(m);
            return self;
        }
        if self.den.is_monomial() {
            let c = self.den.leading().map(|(_, c)| c.clone()).unwrap();
            self.num = self.num.scale(&(BigRational::one() / c));
            self.den = LaurentPoly::one(m);
            return self;
        }
        // normalise the denominator: leading coefficient 1, integral content
        let dc = self.den.content();
        let lead = self.den.leading().map(|(_, c)| c.clone()).unwrap();
        let f = if m == 1 { lead } else { dc };
        let inv = BigRational::one() / f;
        self.den = self.den.scale(&inv);
        self.num = self.num.scale(&inv);
        self
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            return Self { num, den: self.den.clone() }.reduced();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Self { num, den: &self.den * &rhs.den }.reduced()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.nvars().max(rhs.nvars()));
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self { num: &self.num * &rhs.num, den: self.den.clone() };
        }
        Self { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.reduced()
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { num: self.den.clone(), den: self.num.clone() }.reduced())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.nvars());
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Returns the scalar as a signed monomial `c * q^e` if it is one.
    pub fn as_signed_monomial(&self) -> Option<SignedMonomial> {
        if !self.den.is_one() || !self.num.is_monomial() {
            return None;
        }
        let (e, c) = self.num.leading()?;
        Some(SignedMonomial { coeff: c.clone(), exps: e.clone() })
    }

    /// Display using the given parameter names.
    pub fn display<'a>(&'a self, params: &'a ParameterSpace) -> ScalarDisplay<'a> {
        ScalarDisplay { s: self, params }
    }

    /// Canonical string form.
    pub fn to_string_with(&self, params: &ParameterSpace) -> String {
        self.display(params).to_string()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for Scalar {}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

pub struct ScalarDisplay<'a> {
    s: &'a Scalar,
    params: &'a ParameterSpace,
}

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.den.is_one() {
            return self.s.num.eval_format(self.params, f);
        }
        let wrap_num = self.s.num.num_terms() > 1;
        if wrap_num {
            write!(f, "(")?;
        }
        self.s.num.eval_format(self.params, f)?;
        if wrap_num {
            write!(f, ")")?;
        }
        write!(f, "/(")?;
        self.s.den.eval_format(self.params, f)?;
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Signed monomials
// ---------------------------------------------------------------------------

/// A unit `coeff * q_1^{e_1} ... q_m^{e_m}` of K with nonzero rational `coeff`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedMonomial {
    coeff: BigRational,
    exps: Vec<i32>,
}

/// Additive image of a ±1 monomial in Z/2 x Z^m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialLog {
    pub sign: u8,
    pub exps: Vec<i64>,
}

impl SignedMonomial {
    pub fn new(coeff: BigRational, exps: Vec<i32>) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { coeff, exps })
    }

    pub fn one(m: usize) -> Self {
        Self { coeff: BigRational::one(), exps: vec![0; m] }
    }

    pub fn minus_one(m: usize) -> Self {
        Self { coeff: -BigRational::one(), exps: vec![0; m] }
    }

    pub fn from_int(c: i64, m: usize) -> Result<Self> {
        Self::new(rat(c), vec![0; m])
    }

    /// `q_i^e` (0-based parameter index).
    pub fn param_pow(i: usize, e: i32, m: usize) -> Self {
        let mut exps = vec![0; m];
        exps[i] = e;
        Self { coeff: BigRational::one(), exps }
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn exps(&self) -> &[i32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            coeff: &self.coeff * &o.coeff,
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self) -> Self {
        Self { coeff: BigRational::one() / &self.coeff, exps: self.exps.iter().map(|x| -x).collect() }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let k = e.unsigned_abs();
        let mut coeff = BigRational::one();
        for _ in 0..k {
            coeff *= &base.coeff;
        }
        Self { coeff, exps: base.exps.iter().map(|x| x * k as i32).collect() }
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.exps.iter().all(|&x| x == 0)
    }

    /// Parameters are transcendental over Q, so the only roots of unity are ±1.
    pub fn is_root_of_unity(&self) -> bool {
        self.exps.iter().all(|&x| x == 0) && self.coeff.abs().is_one()
    }

    /// Group isomorphism {±q^e} -> Z/2 x Z^m.
    pub fn monomial_log(&self) -> Result<MonomialLog> {
        if !self.coeff.abs().is_one() {
            return Err(Error::NotAMonomial(self.to_scalar().to_string_with(&ParameterSpace::empty())));
        }
        Ok(MonomialLog {
            sign: u8::from(self.coeff.is_negative()),
            exps: self.exps.iter().map(|&x| x as i64).collect(),
        })
    }

    pub fn to_scalar(&self) -> Scalar {
        Scalar::from_poly(LaurentPoly::monomial(self.coeff.clone(), self.exps.clone()))
    }

    pub fn to_string_with(&self, params: &ParameterSpace) -> String {
        self.to_scalar().to_string_with(params)
    }
}

//! PBW normal-form arithmetic for a presented CGL extension.
//!
//! Products are computed by right-multiplying PBW monomials by single
//! generators. When the last letter `x_l` of a monomial exceeds the incoming
//! generator `x_j`, the relation `x_l x_j = λ_{lj} x_j x_l + Q_{lj}` is applied
//! and the pieces are normalised recursively. Results of
//! `(monomial, generator)` products are memoised in a shared cache.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::parse::{parse_expr, Expr, Symbols};
use crate::pbw::{Character, Monomial, PbwPoly};
use crate::presentation::CglPresentation;
use crate::scalar::Scalar;

/// Default per-unit rewriting budget; scaled by word degree and relation count.
pub const DEFAULT_FUEL: u64 = 20_000;

const MAX_DEPTH: u32 = 4_000;

pub(crate) struct Budget {
    used: u64,
    limit: u64,
    depth: u32,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Self { used: 0, limit, depth: 0 }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit || self.depth > MAX_DEPTH {
            return Err(Error::DivergenceBudgetExceeded(self.used));
        }
        Ok(())
    }
}

/// A CGL presentation together with its multiplication engine.
pub struct Algebra {
    pres: CglPresentation,
    lam: Vec<Vec<Scalar>>,
    rel: Vec<Vec<Option<PbwPoly>>>,
    weights: Vec<i64>,
    graded: bool,
    cache: RwLock<HashMap<(Monomial, usize), PbwPoly>>,
    fuel_base: u64,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra::new(self.pres.clone()).with_fuel(self.fuel_base)
    }
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra").field("presentation", &self.pres).finish_non_exhaustive()
    }
}

impl Algebra {
    pub fn new(pres: CglPresentation) -> Self {
        let n = pres.n();
        let lam = (0..n).map(|k| (0..n).map(|j| pres.lambda(k, j).to_scalar()).collect()).collect();
        let mut rel = vec![vec![None; n]; n];
        for ((k, j), p) in pres.q_entries() {
            rel[*k][*j] = Some(p.clone());
        }
        let (weights, graded) = match pres.torus().degrees() {
            Some(d) => (d, true),
            None => (vec![1; n], false),
        };
        Self { pres, lam, rel, weights, graded, cache: RwLock::new(HashMap::new()), fuel_base: DEFAULT_FUEL }
    }

    pub fn with_fuel(mut self, fuel_base: u64) -> Self {
        self.fuel_base = fuel_base.max(1);
        self
    }

    pub fn fuel_base(&self) -> u64 {
        self.fuel_base
    }

    pub fn presentation(&self) -> &CglPresentation {
        &self.pres
    }

    pub fn n(&self) -> usize {
        self.pres.n()
    }

    pub fn m(&self) -> usize {
        self.pres.params().len()
    }

    pub fn zero(&self) -> PbwPoly {
        PbwPoly::zero(self.n(), self.m())
    }

    pub fn one(&self) -> PbwPoly {
        PbwPoly::one(self.n(), self.m())
    }

    pub fn gen(&self, k: usize) -> PbwPoly {
        PbwPoly::gen(k, self.n(), self.m())
    }

    pub fn constant(&self, c: Scalar) -> PbwPoly {
        PbwPoly::constant(c, self.n())
    }

    pub fn monomial(&self, mono: Monomial) -> PbwPoly {
        PbwPoly::term(Scalar::one(self.m()), mono, self.m())
    }

    /// λ_{kj} as a scalar (0-based indices).
    pub fn lambda(&self, k: usize, j: usize) -> &Scalar {
        &self.lam[k][j]
    }

    /// Q_{kj} for j < k, if nonzero.
    pub fn relation(&self, k: usize, j: usize) -> Option<&PbwPoly> {
        self.rel[k][j].as_ref()
    }

    /// Per-generator π-degrees (all 1 when no grading is defined).
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    fn budget_for(&self, degree: i64) -> Budget {
        let d = degree.max(1) as u64;
        let nrel = self.pres.q_entries().count() as u64;
        Budget::new(self.fuel_base.saturating_mul(d * d).saturating_mul(1 + nrel))
    }

    fn poly_degree(&self, p: &PbwPoly) -> i64 {
        p.monomials().map(|m| m.weighted_degree(&self.weights)).max().unwrap_or(0)
    }

    // -- core rewriting ----------------------------------------------------

    fn right_mul_gen(&self, mono: &Monomial, j: usize, budget: &mut Budget) -> Result<PbwPoly> {
        let m = self.m();
        let l = match mono.last_var() {
            Some(l) if l > j => l,
            _ => return Ok(PbwPoly::term(Scalar::one(m), mono.with_incremented(j), m)),
        };
        let key = (mono.clone(), j);
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        budget.tick()?;
        budget.depth += 1;
        // mono * x_j = mono' * x_l * x_j = λ_{lj} (mono' * x_j) * x_l + mono' * Q_{lj}
        let rest = mono.with_decremented(l);
        let head = self.right_mul_gen(&rest, j, budget)?;
        let mut out = self.right_mul_poly_gen(&head, l, budget)?.scale(&self.lam[l][j]);
        if let Some(q) = &self.rel[l][j] {
            let tail = self.mul_mono_poly(&rest, q, budget)?;
            out = out.add(&tail);
        }
        budget.depth -= 1;
        self.cache.write().expect("cache lock").insert(key, out.clone());
        Ok(out)
    }

    fn right_mul_poly_gen(&self, p: &PbwPoly, j: usize, budget: &mut Budget) -> Result<PbwPoly> {
        let mut out = self.zero();
        for (mono, c) in p.terms() {
            let prod = self.right_mul_gen(mono, j, budget)?;
            out.add_scaled(&prod, c);
        }
        Ok(out)
    }

    fn mul_mono_mono(&self, a: &Monomial, b: &Monomial, budget: &mut Budget) -> Result<PbwPoly> {
        let m = self.m();
        match (a.last_var(), b.first_var()) {
            (None, _) => return Ok(PbwPoly::term(Scalar::one(m), b.clone(), m)),
            (_, None) => return Ok(PbwPoly::term(Scalar::one(m), a.clone(), m)),
            (Some(l), Some(f)) if l <= f => {
                let e = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                return Ok(PbwPoly::term(Scalar::one(m), Monomial(e), m));
            }
            _ => {}
        }
        let mut cur = PbwPoly::term(Scalar::one(m), a.clone(), m);
        for j in b.letters() {
            cur = self.right_mul_poly_gen(&cur, j, budget)?;
        }
        Ok(cur)
    }

    fn mul_mono_poly(&self, a: &Monomial, p: &PbwPoly, budget: &mut Budget) -> Result<PbwPoly> {
        let mut out = self.zero();
        for (mono, c) in p.terms() {
            let prod = self.mul_mono_mono(a, mono, budget)?;
            out.add_scaled(&prod, c);
        }
        Ok(out)
    }

    // -- public arithmetic -------------------------------------------------

    /// Exact product in PBW form.
    pub fn mul(&self, a: &PbwPoly, b: &PbwPoly) -> Result<PbwPoly> {
        let mut budget = self.budget_for(self.poly_degree(a) + self.poly_degree(b));
        let mut out = self.zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let prod = self.mul_mono_mono(ma, mb, &mut budget)?;
                out.add_scaled(&prod, &ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Product of a list of factors, left to right.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a PbwPoly>) -> Result<PbwPoly> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, p: &PbwPoly, e: u32) -> Result<PbwPoly> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, p)?;
        }
        Ok(acc)
    }

    /// Normalises an arbitrary word in the generators.
    pub fn word(&self, letters: &[usize]) -> Result<PbwPoly> {
        let mut budget = self.budget_for(letters.iter().map(|&k| self.weights[k]).sum());
        let mut cur = self.one();
        for &j in letters {
            cur = self.right_mul_poly_gen(&cur, j, &mut budget)?;
        }
        Ok(cur)
    }

    /// `a b - c b a`.
    pub fn skew_commutator(&self, a: &PbwPoly, b: &PbwPoly, c: &Scalar) -> Result<PbwPoly> {
        Ok(self.mul(a, b)?.sub(&self.mul(b, a)?.scale(c)))
    }

    /// Substitutes `x_i -> images[i]` into each PBW monomial of `p`.
    pub fn apply(&self, images: &[PbwPoly], p: &PbwPoly) -> Result<PbwPoly> {
        let mut powers: HashMap<(usize, u32), PbwPoly> = HashMap::new();
        let mut out = self.zero();
        for (mono, c) in p.terms() {
            let mut acc = self.one();
            for (i, &a) in mono.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let pw = match powers.get(&(i, a)) {
                    Some(pw) => pw.clone(),
                    None => {
                        let pw = self.pow(&images[i], a)?;
                        powers.insert((i, a), pw.clone());
                        pw
                    }
                };
                acc = self.mul(&acc, &pw)?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    // -- parsing and printing -------------------------------------------------

    pub fn parse_expr(&self, src: &str) -> Result<Expr> {
        let syms = Symbols { params: self.pres.params(), ngens: self.n(), aliases: self.pres.aliases() };
        parse_expr(src, &syms)
    }

    /// Parses polynomial text and normalises it to PBW form.
    pub fn parse(&self, src: &str) -> Result<PbwPoly> {
        let e = self.parse_expr(src)?;
        self.eval(&e)
    }

    pub fn eval(&self, e: &Expr) -> Result<PbwPoly> {
        if !e.contains_generator() {
            return Ok(self.constant(e.eval_scalar(self.m())?));
        }
        Ok(match e {
            Expr::Num(_) | Expr::Param(_) => unreachable!("generator-free handled above"),
            Expr::Gen(k) => self.gen(*k),
            Expr::Neg(a) => self.eval(a)?.neg(),
            Expr::Add(a, b) => self.eval(a)?.add(&self.eval(b)?),
            Expr::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?),
            Expr::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?)?,
            Expr::Div(a, b) => {
                if b.contains_generator() {
                    return Err(Error::InvalidArgument("division by a non-scalar element".into()));
                }
                let d = b.eval_scalar(self.m())?.inv()?;
                self.eval(a)?.scale(&d)
            }
            Expr::Pow(a, k) => {
                if *k < 0 {
                    return Err(Error::InvalidArgument("negative power of a generator".into()));
                }
                self.pow(&self.eval(a)?, *k as u32)?
            }
        })
    }

    /// Canonical polynomial text.
    pub fn format(&self, p: &PbwPoly) -> String {
        p.to_string_with(self.pres.params(), &self.weights)
    }

    pub fn format_scalar(&self, s: &Scalar) -> String {
        s.to_string_with(self.pres.params())
    }

    // -- gradings ------------------------------------------------------------

    pub fn monomial_character(&self, mono: &Monomial) -> Character {
        let t = self.pres.torus();
        let mut c = Character::zero(t.rank);
        for (i, &a) in mono.0.iter().enumerate() {
            if a > 0 {
                c = c.add(&t.chi[i].scale(a as i64));
            }
        }
        c
    }

    /// The X(H)-degree of `p`, or `None` when `p` is not homogeneous.
    pub fn character_of(&self, p: &PbwPoly) -> Result<Option<Character>> {
        let mut it = p.monomials();
        let first = it.next().ok_or(Error::ZeroElement)?;
        let c = self.monomial_character(first);
        for mono in it {
            if self.monomial_character(mono) != c {
                return Ok(None);
            }
        }
        Ok(Some(c))
    }

    pub fn pi_degree(&self, mono: &Monomial) -> Result<i64> {
        if !self.graded {
            return Err(Error::NoGradingDefined);
        }
        Ok(mono.weighted_degree(&self.weights))
    }

    /// Splits `p` into π-homogeneous components.
    pub fn graded_split(&self, p: &PbwPoly) -> Result<BTreeMap<i64, PbwPoly>> {
        if !self.graded {
            return Err(Error::NoGradingDefined);
        }
        let mut out: BTreeMap<i64, PbwPoly> = BTreeMap::new();
        for (mono, c) in p.terms() {
            let d = mono.weighted_degree(&self.weights);
            out.entry(d).or_insert_with(|| self.zero()).add_term(mono.clone(), c.clone());
        }
        Ok(out)
    }

    /// Membership in R^{>= d}.
    pub fn in_r_geq(&self, p: &PbwPoly, d: i64) -> Result<bool> {
        Ok(self.graded_split(p)?.keys().all(|&k| k >= d))
    }

    /// PBW monomials in generators `gens` of π-degree exactly `d`.
    pub fn monomials_of_degree(&self, d: i64, gens: &[usize]) -> Result<Vec<Monomial>> {
        if !self.graded {
            return Err(Error::NoGradingDefined);
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.n()];
        self.enumerate(d, gens, 0, &mut cur, &mut out);
        Ok(out)
    }

    fn enumerate(&self, rem: i64, gens: &[usize], idx: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if rem == 0 {
            out.push(Monomial(cur.clone()));
            return;
        }
        if idx == gens.len() || rem < 0 {
            return;
        }
        let g = gens[idx];
        let w = self.weights[g];
        let max = rem / w;
        for a in 0..=max {
            cur[g] = a as u32;
            self.enumerate(rem - a * w, gens, idx + 1, cur, out);
        }
        cur[g] = 0;
    }

    /// Basis of the χ-homogeneous component of the subalgebra generated by `gens`.
    pub fn homogeneous_basis(&self, chi: &Character, gens: &[usize]) -> Result<Vec<Monomial>> {
        let pi = self.pres.torus().pi.as_ref().ok_or(Error::NoGradingDefined)?;
        let d: i64 = chi.0.iter().zip(pi).map(|(a, b)| a * b).sum();
        if d < 0 {
            return Ok(Vec::new());
        }
        Ok(self
            .monomials_of_degree(d, gens)?
            .into_iter()
            .filter(|mono| &self.monomial_character(mono) == chi)
            .collect())
    }

    /// Number of memoised products (diagnostics).
    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

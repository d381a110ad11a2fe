//! CGL presentations: data model, axiom validators, reordering.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::lattice;
use crate::pbw::{Character, PbwPoly};
use crate::report::ValidationReport;
use crate::rewrite::{self, RewriteRules, Strategy, WordSum};
use crate::scalar::{ParameterSpace, Scalar, SignedMonomial};

/// Split torus data: characters of the generators, the torus elements
/// `h_k` (and optionally `h*_j`), and an optional grading `π: X(H) -> Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusData {
    pub rank: usize,
    pub chi: Vec<Character>,
    pub h: Vec<Vec<SignedMonomial>>,
    pub h_star: Option<Vec<Vec<SignedMonomial>>>,
    pub pi: Option<Vec<i64>>,
}

/// `χ(h) = ∏_a h[a]^{χ[a]}`.
pub fn eval_character(chi: &Character, h: &[SignedMonomial]) -> SignedMonomial {
    let m = h.first().map_or(0, SignedMonomial::nvars);
    chi.0.iter().zip(h).fold(SignedMonomial::one(m), |acc, (&e, x)| acc.mul(&x.pow(e)))
}

impl TorusData {
    /// π-degrees of the generators, when π is present.
    pub fn degrees(&self) -> Option<Vec<i64>> {
        let pi = self.pi.as_ref()?;
        Some(self.chi.iter().map(|c| c.0.iter().zip(pi).map(|(a, b)| a * b).sum()).collect())
    }

    fn permuted(&self, tau: &[usize], h: Vec<Vec<SignedMonomial>>, h_star: Option<Vec<Vec<SignedMonomial>>>) -> Self {
        Self {
            rank: self.rank,
            chi: tau.iter().map(|&t| self.chi[t].clone()).collect(),
            h,
            h_star,
            pi: self.pi.clone(),
        }
    }
}

/// Builds a full λ matrix from its strict lower triangle.
pub fn skew_complete(n: usize, m: usize, lower: impl Fn(usize, usize) -> SignedMonomial) -> Vec<Vec<SignedMonomial>> {
    let mut lam = vec![vec![SignedMonomial::one(m); n]; n];
    for k in 0..n {
        for j in 0..k {
            let v = lower(k, j);
            lam[j][k] = v.inv();
            lam[k][j] = v;
        }
    }
    lam
}

/// Relations `x_k x_j = λ_{kj} x_j x_k + Q_{kj}` (0-based, `j < k`) with torus data.
///
/// The engine reads only the strict lower triangle of λ; the declared
/// diagonal and upper triangle are kept so validation can flag
/// inconsistent input.
#[derive(Clone, Debug)]
pub struct CglPresentation {
    name: Option<String>,
    params: ParameterSpace,
    n: usize,
    declared_lambda: Vec<Vec<SignedMonomial>>,
    q: BTreeMap<(usize, usize), PbwPoly>,
    torus: TorusData,
    aliases: Vec<String>,
}

impl PartialEq for CglPresentation {
    fn eq(&self, o: &Self) -> bool {
        self.params == o.params
            && self.n == o.n
            && (0..self.n).all(|k| (0..k).all(|j| self.lambda(k, j) == o.lambda(k, j)))
            && self.q == o.q
            && self.torus == o.torus
    }
}

impl CglPresentation {
    pub fn new(
        name: Option<String>,
        params: ParameterSpace,
        lambda: Vec<Vec<SignedMonomial>>,
        q: BTreeMap<(usize, usize), PbwPoly>,
        torus: TorusData,
    ) -> Result<Self> {
        let n = lambda.len();
        let m = params.len();
        let bad = |s: String| Err(Error::InvalidPresentation(s));
        if lambda.iter().any(|row| row.len() != n) {
            return bad("lambda must be a square matrix".into());
        }
        if lambda.iter().flatten().any(|x| x.nvars() != m) {
            return bad("lambda entry over the wrong parameter space".into());
        }
        for (&(k, j), p) in &q {
            if j >= k || k >= n {
                return bad(format!("relation key ({},{}) must satisfy 1 <= j < k <= N", k + 1, j + 1));
            }
            if p.ngens() != n || p.nparams() != m {
                return bad(format!("relation ({},{}) has the wrong shape", k + 1, j + 1));
            }
        }
        let t = &torus;
        if t.chi.len() != n || t.h.len() != n {
            return bad("torus data must list one character and one h per generator".into());
        }
        if t.chi.iter().any(|c| c.0.len() != t.rank) || t.h.iter().any(|h| h.len() != t.rank) {
            return bad("torus vectors must have length rank".into());
        }
        if t.h.iter().flatten().any(|x| x.nvars() != m) {
            return bad("torus element over the wrong parameter space".into());
        }
        if let Some(hs) = &t.h_star {
            if hs.len() != n || hs.iter().any(|h| h.len() != t.rank || h.iter().any(|x| x.nvars() != m)) {
                return bad("h_star must list one rank-length vector per generator".into());
            }
        }
        if let Some(pi) = &t.pi {
            if pi.len() != t.rank {
                return bad("pi must have length rank".into());
            }
        }
        let q = q.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(Self { name, params, n, declared_lambda: lambda, q, torus, aliases: Vec::new() })
    }

    pub fn with_aliases(mut self, aliases: Vec<String>) -> Self {
        self.aliases = aliases;
        self
    }

    pub fn with_name(mut self, name: Option<String>) -> Self {
        self.name = name;
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn params(&self) -> &ParameterSpace {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// λ_{kj} derived from the strict lower triangle.
    pub fn lambda(&self, k: usize, j: usize) -> SignedMonomial {
        use std::cmp::Ordering::*;
        match k.cmp(&j) {
            Greater => self.declared_lambda[k][j].clone(),
            Equal => SignedMonomial::one(self.params.len()),
            Less => self.declared_lambda[j][k].inv(),
        }
    }

    pub fn lambda_matrix(&self) -> Vec<Vec<SignedMonomial>> {
        (0..self.n).map(|k| (0..self.n).map(|j| self.lambda(k, j)).collect()).collect()
    }

    pub fn declared_lambda(&self) -> &[Vec<SignedMonomial>] {
        &self.declared_lambda
    }

    pub fn q(&self, k: usize, j: usize) -> Option<&PbwPoly> {
        self.q.get(&(k, j))
    }

    pub fn q_entries(&self) -> impl Iterator<Item = (&(usize, usize), &PbwPoly)> {
        self.q.iter()
    }

    pub fn torus(&self) -> &TorusData {
        &self.torus
    }

    pub fn aliases(&self) -> &[String] {
        &self.aliases
    }

    /// Generator display name (1-based `x<k>` unless aliased).
    pub fn gen_name(&self, k: usize) -> String {
        self.aliases.get(k).cloned().unwrap_or_else(|| format!("x{}", k + 1))
    }

    /// True when every Q_{kj} lies in the subalgebra on x_{j+1}, ..., x_{k-1}.
    pub fn q_in_open_intervals(&self) -> Option<(usize, usize)> {
        self.q
            .iter()
            .find(|(&(k, j), p)| p.support().iter().any(|&i| i <= j || i >= k))
            .map(|(&kj, _)| kj)
    }
}

fn pair(k: usize, j: usize) -> String {
    format!("({},{})", k + 1, j + 1)
}

/// Checks the CGL axioms: (i) homogeneous relations, (ii) locally nilpotent
/// δ_k, (iii) the torus elements h_k, plus overlap consistency of the
/// relations on all generator triples.
pub fn validate_cgl(alg: &Algebra) -> Result<ValidationReport> {
    let p = alg.presentation();
    let n = p.n();
    let t = p.torus();
    let mut rep = ValidationReport::new(format!("CGL axioms for {}", p.name().unwrap_or("presentation")));

    let mut skew_bad = Vec::new();
    for k in 0..n {
        if !p.declared_lambda[k][k].is_one() {
            skew_bad.push(format!("lambda_{}{} != 1", k + 1, k + 1));
        }
        for j in k + 1..n {
            if p.declared_lambda[k][j] != p.declared_lambda[j][k].inv() {
                skew_bad.push(format!("lambda_{}{} != lambda_{}{}^-1", k + 1, j + 1, j + 1, k + 1));
            }
        }
    }
    rep.push("lambda multiplicatively skew-symmetric", skew_bad.is_empty(), skew_bad.join("; "));

    let outside: Vec<String> = p
        .q
        .iter()
        .filter(|(&(k, _), q)| q.support().iter().any(|&i| i >= k))
        .map(|(&(k, j), _)| pair(k, j))
        .collect();
    let structural_ok = skew_bad.is_empty() && outside.is_empty();
    rep.push("Q_kj lies in R_(k-1)", outside.is_empty(), outside.join(", "));

    if let Some(d) = t.degrees() {
        let nonpos: Vec<String> =
            d.iter().enumerate().filter(|(_, &x)| x <= 0).map(|(i, _)| p.gen_name(i)).collect();
        rep.push("pi(chi_j) > 0 for all generators", nonpos.is_empty(), nonpos.join(", "));
    }

    let mut inhom = Vec::new();
    for (&(k, j), q) in &p.q {
        let want = t.chi[k].add(&t.chi[j]);
        if q.monomials().any(|mono| alg.monomial_character(mono) != want) {
            inhom.push(pair(k, j));
        }
    }
    rep.push("axiom (i): Q_kj homogeneous of character chi_k + chi_j", inhom.is_empty(), inhom.join(", "));

    let mut h_bad = Vec::new();
    for k in 0..n {
        for j in 0..k {
            if eval_character(&t.chi[j], &t.h[k]) != p.lambda(k, j) {
                h_bad.push(format!("chi_{}(h_{}) != lambda_{}{}", j + 1, k + 1, k + 1, j + 1));
            }
        }
        if eval_character(&t.chi[k], &t.h[k]).is_root_of_unity() {
            h_bad.push(format!("chi_{}(h_{}) is a root of unity", k + 1, k + 1));
        }
    }
    rep.push("axiom (iii): torus elements h_k", h_bad.is_empty(), h_bad.join("; "));

    if !structural_ok {
        rep.fail("axiom (ii): delta_k locally nilpotent", "skipped: structural checks failed");
        rep.fail("overlap consistency on generator triples", "skipped: structural checks failed");
        return Ok(rep);
    }

    let weights = alg.weights();
    let min_w = weights.iter().copied().filter(|&w| w > 0).min().unwrap_or(1);
    let mut nil_bad = Vec::new();
    for k in 0..n {
        for j in 0..k {
            let cap = (weights[j].max(1) / min_w) as usize + n;
            let mut a = alg.gen(j);
            let mut ok = false;
            for _ in 0..=cap {
                if a.is_zero() {
                    ok = true;
                    break;
                }
                a = delta(alg, k, &a)?;
                if a.support().iter().any(|&i| i >= k) {
                    break;
                }
            }
            if !ok {
                nil_bad.push(pair(k, j));
            }
        }
    }
    rep.push("axiom (ii): delta_k locally nilpotent", nil_bad.is_empty(), nil_bad.join(", "));

    let mut overlap_bad = Vec::new();
    for k in 0..n {
        for j in 0..k {
            for i in 0..j {
                let left = alg.mul(&alg.word(&[k, j])?, &alg.gen(i))?;
                let right = alg.mul(&alg.gen(k), &alg.word(&[j, i])?)?;
                if left != right {
                    overlap_bad.push(format!("x{} x{} x{}", k + 1, j + 1, i + 1));
                }
            }
        }
    }
    rep.push("overlap consistency on generator triples", overlap_bad.is_empty(), overlap_bad.join(", "));
    Ok(rep)
}

/// `δ_k(a) = x_k a - σ_k(a) x_k` for `a` in R_{k-1}.
pub fn delta(alg: &Algebra, k: usize, a: &PbwPoly) -> Result<PbwPoly> {
    let xk = alg.gen(k);
    Ok(alg.mul(&xk, a)?.sub(&alg.mul(&sigma(alg, k, a), &xk)?))
}

/// `σ_k` on R_{k-1}: scales `x^a` by `∏_j λ_{kj}^{a_j}`.
pub fn sigma(alg: &Algebra, k: usize, a: &PbwPoly) -> PbwPoly {
    let m = alg.m();
    let mut out = alg.zero();
    for (mono, c) in a.terms() {
        let mut s = Scalar::one(m);
        for (j, &e) in mono.0.iter().enumerate() {
            if e > 0 {
                s = s.mul(&alg.lambda(k, j).pow(e as i64).expect("unit"));
            }
        }
        out.add_term(mono.clone(), c.mul(&s));
    }
    out
}

/// Conditions for a symmetric CGL extension: Q_{kj} in R_{[j+1,k-1]} and
/// the torus elements h*_j.
pub fn validate_symmetric(alg: &Algebra) -> Result<ValidationReport> {
    let p = alg.presentation();
    let t = p.torus();
    let hs = t.h_star.as_ref().ok_or(Error::MissingHStar)?;
    let mut rep = ValidationReport::new(format!("symmetry for {}", p.name().unwrap_or("presentation")));
    let bad: Vec<String> = p
        .q
        .iter()
        .filter(|(&(k, j), q)| q.support().iter().any(|&i| i <= j || i >= k))
        .map(|(&(k, j), _)| pair(k, j))
        .collect();
    rep.push("condition (i): Q_kj in R_[j+1,k-1]", bad.is_empty(), bad.join(", "));
    let mut h_bad = Vec::new();
    for j in 0..p.n() {
        for k in j + 1..p.n() {
            if eval_character(&t.chi[k], &hs[j]) != p.lambda(j, k) {
                h_bad.push(format!("chi_{}(h*_{}) != lambda_{}{}", k + 1, j + 1, j + 1, k + 1));
            }
        }
        if eval_character(&t.chi[j], &hs[j]).is_root_of_unity() {
            h_bad.push(format!("chi_{}(h*_{}) is a root of unity", j + 1, j + 1));
        }
    }
    rep.push("condition (ii): torus elements h*_j", h_bad.is_empty(), h_bad.join("; "));
    Ok(rep)
}

/// Checks that every prefix image of `tau` is an interval.
pub fn check_xi(tau: &[usize]) -> Result<()> {
    let n = tau.len();
    let mut seen = vec![false; n];
    for &t in tau {
        if t >= n || seen[t] {
            return Err(Error::NotInXi(format!("{tau:?} is not a permutation of 0..{n}")));
        }
        seen[t] = true;
    }
    let (mut lo, mut hi) = (tau.first().copied().unwrap_or(0), tau.first().copied().unwrap_or(0));
    for (k, &t) in tau.iter().enumerate().skip(1) {
        if t == hi + 1 {
            hi = t;
        } else if lo > 0 && t == lo - 1 {
            lo = t;
        } else {
            return Err(Error::NotInXi(format!(
                "tau({}) = {} is neither max+1 nor min-1 of the earlier values",
                k + 1,
                t + 1
            )));
        }
    }
    Ok(())
}

/// A uniformly random start followed by random left/right interval extensions.
pub fn sample_xi<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let start = rng.gen_range(0..n);
    let (mut lo, mut hi) = (start, start);
    let mut tau = vec![start];
    while tau.len() < n {
        let left = lo > 0 && (hi + 1 == n || rng.gen_bool(0.5));
        if left {
            lo -= 1;
            tau.push(lo);
        } else {
            hi += 1;
            tau.push(hi);
        }
    }
    tau
}

struct PermutedRules<'a> {
    alg: &'a Algebra,
    tau: &'a [usize],
    inv: Vec<usize>,
    memo: RefCell<HashMap<(usize, usize), WordSum>>,
    active: RefCell<HashSet<(usize, usize)>>,
    fuel: u64,
}

impl PermutedRules<'_> {
    fn correction(&self, hi: usize, lo: usize) -> Result<PbwPoly> {
        let (b, a) = (self.tau[hi], self.tau[lo]);
        let alg = self.alg;
        let old = if b > a {
            alg.relation(b, a).cloned()
        } else {
            alg.relation(a, b).map(|q| q.scale(alg.lambda(b, a)).neg())
        };
        let Some(old) = old else {
            return Ok(alg.zero());
        };
        let words = rewrite::words_of(&old)
            .into_iter()
            .map(|(c, w)| (c, w.into_iter().map(|l| self.inv[l]).collect()))
            .collect();
        rewrite::normalize(self, alg.n(), alg.m(), words, Strategy::Leftmost, self.fuel)
    }
}

impl RewriteRules for PermutedRules<'_> {
    fn swap(&self, hi: usize, lo: usize) -> Result<(Scalar, WordSum)> {
        let lam = self.alg.lambda(self.tau[hi], self.tau[lo]).clone();
        if let Some(w) = self.memo.borrow().get(&(hi, lo)) {
            return Ok((lam, w.clone()));
        }
        if !self.active.borrow_mut().insert((hi, lo)) {
            return Err(Error::InvalidPresentation(
                "relations are not well-founded in the permuted order".into(),
            ));
        }
        let corr = self.correction(hi, lo);
        self.active.borrow_mut().remove(&(hi, lo));
        let words = rewrite::words_of(&corr?);
        self.memo.borrow_mut().insert((hi, lo), words.clone());
        Ok((lam, words))
    }
}

/// The presentation on generators `x_{τ(1)}, ..., x_{τ(N)}` (0-based `tau`).
pub fn permute_presentation(alg: &Algebra, tau: &[usize]) -> Result<CglPresentation> {
    let p = alg.presentation();
    let n = p.n();
    if tau.len() != n {
        return Err(Error::NotInXi(format!("expected a permutation of length {n}")));
    }
    check_xi(tau)?;
    let t = p.torus();
    let identity = tau.iter().enumerate().all(|(i, &x)| i == x);
    let reversal = tau.iter().enumerate().all(|(i, &x)| x == n - 1 - i);
    let descending: Vec<bool> = (0..n)
        .map(|k| {
            if k == 0 {
                n > 1 && tau[1] < tau[0]
            } else {
                tau[k] < tau[..k].iter().copied().min().unwrap_or(0)
            }
        })
        .collect();
    let needs_star = descending.iter().any(|&d| d);
    let hs = match (&t.h_star, needs_star) {
        (Some(hs), _) => Some(hs),
        (None, true) => return Err(Error::MissingHStar),
        (None, false) => None,
    };
    let h: Vec<Vec<SignedMonomial>> = (0..n)
        .map(|k| if descending[k] { hs.expect("checked")[tau[k]].clone() } else { t.h[tau[k]].clone() })
        .collect();
    let h_star = if identity {
        t.h_star.clone()
    } else if reversal {
        Some(tau.iter().map(|&o| t.h[o].clone()).collect())
    } else {
        None
    };

    let mut inv = vec![0; n];
    for (new, &old) in tau.iter().enumerate() {
        inv[old] = new;
    }
    let rules = PermutedRules {
        alg,
        tau,
        inv,
        memo: RefCell::new(HashMap::new()),
        active: RefCell::new(HashSet::new()),
        fuel: alg.fuel_base().saturating_mul(16),
    };
    let mut q = BTreeMap::new();
    for k in 0..n {
        for j in 0..k {
            let (_, words) = rules.swap(k, j)?;
            let poly = rewrite::normalize(&rules, n, alg.m(), words, Strategy::Leftmost, rules.fuel)?;
            if !poly.is_zero() {
                q.insert((k, j), poly);
            }
        }
    }
    let lambda = skew_complete(n, alg.m(), |k, j| p.lambda(tau[k], tau[j]));
    let name = p.name().map(|s| {
        if identity {
            s.to_string()
        } else {
            let perm: Vec<String> = tau.iter().map(|x| (x + 1).to_string()).collect();
            format!("{s} [order {}]", perm.join(","))
        }
    });
    let aliases = if p.aliases().is_empty() { Vec::new() } else { tau.iter().map(|&o| p.gen_name(o)).collect() };
    Ok(CglPresentation::new(name, p.params().clone(), lambda, q, t.permuted(tau, h, h_star))?.with_aliases(aliases))
}

/// The presentation with generators in descending order.
pub fn reverse_presentation(alg: &Algebra) -> Result<CglPresentation> {
    let p = alg.presentation();
    if let Some((k, j)) = p.q_in_open_intervals() {
        return Err(Error::NotReversible(format!("Q{} is not supported on x{}..x{}", pair(k, j), j + 2, k)));
    }
    let tau: Vec<usize> = (0..p.n()).rev().collect();
    let rev = permute_presentation(alg, &tau)?;
    let name = p.name().map(|s| s.strip_suffix(" [reversed]").map(str::to_string).unwrap_or(format!("{s} [reversed]")));
    Ok(rev.with_name(name))
}

/// Whether the subgroup of K^× generated by the λ_{kj} is torsionfree.
///
/// The only torsion in the group of signed monomials is -1, which lies in
/// the subgroup exactly when some integer relation among the exponent
/// vectors carries an odd total sign.
pub fn is_torsionfree(p: &CglPresentation) -> Result<bool> {
    let n = p.n();
    let mut gens = Vec::new();
    for k in 0..n {
        for j in 0..k {
            gens.push(p.lambda(k, j).monomial_log()?);
        }
    }
    if gens.iter().all(|g| g.sign == 0) {
        return Ok(true);
    }
    let m = p.params().len();
    let a: Vec<Vec<i64>> = (0..m).map(|r| gens.iter().map(|g| g.exps[r]).collect()).collect();
    let kernel = lattice::kernel_basis(&a, gens.len());
    Ok(kernel.iter().all(|v| v.iter().zip(&gens).map(|(c, g)| c * g.sign as i64).sum::<i64>() % 2 == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_membership() {
        assert!(check_xi(&[0, 1, 2]).is_ok());
        assert!(check_xi(&[1, 0, 2]).is_ok());
        assert!(check_xi(&[2, 1, 0]).is_ok());
        assert!(matches!(check_xi(&[0, 2, 1]), Err(Error::NotInXi(_))));
        assert!(matches!(check_xi(&[0, 0, 1]), Err(Error::NotInXi(_))));
    }

    #[test]
    fn character_evaluation() {
        let q = SignedMonomial::param_pow(0, 1, 1);
        let h = vec![q.clone(), q.inv()];
        assert_eq!(eval_character(&Character(vec![2, 1]), &h), q);
        assert!(eval_character(&Character(vec![0, 0]), &h).is_one());
    }
}

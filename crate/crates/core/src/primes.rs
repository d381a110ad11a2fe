//! Homogeneous prime elements `y_k`, the level function η, the α and q
//! matrices, and the lattice computations built on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::lattice;
use crate::linalg;
use crate::pbw::{Character, Monomial, PbwPoly};
use crate::report::ValidationReport;
use crate::scalar::{Scalar, SignedMonomial};

/// Level function and chain statistics (0-based indices; `None` is ∓∞).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaData {
    pub eta: Vec<usize>,
    pub pred: Vec<Option<usize>>,
    pub succ: Vec<Option<usize>>,
    pub o_minus: Vec<usize>,
    pub o_plus: Vec<usize>,
}

impl EtaData {
    fn from_pred(pred: Vec<Option<usize>>) -> Self {
        let n = pred.len();
        let mut succ = vec![None; n];
        for (k, p) in pred.iter().enumerate() {
            if let Some(j) = p {
                succ[*j] = Some(k);
            }
        }
        let mut eta = vec![0; n];
        let mut o_minus = vec![0; n];
        for k in 0..n {
            if let Some(j) = pred[k] {
                eta[k] = eta[j];
                o_minus[k] = o_minus[j] + 1;
            } else {
                eta[k] = k;
            }
        }
        let mut o_plus = vec![0; n];
        for k in (0..n).rev() {
            if let Some(s) = succ[k] {
                o_plus[k] = o_plus[s] + 1;
            }
        }
        Self { eta, pred, succ, o_minus, o_plus }
    }

    /// `p^m(k)` for `m = 0..=O_-(k)`.
    pub fn chain_down(&self, k: usize) -> Vec<usize> {
        let mut out = vec![k];
        let mut cur = k;
        while let Some(p) = self.pred[cur] {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Level sets of η in order of their smallest element.
    pub fn level_sets(&self) -> Vec<Vec<usize>> {
        let mut sets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, &e) in self.eta.iter().enumerate() {
            sets.entry(e).or_default().push(k);
        }
        sets.into_values().collect()
    }

    pub fn finals(&self) -> Vec<usize> {
        (0..self.eta.len()).filter(|&k| self.succ[k].is_none()).collect()
    }
}

/// Output of the y-element recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YElementTable {
    pub y: Vec<PbwPoly>,
    pub c: BTreeMap<usize, PbwPoly>,
    pub alpha: Vec<Vec<SignedMonomial>>,
    pub qmat: Vec<Vec<SignedMonomial>>,
    pub eta: EtaData,
}

/// A successful predecessor solve: `c` and the dimension of the solution space.
struct Candidate {
    c: PbwPoly,
    nullity: usize,
}

/// One row per monomial occurring in any of `polys`, one column per poly.
fn coefficient_rows(polys: &[PbwPoly]) -> Vec<Vec<Scalar>> {
    let monos: BTreeSet<&Monomial> = polys.iter().flat_map(|p| p.monomials()).collect();
    monos.into_iter().map(|mono| polys.iter().map(|p| p.coeff(mono)).collect()).collect()
}

/// Solves `Σ c_m v_m = target` over K; returns coefficients and nullity.
pub(crate) fn solve_combination(vectors: &[PbwPoly], target: &PbwPoly, m: usize) -> Option<(Vec<Scalar>, usize)> {
    let mut all = vectors.to_vec();
    all.push(target.clone());
    let rows = coefficient_rows(&all);
    let a: Vec<Vec<Scalar>> = rows.iter().map(|r| r[..vectors.len()].to_vec()).collect();
    let b: Vec<Scalar> = rows.iter().map(|r| r[vectors.len()].clone()).collect();
    if a.is_empty() {
        return Some((vec![Scalar::zero(m); vectors.len()], vectors.len()));
    }
    linalg::solve(&a, &b, vectors.len(), m)
}

fn top_in(p: &PbwPoly, k: usize) -> PbwPoly {
    let d = p.max_exponent(k);
    p.filter(|mono| mono.0[k] == d)
}

fn try_predecessor(alg: &Algebra, y_j: &PbwPoly, k: usize) -> Result<Option<Candidate>> {
    let m = alg.m();
    let chi = alg
        .character_of(y_j)?
        .ok_or_else(|| Error::InternalInconsistency("y-element is not homogeneous".into()))?
        .add(&alg.presentation().torus().chi[k]);
    let gens: Vec<usize> = (0..k).collect();
    let basis: Vec<PbwPoly> = alg.homogeneous_basis(&chi, &gens)?.into_iter().map(|b| alg.monomial(b)).collect();
    let z = alg.mul(y_j, &alg.gen(k))?;

    // One block of coefficient equations per generator x_i, i <= k.
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut b: Vec<Scalar> = Vec::new();
    for i in 0..=k {
        let xi = alg.gen(i);
        let a = alg.mul(&z, &xi)?;
        let bb = alg.mul(&xi, &z)?;
        let Some(gamma) = top_in(&a, k).ratio_to(&top_in(&bb, k)) else {
            return Ok(None);
        };
        let target = a.sub(&bb.scale(&gamma));
        let cols: Vec<PbwPoly> = basis
            .iter()
            .map(|bm| Ok(alg.mul(bm, &xi)?.sub(&alg.mul(&xi, bm)?.scale(&gamma))))
            .collect::<Result<_>>()?;
        let mut all = cols;
        all.push(target);
        for row in coefficient_rows(&all) {
            b.push(row[basis.len()].clone());
            rows.push(row[..basis.len()].to_vec());
        }
    }
    let solution = if rows.is_empty() || basis.is_empty() {
        if b.iter().all(Scalar::is_zero) {
            Some((vec![Scalar::zero(m); basis.len()], basis.len()))
        } else {
            None
        }
    } else {
        linalg::solve(&rows, &b, basis.len(), m)
    };
    let Some((coeffs, nullity)) = solution else {
        return Ok(None);
    };
    let mut c = alg.zero();
    for (bm, x) in basis.iter().zip(&coeffs) {
        c.add_scaled(bm, x);
    }
    let y = z.sub(&c);
    for i in 0..=k {
        let xi = alg.gen(i);
        let left = alg.mul(&y, &xi)?;
        let right = alg.mul(&xi, &y)?;
        if left.ratio_to(&right).is_none() {
            return Ok(None);
        }
    }
    Ok(Some(Candidate { c, nullity }))
}

/// Runs the y-element recursion.
pub fn compute_y_elements(alg: &Algebra) -> Result<YElementTable> {
    if !alg.is_graded() {
        return Err(Error::NoGradingDefined);
    }
    let p = alg.presentation();
    let n = p.n();
    let mut y: Vec<PbwPoly> = Vec::with_capacity(n);
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut succ: Vec<Option<usize>> = vec![None; n];
    let mut c = BTreeMap::new();
    for k in 0..n {
        let has_delta = (0..k).any(|j| p.q(k, j).is_some());
        if !has_delta {
            y.push(alg.gen(k));
            continue;
        }
        let mut found: Vec<(usize, Candidate)> = Vec::new();
        for j in (0..k).filter(|&j| succ[j].is_none()) {
            if let Some(cand) = try_predecessor(alg, &y[j], k)? {
                found.push((j, cand));
            }
        }
        match found.len() {
            0 => return Err(Error::NoPredecessorSolution(k + 1)),
            1 => {}
            _ => {
                return Err(Error::AmbiguousPredecessor {
                    k: k + 1,
                    candidates: found.iter().map(|(j, _)| j + 1).collect(),
                })
            }
        }
        let (j, cand) = found.pop().expect("one candidate");
        if cand.nullity > 0 {
            return Err(Error::AmbiguousPredecessor { k: k + 1, candidates: vec![j + 1] });
        }
        let yk = alg.mul(&y[j], &alg.gen(k))?.sub(&cand.c);
        pred[k] = Some(j);
        succ[j] = Some(k);
        c.insert(k, cand.c);
        y.push(yk);
    }
    let eta = EtaData::from_pred(pred);
    let m = alg.m();
    let mut alpha = vec![vec![SignedMonomial::one(m); n]; n];
    let mut qmat = vec![vec![SignedMonomial::one(m); n]; n];
    for j in 0..n {
        for k in 0..n {
            alpha[j][k] = eta.chain_down(k).iter().fold(SignedMonomial::one(m), |acc, &l| acc.mul(&p.lambda(j, l)));
        }
    }
    for k in 0..n {
        for j in 0..n {
            let mut acc = SignedMonomial::one(m);
            for &a in &eta.chain_down(k) {
                for &b in &eta.chain_down(j) {
                    acc = acc.mul(&p.lambda(a, b));
                }
            }
            qmat[k][j] = acc;
        }
    }
    Ok(YElementTable { y, c, alpha, qmat, eta })
}

/// Rank, cross-checked three ways.
pub fn rank_of(alg: &Algebra, t: &YElementTable) -> Result<usize> {
    let p = alg.presentation();
    let n = p.n();
    let zero_delta = (0..n).filter(|&k| (0..k).all(|j| p.q(k, j).is_none())).count();
    let finals = t.eta.finals().len();
    let levels = t.eta.level_sets().len();
    if zero_delta != finals || finals != levels {
        return Err(Error::InternalInconsistency(format!(
            "rank counts disagree: #{{delta_k = 0}} = {zero_delta}, #{{s = +inf}} = {finals}, |range eta| = {levels}"
        )));
    }
    Ok(zero_delta)
}

/// Indices `i` whose generator is prime, via singleton η-level sets,
/// cross-checked against vanishing of the relevant Q-data.
pub fn compute_p_x(alg: &Algebra, t: &YElementTable) -> Result<BTreeSet<usize>> {
    let p = alg.presentation();
    let n = p.n();
    let by_levels: BTreeSet<usize> =
        t.eta.level_sets().into_iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
    let direct: BTreeSet<usize> = (0..n)
        .filter(|&i| (i + 1..n).all(|k| p.q(k, i).is_none()) && (0..i).all(|j| p.q(i, j).is_none()))
        .collect();
    if by_levels != direct {
        return Err(Error::InternalInconsistency(format!(
            "prime generators disagree: level sets give {:?}, Q-data gives {:?}",
            one_based(&by_levels),
            one_based(&direct)
        )));
    }
    Ok(by_levels)
}

pub(crate) fn one_based(s: &BTreeSet<usize>) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

/// `y_k y_j = q_{kj} y_j y_k` for all pairs.
pub fn verify_quantum_affine(alg: &Algebra, t: &YElementTable) -> Result<ValidationReport> {
    let n = t.y.len();
    let mut rep = ValidationReport::new("y-elements generate a quantum affine space");
    let mut bad = Vec::new();
    for k in 0..n {
        for j in 0..k {
            let left = alg.mul(&t.y[k], &t.y[j])?;
            let right = alg.mul(&t.y[j], &t.y[k])?.scale(&t.qmat[k][j].to_scalar());
            if left != right {
                bad.push(format!("(y{}, y{})", k + 1, j + 1));
            }
        }
    }
    rep.push(format!("y_k y_j = q_kj y_j y_k for all {} pairs", n * n.saturating_sub(1) / 2), bad.is_empty(), bad.join(", "));
    Ok(rep)
}

/// `y_k x_j = α_{jk}^{-1} x_j y_k` for every final `k`.
pub fn verify_prime_commutation(alg: &Algebra, t: &YElementTable) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new("commutation of final y-elements with generators");
    let mut bad = Vec::new();
    for k in t.eta.finals() {
        for j in 0..t.y.len() {
            let xj = alg.gen(j);
            let left = alg.mul(&t.y[k], &xj)?;
            let right = alg.mul(&xj, &t.y[k])?.scale(&t.alpha[j][k].inv().to_scalar());
            if left != right {
                bad.push(format!("(y{}, x{})", k + 1, j + 1));
            }
        }
    }
    rep.push("y_k x_j = alpha_jk^-1 x_j y_k", bad.is_empty(), bad.join(", "));
    Ok(rep)
}

/// Z-basis (Hermite form) of the radical of the bicharacter `Ω(e_i, e_j) = M_ij`.
pub fn bicharacter_radical(mat: &[Vec<SignedMonomial>]) -> Result<Vec<Vec<i64>>> {
    let n = mat.len();
    let logs: Vec<Vec<_>> =
        mat.iter().map(|row| row.iter().map(SignedMonomial::monomial_log).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let m = logs.first().and_then(|r| r.first()).map_or(0, |l| l.exps.len());
    // Unknowns: f (n of them) then one slack t_j per sign row.
    let width = 2 * n;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for j in 0..n {
        for a in 0..m {
            let mut r = vec![0; width];
            for i in 0..n {
                r[i] = logs[i][j].exps[a];
            }
            rows.push(r);
        }
        let mut r = vec![0; width];
        for i in 0..n {
            r[i] = i64::from(logs[i][j].sign);
        }
        r[n + j] = -2;
        rows.push(r);
    }
    let kernel = lattice::kernel_basis(&rows, width);
    let projected: Vec<Vec<i64>> = kernel.into_iter().map(|v| v[..n].to_vec()).collect();
    Ok(lattice::row_basis(&projected))
}

/// Whether `Z^N / rad Ω` is torsionfree.
pub fn is_saturated(mat: &[Vec<SignedMonomial>]) -> Result<bool> {
    Ok(lattice::quotient_torsionfree(&bicharacter_radical(mat)?))
}

/// The lattice of exponent vectors of central Laurent monomials in the y-torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterLattice {
    pub basis: Vec<Vec<i64>>,
    /// Basis vectors with nonnegative entries, giving central elements of the affine algebra.
    pub nonnegative: Vec<bool>,
}

pub fn torus_center_basis(t: &YElementTable) -> Result<CenterLattice> {
    let basis = bicharacter_radical(&t.qmat)?;
    let nonnegative = basis.iter().map(|v| v.iter().all(|&x| x >= 0)).collect();
    Ok(CenterLattice { basis, nonnegative })
}

/// Result of searching for a factorisation of a homogeneous element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityProbe {
    pub splits_checked: usize,
    pub splits_skipped: usize,
    pub factorisation: Option<(PbwPoly, PbwPoly)>,
}

/// Looks for `y = a b` with `a`, `b` homogeneous of positive degree. Splits
/// where one factor's component is one-dimensional are decided by a linear
/// solve; the rest are counted as skipped.
pub fn probe_irreducible(alg: &Algebra, y: &PbwPoly) -> Result<IrreducibilityProbe> {
    let chi = alg.character_of(y)?.ok_or_else(|| Error::InvalidArgument("element is not homogeneous".into()))?;
    let deg = alg.graded_split(y)?.keys().copied().max().unwrap_or(0);
    let all: Vec<usize> = (0..alg.n()).collect();
    let mut checked = 0;
    let mut skipped = 0;
    let mut seen: BTreeSet<Character> = BTreeSet::new();
    for d1 in 1..deg {
        for mono in alg.monomials_of_degree(d1, &all)? {
            let c1 = alg.monomial_character(&mono);
            if !seen.insert(c1.clone()) {
                continue;
            }
            let c2 = chi.sub(&c1);
            let left = alg.homogeneous_basis(&c1, &all)?;
            let right = alg.homogeneous_basis(&c2, &all)?;
            if left.is_empty() || right.is_empty() {
                continue;
            }
            let found = if left.len() == 1 {
                let a = alg.monomial(left[0].clone());
                let cols: Vec<PbwPoly> =
                    right.iter().map(|r| alg.mul(&a, &alg.monomial(r.clone()))).collect::<Result<_>>()?;
                solve_combination(&cols, y, alg.m()).map(|(x, _)| (a, combine(alg, &right, &x)))
            } else if right.len() == 1 {
                let b = alg.monomial(right[0].clone());
                let cols: Vec<PbwPoly> =
                    left.iter().map(|l| alg.mul(&alg.monomial(l.clone()), &b)).collect::<Result<_>>()?;
                solve_combination(&cols, y, alg.m()).map(|(x, _)| (combine(alg, &left, &x), b))
            } else {
                skipped += 1;
                continue;
            };
            checked += 1;
            if let Some(f) = found {
                return Ok(IrreducibilityProbe { splits_checked: checked, splits_skipped: skipped, factorisation: Some(f) });
            }
        }
    }
    Ok(IrreducibilityProbe { splits_checked: checked, splits_skipped: skipped, factorisation: None })
}

fn combine(alg: &Algebra, basis: &[Monomial], coeffs: &[Scalar]) -> PbwPoly {
    let mut out = alg.zero();
    for (b, c) in basis.iter().zip(coeffs) {
        out.add_term(b.clone(), c.clone());
    }
    out
}

/// Solves `w = v d` for homogeneous `v`, if possible.
pub fn divide_right(alg: &Algebra, w: &PbwPoly, d: &PbwPoly) -> Result<Option<PbwPoly>> {
    let cw = alg.character_of(w)?.ok_or_else(|| Error::InvalidArgument("dividend is not homogeneous".into()))?;
    let cd = alg.character_of(d)?.ok_or_else(|| Error::InvalidArgument("divisor is not homogeneous".into()))?;
    let all: Vec<usize> = (0..alg.n()).collect();
    let basis = alg.homogeneous_basis(&cw.sub(&cd), &all)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let cols: Vec<PbwPoly> = basis.iter().map(|b| alg.mul(&alg.monomial(b.clone()), d)).collect::<Result<_>>()?;
    Ok(solve_combination(&cols, w, alg.m()).map(|(x, _)| combine(alg, &basis, &x)))
}

/// Greedy right-division of `w` by the final y-elements; returns the
/// indices of the factors found (in order of removal) when `w` reduces to
/// a nonzero scalar.
pub fn refactor_by_primes(alg: &Algebra, t: &YElementTable, w: &PbwPoly) -> Result<Option<Vec<usize>>> {
    let finals = t.eta.finals();
    let mut cur = w.clone();
    let mut out = Vec::new();
    while cur.as_scalar().is_none() {
        let mut progressed = false;
        for &l in &finals {
            if let Some(v) = divide_right(alg, &cur, &t.y[l])? {
                out.push(l);
                cur = v;
                progressed = true;
                break;
            }
        }
        if !progressed {
            return Ok(None);
        }
    }
    Ok(cur.as_scalar().filter(|s| !s.is_zero()).map(|_| out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{oq_matrices, quantum_affine, quantum_plane_minus_one, uq_plus_sl3};

    #[test]
    fn two_by_two_matrices() {
        let alg = Algebra::new(oq_matrices(2, 2).unwrap());
        let t = compute_y_elements(&alg).unwrap();
        let ys: Vec<String> = t.y.iter().map(|y| alg.format(y)).collect();
        assert_eq!(ys, ["x1", "x2", "x3", "x1*x4 - q*x2*x3"]);
        assert_eq!(t.eta.pred, vec![None, None, None, Some(0)]);
        assert_eq!(t.eta.level_sets(), vec![vec![0, 3], vec![1], vec![2]]);
        assert_eq!(rank_of(&alg, &t).unwrap(), 3);
        assert_eq!(compute_p_x(&alg, &t).unwrap(), BTreeSet::from([1, 2]));
        assert!(t.qmat[3].iter().all(SignedMonomial::is_one));
        assert!(verify_quantum_affine(&alg, &t).unwrap().passed());
        assert!(verify_prime_commutation(&alg, &t).unwrap().passed());
        let center = torus_center_basis(&t).unwrap();
        assert!(center.basis.contains(&vec![0, 0, 0, 1]));
    }

    #[test]
    fn sl3_chain() {
        let alg = Algebra::new(uq_plus_sl3());
        let t = compute_y_elements(&alg).unwrap();
        assert_eq!(t.eta.pred, vec![None, None, Some(0)]);
        assert_eq!(rank_of(&alg, &t).unwrap(), 2);
        assert_eq!(compute_p_x(&alg, &t).unwrap(), BTreeSet::from([1]));
    }

    #[test]
    fn quantum_affine_is_its_own_y_algebra() {
        let alg = Algebra::new(quantum_affine(3, &SignedMonomial::param_pow(0, 1, 1)).unwrap());
        let t = compute_y_elements(&alg).unwrap();
        assert!(t.y.iter().enumerate().all(|(k, y)| *y == alg.gen(k)));
        assert_eq!(t.qmat, alg.presentation().lambda_matrix());
        assert_eq!(rank_of(&alg, &t).unwrap(), 3);
    }

    #[test]
    fn radicals() {
        let minus = quantum_plane_minus_one().lambda_matrix();
        assert_eq!(bicharacter_radical(&minus).unwrap(), vec![vec![2, 0], vec![0, 2]]);
        assert!(!is_saturated(&minus).unwrap());
        let triv = vec![vec![SignedMonomial::one(1); 3]; 3];
        assert_eq!(bicharacter_radical(&triv).unwrap().len(), 3);
        assert!(is_saturated(&triv).unwrap());
        let plane = quantum_affine(2, &SignedMonomial::param_pow(0, 1, 1)).unwrap().lambda_matrix();
        assert!(bicharacter_radical(&plane).unwrap().is_empty());
    }

    #[test]
    fn determinant_does_not_factor() {
        let alg = Algebra::new(oq_matrices(2, 2).unwrap());
        let t = compute_y_elements(&alg).unwrap();
        let probe = probe_irreducible(&alg, &t.y[3]).unwrap();
        assert!(probe.factorisation.is_none());
        assert!(probe.splits_checked > 0);
        let prod = alg.mul(&alg.gen(0), &alg.gen(1)).unwrap();
        assert!(probe_irreducible(&alg, &prod).unwrap().factorisation.is_some());
    }
}

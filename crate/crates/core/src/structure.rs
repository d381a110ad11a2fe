//! Nakayama automorphisms, the normal element realising them, diagonal
//! automorphisms and the core decomposition.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::lattice;
use crate::pbw::PbwPoly;
use crate::presentation::{validate_cgl, validate_symmetric, CglPresentation, TorusData};
use crate::primes::{compute_p_x, YElementTable};
use crate::report::ValidationReport;
use crate::scalar::SignedMonomial;

/// `x_k -> μ_k x_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalMap {
    pub eigenvalues: Vec<SignedMonomial>,
}

impl DiagonalMap {
    pub fn identity(n: usize, m: usize) -> Self {
        Self { eigenvalues: vec![SignedMonomial::one(m); n] }
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self { eigenvalues: self.eigenvalues.iter().zip(&o.eigenvalues).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn inverse(&self) -> Self {
        Self { eigenvalues: self.eigenvalues.iter().map(SignedMonomial::inv).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.eigenvalues.iter().all(SignedMonomial::is_one)
    }

    /// Generator images as polynomials.
    pub fn images(&self, alg: &Algebra) -> Vec<PbwPoly> {
        self.eigenvalues.iter().enumerate().map(|(k, mu)| alg.gen(k).scale(&mu.to_scalar())).collect()
    }

    /// Scalar by which the map multiplies the PBW monomial with exponents `a`.
    pub fn monomial_eigenvalue(&self, a: &[u32]) -> SignedMonomial {
        let m = self.eigenvalues.first().map_or(0, SignedMonomial::nvars);
        a.iter().zip(&self.eigenvalues).fold(SignedMonomial::one(m), |acc, (&e, mu)| acc.mul(&mu.pow(e as i64)))
    }

    /// Applies the map to a polynomial.
    pub fn apply(&self, p: &PbwPoly) -> PbwPoly {
        let mut out = PbwPoly::zero(p.ngens(), p.nparams());
        for (mono, c) in p.terms() {
            out.add_term(mono.clone(), c.mul(&self.monomial_eigenvalue(&mono.0).to_scalar()));
        }
        out
    }
}

/// Whether `x_i -> μ_i x_i` preserves every relation, i.e. each `Q_kj` is an
/// eigenvector with eigenvalue `μ_k μ_j`.
pub fn check_diagonal_automorphism(p: &CglPresentation, d: &DiagonalMap) -> bool {
    p.q_entries().all(|(&(k, j), q)| {
        let want = d.eigenvalues[k].mul(&d.eigenvalues[j]);
        q.monomials().all(|mono| d.monomial_eigenvalue(&mono.0) == want)
    })
}

/// Dimension of the group of diagonal automorphisms, as the rank of the
/// kernel of the constraint lattice.
pub fn daut_rank(p: &CglPresentation) -> usize {
    let n = p.n();
    let mut rows = Vec::new();
    for (&(k, j), q) in p.q_entries() {
        for mono in q.monomials() {
            let mut v: Vec<i64> = mono.0.iter().map(|&a| a as i64).collect();
            v[k] -= 1;
            v[j] -= 1;
            rows.push(v);
        }
    }
    n - lattice::rank(&rows)
}

/// `ν(x_k) = (∏_j λ_kj) x_k`.
pub fn nakayama_automorphism(alg: &Algebra) -> Result<DiagonalMap> {
    let p = alg.presentation();
    if let Some((k, j)) = p.q_in_open_intervals() {
        return Err(Error::NotReversible(format!(
            "Q({},{}) is not supported on x{}..x{}",
            k + 1,
            j + 1,
            j + 2,
            k
        )));
    }
    let n = p.n();
    let m = alg.m();
    let nu = DiagonalMap {
        eigenvalues: (0..n).map(|k| (0..n).fold(SignedMonomial::one(m), |acc, j| acc.mul(&p.lambda(k, j)))).collect(),
    };
    if !check_diagonal_automorphism(p, &nu) {
        return Err(Error::InternalInconsistency("Nakayama map does not preserve the relations".into()));
    }
    Ok(nu)
}

/// Product of the final y-elements in increasing order.
pub fn normal_element(alg: &Algebra, t: &YElementTable) -> Result<PbwPoly> {
    let finals = t.eta.finals();
    alg.product(finals.iter().map(|&l| &t.y[l]))
}

/// Checks `x_k u = u ν(x_k)` and `β_k = ∏_j λ_kj` for every generator.
pub fn verify_nakayama_by_normal_element(alg: &Algebra, t: &YElementTable, nu: &DiagonalMap) -> Result<ValidationReport> {
    let p = alg.presentation();
    let n = p.n();
    let m = alg.m();
    let u = normal_element(alg, t)?;
    let mut rep = ValidationReport::new("Nakayama automorphism via the normal element u");
    let mut bad = Vec::new();
    for k in 0..n {
        let xk = alg.gen(k);
        let left = alg.mul(&xk, &u)?;
        let right = alg.mul(&u, &xk.scale(&nu.eigenvalues[k].to_scalar()))?;
        if left != right {
            bad.push(p.gen_name(k));
        }
    }
    rep.push("x_k u = u nu(x_k) for all k", bad.is_empty(), bad.join(", "));
    let finals = t.eta.finals();
    let mut bad = Vec::new();
    for k in 0..n {
        let beta = finals.iter().fold(SignedMonomial::one(m), |acc, &l| acc.mul(&t.alpha[k][l]));
        let prod = (0..n).fold(SignedMonomial::one(m), |acc, j| acc.mul(&p.lambda(k, j)));
        if beta != prod || beta != nu.eigenvalues[k] {
            bad.push(format!("k = {}", k + 1));
        }
    }
    rep.push("beta_k = prod_j lambda_kj", bad.is_empty(), bad.join(", "));
    Ok(rep)
}

/// The decomposition of a symmetric CGL extension into its core and the
/// free prime generators.
#[derive(Debug, Clone)]
pub struct CoreDecomposition {
    pub p_x: BTreeSet<usize>,
    pub f_x: BTreeSet<usize>,
    pub c_x: BTreeSet<usize>,
    /// Subalgebra on the `C_x` generators (renumbered consecutively).
    pub core: CglPresentation,
    /// λ restricted to `F_x`, rows and columns in increasing order.
    pub frame_lambda: Vec<Vec<SignedMonomial>>,
    /// `λ_ik` for `i ∈ F_x`, `k ∈ C_x`.
    pub smash_scalars: BTreeMap<(usize, usize), SignedMonomial>,
    /// Validation of the core as a (symmetric) CGL extension.
    pub core_checks: ValidationReport,
}

pub fn core_decomposition(alg: &Algebra, t: &YElementTable) -> Result<CoreDecomposition> {
    let p = alg.presentation();
    let n = p.n();
    let p_x = compute_p_x(alg, t)?;
    let mut essential = BTreeSet::new();
    for (&(k, j), q) in p.q_entries() {
        if !p_x.contains(&k) && !p_x.contains(&j) {
            essential.extend(q.support());
        }
    }
    let f_x: BTreeSet<usize> = p_x.iter().copied().filter(|i| !essential.contains(i)).collect();
    let c_x: BTreeSet<usize> = (0..n).filter(|i| !f_x.contains(i)).collect();

    let keep: Vec<usize> = c_x.iter().copied().collect();
    let mut map = vec![None; n];
    for (new, &old) in keep.iter().enumerate() {
        map[old] = Some(new);
    }
    let nc = keep.len();
    let lambda: Vec<Vec<SignedMonomial>> = keep.iter().map(|&a| keep.iter().map(|&b| p.lambda(a, b)).collect()).collect();
    let mut q = BTreeMap::new();
    for (&(k, j), poly) in p.q_entries() {
        let (Some(nk), Some(nj)) = (map[k], map[j]) else {
            continue;
        };
        let r = poly.relabel(&map, nc).ok_or_else(|| {
            Error::InternalInconsistency(format!("Q({},{}) involves a generator outside the core", k + 1, j + 1))
        })?;
        q.insert((nk, nj), r);
    }
    let tor = p.torus();
    let pick = |v: &Vec<Vec<SignedMonomial>>| keep.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
    let torus = TorusData {
        rank: tor.rank,
        chi: keep.iter().map(|&i| tor.chi[i].clone()).collect(),
        h: pick(&tor.h),
        h_star: tor.h_star.as_ref().map(pick),
        pi: tor.pi.clone(),
    };
    let aliases = if p.aliases().is_empty() { Vec::new() } else { keep.iter().map(|&i| p.gen_name(i)).collect() };
    let core = CglPresentation::new(p.name().map(|s| format!("core of {s}")), p.params().clone(), lambda, q, torus)?
        .with_aliases(aliases);

    let core_alg = Algebra::new(core.clone()).with_fuel(alg.fuel_base());
    let mut core_checks = validate_cgl(&core_alg)?;
    if core.torus().h_star.is_some() {
        core_checks.extend(validate_symmetric(&core_alg)?);
    }

    let frame: Vec<usize> = f_x.iter().copied().collect();
    let frame_lambda = frame.iter().map(|&a| frame.iter().map(|&b| p.lambda(a, b)).collect()).collect();
    let smash_scalars =
        frame.iter().flat_map(|&i| keep.iter().map(move |&k| ((i, k), p.lambda(i, k)))).collect();
    Ok(CoreDecomposition { p_x, f_x, c_x, core, frame_lambda, smash_scalars, core_checks })
}

/// Relation-level check that a diagonal map is an endomorphism, by substitution.
pub fn diagonal_preserves_relations(alg: &Algebra, d: &DiagonalMap) -> Result<bool> {
    let p = alg.presentation();
    for (&(k, j), q) in p.q_entries() {
        let scaled = d.apply(q);
        let want = q.scale(&d.eigenvalues[k].mul(&d.eigenvalues[j]).to_scalar());
        if scaled != want {
            return Ok(false);
        }
    }
    Ok(true)
}

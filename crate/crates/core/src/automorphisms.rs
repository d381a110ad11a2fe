//! Auditing candidate endomorphisms: relation preservation, unipotence,
//! degree-zero components and centralizer eigenspaces.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg;
use crate::pbw::{Monomial, PbwPoly};
use crate::primes::{is_saturated, YElementTable};
use crate::report::ValidationReport;
use crate::scalar::Scalar;
use crate::structure::CoreDecomposition;

/// `x_i -> images[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndomorphismSpec {
    pub images: Vec<PbwPoly>,
}

impl EndomorphismSpec {
    pub fn new(images: Vec<PbwPoly>) -> Self {
        Self { images }
    }

    pub fn identity(alg: &Algebra) -> Self {
        Self { images: (0..alg.n()).map(|i| alg.gen(i)).collect() }
    }

    /// Parses one image per generator.
    pub fn parse(alg: &Algebra, images: &[&str]) -> Result<Self> {
        if images.len() != alg.n() {
            return Err(Error::InvalidArgument(format!("expected {} images, got {}", alg.n(), images.len())));
        }
        Ok(Self { images: images.iter().map(|s| alg.parse(s)).collect::<Result<_>>()? })
    }

    pub fn apply(&self, alg: &Algebra, p: &PbwPoly) -> Result<PbwPoly> {
        alg.apply(&self.images, p)
    }

    /// `self ∘ other`.
    pub fn compose(&self, alg: &Algebra, other: &Self) -> Result<Self> {
        Ok(Self { images: other.images.iter().map(|p| self.apply(alg, p)).collect::<Result<_>>()? })
    }

    pub fn is_identity(&self, alg: &Algebra) -> bool {
        self.images.iter().enumerate().all(|(i, p)| *p == alg.gen(i))
    }

    pub fn format(&self, alg: &Algebra) -> Vec<String> {
        self.images.iter().map(|p| alg.format(p)).collect()
    }
}

/// Checks `e(x_k) e(x_j) - λ_kj e(x_j) e(x_k) = e(Q_kj)` for all `j < k`.
pub fn verify_endomorphism(alg: &Algebra, e: &EndomorphismSpec) -> Result<ValidationReport> {
    let n = alg.n();
    let mut rep = ValidationReport::new("relation preservation");
    if e.images.len() != n {
        rep.fail("image count", format!("expected {n}, got {}", e.images.len()));
        return Ok(rep);
    }
    let mut bad = Vec::new();
    for k in 0..n {
        for j in 0..k {
            let lhs = alg.skew_commutator(&e.images[k], &e.images[j], alg.lambda(k, j))?;
            let rhs = match alg.relation(k, j) {
                Some(q) => e.apply(alg, q)?,
                None => alg.zero(),
            };
            if lhs != rhs {
                bad.push(format!("({},{})", k + 1, j + 1));
            }
        }
    }
    rep.push("e(x_k)e(x_j) - lambda_kj e(x_j)e(x_k) = e(Q_kj)", bad.is_empty(), bad.join(" "));
    Ok(rep)
}

fn generator_degree(alg: &Algebra, i: usize) -> Result<i64> {
    alg.pi_degree(&Monomial::gen(i, alg.n()))
}

/// Whether `e(x_i) - x_i` lies in strictly higher π-degree for every generator.
pub fn is_unipotent(alg: &Algebra, e: &EndomorphismSpec) -> Result<bool> {
    for (i, img) in e.images.iter().enumerate() {
        let d = generator_degree(alg, i)?;
        if !alg.in_r_geq(&img.sub(&alg.gen(i)), d + 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the shape forced on a unipotent automorphism: identity on the
/// core generators, and normal perturbations `a_i = e(x_i) - x_i` on the
/// free ones with the commutation scalars of `x_i`.
pub fn check_unipotent_structure(
    alg: &Algebra,
    t: &YElementTable,
    d: &CoreDecomposition,
    e: &EndomorphismSpec,
) -> Result<ValidationReport> {
    let p = alg.presentation();
    let n = p.n();
    let mut rep = ValidationReport::new("unipotent automorphism structure");
    if p.torus().h_star.is_none() {
        rep.warn("no h* supplied; symmetry of the presentation is not established");
    }
    if !is_saturated(&p.lambda_matrix())? {
        rep.warn("lambda is not saturated; the structural conclusions are not guaranteed");
    }
    if t.y.len() != n {
        rep.warn("y-element table does not match the presentation");
    }
    if !is_unipotent(alg, e)? {
        rep.fail("e is unipotent", "some e(x_i) - x_i has a component of degree <= deg x_i");
    }

    let moved: Vec<String> = d.c_x.iter().filter(|&&k| e.images[k] != alg.gen(k)).map(|&k| p.gen_name(k)).collect();
    rep.push("e(x_k) = x_k on the core", moved.is_empty(), moved.join(", "));

    for &i in &d.f_x {
        let a = e.images[i].sub(&alg.gen(i));
        let name = p.gen_name(i);
        if a.is_zero() {
            rep.pass(format!("a_{} = 0", i + 1));
            continue;
        }
        let deg = generator_degree(alg, i)?;
        rep.push(format!("a_{} in R^(>= deg {name} + 1)", i + 1), alg.in_r_geq(&a, deg + 1)?, alg.format(&a));
        let mut bad = Vec::new();
        for j in 0..n {
            let c = p.lambda(i, j).to_scalar();
            if !alg.skew_commutator(&a, &alg.gen(j), &c)?.is_zero() {
                bad.push(p.gen_name(j));
            }
        }
        rep.push(
            format!("a_{} x_j = lambda_{},j x_j a_{} for all j", i + 1, i + 1, i + 1),
            bad.is_empty(),
            if bad.is_empty() { String::new() } else { format!("fails against {}", bad.join(", ")) },
        );
        let chi = alg.monomial_character(&Monomial::gen(i, n));
        match alg.character_of(&a)? {
            Some(c) if c == chi => {}
            _ => rep.warn(format!("a_{} is not homogeneous of the character of {name}", i + 1)),
        }
    }
    Ok(rep)
}

/// `ψ = ψ_0 ∘ u` with `ψ_0` the degree-preserving part and `u` unipotent.
#[derive(Debug, Clone)]
pub struct DegreeZeroSplit {
    pub psi0: EndomorphismSpec,
    pub psi0_inverse: EndomorphismSpec,
    pub unipotent: EndomorphismSpec,
    pub report: ValidationReport,
}

/// Inverts a π-graded map degree by degree on the monomial basis.
fn invert_graded(alg: &Algebra, psi0: &EndomorphismSpec) -> Result<EndomorphismSpec> {
    let n = alg.n();
    let m = alg.m();
    let all: Vec<usize> = (0..n).collect();
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        by_degree.entry(generator_degree(alg, i)?).or_default().push(i);
    }
    let mut images = vec![alg.zero(); n];
    for (&d, gens) in &by_degree {
        let basis = alg.monomials_of_degree(d, &all)?;
        let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(c, mono)| (mono, c)).collect();
        // columns: ψ_0(basis[c]) expressed in the basis
        let mut cols = Vec::with_capacity(basis.len());
        for mono in &basis {
            let img = psi0.apply(alg, &alg.monomial(mono.clone()))?;
            let mut col = vec![Scalar::zero(m); basis.len()];
            for (mm, c) in img.terms() {
                let r = *index.get(mm).ok_or(Error::SingularDegreeZeroPart(d))?;
                col[r] = c.clone();
            }
            cols.push(col);
        }
        let rows: Vec<Vec<Scalar>> = (0..basis.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        if linalg::rank(&rows) < basis.len() {
            return Err(Error::SingularDegreeZeroPart(d));
        }
        for &i in gens {
            let target = &basis[..];
            let b: Vec<Scalar> = target
                .iter()
                .map(|mono| if *mono == Monomial::gen(i, n) { Scalar::one(m) } else { Scalar::zero(m) })
                .collect();
            let (x, _) = linalg::solve(&rows, &b, basis.len(), m).ok_or(Error::SingularDegreeZeroPart(d))?;
            images[i] = PbwPoly::from_terms(n, m, basis.iter().cloned().zip(x));
        }
    }
    Ok(EndomorphismSpec { images })
}

pub fn degree_zero_component(alg: &Algebra, e: &EndomorphismSpec) -> Result<DegreeZeroSplit> {
    let n = alg.n();
    let p = alg.presentation();
    let mut psi0 = Vec::with_capacity(n);
    for (i, img) in e.images.iter().enumerate() {
        let d = generator_degree(alg, i)?;
        let parts = alg.graded_split(img)?;
        if let Some((&low, _)) = parts.iter().next().filter(|(&k, _)| k < d) {
            return Err(Error::NotFiltered(format!(
                "image of {} has a component of degree {low} < {d}",
                p.gen_name(i)
            )));
        }
        psi0.push(parts.get(&d).cloned().unwrap_or_else(|| alg.zero()));
    }
    let psi0 = EndomorphismSpec::new(psi0);
    let mut report = ValidationReport::new("degree-zero component");
    for c in verify_endomorphism(alg, &psi0)?.checks {
        report.push(format!("psi_0: {}", c.name), c.passed, c.detail);
    }
    let psi0_inverse = invert_graded(alg, &psi0)?;
    report.pass("psi_0 is invertible in each degree");
    let unipotent = psi0_inverse.compose(alg, e)?;
    report.push("psi_0^-1 psi is unipotent", is_unipotent(alg, &unipotent)?, "");
    let round = psi0.compose(alg, &unipotent)?;
    report.push("psi = psi_0 (psi_0^-1 psi)", round == *e, "");
    Ok(DegreeZeroSplit { psi0, psi0_inverse, unipotent, report })
}

/// Verifies `e` and, when possible, certifies bijectivity through the
/// degree-zero split.
pub fn audit_endomorphism(alg: &Algebra, e: &EndomorphismSpec) -> Result<ValidationReport> {
    let mut rep = verify_endomorphism(alg, e)?;
    rep.title = "endomorphism audit".into();
    if !rep.passed() {
        return Ok(rep);
    }
    if !alg.is_graded() {
        rep.warn("endomorphism verified, bijectivity not certified (no grading)");
        return Ok(rep);
    }
    rep.push("unipotent", true, if is_unipotent(alg, e)? { "yes" } else { "no" });
    match degree_zero_component(alg, e) {
        Ok(split) => {
            let ok = split.report.passed();
            rep.extend(split.report);
            if ok {
                rep.pass("automorphism (invertible degree-zero part, unipotent remainder)");
            } else {
                rep.warn("endomorphism verified, bijectivity not certified");
            }
        }
        Err(err @ (Error::NotFiltered(_) | Error::SingularDegreeZeroPart(_))) => {
            rep.warn(format!("endomorphism verified, bijectivity not certified: {err}"));
        }
        Err(err) => return Err(err),
    }
    Ok(rep)
}

/// Basis of `C_s(v) = { w : v w = q^s w v }` inside `span(within)`, by
/// default the span of the degree-1 generators. `v` must have degree 1.
pub fn centralizer_eigenspace(alg: &Algebra, v: &PbwPoly, s: i64, within: Option<&[PbwPoly]>) -> Result<Vec<PbwPoly>> {
    if alg.m() != 1 {
        return Err(Error::MultiParameterUnsupported);
    }
    let split = alg.graded_split(v)?;
    if split.len() != 1 || !split.contains_key(&1) {
        return Err(Error::InvalidArgument("v must be homogeneous of degree 1".into()));
    }
    let space: Vec<PbwPoly> = match within {
        Some(w) => w.to_vec(),
        None => (0..alg.n()).filter(|&i| alg.weights()[i] == 1).map(|i| alg.gen(i)).collect(),
    };
    let qs = Scalar::param(0, 1).pow(s)?;
    let cols = space.iter().map(|w| alg.skew_commutator(v, w, &qs)).collect::<Result<Vec<_>>>()?;
    let mut monos: Vec<&Monomial> = cols.iter().flat_map(PbwPoly::monomials).collect();
    monos.sort();
    monos.dedup();
    let rows: Vec<Vec<Scalar>> = monos.iter().map(|mono| cols.iter().map(|c| c.coeff(mono)).collect()).collect();
    let kernel = if rows.is_empty() {
        (0..space.len())
            .map(|i| (0..space.len()).map(|j| if i == j { Scalar::one(1) } else { Scalar::zero(1) }).collect())
            .collect()
    } else {
        linalg::nullspace(&rows, space.len(), 1)
    };
    Ok(kernel
        .into_iter()
        .map(|c| {
            let mut w = alg.zero();
            for (ci, wi) in c.iter().zip(&space) {
                w.add_scaled(wi, ci);
            }
            w
        })
        .filter(|w| !w.is_zero())
        .collect())
}

/// `dim C_s(v)` within the degree-1 generators.
pub fn centralizer_eigenspace_dim(alg: &Algebra, v: &PbwPoly, s: i64) -> Result<usize> {
    Ok(centralizer_eigenspace(alg, v, s, None)?.len())
}

/// Outcome of a randomized search for non-trivial unipotent automorphisms.
#[derive(Debug, Clone)]
pub struct UnipotentSearch {
    pub seed: u64,
    pub tried: usize,
    pub rejected_relations: usize,
    pub rejected_unipotence: usize,
    /// Candidates that passed both gates.
    pub survivors: Vec<EndomorphismSpec>,
}

/// Samples perturbations `x_i -> x_i + Σ c m` with monomials `m` of degree
/// `deg x_i + 1 ..= max_degree` and `c ∈ {1, q, q^-1}` and keeps those passing
/// both the relation and unipotence gates.
pub fn random_unipotent_search(alg: &Algebra, seed: u64, samples: usize, max_degree: i64) -> Result<UnipotentSearch> {
    let n = alg.n();
    let m = alg.m();
    let all: Vec<usize> = (0..n).collect();
    let mut coeffs = vec![Scalar::one(m)];
    if m > 0 {
        coeffs.push(Scalar::param(0, m));
        coeffs.push(Scalar::param(0, m).inv()?);
    }
    let mut pools: Vec<Vec<Monomial>> = Vec::with_capacity(n);
    for i in 0..n {
        let d = generator_degree(alg, i)?;
        let mut pool = Vec::new();
        for e in d + 1..=max_degree {
            pool.extend(alg.monomials_of_degree(e, &all)?);
        }
        pools.push(pool);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = UnipotentSearch { seed, tried: 0, rejected_relations: 0, rejected_unipotence: 0, survivors: Vec::new() };
    let movable: Vec<usize> = (0..n).filter(|&i| !pools[i].is_empty()).collect();
    if movable.is_empty() {
        return Ok(out);
    }
    while out.tried < samples {
        let mut images: Vec<PbwPoly> = (0..n).map(|i| alg.gen(i)).collect();
        let nmoved = rng.gen_range(1..=movable.len().min(2));
        for &i in movable.choose_multiple(&mut rng, nmoved) {
            for _ in 0..rng.gen_range(1..=2) {
                let mono = pools[i].choose(&mut rng).expect("non-empty pool").clone();
                let c = coeffs.choose(&mut rng).expect("non-empty").clone();
                images[i].add_term(mono, c);
            }
        }
        let e = EndomorphismSpec::new(images);
        if e.is_identity(alg) {
            continue;
        }
        out.tried += 1;
        if !verify_endomorphism(alg, &e)?.passed() {
            out.rejected_relations += 1;
        } else if !is_unipotent(alg, &e)? {
            out.rejected_unipotence += 1;
        } else {
            out.survivors.push(e);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::compute_y_elements;
    use crate::presets::{oq_matrices, quantum_affine};
    use crate::scalar::SignedMonomial;
    use crate::structure::core_decomposition;

    fn affine(n: usize) -> Algebra {
        Algebra::new(quantum_affine(n, &SignedMonomial::param_pow(0, 1, 1)).unwrap())
    }

    fn remark_map(alg: &Algebra) -> EndomorphismSpec {
        EndomorphismSpec::parse(alg, &["x1", "x2 + 3*x1*x3", "x3"]).unwrap()
    }

    #[test]
    fn remark_map_is_a_unipotent_automorphism() {
        let alg = affine(3);
        let psi = remark_map(&alg);
        assert!(verify_endomorphism(&alg, &psi).unwrap().passed());
        assert!(is_unipotent(&alg, &psi).unwrap());
        let t = compute_y_elements(&alg).unwrap();
        let d = core_decomposition(&alg, &t).unwrap();
        let rep = check_unipotent_structure(&alg, &t, &d, &psi).unwrap();
        assert!(rep.passed(), "{}", rep.render());
        let split = degree_zero_component(&alg, &psi).unwrap();
        assert!(split.psi0.is_identity(&alg));
        assert_eq!(split.unipotent, psi);
        assert!(audit_endomorphism(&alg, &psi).unwrap().passed());
    }

    #[test]
    fn bad_maps() {
        let k2 = affine(2);
        let e = EndomorphismSpec::parse(&k2, &["x1", "x2 + x1"]).unwrap();
        assert!(!verify_endomorphism(&k2, &e).unwrap().passed());
        let e = EndomorphismSpec::parse(&k2, &["2*x1", "x2"]).unwrap();
        assert!(verify_endomorphism(&k2, &e).unwrap().passed());
        assert!(!is_unipotent(&k2, &e).unwrap());

        let swap = EndomorphismSpec::parse(&k2, &["x2", "x1"]).unwrap();
        let split = degree_zero_component(&k2, &swap).unwrap();
        assert!(!split.report.passed());

        let k3 = affine(3);
        let e = EndomorphismSpec::parse(&k3, &["x1 + x2*x3", "x2", "x3"]).unwrap();
        let t = compute_y_elements(&k3).unwrap();
        let d = core_decomposition(&k3, &t).unwrap();
        let rep = check_unipotent_structure(&k3, &t, &d, &e).unwrap();
        assert!(rep.failures().any(|c| c.name.starts_with("a_1 x_j")));

        let e = EndomorphismSpec::parse(&k3, &["x1 + 1", "x2", "x3"]).unwrap();
        assert!(matches!(degree_zero_component(&k3, &e), Err(Error::NotFiltered(_))));
        let e = EndomorphismSpec::parse(&k3, &["x1", "0", "x3"]).unwrap();
        assert!(matches!(degree_zero_component(&k3, &e), Err(Error::SingularDegreeZeroPart(1))));
    }

    #[test]
    fn diagonal_times_unipotent_splits() {
        let alg = affine(3);
        let dmap = EndomorphismSpec::parse(&alg, &["2*x1", "3*x2", "5*x3"]).unwrap();
        let psi = dmap.compose(&alg, &remark_map(&alg)).unwrap();
        let split = degree_zero_component(&alg, &psi).unwrap();
        assert!(split.report.passed(), "{}", split.report.render());
        assert_eq!(split.psi0, dmap);
        assert_eq!(split.unipotent, remark_map(&alg));
    }

    #[test]
    fn centralizers() {
        let m22 = Algebra::new(oq_matrices(2, 2).unwrap());
        assert_eq!(centralizer_eigenspace_dim(&m22, &m22.gen(1), 1).unwrap(), 1);
        assert_eq!(centralizer_eigenspace_dim(&m22, &m22.gen(2), 1).unwrap(), 1);
        let k2 = affine(2);
        assert_eq!(centralizer_eigenspace_dim(&k2, &k2.gen(0), 0).unwrap(), 1);
        let mp = Algebra::new(crate::presets::multiparam_matrices(2).unwrap());
        assert!(matches!(centralizer_eigenspace_dim(&mp, &mp.gen(0), 0), Err(Error::MultiParameterUnsupported)));
    }

    #[test]
    fn search_is_reproducible() {
        let m22 = Algebra::new(oq_matrices(2, 2).unwrap());
        let a = random_unipotent_search(&m22, 7, 40, 3).unwrap();
        let b = random_unipotent_search(&m22, 7, 40, 3).unwrap();
        assert_eq!(a.tried, 40);
        assert_eq!((a.rejected_relations, a.rejected_unipotence), (b.rejected_relations, b.rejected_unipotence));
        assert!(a.survivors.is_empty());
    }
}

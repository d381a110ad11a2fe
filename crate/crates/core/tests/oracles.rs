//! Cross-checks against computations that do not go through the PBW engine's
//! own relation data.

use std::collections::BTreeMap;

use cgl_core::lattice;
use cgl_core::linalg;
use cgl_core::presets::{oq_matrices, quantum_affine, quantum_plane_minus_one, uq_plus_sl3, PresetCatalog};
use cgl_core::primes::{bicharacter_radical, compute_y_elements};
use cgl_core::structure::{nakayama_automorphism, normal_element};
use cgl_core::{Algebra, PbwPoly, Scalar, SignedMonomial};

// -- free algebra on E1, E2 modulo the Serre relations -----------------------

type Free = BTreeMap<Vec<u8>, Scalar>;

fn q() -> Scalar {
    Scalar::param(0, 1)
}

fn qinv() -> Scalar {
    q().inv().unwrap()
}

fn letter(a: u8) -> Free {
    BTreeMap::from([(vec![a], Scalar::one(1))])
}

fn fadd(a: &Free, b: &Free, c: &Scalar) -> Free {
    let mut out = a.clone();
    for (w, x) in b {
        let e = out.entry(w.clone()).or_insert_with(|| Scalar::zero(1));
        *e = e.add(&x.mul(c));
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn fmul(a: &Free, b: &Free) -> Free {
    let mut out = Free::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend(wb);
            out = fadd(&out, &BTreeMap::from([(w, ca.mul(cb))]), &Scalar::one(1));
        }
    }
    out
}

/// `a a b - (q + q^-1) a b a + b a a`.
fn serre(a: u8, b: u8) -> Free {
    let (x, y) = (letter(a), letter(b));
    let aab = fmul(&fmul(&x, &x), &y);
    let aba = fmul(&fmul(&x, &y), &x);
    let baa = fmul(&fmul(&y, &x), &x);
    let s = fadd(&aab, &aba, &q().add(&qinv()).neg());
    fadd(&s, &baa, &Scalar::one(1))
}

/// Solves `target = Σ c_i spanning_i` over Q(q).
fn express(target: &Free, spanning: &[Free]) -> Option<Vec<Scalar>> {
    let words: Vec<&Vec<u8>> = {
        let mut w: Vec<&Vec<u8>> = spanning.iter().flat_map(|f| f.keys()).chain(target.keys()).collect();
        w.sort();
        w.dedup();
        w
    };
    let zero = Scalar::zero(1);
    let rows: Vec<Vec<Scalar>> =
        words.iter().map(|w| spanning.iter().map(|f| f.get(*w).cloned().unwrap_or(zero.clone())).collect()).collect();
    let b: Vec<Scalar> = words.iter().map(|w| target.get(*w).cloned().unwrap_or(zero.clone())).collect();
    linalg::solve(&rows, &b, spanning.len(), 1).map(|(x, _)| x)
}

#[test]
fn sl3_presentation_follows_from_serre_relations() {
    let (e1, e2) = (letter(0), letter(1));
    let e12 = fadd(&fmul(&e1, &e2), &fmul(&e2, &e1), &qinv().neg());
    let s = [serre(0, 1), serre(1, 0)];
    let p = uq_plus_sl3();

    // x2 x1 = c x1 x2 modulo Serre: solve for c together with the Serre coefficients.
    for (hi, lo, k, j) in [(&e12, &e1, 1, 0), (&e2, &e12, 2, 1)] {
        let target = fmul(hi, lo);
        let spanning = [fmul(lo, hi), s[0].clone(), s[1].clone()];
        let c = express(&target, &spanning).expect("relation holds modulo Serre");
        assert_eq!(c[0], p.lambda(k, j).to_scalar(), "lambda({},{})", k + 1, j + 1);
        assert!(p.q(k, j).is_none());
    }
    // x3 x1 in the span of x1 x3 and x2.
    let c = express(&fmul(&e2, &e1), &[fmul(&e1, &e2), e12.clone()]).unwrap();
    assert_eq!(c[0], p.lambda(2, 0).to_scalar());
    let q31 = p.q(2, 0).unwrap();
    assert_eq!(*q31, PbwPoly::gen(1, 3, 1).scale(&c[1]));
    // the Serre relations themselves are not consequences of lower-degree data
    assert!(express(&s[0], &[fmul(&fmul(&e1, &e1), &e2)]).is_none());
}

#[test]
fn sl3_serre_relations_hold_in_the_engine() {
    let alg = Algebra::new(uq_plus_sl3());
    for (a, b) in [(0, 2), (2, 0)] {
        let aab = alg.word(&[a, a, b]).unwrap();
        let aba = alg.word(&[a, b, a]).unwrap();
        let baa = alg.word(&[b, a, a]).unwrap();
        let mut s = aab.clone();
        s.add_scaled(&aba, &q().add(&qinv()).neg());
        s.add_scaled(&baa, &Scalar::one(1));
        assert!(s.is_zero(), "Serre relation fails for ({a},{b}): {}", alg.format(&s));
    }
}

// -- quantum determinant of 3 x 3 matrices ----------------------------------

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    permutations(k - 1)
        .into_iter()
        .flat_map(|p| {
            (0..=p.len()).map(move |pos| {
                let mut v = p.clone();
                v.insert(pos, k - 1);
                v
            })
        })
        .collect()
}

#[test]
fn three_by_three_determinant_is_the_last_y_element_and_central() {
    let alg = Algebra::new(oq_matrices(3, 3).unwrap());
    let mut det = alg.zero();
    for sigma in permutations(3) {
        let inv = (0..3).flat_map(|a| (a + 1..3).map(move |b| (a, b))).filter(|&(a, b)| sigma[a] > sigma[b]).count();
        let word: Vec<usize> = (0..3).map(|i| i * 3 + sigma[i]).collect();
        det.add_scaled(&alg.word(&word).unwrap(), &q().neg().pow(inv as i64).unwrap());
    }
    let t = compute_y_elements(&alg).unwrap();
    assert_eq!(t.y[8], det);
    for k in 0..9 {
        let x = alg.gen(k);
        assert_eq!(alg.mul(&x, &det).unwrap(), alg.mul(&det, &x).unwrap());
    }
    // column expansion agrees with row expansion
    let mut col = alg.zero();
    for sigma in permutations(3) {
        let inv = (0..3).flat_map(|a| (a + 1..3).map(move |b| (a, b))).filter(|&(a, b)| sigma[a] > sigma[b]).count();
        let word: Vec<usize> = (0..3).map(|j| sigma[j] * 3 + j).collect();
        col.add_scaled(&alg.word(&word).unwrap(), &q().neg().pow(inv as i64).unwrap());
    }
    assert_eq!(col, det);
}

// -- radicals by brute force --------------------------------------------------

fn in_lattice(basis: &[Vec<i64>], v: &[i64]) -> bool {
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    lattice::row_basis(&ext) == lattice::row_basis(basis)
}

fn box_vectors(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-r..=r).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn radicals_match_brute_force() {
    let presets = [
        quantum_plane_minus_one(),
        oq_matrices(2, 2).unwrap(),
        uq_plus_sl3(),
        quantum_affine(3, &SignedMonomial::param_pow(0, 1, 1)).unwrap(),
    ];
    for p in presets {
        let lam = p.lambda_matrix();
        let n = lam.len();
        let basis = bicharacter_radical(&lam).unwrap();
        for f in box_vectors(n, 2) {
            let trivial = (0..n).all(|j| {
                (0..n).fold(SignedMonomial::one(p.params().len()), |acc, i| acc.mul(&lam[i][j].pow(f[i]))).is_one()
            });
            assert_eq!(trivial, in_lattice(&basis, &f), "{:?}: {f:?}", p.name());
        }
    }
}

#[test]
fn m22_radical() {
    let p = oq_matrices(2, 2).unwrap();
    assert_eq!(bicharacter_radical(&p.lambda_matrix()).unwrap(), vec![vec![1, 0, 0, 1], vec![0, 1, -1, 0]]);
}

// -- normal elements by hand ------------------------------------------------

#[test]
fn normal_element_examples() {
    let alg = Algebra::new(oq_matrices(2, 2).unwrap());
    let t = compute_y_elements(&alg).unwrap();
    let u = normal_element(&alg, &t).unwrap();
    let expected = alg.product([&t.y[1], &t.y[2], &t.y[3]]).unwrap();
    assert_eq!(u, expected);
    let x1 = alg.gen(0);
    let q2 = q().pow(2).unwrap();
    assert_eq!(alg.mul(&x1, &u).unwrap(), alg.mul(&u, &x1).unwrap().scale(&q2));

    let k2 = Algebra::new(quantum_affine(2, &SignedMonomial::param_pow(0, 1, 1)).unwrap());
    let t = compute_y_elements(&k2).unwrap();
    let u = normal_element(&k2, &t).unwrap();
    assert_eq!(u, k2.parse("x1*x2").unwrap());
    let x1 = k2.gen(0);
    assert_eq!(k2.mul(&x1, &u).unwrap(), k2.mul(&u, &x1).unwrap().scale(&q()));
    assert_eq!(nakayama_automorphism(&k2).unwrap().eigenvalues[0], SignedMonomial::param_pow(0, 1, 1));

    let comm = Algebra::new(quantum_affine(3, &SignedMonomial::one(1)).unwrap());
    assert!(nakayama_automorphism(&comm).unwrap().is_identity());
}

#[test]
fn every_preset_parses_from_the_catalogue() {
    for (syntax, _) in PresetCatalog::list() {
        let concrete = syntax.replace("N:s", "3:q").replace("t,n", "2,3").replace(":n", ":2");
        assert!(PresetCatalog::get(&concrete).is_ok(), "{concrete}");
    }
    assert!(PresetCatalog::get("no-such-thing").is_err());
}

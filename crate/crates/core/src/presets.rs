//! Built-in presentations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::parse::parse_scalar;
use crate::pbw::{Character, Monomial, PbwPoly};
use crate::presentation::{skew_complete, CglPresentation, TorusData};
use crate::scalar::{ParameterSpace, Scalar, SignedMonomial};

/// Named constructors, addressable from the command line as `name:args`.
pub struct PresetCatalog;

impl PresetCatalog {
    /// `(syntax, description)` for every preset family.
    pub fn list() -> Vec<(&'static str, &'static str)> {
        vec![
            ("quantum-affine:N:s", "quantum affine space, x_i x_j = s x_j x_i for i < j"),
            ("oq-matrices:t,n", "quantized coordinate ring of t x n matrices"),
            ("multiparam-matrices:n", "multiparameter quantum n x n matrices (parameters lam, p_ab)"),
            ("uq-plus-sl3", "positive part of U_q(sl_3) on E1, E1E2 - q^-1 E2E1, E2"),
            ("quantum-plane-minus-one", "quantum plane x2 x1 = -x1 x2 over Q"),
        ]
    }

    /// Parses `name` or `name:args`.
    pub fn get(spec: &str) -> Result<CglPresentation> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let unknown = || Error::UnknownPreset(spec.to_string());
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| unknown());
        match name {
            "quantum-affine" => {
                let (n, s) = args.split_once(':').unwrap_or((args, "q"));
                let n = num(n)?;
                let params = ParameterSpace::single("q");
                let s = parse_scalar(s, &params)?
                    .as_signed_monomial()
                    .ok_or_else(|| Error::NotAMonomial(s.to_string()))?;
                quantum_affine(n, &s)
            }
            "oq-matrices" => {
                let (t, n) = args.split_once(',').ok_or_else(unknown)?;
                oq_matrices(num(t)?, num(n)?)
            }
            "multiparam-matrices" => multiparam_matrices(num(args)?),
            "uq-plus-sl3" if args.is_empty() => Ok(uq_plus_sl3()),
            "quantum-plane-minus-one" if args.is_empty() => Ok(quantum_plane_minus_one()),
            _ => Err(unknown()),
        }
    }

    /// Small instances of every family, used for catalogue-wide checks.
    pub fn samples() -> Vec<CglPresentation> {
        vec![
            quantum_affine(3, &q_pow(1)).expect("valid"),
            oq_matrices(2, 2).expect("valid"),
            oq_matrices(2, 3).expect("valid"),
            multiparam_matrices(2).expect("valid"),
            uq_plus_sl3(),
            quantum_plane_minus_one(),
        ]
    }
}

fn q_pow(e: i32) -> SignedMonomial {
    SignedMonomial::param_pow(0, e, 1)
}

fn unit_char(i: usize, r: usize) -> Character {
    let mut c = vec![0; r];
    c[i] = 1;
    Character(c)
}

/// Quantum affine space with `x_i x_j = s x_j x_i` for `i < j`, i.e.
/// `λ_{kj} = s^{-1}` for `k > j`. With `s = 1` this is the polynomial ring.
pub fn quantum_affine(n: usize, s: &SignedMonomial) -> Result<CglPresentation> {
    let lower = s.inv();
    quantum_affine_with(ParameterSpace::single("q"), skew_complete(n, 1, |_, _| lower.clone()))
        .map(|p| p.with_name(Some(format!("quantum-affine:{n}:{}", s.to_string_with(&ParameterSpace::single("q"))))))
}

/// Quantum affine space for an arbitrary λ matrix, with torus `(K^×)^N`.
pub fn quantum_affine_with(params: ParameterSpace, lambda: Vec<Vec<SignedMonomial>>) -> Result<CglPresentation> {
    let n = lambda.len();
    let m = params.len();
    let generic = if m > 0 {
        SignedMonomial::param_pow(0, 1, m)
    } else {
        SignedMonomial::from_int(2, 0).expect("nonzero")
    };
    let h = (0..n)
        .map(|k| {
            (0..n)
                .map(|a| match a.cmp(&k) {
                    std::cmp::Ordering::Less => lambda[k][a].clone(),
                    std::cmp::Ordering::Equal => generic.clone(),
                    std::cmp::Ordering::Greater => SignedMonomial::one(m),
                })
                .collect()
        })
        .collect();
    let h_star = (0..n)
        .map(|j| {
            (0..n)
                .map(|a| match a.cmp(&j) {
                    std::cmp::Ordering::Greater => lambda[j][a].clone(),
                    std::cmp::Ordering::Equal => generic.clone(),
                    std::cmp::Ordering::Less => SignedMonomial::one(m),
                })
                .collect()
        })
        .collect();
    let torus = TorusData {
        rank: n,
        chi: (0..n).map(|i| unit_char(i, n)).collect(),
        h,
        h_star: Some(h_star),
        pi: Some(vec![1; n]),
    };
    CglPresentation::new(Some(format!("quantum-affine:{n}")), params, lambda, BTreeMap::new(), torus)
}

fn matrix_aliases(t: usize, n: usize) -> Vec<String> {
    if t < 10 && n < 10 {
        (1..=t).flat_map(|i| (1..=n).map(move |j| format!("X{i}{j}"))).collect()
    } else {
        Vec::new()
    }
}

fn quadratic(c: Scalar, a: usize, b: usize, n: usize, m: usize) -> PbwPoly {
    let mut e = vec![0u32; n];
    e[a] += 1;
    e[b] += 1;
    PbwPoly::term(c, Monomial(e), m)
}

/// `O_q(M_{t,n})` with `x_{(i-1)n+j} = X_{ij}` in lexicographic order.
pub fn oq_matrices(t: usize, n: usize) -> Result<CglPresentation> {
    if t == 0 || n == 0 {
        return Err(Error::InvalidArgument("matrix sizes must be positive".into()));
    }
    let big_n = t * n;
    let idx = |i: usize, j: usize| i * n + j;
    let lambda = skew_complete(big_n, 1, |k, o| {
        let (l, m) = (k / n, k % n);
        let (i, j) = (o / n, o % n);
        if l == i || m == j {
            q_pow(-1)
        } else {
            SignedMonomial::one(1)
        }
    });
    let q = Scalar::param(0, 1);
    let coeff = q.sub(&q.inv().expect("unit")).neg();
    let mut rel = BTreeMap::new();
    for i in 0..t {
        for l in i + 1..t {
            for j in 0..n {
                for m in j + 1..n {
                    rel.insert((idx(l, m), idx(i, j)), quadratic(coeff.clone(), idx(i, m), idx(l, j), big_n, 1));
                }
            }
        }
    }
    let r = t + n;
    let chi = (0..big_n).map(|k| unit_char(k / n, r).add(&unit_char(t + k % n, r))).collect();
    let scaled = |k: usize, e: i32| {
        let mut h = vec![SignedMonomial::one(1); r];
        h[k / n] = q_pow(e);
        h[t + k % n] = q_pow(e);
        h
    };
    let torus = TorusData {
        rank: r,
        chi,
        h: (0..big_n).map(|k| scaled(k, -1)).collect(),
        h_star: Some((0..big_n).map(|k| scaled(k, 1)).collect()),
        pi: Some((0..r).map(|a| i64::from(a < t)).collect()),
    };
    Ok(CglPresentation::new(Some(format!("oq-matrices:{t},{n}")), ParameterSpace::single("q"), lambda, rel, torus)?
        .with_aliases(matrix_aliases(t, n)))
}

/// Parameter names of the multiparameter family: `lam`, then `p_ab` for `a < b`.
pub fn multiparam_names(n: usize) -> Vec<String> {
    let mut names = vec!["lam".to_string()];
    for a in 1..=n {
        for b in a + 1..=n {
            names.push(if n < 10 { format!("p{a}{b}") } else { format!("p{a}_{b}") });
        }
    }
    names
}

/// `O_{λ,p}(M_n)` with generic parameters.
pub fn multiparam_matrices(n: usize) -> Result<CglPresentation> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix size must be positive".into()));
    }
    let names = multiparam_names(n);
    let m = names.len();
    let params = ParameterSpace::new(names)?;
    let lam = SignedMonomial::param_pow(0, 1, m);
    let mut slot = BTreeMap::new();
    let mut next = 1;
    for a in 0..n {
        for b in a + 1..n {
            slot.insert((a, b), next);
            next += 1;
        }
    }
    let p = |a: usize, b: usize| -> SignedMonomial {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => SignedMonomial::one(m),
            Less => SignedMonomial::param_pow(slot[&(a, b)], 1, m),
            Greater => SignedMonomial::param_pow(slot[&(b, a)], -1, m),
        }
    };
    let big_n = n * n;
    let lambda = skew_complete(big_n, m, |k, o| {
        let (l, mm) = (k / n, k % n);
        let (i, j) = (o / n, o % n);
        if l == i {
            p(j, mm)
        } else if mm > j {
            p(l, i).mul(&p(j, mm))
        } else {
            lam.mul(&p(l, i)).mul(&p(j, mm))
        }
    });
    let mut rel = BTreeMap::new();
    let lam_minus_one = lam.to_scalar().sub(&Scalar::one(m));
    for i in 0..n {
        for l in i + 1..n {
            for j in 0..n {
                for mm in j + 1..n {
                    let c = lam_minus_one.mul(&p(l, i).to_scalar());
                    rel.insert((l * n + mm, i * n + j), quadratic(c, i * n + mm, l * n + j, big_n, m));
                }
            }
        }
    }
    let r = 2 * n;
    let chi = (0..big_n).map(|k| unit_char(k / n, r).add(&unit_char(n + k % n, r))).collect();
    let h = (0..big_n)
        .map(|k| {
            let (l, mm) = (k / n, k % n);
            let mut v = vec![SignedMonomial::one(m); r];
            for (a, slot) in v.iter_mut().enumerate().take(l) {
                *slot = p(l, a);
            }
            for b in 0..n {
                v[n + b] = if b < mm { p(b, mm) } else { lam.mul(&p(b, mm)) };
            }
            v
        })
        .collect();
    let h_star = (0..big_n)
        .map(|k| {
            let (i, c) = (k / n, k % n);
            let mut v = vec![SignedMonomial::one(m); r];
            for (a, slot) in v.iter_mut().enumerate().take(n).skip(i + 1) {
                *slot = p(i, a);
            }
            for mm in 0..n {
                v[n + mm] = if mm > c { p(mm, c) } else { lam.inv().mul(&p(mm, c)) };
            }
            v
        })
        .collect();
    let torus = TorusData { rank: r, chi, h, h_star: Some(h_star), pi: Some((0..r).map(|a| i64::from(a < n)).collect()) };
    Ok(CglPresentation::new(Some(format!("multiparam-matrices:{n}")), params, lambda, rel, torus)?
        .with_aliases(matrix_aliases(n, n)))
}

/// `U_q^+(sl_3)` on `x1 = E1`, `x2 = E1 E2 - q^-1 E2 E1`, `x3 = E2`.
pub fn uq_plus_sl3() -> CglPresentation {
    let lambda = skew_complete(3, 1, |k, j| match (k, j) {
        (1, 0) => q_pow(-1),
        (2, 0) => q_pow(1),
        _ => q_pow(-1),
    });
    let mut rel = BTreeMap::new();
    rel.insert((2, 0), PbwPoly::term(Scalar::param(0, 1).neg(), Monomial::gen(1, 3), 1));
    let pair = |a: i32, b: i32| vec![q_pow(a), q_pow(b)];
    let torus = TorusData {
        rank: 2,
        chi: vec![Character(vec![1, 0]), Character(vec![1, 1]), Character(vec![0, 1])],
        h: vec![pair(-2, 1), pair(-1, -1), pair(1, -2)],
        h_star: Some(vec![pair(2, -1), pair(1, 1), pair(-1, 2)]),
        pi: Some(vec![1, 1]),
    };
    CglPresentation::new(Some("uq-plus-sl3".into()), ParameterSpace::single("q"), lambda, rel, torus)
        .expect("valid preset")
        .with_aliases(vec!["E1".into(), "E12".into(), "E2".into()])
}

/// `x2 x1 = -x1 x2` over Q; not torsionfree and not saturated.
pub fn quantum_plane_minus_one() -> CglPresentation {
    let int = |c: i64| SignedMonomial::new(BigRational::from_integer(BigInt::from(c)), vec![]).expect("nonzero");
    let lambda = skew_complete(2, 0, |_, _| int(-1));
    let torus = TorusData {
        rank: 2,
        chi: vec![unit_char(0, 2), unit_char(1, 2)],
        h: vec![vec![int(2), int(1)], vec![int(-1), int(2)]],
        h_star: Some(vec![vec![int(2), int(-1)], vec![int(1), int(2)]]),
        pi: Some(vec![1, 1]),
    };
    CglPresentation::new(Some("quantum-plane-minus-one".into()), ParameterSpace::empty(), lambda, BTreeMap::new(), torus)
        .expect("valid preset")
}

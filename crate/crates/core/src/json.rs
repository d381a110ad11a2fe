//! JSON file formats for presentations and endomorphisms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::parse::parse_scalar;
use crate::pbw::{Character, PbwPoly};
use crate::presentation::{CglPresentation, TorusData};
use crate::scalar::{ParameterSpace, SignedMonomial};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    params: Vec<String>,
    #[serde(rename = "N")]
    n: usize,
    lambda: Vec<Vec<String>>,
    #[serde(rename = "Q", default)]
    q: BTreeMap<String, String>,
    torus: TorusFile,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    aliases: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusFile {
    rank: usize,
    chi: Vec<Vec<i64>>,
    h: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h_star: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pi: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EndoFile {
    images: Vec<String>,
}

fn monomial(src: &str, params: &ParameterSpace, what: &str) -> Result<SignedMonomial> {
    let s = parse_scalar(src, params).map_err(|e| Error::InvalidPresentation(format!("{what}: {e}")))?;
    s.as_signed_monomial().ok_or_else(|| Error::NotAMonomial(format!("{what} = {src}")))
}

fn monomial_rows(rows: &[Vec<String>], params: &ParameterSpace, what: &str) -> Result<Vec<Vec<SignedMonomial>>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(a, s)| monomial(s, params, &format!("{what}[{}][{}]", i + 1, a + 1)))
                .collect()
        })
        .collect()
}

fn parse_key(key: &str, n: usize) -> Result<(usize, usize)> {
    let bad = || Error::InvalidPresentation(format!("Q key `{key}` must be \"k,j\" with 1 <= j < k <= {n}"));
    let (k, j) = key.split_once(',').ok_or_else(bad)?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if j == 0 || j >= k || k > n {
        return Err(bad());
    }
    Ok((k - 1, j - 1))
}

/// Reads a presentation. Only the strict lower triangle of `lambda` drives
/// the relations; diagonal and upper entries, when supplied, are retained for
/// validation.
pub fn presentation_from_json(src: &str) -> Result<CglPresentation> {
    let f: PresentationFile =
        serde_json::from_str(src).map_err(|e| Error::InvalidPresentation(format!("JSON: {e}")))?;
    let params = ParameterSpace::new(f.params.iter().cloned())?;
    let n = f.n;
    let m = params.len();
    if f.lambda.len() != n {
        return Err(Error::InvalidPresentation(format!("lambda must have {n} rows")));
    }
    let mut lambda = vec![vec![SignedMonomial::one(m); n]; n];
    for (k, row) in f.lambda.iter().enumerate() {
        if row.len() < k || row.len() > n {
            return Err(Error::InvalidPresentation(format!("lambda row {} has {} entries", k + 1, row.len())));
        }
        for (j, s) in row.iter().enumerate() {
            lambda[k][j] = monomial(s, &params, &format!("lambda[{}][{}]", k + 1, j + 1))?;
        }
    }
    for k in 0..n {
        for j in k + 1..n {
            if f.lambda[k].len() <= j {
                lambda[k][j] = lambda[j][k].inv();
            }
        }
    }
    let torus = TorusData {
        rank: f.torus.rank,
        chi: f.torus.chi.iter().map(|c| Character(c.clone())).collect(),
        h: monomial_rows(&f.torus.h, &params, "h")?,
        h_star: f.torus.h_star.as_ref().map(|r| monomial_rows(r, &params, "h_star")).transpose()?,
        pi: f.torus.pi.clone(),
    };

    let mut raw: BTreeMap<(usize, usize), &str> = BTreeMap::new();
    for (key, v) in &f.q {
        raw.insert(parse_key(key, n)?, v);
    }
    let mut q: BTreeMap<(usize, usize), PbwPoly> = BTreeMap::new();
    let mut k_done = 0;
    let mut alg: Option<Algebra> = None;
    for (&(k, j), src) in &raw {
        if alg.is_none() || k != k_done {
            let partial = CglPresentation::new(None, params.clone(), lambda.clone(), q.clone(), torus.clone())?
                .with_aliases(f.aliases.clone());
            alg = Some(Algebra::new(partial));
            k_done = k;
        }
        let a = alg.as_ref().expect("built above");
        let poly = a
            .parse(src)
            .map_err(|e| Error::InvalidPresentation(format!("Q[\"{},{}\"]: {e}", k + 1, j + 1)))?;
        q.insert((k, j), poly);
    }
    Ok(CglPresentation::new(f.name, params, lambda, q, torus)?.with_aliases(f.aliases))
}

/// Canonical pretty-printed JSON (full λ matrix, Q keys 1-based).
pub fn presentation_to_json(p: &CglPresentation) -> String {
    let params = p.params();
    let weights = p.torus().degrees().unwrap_or_else(|| vec![1; p.n()]);
    let mono = |x: &SignedMonomial| x.to_string_with(params);
    let rows = |r: &[Vec<SignedMonomial>]| r.iter().map(|v| v.iter().map(mono).collect()).collect();
    let t = p.torus();
    let f = PresentationFile {
        name: p.name().map(str::to_string),
        params: params.names().to_vec(),
        n: p.n(),
        lambda: rows(&p.lambda_matrix()),
        q: p
            .q_entries()
            .map(|(&(k, j), poly)| (format!("{},{}", k + 1, j + 1), poly.to_string_with(params, &weights)))
            .collect(),
        torus: TorusFile {
            rank: t.rank,
            chi: t.chi.iter().map(|c| c.0.clone()).collect(),
            h: rows(&t.h),
            h_star: t.h_star.as_ref().map(|r| rows(r)),
            pi: t.pi.clone(),
        },
        aliases: p.aliases().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&f).expect("serialisable");
    s.push('\n');
    s
}

/// Reads `{ "images": [poly, ...] }`.
pub fn endomorphism_from_json(alg: &Algebra, src: &str) -> Result<Vec<PbwPoly>> {
    let f: EndoFile = serde_json::from_str(src).map_err(|e| Error::InvalidArgument(format!("JSON: {e}")))?;
    if f.images.len() != alg.n() {
        return Err(Error::InvalidArgument(format!("expected {} images, got {}", alg.n(), f.images.len())));
    }
    f.images
        .iter()
        .enumerate()
        .map(|(i, s)| alg.parse(s).map_err(|e| Error::InvalidArgument(format!("image of x{}: {e}", i + 1))))
        .collect()
}

pub fn endomorphism_to_json(alg: &Algebra, images: &[PbwPoly]) -> String {
    let f = EndoFile { images: images.iter().map(|p| alg.format(p)).collect() };
    let mut s = serde_json::to_string_pretty(&f).expect("serialisable");
    s.push('\n');
    s
}

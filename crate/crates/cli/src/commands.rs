use std::collections::BTreeSet;
use std::fmt::Write as _;

use cgl_core::automorphisms::{
    audit_endomorphism, centralizer_eigenspace_dim, check_unipotent_structure, is_unipotent, random_unipotent_search,
    EndomorphismSpec,
};
use cgl_core::json::{endomorphism_from_json, presentation_from_json, presentation_to_json};
use cgl_core::presentation::{validate_cgl, validate_symmetric};
use cgl_core::primes::{
    bicharacter_radical, compute_y_elements, is_saturated, rank_of, torus_center_basis, verify_prime_commutation,
    verify_quantum_affine, YElementTable,
};
use cgl_core::structure::{core_decomposition, nakayama_automorphism, verify_nakayama_by_normal_element};
use cgl_core::{Algebra, CglPresentation, Error, PresetCatalog, SignedMonomial, ValidationReport};
use serde_json::{json, Value};

use crate::{Cli, Command, Input, PresetAction};

pub struct Output {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotReversible(_)
            | Error::NoPredecessorSolution(_)
            | Error::AmbiguousPredecessor { .. }
            | Error::InternalInconsistency(_)
            | Error::NotFiltered(_)
            | Error::SingularDegreeZeroPart(_)
            | Error::ZeroElement => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

type Res<T> = Result<T, Failure>;

fn load(cli: &Cli, input: &Input) -> Res<Algebra> {
    let p = match (&cli.preset, &input.input) {
        (Some(_), Some(_)) => return Err(usage("give either an input file or --preset, not both")),
        (None, None) => return Err(usage("no presentation given: pass a JSON file or --preset NAME:ARGS")),
        (Some(name), None) => PresetCatalog::get(name)?,
        (None, Some(path)) => {
            let src = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            presentation_from_json(&src).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
    };
    let alg = Algebra::new(p);
    Ok(match cli.fuel {
        Some(f) => alg.with_fuel(f),
        None => alg,
    })
}

fn title(p: &CglPresentation) -> String {
    format!("{} (N = {})", p.name().unwrap_or("presentation"), p.n())
}

fn mono(alg: &Algebra, s: &SignedMonomial) -> String {
    s.to_string_with(alg.presentation().params())
}

fn mono_list(alg: &Algebra, v: &[SignedMonomial]) -> Vec<String> {
    v.iter().map(|s| mono(alg, s)).collect()
}

fn index_set(s: &BTreeSet<usize>) -> String {
    let v: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn one_based(s: &BTreeSet<usize>) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

fn report_json(r: &ValidationReport) -> Value {
    serde_json::to_value(r).expect("serialisable")
}

fn reports_output(head: String, reports: Vec<ValidationReport>, extra: Value) -> Output {
    let ok = reports.iter().all(ValidationReport::passed);
    let mut text = head;
    for r in &reports {
        text.push_str(&r.render());
    }
    let mut json = json!({ "passed": ok, "reports": reports.iter().map(report_json).collect::<Vec<_>>() });
    if let (Value::Object(a), Value::Object(b)) = (&mut json, extra) {
        a.extend(b);
    }
    Output { text, json, ok }
}

pub fn run(cli: &Cli) -> Res<Output> {
    match &cli.command {
        Command::Validate(input) => validate(&load(cli, input)?),
        Command::YElements(input) => y_elements(&load(cli, input)?),
        Command::Nakayama(input) => nakayama(&load(cli, input)?),
        Command::VerifyNakayama(input) => verify_nakayama(&load(cli, input)?),
        Command::Core(input) => core(&load(cli, input)?),
        Command::Saturation(input) => saturation(&load(cli, input)?),
        Command::Center(input) => center(&load(cli, input)?),
        Command::Rank(input) => rank(&load(cli, input)?),
        Command::AuditEndo { endo, input } => audit(&load(cli, input)?, endo),
        Command::Centralizer { element, s, input } => centralizer(&load(cli, input)?, element, *s),
        Command::UnipotentSearch { samples, max_degree, input } => {
            search(&load(cli, input)?, cli.seed, *samples, *max_degree)
        }
        Command::Preset { action } => preset(action),
    }
}

fn validate(alg: &Algebra) -> Res<Output> {
    let p = alg.presentation();
    let mut reports = vec![validate_cgl(alg)?];
    if p.torus().h_star.is_some() && reports[0].passed() {
        reports.push(validate_symmetric(alg)?);
    }
    let symmetric = reports.len() == 2 && reports[1].passed();
    let head = format!("{}\n", title(p));
    Ok(reports_output(head, reports, json!({ "symmetric": symmetric })))
}

fn table(alg: &Algebra) -> Res<YElementTable> {
    Ok(compute_y_elements(alg)?)
}

fn y_elements(alg: &Algebra) -> Res<Output> {
    let p = alg.presentation();
    let t = table(alg)?;
    let n = p.n();
    let mut text = format!("{}\n", title(p));
    let opt = |v: Option<usize>| v.map_or("-".to_string(), |k| (k + 1).to_string());
    let _ = writeln!(text, "{:>3} {:>4} {:>4} {:>4}  y_k", "k", "eta", "p", "s");
    for k in 0..n {
        let _ = writeln!(
            text,
            "{:>3} {:>4} {:>4} {:>4}  {}",
            k + 1,
            t.eta.eta[k] + 1,
            opt(t.eta.pred[k]),
            opt(t.eta.succ[k]),
            alg.format(&t.y[k])
        );
    }
    for (k, c) in &t.c {
        let _ = writeln!(text, "c_{} = {}", k + 1, alg.format(c));
    }
    text.push_str("q matrix (y_k y_j = q_kj y_j y_k):\n");
    for row in &t.qmat {
        let _ = writeln!(text, "  [{}]", mono_list(alg, row).join(", "));
    }
    let reports = vec![verify_quantum_affine(alg, &t)?, verify_prime_commutation(alg, &t)?];
    let extra = json!({
        "y": t.y.iter().map(|y| alg.format(y)).collect::<Vec<_>>(),
        "eta": t.eta.eta.iter().map(|e| e + 1).collect::<Vec<_>>(),
        "pred": t.eta.pred.iter().map(|p| p.map(|k| k + 1)).collect::<Vec<_>>(),
        "succ": t.eta.succ.iter().map(|p| p.map(|k| k + 1)).collect::<Vec<_>>(),
        "c": t.c.iter().map(|(k, c)| ((k + 1).to_string(), Value::String(alg.format(c)))).collect::<serde_json::Map<_, _>>(),
        "alpha": t.alpha.iter().map(|r| mono_list(alg, r)).collect::<Vec<_>>(),
        "q": t.qmat.iter().map(|r| mono_list(alg, r)).collect::<Vec<_>>(),
    });
    Ok(reports_output(text, reports, extra))
}

fn nakayama(alg: &Algebra) -> Res<Output> {
    let nu = nakayama_automorphism(alg)?;
    let eig = mono_list(alg, &nu.eigenvalues);
    let text = format!("{}\nnu eigenvalues: [{}]\n", title(alg.presentation()), eig.join(", "));
    Ok(Output { text, json: json!({ "eigenvalues": eig, "identity": nu.is_identity() }), ok: true })
}

fn verify_nakayama(alg: &Algebra) -> Res<Output> {
    let t = table(alg)?;
    let nu = nakayama_automorphism(alg)?;
    let eig = mono_list(alg, &nu.eigenvalues);
    let rep = verify_nakayama_by_normal_element(alg, &t, &nu)?;
    let head = format!("{}\nnu eigenvalues: [{}]\n", title(alg.presentation()), eig.join(", "));
    Ok(reports_output(head, vec![rep], json!({ "eigenvalues": eig })))
}

fn core(alg: &Algebra) -> Res<Output> {
    let t = table(alg)?;
    let d = core_decomposition(alg, &t)?;
    let p = alg.presentation();
    let mut text = format!("{}\n", title(p));
    let _ = writeln!(text, "P_x = {}", index_set(&d.p_x));
    let _ = writeln!(text, "F_x = {}", index_set(&d.f_x));
    let _ = writeln!(text, "C_x = {}", index_set(&d.c_x));
    if d.core.n() == 0 {
        text.push_str("core = K\n");
    } else {
        let _ = writeln!(text, "core on {} generators", d.core.n());
    }
    let core_json: Value = serde_json::from_str(&presentation_to_json(&d.core)).expect("valid JSON");
    let smash: serde_json::Map<String, Value> = d
        .smash_scalars
        .iter()
        .map(|((i, k), s)| (format!("{},{}", i + 1, k + 1), Value::String(mono(alg, s))))
        .collect();
    let extra = json!({
        "P_x": one_based(&d.p_x),
        "F_x": one_based(&d.f_x),
        "C_x": one_based(&d.c_x),
        "core": core_json,
        "frame_lambda": d.frame_lambda.iter().map(|r| mono_list(alg, r)).collect::<Vec<_>>(),
        "smash_scalars": smash,
    });
    Ok(reports_output(text, vec![d.core_checks], extra))
}

fn saturation(alg: &Algebra) -> Res<Output> {
    let lam = alg.presentation().lambda_matrix();
    let rad = bicharacter_radical(&lam)?;
    let sat = is_saturated(&lam)?;
    let t = table(alg)?;
    let torus_sat = is_saturated(&t.qmat)?;
    let mut text = format!("{}\n", title(alg.presentation()));
    let _ = writeln!(text, "rad basis: {rad:?}");
    let _ = writeln!(text, "saturated: {sat}");
    let mut rep = ValidationReport::new("saturation");
    rep.push("lambda and the y-torus give the same verdict", sat == torus_sat, format!("torus: {torus_sat}"));
    Ok(reports_output(text, vec![rep], json!({ "radical": rad, "saturated": sat, "torus_saturated": torus_sat })))
}

fn center(alg: &Algebra) -> Res<Output> {
    let t = table(alg)?;
    let c = torus_center_basis(&t)?;
    let mut text = format!("{}\ncentre of the y-torus, exponent basis:\n", title(alg.presentation()));
    for (v, nn) in c.basis.iter().zip(&c.nonnegative) {
        let _ = writeln!(text, "  {v:?}{}", if *nn { "  (in the affine algebra)" } else { "" });
    }
    if c.basis.is_empty() {
        text.push_str("  (trivial)\n");
    }
    Ok(Output { text, json: json!({ "basis": c.basis, "nonnegative": c.nonnegative }), ok: true })
}

fn rank(alg: &Algebra) -> Res<Output> {
    let t = table(alg)?;
    let r = rank_of(alg, &t)?;
    let text = format!("{}\nrank = {r}\n", title(alg.presentation()));
    Ok(Output { text, json: json!({ "rank": r }), ok: true })
}

fn audit(alg: &Algebra, path: &std::path::Path) -> Res<Output> {
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let images = endomorphism_from_json(alg, &src).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let e = EndomorphismSpec::new(images);
    let mut reports = vec![audit_endomorphism(alg, &e)?];
    if reports[0].passed() && alg.is_graded() && is_unipotent(alg, &e)? {
        let t = table(alg)?;
        let d = core_decomposition(alg, &t)?;
        reports.push(check_unipotent_structure(alg, &t, &d, &e)?);
    }
    let head = format!("{}\n", title(alg.presentation()));
    Ok(reports_output(head, reports, json!({ "images": e.format(alg) })))
}

fn centralizer(alg: &Algebra, element: &str, s: i64) -> Res<Output> {
    let v = alg.parse(element).map_err(|e| usage(format!("element `{element}`: {e}")))?;
    let d = centralizer_eigenspace_dim(alg, &v, s)?;
    let text = format!("dim C_{s}({}) = {d}\n", alg.format(&v));
    Ok(Output { text, json: json!({ "element": alg.format(&v), "s": s, "dimension": d }), ok: true })
}

fn search(alg: &Algebra, seed: u64, samples: usize, max_degree: i64) -> Res<Output> {
    let s = random_unipotent_search(alg, seed, samples, max_degree)?;
    let mut text = format!(
        "{}\nseed {seed}: {} candidates, {} broke a relation, {} not unipotent, {} survived\n",
        title(alg.presentation()),
        s.tried,
        s.rejected_relations,
        s.rejected_unipotence,
        s.survivors.len()
    );
    for e in s.survivors.iter().take(5) {
        let _ = writeln!(text, "  [{}]", e.format(alg).join(", "));
    }
    let json = json!({
        "seed": seed,
        "tried": s.tried,
        "rejected_relations": s.rejected_relations,
        "rejected_unipotence": s.rejected_unipotence,
        "survivors": s.survivors.iter().map(|e| e.format(alg)).collect::<Vec<_>>(),
    });
    Ok(Output { text, json, ok: true })
}

fn preset(action: &PresetAction) -> Res<Output> {
    match action {
        PresetAction::List => {
            let mut text = String::new();
            for (syntax, desc) in PresetCatalog::list() {
                let _ = writeln!(text, "{syntax:<26} {desc}");
            }
            let json = PresetCatalog::list().into_iter().map(|(s, d)| json!({ "name": s, "description": d })).collect();
            Ok(Output { text, json: Value::Array(json), ok: true })
        }
        PresetAction::Emit { name } => {
            let p = PresetCatalog::get(name)?;
            let text = presentation_to_json(&p);
            let json = serde_json::from_str(&text).expect("valid JSON");
            Ok(Output { text, json, ok: true })
        }
    }
}

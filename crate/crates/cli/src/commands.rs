use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use phl_core::birkhoff::{definability_check, fixed_point_check, ModelUniverse};
use phl_core::freemodel::representing_model;
use phl_core::morphology::{factorize, is_dense, is_surjective};
use phl_core::prover::{check_derivation, parse_derivation, print_derivation, prove, Budget, Certificate, Verdict};
use phl_core::semantics::{check_model, print_hom, print_model, PartialStructure};
use phl_core::syntax::{parse_formula_in_context, parse_sequent, parse_theory, print_theory, Context, Sequent, Theory};
use phl_core::translation::{parse_sketch, print_morphism, print_relative, print_sketch, sketch_to_pht};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report;
use crate::workspace::{leading_keyword, parse_model_file, read, Workspace};

/// How a command's question was answered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Unknown => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Unknown => "unknown",
        }
    }
}

pub struct Report {
    pub status: Status,
    pub json: Value,
    pub text: String,
}

impl Report {
    fn new(status: Status, mut json: Value, text: String) -> Self {
        json["status"] = json!(status.label());
        Report { status, json, text }
    }
}

fn parse_err(origin: &str) -> impl Fn(phl_core::syntax::ParseError) -> CliError + '_ {
    move |e| CliError::Parse(format!("{origin}: {e}"))
}

fn witness_names(m: &PartialStructure, ctx: &Context, tuple: &[usize]) -> Vec<String> {
    let sig = m.signature();
    ctx.vars
        .iter()
        .zip(tuple)
        .map(|((v, s), &e)| {
            let sort = sig.sort_index(s).expect("context sorts are in the signature");
            format!("{v}={}", m.element_name(sort, e))
        })
        .collect()
}

pub fn check(ws: &mut Workspace, theory: &str, file: &Path) -> Result<Report, CliError> {
    let t = ws.theory(theory)?;
    let origin = file.display().to_string();
    let text = read(file)?;
    if leading_keyword(&text) != Some("model") {
        return check_derivation_file(&t, &text, &origin);
    }
    let parsed = parse_model_file(&text, &t, &origin)?;
    let mut text_out = String::new();
    let mut rows = Vec::new();
    let mut all_ok = true;
    for m in &parsed.models {
        let r = check_model(m, &t).map_err(|e| CliError::IllFormed(format!("{origin}: {e}")))?;
        all_ok &= r.is_model();
        if r.is_model() {
            writeln!(text_out, "{}: model of {}", m.name, t.name).unwrap();
        } else {
            writeln!(text_out, "{}: not a model of {}", m.name, t.name).unwrap();
            for v in &r.violations {
                writeln!(text_out, "  axiom {} fails at ({})", v.axiom, v.tuple.join(", ")).unwrap();
            }
        }
        rows.push(json!({ "model": m.name, "is_model": r.is_model(), "violations": r.violations }));
    }
    let status = if all_ok { Status::Holds } else { Status::Fails };
    Ok(Report::new(status, json!({ "command": "check", "theory": t.name, "models": rows }), text_out))
}

fn check_derivation_file(t: &Theory, text: &str, origin: &str) -> Result<Report, CliError> {
    let d = parse_derivation(t, text).map_err(|e| CliError::Parse(format!("{origin}: {e}")))?;
    let r = check_derivation(t, &d);
    let (status, text) = match &r.failure {
        None => (Status::Holds, format!("valid derivation of {}\n", d.conclusion)),
        Some((path, reason)) => (Status::Fails, format!("invalid at node {path:?}: {reason}\n")),
    };
    let failure = r.failure.as_ref().map(|(p, reason)| json!({ "path": p, "reason": reason }));
    Ok(Report::new(
        status,
        json!({
            "command": "check",
            "theory": t.name,
            "conclusion": d.conclusion.to_string(),
            "size": d.size(),
            "failure": failure,
        }),
        text,
    ))
}

pub fn prove_cmd(ws: &mut Workspace, theory: &str, sequent: &str, budget: Budget) -> Result<Report, CliError> {
    let t = ws.theory(theory)?;
    let s = parse_sequent(&t.signature, sequent).map_err(parse_err("sequent"))?;
    let v = prove(&t, &s, budget).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = format!("{}: {}\n", v.label(), s);
    let mut out = json!({
        "command": "prove",
        "theory": t.name,
        "sequent": s.to_string(),
        "verdict": v.label(),
        "budget": { "depth": budget.depth, "model_size": budget.model_size },
    });
    let status = match &v {
        Verdict::Proved(Certificate::Derivation(d)) => {
            text.push_str(&print_derivation(d));
            out["certificate"] = json!({ "kind": "derivation", "text": print_derivation(d) });
            Status::Holds
        }
        Verdict::Proved(Certificate::Saturation { status, generic, elements }) => {
            let generic: Vec<String> = generic.iter().map(ToString::to_string).collect();
            writeln!(text, "term model {status} with {elements} elements; generic tuple ({})", generic.join(", ")).unwrap();
            out["certificate"] = json!({
                "kind": "saturation",
                "saturation": status.to_string(),
                "elements": elements,
                "generic": generic,
            });
            Status::Holds
        }
        Verdict::Refuted { model, witness } => {
            let names = witness_names(model, &s.context, witness);
            writeln!(text, "countermodel, premise holds and conclusion fails at [{}]:", names.join(", ")).unwrap();
            text.push_str(&print_model(model, &t.name));
            out["countermodel"] = report::model(model);
            out["witness"] = json!(names);
            Status::Fails
        }
        Verdict::Unknown { status } => {
            writeln!(text, "no proof or countermodel within the budget; saturation {status}").unwrap();
            out["saturation"] = json!(status.to_string());
            Status::Unknown
        }
    };
    Ok(Report::new(status, out, text))
}

pub fn free(ws: &mut Workspace, theory: &str, formula: &str, depth: usize) -> Result<Report, CliError> {
    let t = ws.theory(theory)?;
    let (ctx, phi) = parse_formula_in_context(&t.signature, formula).map_err(parse_err("formula"))?;
    let p = representing_model(&t, &ctx, &phi, depth).map_err(|e| CliError::IllFormed(e.to_string()))?;
    let m = &p.structure;
    let sig = m.signature();
    let mut text = format!("# saturation: {}\n", p.status);
    let generic = witness_names(m, &ctx, &p.generic);
    writeln!(text, "# generic: {}", generic.join(" ")).unwrap();
    let mut reps = serde_json::Map::new();
    for s in 0..sig.sort_count() {
        let mut rows = serde_json::Map::new();
        for e in 0..m.carrier_size(s) {
            let term = p.representative(s, e).to_string();
            if term != m.element_name(s, e) {
                writeln!(text, "# {} = {}", m.element_name(s, e), term).unwrap();
            }
            rows.insert(m.element_name(s, e).to_owned(), json!(term));
        }
        reps.insert(sig.sort_name(s).to_owned(), Value::Object(rows));
    }
    text.push_str(&print_model(m, &t.name));
    let status = if p.is_saturated() { Status::Holds } else { Status::Unknown };
    Ok(Report::new(
        status,
        json!({
            "command": "free",
            "theory": t.name,
            "formula": format!("{ctx} . {phi}"),
            "saturation": p.status.to_string(),
            "generic": generic,
            "representatives": reps,
            "presentation": report::model(m),
        }),
        text,
    ))
}

pub fn factor(ws: &mut Workspace, theory: &str, file: &Path, hom_name: Option<&str>) -> Result<Report, CliError> {
    let t = ws.theory(theory)?;
    let origin = file.display().to_string();
    let parsed = parse_model_file(&read(file)?, &t, &origin)?;
    let (name, i, j, h) = match hom_name {
        Some(n) => parsed
            .homs
            .iter()
            .find(|(hn, ..)| hn == n)
            .ok_or_else(|| CliError::Usage(format!("{origin} has no hom named `{n}`")))?,
        None => parsed
            .homs
            .first()
            .ok_or_else(|| CliError::Usage(format!("{origin} contains no hom block")))?,
    };
    let (src, tgt) = (&parsed.models[*i], &parsed.models[*j]);
    for m in [src, tgt] {
        let r = check_model(m, &t).map_err(|e| CliError::IllFormed(e.to_string()))?;
        if !r.is_model() {
            return Err(CliError::IllFormed(format!("{} is not a model of {}", m.name, t.name)));
        }
    }
    let mut f = factorize(src, tgt, h).map_err(|e| CliError::IllFormed(e.to_string()))?;
    f.mid.name = format!("{name}_image");
    let surjective = is_surjective(src, tgt, h).map_err(|e| CliError::IllFormed(e.to_string()))?;
    let dense = is_dense(src, tgt, h).map_err(|e| CliError::IllFormed(e.to_string()))?;
    let mut text = print_model(&f.mid, &t.name);
    text.push_str(&print_hom(&format!("{name}_dense"), src, &f.mid, &f.dense));
    text.push_str(&print_hom(&format!("{name}_mono"), &f.mid, tgt, &f.closed_mono));
    writeln!(text, "# {name} is {}dense and {}surjective", if dense { "" } else { "not " }, if surjective { "" } else { "not " }).unwrap();
    Ok(Report::new(
        Status::Holds,
        json!({
            "command": "factor",
            "theory": t.name,
            "hom": name,
            "dense": dense,
            "surjective": surjective,
            "image": report::model(&f.mid),
            "dense_part": report::hom(src, &f.mid, &f.dense),
            "closed_mono_part": report::hom(&f.mid, tgt, &f.closed_mono),
        }),
        text,
    ))
}

pub fn translate(ws: &mut Workspace, morphism: &Path, input: Option<&str>, check: bool, budget: Budget) -> Result<Report, CliError> {
    let rho = ws.morphism(morphism)?;
    let mut text = String::new();
    let mut out = json!({ "command": "translate", "morphism": rho.name, "source": rho.source.name, "target": rho.target.name });
    let mut status = Status::Holds;
    match input {
        Some(arg) if Path::new(arg).is_file() => {
            let origin = arg.to_owned();
            let parsed = parse_model_file(&read(Path::new(arg))?, &rho.target, &origin)?;
            let mut rows = Vec::new();
            for m in &parsed.models {
                let mut r = rho.reduct(m).map_err(|e| CliError::IllFormed(e.to_string()))?;
                r.name = format!("{}_reduct", m.name);
                text.push_str(&print_model(&r, &rho.source.name));
                rows.push(report::model(&r));
            }
            out["reducts"] = json!(rows);
        }
        Some(arg) => {
            let s: Sequent = parse_sequent(&rho.source.signature, arg).map_err(parse_err("sequent"))?;
            let image = rho.translate_sequent(&s).map_err(|e| CliError::IllFormed(e.to_string()))?;
            writeln!(text, "{image}").unwrap();
            out["sequent"] = json!(s.to_string());
            out["translation"] = json!(image.to_string());
        }
        None => text.push_str(&print_morphism(&rho)),
    }
    if check || input.is_none() {
        let r = rho.check(budget).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut rows = Vec::new();
        for o in &r.obligations {
            writeln!(text, "# {} {}: {}", o.verdict.label(), o.axiom, o.translated).unwrap();
            rows.push(json!({ "axiom": o.axiom, "translated": o.translated.to_string(), "verdict": o.verdict.label() }));
        }
        out["obligations"] = json!(rows);
        status = if r.accepted() {
            Status::Holds
        } else if r.rejected() {
            Status::Fails
        } else {
            Status::Unknown
        };
    }
    Ok(Report::new(status, out, text))
}

pub fn sketch2pht(file: &Path) -> Result<Report, CliError> {
    let origin = file.display().to_string();
    let s = parse_sketch(&read(file)?).map_err(|e| CliError::Parse(format!("{origin}: {e}")))?;
    let t = sketch_to_pht(&s).map_err(|e| CliError::IllFormed(format!("{origin}: {e}")))?;
    let text = print_theory(&t);
    Ok(Report::new(
        Status::Holds,
        json!({ "command": "sketch2pht", "sketch": s.name, "theory": text }),
        text,
    ))
}

fn pool_from_dir(t: &Theory, dir: &Path, cap: usize) -> Result<ModelUniverse, CliError> {
    let entries = fs::read_dir(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut paths: Vec<_> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "model"))
        .collect();
    paths.sort();
    let mut models = Vec::new();
    for p in &paths {
        models.extend(parse_model_file(&read(p)?, t, &p.display().to_string())?.models);
    }
    ModelUniverse::new(t, models, cap).map_err(|e| CliError::IllFormed(e.to_string()))
}

fn judgments_of(ws: &mut Workspace, t: &Theory, file: &Path) -> Result<Vec<Sequent>, CliError> {
    ws.search_near(file);
    let origin = file.display().to_string();
    let j = parse_theory(&read(file)?).map_err(parse_err(&origin))?;
    if *j.signature != *t.signature {
        return Err(CliError::IllFormed(format!("{origin}: the signature differs from that of {}", t.name)));
    }
    Ok(j.axioms.into_iter().map(|a| a.sequent).collect())
}

pub struct BirkhoffArgs<'a> {
    pub theory: &'a str,
    pub pool: Option<&'a Path>,
    pub class: Option<&'a Path>,
    pub judgments: Option<&'a Path>,
    pub size: usize,
    pub depth: usize,
}

pub fn birkhoff(ws: &mut Workspace, a: BirkhoffArgs<'_>) -> Result<Report, CliError> {
    let t = ws.theory(a.theory)?;
    let pool = match a.pool {
        Some(dir) => pool_from_dir(&t, dir, a.size)?,
        None => ModelUniverse::all(&t, a.size),
    };
    let filter = match a.class {
        Some(f) => Some(judgments_of(ws, &t, f)?),
        None => None,
    };
    let class = match &filter {
        Some(axioms) => pool.filter(|m| axioms.iter().all(|s| phl_core::semantics::holds(m, s).unwrap_or(false))),
        None => pool.clone(),
    };
    let names = |ms: &[PartialStructure]| ms.iter().map(|m| m.name.clone()).collect::<Vec<_>>();
    let mut text = format!("pool: {} models of {} up to size {}\n", pool.len(), t.name, a.size);
    if filter.is_some() {
        writeln!(text, "class: {} models", class.len()).unwrap();
    }
    let mut out = json!({
        "command": "birkhoff",
        "theory": t.name,
        "pool": names(pool.models()),
        "class": names(class.models()),
    });
    let mut status = Status::Holds;
    match a.judgments {
        None => {
            let r = fixed_point_check(&class, &pool, None);
            writeln!(text, "closed under products, closed submodels and retracts: {}", r.fixed).unwrap();
            for w in &r.witnesses {
                text.push_str(&print_model(w, &t.name));
            }
            if !r.fixed {
                status = Status::Fails;
            }
            out["fixed_point"] = json!({ "fixed": r.fixed, "witnesses": r.witnesses.iter().map(report::model).collect::<Vec<_>>(), "skipped": r.skipped });
        }
        Some(file) => {
            let judgments = judgments_of(ws, &t, file)?;
            let r = definability_check(&judgments, &pool, None, a.depth).map_err(|e| CliError::IllFormed(e.to_string()))?;
            let matches = filter.is_none() || r.class.same_class(&class);
            writeln!(text, "judgments cut out {} models", r.class.len()).unwrap();
            if filter.is_some() {
                writeln!(text, "same models as the class: {matches}").unwrap();
            }
            writeln!(text, "closed under products, closed submodels and retracts: {}", r.fixed_point.fixed).unwrap();
            for w in &r.fixed_point.witnesses {
                text.push_str(&print_model(w, &t.name));
            }
            let mut rows = Vec::new();
            for j in &r.judgments {
                let verdict = match j.agrees {
                    Some(true) => "agrees",
                    Some(false) => "disagrees",
                    None => "undetermined",
                };
                writeln!(text, "orthogonality {verdict}: {}", j.judgment).unwrap();
                for d in &j.disagreements {
                    writeln!(text, "  {d}").unwrap();
                }
                rows.push(json!({ "judgment": j.judgment, "agrees": j.agrees, "disagreements": j.disagreements }));
            }
            status = if !matches || !r.fixed_point.fixed || r.judgments.iter().any(|j| j.agrees == Some(false)) {
                Status::Fails
            } else if r.judgments.iter().any(|j| j.agrees.is_none()) {
                Status::Unknown
            } else {
                Status::Holds
            };
            out["defined_class"] = json!(names(r.class.models()));
            out["matches_class"] = json!(matches);
            out["fixed_point"] = json!({
                "fixed": r.fixed_point.fixed,
                "witnesses": r.fixed_point.witnesses.iter().map(report::model).collect::<Vec<_>>(),
                "skipped": r.fixed_point.skipped,
            });
            out["judgments"] = json!(rows);
        }
    }
    Ok(Report::new(status, out, text))
}

pub fn fmt(ws: &mut Workspace, file: &Path, theory: Option<&str>) -> Result<Report, CliError> {
    let origin = file.display().to_string();
    let text = read(file)?;
    ws.search_near(file);
    let kind = leading_keyword(&text).unwrap_or("theory");
    let printed = match kind {
        "theory" => print_theory(&parse_theory(&text).map_err(parse_err(&origin))?),
        "sketch" => print_sketch(&parse_sketch(&text).map_err(|e| CliError::Parse(format!("{origin}: {e}")))?),
        "relative" => print_relative(&ws.relative(file, &text)?),
        "morphism" => print_morphism(&ws.morphism(file)?),
        "model" | "hom" => {
            let t = match theory {
                Some(spec) => ws.theory(spec)?,
                None => {
                    let of = text
                        .split_whitespace()
                        .skip_while(|w| *w != "of")
                        .nth(1)
                        .ok_or_else(|| CliError::Parse(format!("{origin}: missing `of THEORY`")))?;
                    ws.theory_named(of)?
                }
            };
            let parsed = parse_model_file(&text, &t, &origin)?;
            let mut out = String::new();
            for m in &parsed.models {
                out.push_str(&print_model(m, &t.name));
            }
            for (name, i, j, h) in &parsed.homs {
                out.push_str(&print_hom(name, &parsed.models[*i], &parsed.models[*j], h));
            }
            out
        }
        other => {
            let t = theory.ok_or_else(|| CliError::Usage(format!("{origin}: `{other}` is not a known block; pass --theory for derivation files")))?;
            let t = ws.theory(t)?;
            print_derivation(&parse_derivation(&t, &text).map_err(|e| CliError::Parse(format!("{origin}: {e}")))?)
        }
    };
    Ok(Report::new(Status::Holds, json!({ "command": "fmt", "kind": kind, "text": printed }), printed))
}

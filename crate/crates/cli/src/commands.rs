//! Command dispatch. Every command returns its whole output as a string so
//! that runs can be compared byte for byte.

use std::path::Path;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use fibkit::adjunction::{check_pseudo_naturality, check_transpose_equivalence};
use fibkit::bifib::{
    check_horizontal_closure, enumerate_fibrations, local_opcartesian_lift, opcartesian_1cell, square_hom,
    verify_local_opcartesian, verify_opcartesian_1cell,
};
use fibkit::fibration::FibFunctor;
use fibkit::fincat::enumerate_nat_trans;
use fibkit::hslift::{hs_lift_generic_family, iterated_lift, lax_base_change};
use fibkit::limits::{max_search, with_max_search};
use fibkit::nerve::{check_sieve_agreement, hs_universe_presheaf, nerve, nerve_adjunction_check, sieves};
use fibkit::oplax::oplax_base_change;
use fibkit::saturation::check_saturation_factorisation;
use fibkit::{DisplayedCat, FibredCat, FinCat, FinFunctor};
use serde_json::{json, Value};

use crate::document::{Document, Kind, Payload};
use crate::dot::export_dot;
use crate::error::CliError;
use crate::report::{render, render_comment};

#[derive(Debug, Parser)]
#[command(name = "fibkit", version, about = "Finite fibrations, oplax base change and Hofmann-Streicher lifting")]
pub struct Cli {
    /// Budget of candidate assignments per enumeration.
    #[arg(long, global = true, env = "FIBKIT_MAX_SEARCH")]
    pub max_search: Option<u64>,
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Inputs are written `FILE` or `FILE:BLOCK`.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate input files.
    Validate { files: Vec<String> },
    /// List the sieves on one or every object of a category.
    Sieves { category: String, object: Option<String> },
    /// The nerve of a category with values in another, optionally checked
    /// against a presheaf through the elements adjunction.
    Nerve {
        category: String,
        target: String,
        #[arg(long)]
        presheaf: Option<String>,
    },
    /// The lifted universe presheaf of truncated sets.
    HsUniverse {
        category: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Compare with the sieves for any `k`; always done for `k = 1`.
        #[arg(long)]
        against_sieves: bool,
    },
    /// `∇_p(E)` for a fibration `p : A ↠ B` and `E` over `B`.
    OplaxBaseChange { p: String, e: String },
    /// The lax base change, i.e. the relative Hofmann-Streicher lifting.
    HsLift { p: String, e: String },
    /// Lifts the generic family of the `k`-bounded universe along `A → 𝟙`
    /// and compares it with the direct formulas.
    HsGenericFamily {
        category: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Folds the lifting along a chain of fibrations ending in `𝟙`.
    Iterate { chain: String, e: String },
    /// Certifies that the transpose between `Σ_p` and `∇_p` is an equivalence.
    CheckAdjunction { p: String, e: String, f: String },
    /// Verifiers for the 2-opfibration of fibrations over categories.
    Bifib(BifibArgs),
    /// Compares saturation with lifting along a fibration.
    Saturation(SaturationArgs),
    /// Graphviz output for a category, presheaf, displayed category or fibration.
    Dot { input: String },
}

#[derive(Debug, Args)]
pub struct BifibArgs {
    #[command(subcommand)]
    pub command: BifibCommand,
}

#[derive(Debug, Subcommand)]
pub enum BifibCommand {
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// The square `p → f∘p` against every given fibration `r`.
    Opcartesian { p: String, f: String, targets: Vec<String> },
    /// Every local lift of a square `p → q` against every square `p → q`.
    Local { p: String, q: String },
    /// Horizontal composites of local lifts of squares `p → p`.
    Horizontal { p: String },
}

#[derive(Debug, Args)]
pub struct SaturationArgs {
    #[command(subcommand)]
    pub command: SaturationCommand,
}

#[derive(Debug, Subcommand)]
pub enum SaturationCommand {
    /// `∇_h(N_Q X)` against `N_P(Δ_h X)`.
    Compare { h: String, x: String },
}

/// Output and exit code of a successful run; `code` is 2 when a
/// verification found a counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
    pub stderr: String,
}

struct Ctx {
    json: bool,
}

impl Ctx {
    fn report(&self, v: Value, ok: bool) -> Outcome {
        let stdout = if self.json { format!("{}\n", serde_json::to_string_pretty(&v).expect("reports serialise")) } else { render(&v) };
        Outcome { stdout, code: if ok { 0 } else { 2 }, stderr: String::new() }
    }

    fn with_document(&self, doc: &Document, v: Value, ok: bool) -> Outcome {
        let text = doc.print();
        let stdout = if self.json {
            let out = json!({ "report": v, "document": text });
            format!("{}\n", serde_json::to_string_pretty(&out).expect("reports serialise"))
        } else {
            format!("{text}\n{}", render_comment(&v))
        };
        Outcome { stdout, code: if ok { 0 } else { 2 }, stderr: String::new() }
    }
}

fn split_source(src: &str) -> (&str, Option<&str>) {
    if Path::new(src).exists() {
        return (src, None);
    }
    match src.rsplit_once(':') {
        Some((path, block)) if !block.is_empty() && !block.contains('/') => (path, Some(block)),
        _ => (src, None),
    }
}

pub fn load(path: &str) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })?;
    Document::parse(&text).map_err(|diag| CliError::Parse { path: path.to_string(), diag })
}

fn select(src: &str, kinds: &[Kind]) -> Result<(Document, usize), CliError> {
    let (path, block) = split_source(src);
    let doc = load(path)?;
    let found = match block {
        Some(b) => doc.items.iter().position(|i| i.name == b).ok_or_else(|| format!("{path}: no block named `{b}`"))?,
        None => doc
            .items
            .iter()
            .rposition(|i| kinds.contains(&i.kind()))
            .ok_or_else(|| format!("{path}: no {} block", kinds.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" or ")))?,
    };
    if !kinds.contains(&doc.items[found].kind()) {
        let i = &doc.items[found];
        return Err(CliError::Usage(format!("{path}: `{}` is a {}", i.name, i.kind())));
    }
    Ok((doc, found))
}

fn category_arg(src: &str) -> Result<Arc<FinCat>, CliError> {
    let (doc, i) = select(src, &[Kind::Category])?;
    match &doc.items[i].payload {
        Payload::Category(c) => Ok(c.clone()),
        _ => unreachable!(),
    }
}

/// A fibration; a plain category is read as a fibration over `over` when that
/// is the point, and over a fresh point otherwise.
fn fibration_arg(src: &str, over: Option<&Arc<FinCat>>) -> Result<FibredCat, CliError> {
    let (doc, i) = select(src, &[Kind::Fibration, Kind::Functor, Kind::Category])?;
    Ok(match &doc.items[i].payload {
        Payload::Fibration { fibred, .. } => fibred.clone(),
        Payload::Functor { functor, .. } => FibredCat::find(DisplayedCat::new(functor.clone()))?,
        Payload::Category(c) => match over {
            Some(b) if b.n_objects() == 1 && b.n_arrows() == 1 => fibkit::hslift::over_point(c, b)?,
            _ => FibredCat::over_point(c),
        },
        _ => unreachable!(),
    })
}

fn displayed_arg(src: &str, over: &Arc<FinCat>) -> Result<DisplayedCat, CliError> {
    let (doc, i) = select(src, &[Kind::Displayed, Kind::Fibration, Kind::Functor, Kind::Category])?;
    Ok(match &doc.items[i].payload {
        Payload::Displayed { displayed, .. } => displayed.clone(),
        Payload::Fibration { fibred, .. } => fibred.displayed().clone(),
        Payload::Functor { functor, .. } => DisplayedCat::new(functor.clone()),
        Payload::Category(c) => DisplayedCat::new(FinFunctor::to_terminal(c, over)),
        _ => unreachable!(),
    })
}

fn named_counts(e: &FibredCat) -> Value {
    let b = e.base();
    Value::Array(b.objects().map(|o| json!([b.object_name(o), e.objects_over(o).count()])).collect())
}

fn sizes(c: &FinCat, s: &[usize]) -> String {
    c.objects().map(|x| format!("{}:{}", c.object_name(x), s[x.0])).collect::<Vec<_>>().join(", ")
}

/// Runs one command; `--max-search` applies for the duration of the call.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    with_max_search(cli.max_search.unwrap_or_else(max_search), || dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let ctx = Ctx { json: cli.json };
    match &cli.command {
        Command::Validate { files } => {
            if files.is_empty() {
                return Err(CliError::Usage("no input files".into()));
            }
            let mut out = Vec::new();
            for path in files {
                let doc = load(path)?;
                let blocks: Vec<Value> = doc
                    .items
                    .iter()
                    .map(|i| {
                        let detail = match &i.payload {
                            Payload::Category(c) => json!({ "objects": c.n_objects(), "arrows": c.n_arrows() }),
                            Payload::Functor { dom, cod, .. } => json!({ "from": dom, "to": cod }),
                            Payload::Presheaf { base, presheaf } => {
                                json!({ "on": base, "sizes": sizes(presheaf.base(), &presheaf.sizes()) })
                            }
                            Payload::Displayed { display, displayed } => {
                                json!({ "display": display, "fibration": displayed.is_fibration() })
                            }
                            Payload::Fibration { display, fibred } => {
                                json!({ "display": display, "fibres": named_counts(fibred), "split": fibred.is_split() })
                            }
                            Payload::Chain { members, .. } => json!({ "fibrations": members }),
                        };
                        json!({ "kind": i.kind(), "name": i.name, "detail": detail })
                    })
                    .collect();
                out.push(json!({ "file": path, "blocks": blocks }));
            }
            Ok(ctx.report(json!({ "valid": out }), true))
        }
        Command::Sieves { category, object } => {
            let c = category_arg(category)?;
            let objects = match object {
                Some(o) => vec![c.object(o).ok_or_else(|| CliError::Usage(format!("`{o}` is not an object of `{}`", c.name())))?],
                None => c.objects().collect(),
            };
            let mut rows = serde_json::Map::new();
            for x in objects {
                let ss = sieves(&c, x)?;
                rows.insert(
                    c.object_name(x).to_string(),
                    json!({ "count": ss.len(), "sieves": ss.iter().map(|s| s.name()).collect::<Vec<_>>() }),
                );
            }
            Ok(ctx.report(json!({ "category": c.name(), "sieves": rows }), true))
        }
        Command::Nerve { category, target, presheaf } => {
            let c = category_arg(category)?;
            let d = category_arg(target)?;
            let nu = nerve(&c, &d)?;
            let mut values = serde_json::Map::new();
            for x in c.objects() {
                let fs: Vec<String> = nu.functors[x.0].iter().map(|f| f.table_name()).collect();
                values.insert(c.object_name(x).to_string(), json!({ "count": fs.len(), "functors": fs }));
            }
            let mut report = json!({ "category": c.name(), "target": d.name(), "values": values });
            let mut ok = true;
            if let Some(p) = presheaf {
                let (doc, i) = select(p, &[Kind::Presheaf])?;
                let Payload::Presheaf { presheaf: x, .. } = &doc.items[i].payload else { unreachable!() };
                if **x.base() != *c {
                    return Err(CliError::Usage(format!("the presheaf does not live on `{}`", c.name())));
                }
                let r = nerve_adjunction_check(x, &d, std::slice::from_ref(x), std::slice::from_ref(&d))?;
                ok = r.passed();
                report["adjunction"] = serde_json::to_value(&r).expect("reports serialise");
            }
            Ok(ctx.report(report, ok))
        }
        Command::HsUniverse { category, k, against_sieves } => {
            let c = category_arg(category)?;
            let hs = hs_universe_presheaf(&c, *k)?;
            let mut report = json!({
                "category": c.name(),
                "k": k,
                "universe": sizes(&c, &hs.universe.presheaf.sizes()),
                "pointed": sizes(&c, &hs.pointed.presheaf.sizes()),
            });
            let mut ok = true;
            if *k == 1 || *against_sieves {
                let a = check_sieve_agreement(&c, &hs)?;
                ok = a.passed();
                report["sieves"] = json!(sizes(&c, &a.sieve_counts.iter().map(|p| p.1).collect::<Vec<_>>()));
                report["agreement"] = json!({ "bijective": a.bijective, "natural": a.natural, "failure": a.failure });
            }
            Ok(ctx.report(report, ok))
        }
        Command::OplaxBaseChange { p, e } => {
            let p = fibration_arg(p, None)?;
            let e = fibration_arg(e, Some(p.base()))?;
            let n = oplax_base_change(&p, &e)?;
            let stats = n.stats();
            let ok = stats.lifts_cartesian && stats.split;
            let mut doc = Document::default();
            doc.add_fibration("result", &n.fibred);
            Ok(ctx.with_document(&doc, serde_json::to_value(&stats).expect("reports serialise"), ok))
        }
        Command::HsLift { p, e } => {
            let p = fibration_arg(p, None)?;
            let e = fibration_arg(e, Some(p.base()))?;
            let l = lax_base_change(&p, &e)?;
            let stats = json!({
                "fibre_objects": named_counts(&l.fibred),
                "objects": l.fibred.total().n_objects(),
                "arrows": l.fibred.total().n_arrows(),
                "split": l.fibred.is_split(),
            });
            let mut doc = Document::default();
            doc.add_fibration("result", &l.fibred);
            Ok(ctx.with_document(&doc, stats, true))
        }
        Command::HsGenericFamily { category, k } => {
            let a = category_arg(category)?;
            let g = hs_lift_generic_family(&a, *k)?;
            let report = json!({
                "category": a.name(),
                "k": k,
                "lifted_universe": sizes(&a, &g.lifted.tgt().sizes()),
                "lifted_pointed": sizes(&a, &g.lifted.src().sizes()),
                "direct_universe": sizes(&a, &g.direct.universe.presheaf.sizes()),
                "direct_pointed": sizes(&a, &g.direct.pointed.presheaf.sizes()),
                "natural": g.natural,
            });
            Ok(ctx.report(report, g.natural))
        }
        Command::Iterate { chain, e } => {
            let (doc, i) = select(chain, &[Kind::Chain])?;
            let Payload::Chain { fibrations, .. } = &doc.items[i].payload else { unreachable!() };
            let last = fibrations.last().ok_or_else(|| CliError::Usage("empty chain".into()))?;
            let e = fibration_arg(e, Some(last.base()))?;
            let it = iterated_lift(fibrations, &e)?;
            let mut out = Document::default();
            out.add_fibration("result", &it.result);
            let stages = serde_json::to_value(&it.stages).expect("reports serialise");
            Ok(ctx.with_document(&out, json!({ "stages": stages }), true))
        }
        Command::CheckAdjunction { p, e, f } => {
            let p = fibration_arg(p, None)?;
            let e = fibration_arg(e, Some(p.total()))?;
            let f = fibration_arg(f, Some(p.base()))?;
            let (_, r) = check_transpose_equivalence(&p, &e, &f)?;
            let pn = check_pseudo_naturality(&p, &FibFunctor::identity(&e), &FibFunctor::identity(&f))?;
            let ok = r.is_equivalence() && pn.strict;
            let report = json!({
                "transpose": serde_json::to_value(&r).expect("reports serialise"),
                "equivalence": r.is_equivalence(),
                "pseudo_naturality": serde_json::to_value(&pn).expect("reports serialise"),
            });
            Ok(ctx.report(report, ok))
        }
        Command::Bifib(BifibArgs { command: BifibCommand::Verify(v) }) => bifib(&ctx, v),
        Command::Saturation(SaturationArgs { command: SaturationCommand::Compare { h, x } }) => {
            let h = fibration_arg(h, None)?;
            let x = displayed_arg(x, h.base())?;
            let r = check_saturation_factorisation(&h, &x)?;
            Ok(ctx.report(serde_json::to_value(&r).expect("reports serialise"), r.passed()))
        }
        Command::Dot { input } => {
            let (doc, i) = select(input, &[Kind::Category, Kind::Presheaf, Kind::Displayed, Kind::Fibration])?;
            let text = export_dot(&doc.items[i]).map_err(CliError::Usage)?;
            Ok(Outcome { stdout: text, code: 0, stderr: String::new() })
        }
    }
}

fn bifib(ctx: &Ctx, v: &VerifyCommand) -> Result<Outcome, CliError> {
    match v {
        VerifyCommand::Opcartesian { p, f, targets } => {
            let p = fibration_arg(p, None)?;
            let f = fibration_arg(f, None)?;
            let sq = opcartesian_1cell(&p, &f)?;
            let mut rs = Vec::new();
            if targets.is_empty() {
                rs.push(("identity".to_string(), FibredCat::identity(f.base())));
            }
            for t in targets {
                rs.push((t.clone(), fibration_arg(t, None)?));
            }
            let mut ok = true;
            let mut out = Vec::new();
            for (name, r) in &rs {
                let rep = verify_opcartesian_1cell(&sq, r)?;
                ok &= rep.passed();
                out.push(json!({ "target": name, "report": serde_json::to_value(&rep).expect("reports serialise") }));
            }
            Ok(ctx.report(json!({ "verifier": "opcartesian 1-cell", "targets": out, "passed": ok }), ok))
        }
        VerifyCommand::Local { p, q } => {
            let p = fibration_arg(p, None)?;
            let q = fibration_arg(q, None)?;
            let hom = square_hom(&p, &q)?;
            let bottoms = enumerate_fibrations(p.base(), q.base())?;
            let (mut lifts, mut checks, mut ok, mut failure) = (0usize, 0usize, true, None);
            for alpha in &hom.squares {
                for g1 in &bottoms {
                    for gamma in enumerate_nat_trans(g1.display(), alpha.g.display())? {
                        let lifted = local_opcartesian_lift(alpha, &gamma, g1)?;
                        lifts += 1;
                        for beta in &hom.squares {
                            let r = verify_local_opcartesian(&lifted, beta)?;
                            checks += 1;
                            if !r.bijective {
                                ok = false;
                                failure.get_or_insert(r.failure.unwrap_or_else(|| "not bijective".into()));
                            }
                        }
                    }
                }
            }
            let report = json!({
                "verifier": "local opcartesian 2-cell",
                "squares": hom.squares.len(),
                "lifts": lifts,
                "checks": checks,
                "passed": ok,
                "failure": failure,
            });
            Ok(ctx.report(report, ok))
        }
        VerifyCommand::Horizontal { p } => {
            let p = fibration_arg(p, None)?;
            let hom = square_hom(&p, &p)?;
            let bottoms = enumerate_fibrations(p.base(), p.base())?;
            let mut cells = Vec::new();
            for (i, alpha) in hom.squares.iter().enumerate() {
                for g1 in &bottoms {
                    for gamma in enumerate_nat_trans(g1.display(), alpha.g.display())? {
                        cells.push((i, gamma, g1.clone()));
                    }
                }
            }
            let (mut checks, mut ok, mut failure) = (0usize, true, None);
            for (i, gamma, g1) in &cells {
                for (j, kappa, k1) in &cells {
                    let r = check_horizontal_closure(&hom.squares[*i], &hom.squares[*j], (gamma, g1), (kappa, k1))?;
                    checks += 1;
                    if !r.equal {
                        ok = false;
                        failure.get_or_insert(r.failure.unwrap_or_else(|| "composites differ".into()));
                    }
                }
            }
            let report = json!({
                "verifier": "horizontal closure",
                "squares": hom.squares.len(),
                "checks": checks,
                "passed": ok,
                "failure": failure,
            });
            Ok(ctx.report(report, ok))
        }
    }
}

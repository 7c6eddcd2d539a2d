use std::collections::BTreeMap;
use std::fmt::Write as _;

use closefield_core::closefields::{family_hecke, verify_algebra_iso, CloseFieldPair, SupportBound};
use closefield_core::hecke::{DoubleCoset, HeckeAlgebra, HeckeElem};
use closefield_core::localfield::{close_field_iso, FieldDesc, FieldFile};
use closefield_core::lubin_tate::{integral_series_json, series_json, torsion_tower, FormalGroup};
use closefield_core::witt::{law_polynomials, specialize_check, verify_theta};
use closefield_core::Error;
use serde::Serialize;
use thiserror::Error;

use crate::{Command, Common, FieldCmd, HeckeCmd, LtArgs, LtCmd, SourceArg, WittCmd};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot parse {what}: {msg}")]
    Parse { what: String, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Budget { .. }) => 3,
            CliError::Core(Error::Verification(_)) => 1,
            _ => 2,
        }
    }
}

pub struct Output {
    pub text: String,
    pub passed: bool,
}

type Res = Result<Output, CliError>;

fn load(path: &str) -> Result<FieldDesc, CliError> {
    Ok(FieldFile::load(path)?)
}

fn emit<T: Serialize>(common: &Common, value: &T, table: impl FnOnce() -> String, passed: bool) -> Res {
    let text = if common.json {
        let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
        s.push('\n');
        s
    } else {
        table()
    };
    Ok(Output { text, passed })
}

pub fn run(cmd: Command) -> Res {
    match cmd {
        Command::Field { action, common } => field(action, &common),
        Command::Witt { action, common } => witt(action, &common),
        Command::Lt { action, common } => lt(action, &common),
        Command::Hecke { action, common } => hecke(action, &common),
        Command::CloseVerify { field_a, field_b, rank, level, bound, depth, common } => {
            let a = load(&field_a)?;
            let b = load(&field_b)?;
            let bound = SupportBound::parse(&bound, rank)?;
            let pair = CloseFieldPair::with_budget(&a, &b, rank, level, common.budget)?;
            let report = verify_algebra_iso(&pair, &bound, depth)?;
            let passed = report.ok();
            emit(
                &common,
                &report,
                || {
                    let s = &report.summary;
                    let mut t = String::new();
                    writeln!(t, "fields        {} vs {}", s.field_a, s.field_b).unwrap();
                    writeln!(t, "group         GL_{} level {}", s.rank, s.level).unwrap();
                    writeln!(t, "generators    {}", s.generators).unwrap();
                    writeln!(t, "products      {} (depth {})", s.products, s.depth).unwrap();
                    for c in &s.class_counts {
                        writeln!(t, "classes {:?}  {} / {}", c.nu, c.lhs, c.rhs).unwrap();
                    }
                    writeln!(t, "discrepancies {}", s.discrepancies).unwrap();
                    for i in report.discrepancies() {
                        writeln!(t, "  {:?} * {:?}", i.product[0], i.product[1]).unwrap();
                    }
                    writeln!(t, "result        {}", if passed { "all equal" } else { "MISMATCH" }).unwrap();
                    t
                },
                passed,
            )
        }
        Command::FamilyHecke { fields, tail, rank, level, bound, common } => {
            let mixed: Vec<FieldDesc> = fields.iter().map(|p| load(p)).collect::<Result<_, _>>()?;
            let tail = load(&tail)?;
            let bound = SupportBound::parse(&bound, rank)?;
            let report = family_hecke(&mixed, &tail, rank, level, &bound, common.budget)?;
            let passed = report.exceptional.is_empty();
            emit(
                &common,
                &report.family,
                || {
                    let mut t = String::new();
                    writeln!(t, "tail entries  {}", report.family.tail().entries.len()).unwrap();
                    writeln!(t, "agreeing      {:?}", report.agreeing).unwrap();
                    writeln!(t, "exceptional   {:?}", report.exceptional).unwrap();
                    t
                },
                passed,
            )
        }
    }
}

#[derive(Serialize)]
struct FieldInfo {
    name: String,
    p: u32,
    f: u32,
    q: u32,
    kind: &'static str,
    e: Option<u32>,
    max_precision: u32,
    descriptor: Option<String>,
}

#[derive(Serialize)]
struct IsoOutput {
    field: String,
    level: u32,
    pairs_checked: u64,
    exhaustive: bool,
    failures: Vec<String>,
}

fn field(action: FieldCmd, common: &Common) -> Res {
    match action {
        FieldCmd::Info { field } => {
            let k = load(&field)?;
            let info = FieldInfo {
                name: k.name(),
                p: k.p(),
                f: k.f(),
                q: k.q(),
                kind: if k.is_mixed() { "mixed" } else { "laurent" },
                e: k.e(),
                max_precision: k.max_precision(),
                descriptor: FieldFile::describe(&k).ok().map(|d| d.to_toml()),
            };
            emit(
                common,
                &info,
                || {
                    let e = info.e.map_or("-".to_string(), |e| e.to_string());
                    format!("{}  p={} f={} q={} e={} kind={}\n", info.name, info.p, info.f, info.q, e, info.kind)
                },
                true,
            )
        }
        FieldCmd::Iso { field, level } => {
            let k = load(&field)?;
            let iso = close_field_iso(&k, level)?;
            let r = iso.verify();
            let out = IsoOutput {
                field: k.name(),
                level,
                pairs_checked: r.pairs_checked,
                exhaustive: r.exhaustive,
                failures: r.failures.clone(),
            };
            let passed = r.ok();
            emit(
                common,
                &out,
                || format!("{} level {}: {} pairs, {}\n", out.field, level, out.pairs_checked, if passed { "ring isomorphism" } else { "FAILED" }),
                passed,
            )
        }
    }
}

#[derive(Serialize)]
struct LawsOutput {
    #[serde(flatten)]
    table: closefield_core::witt::LawTableJson,
    classical_match: Option<bool>,
}

fn witt(action: WittCmd, common: &Common) -> Res {
    match action {
        WittCmd::Laws { field, n, precision } => {
            let k = load(&field)?;
            let table = law_polynomials(&k, n, precision)?;
            let classical = match specialize_check(&table) {
                Ok(r) => Some(r.matched()),
                Err(Error::InvalidField(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let out = LawsOutput { table: table.to_json(), classical_match: classical };
            let passed = classical != Some(false);
            emit(
                common,
                &out,
                || {
                    let mut t = String::new();
                    for (name, polys) in [("S", &out.table.sum), ("P", &out.table.prod), ("N", &out.table.neg)] {
                        for (j, p) in polys.iter().enumerate() {
                            let terms: Vec<String> = p.iter().map(|(m, d)| format!("{d:?}*{m}")).collect();
                            writeln!(t, "{name}_{j} = {}", terms.join(" + ")).unwrap();
                        }
                    }
                    t
                },
                passed,
            )
        }
        WittCmd::Theta { field, n } => {
            let k = load(&field)?;
            let report = verify_theta(&k, n)?;
            let passed = report.ok();
            emit(
                common,
                &report,
                || format!("{} n={}: {} pairs, {}\n", report.field, n, report.pairs_checked, if passed { "ring isomorphism" } else { "FAILED" }),
                passed,
            )
        }
    }
}

fn group(args: &LtArgs) -> Result<FormalGroup, CliError> {
    let k = load(&args.field)?;
    Ok(match args.source {
        SourceArg::Canonical => FormalGroup::canonical(&k, args.deg, args.precision)?,
        SourceArg::Classical => FormalGroup::classical_default(&k, args.deg, args.precision)?,
    })
}

fn render_series(map: &BTreeMap<String, impl Serialize>) -> String {
    let mut t = String::new();
    for (m, c) in map {
        writeln!(t, "{m:>10}  {}", serde_json::to_string(c).expect("coefficients serialize")).unwrap();
    }
    t
}

fn lt(action: LtCmd, common: &Common) -> Res {
    match action {
        LtCmd::Log { args } => {
            let g = group(&args)?;
            let out = series_json(g.pfield(), g.log());
            emit(common, &out, || render_series(&out), true)
        }
        LtCmd::Mult { args, a } => {
            let g = group(&args)?;
            let s = g.mult(&g.pfield().from_int(a))?;
            let out = integral_series_json(g.integral_ring(), &s);
            emit(common, &out, || render_series(&out), true)
        }
        LtCmd::Torsion { args } => {
            let g = group(&args)?;
            let tower = torsion_tower(&g, args.n)?;
            let base = tower.ring().base();
            let out: Vec<Vec<Vec<u32>>> =
                (1..=args.n).map(|j| tower.torsion_polynomial(j).iter().map(|c| base.digits(c)).collect()).collect();
            emit(
                common,
                &out,
                || {
                    let mut t = String::new();
                    for (j, g) in out.iter().enumerate() {
                        writeln!(t, "G_{} = {:?}", j + 1, g).unwrap();
                    }
                    t
                },
                true,
            )
        }
        LtCmd::Tower { args } => {
            let g = group(&args)?;
            let tower = torsion_tower(&g, args.n)?;
            let out = tower.to_json()?;
            let passed = out.report.ok();
            emit(
                common,
                &out,
                || {
                    let mut t = String::new();
                    for (name, ok) in &out.report.checks {
                        writeln!(t, "{}  {name}", if *ok { "ok  " } else { "FAIL" }).unwrap();
                    }
                    t
                },
                passed,
            )
        }
    }
}

fn parse_coset(text: &str) -> Result<DoubleCoset, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse { what: format!("coset {text:?}"), msg: e.to_string() })
}

#[derive(Serialize)]
struct TermOut {
    coset: DoubleCoset,
    coeff: i64,
}

#[derive(Serialize)]
struct TermsOutput {
    terms: Vec<TermOut>,
}

#[derive(Serialize)]
struct CosetsOutput {
    coset: DoubleCoset,
    count: usize,
    labels: Vec<Vec<u32>>,
}

fn hecke(action: HeckeCmd, common: &Common) -> Res {
    match action {
        HeckeCmd::Convolve { field, rank, level, a, b } => {
            let k = load(&field)?;
            let alg = HeckeAlgebra::with_budget(&k, rank, level, common.budget)?;
            let a = alg.canonicalize(&parse_coset(&a)?)?;
            let b = alg.canonicalize(&parse_coset(&b)?)?;
            let prod = alg.convolve(&HeckeElem::basis(level, a), &HeckeElem::basis(level, b))?;
            let out = TermsOutput {
                terms: prod.terms.into_iter().map(|(coset, coeff)| TermOut { coset, coeff }).collect(),
            };
            emit(
                common,
                &out,
                || {
                    let mut t = String::new();
                    for term in &out.terms {
                        writeln!(t, "{:>4}  nu={:?} residue={:?}", term.coeff, term.coset.nu, term.coset.residue).unwrap();
                    }
                    t
                },
                true,
            )
        }
        HeckeCmd::Cosets { field, rank, level, coset } => {
            let k = load(&field)?;
            let alg = HeckeAlgebra::with_budget(&k, rank, level, common.budget)?;
            let d = alg.canonicalize(&parse_coset(&coset)?)?;
            let l = alg.left_cosets(&d)?;
            let out = CosetsOutput { coset: d, count: l.len(), labels: l.labels.clone() };
            emit(common, &out, || format!("{} left cosets\n", out.count), true)
        }
        HeckeCmd::Classes { field, rank, level, nu } => {
            let k = load(&field)?;
            let alg = HeckeAlgebra::with_budget(&k, rank, level, common.budget)?;
            let out = alg.double_cosets(&nu)?;
            emit(
                common,
                &out,
                || {
                    let mut t = String::new();
                    for d in &out {
                        writeln!(t, "{:?}", d.residue).unwrap();
                    }
                    writeln!(t, "{} classes", out.len()).unwrap();
                    t
                },
                true,
            )
        }
    }
}

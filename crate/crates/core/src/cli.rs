//! Command-line front end. `run` is the whole program; `main` only forwards
//! arguments and the exit status.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::analyzer::{
    analyze, parse_coefficients, random_coefficients, reproduce_table, AnalysisReport,
    AnalyzeOptions, Field, NormalForm, Outcome, RouteStatus, TableConfig,
};
use crate::curve::{pullback_ideal, CurveConfig, TestCurve};
use crate::double::{build_unfolding, MatrixGerm, Unfolding};
use crate::error::{Error, Result};
use crate::groebner::{verify_lift, Budget};
use crate::poly::Rational;
use crate::tangent::{default_action, default_jet_degree, normal_space_basis};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_TABLE_MISMATCH: i32 = 4;

/// Seed behind `--random-direction`.
pub const RANDOM_DIRECTION_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(
    name = "lipschitz",
    about = "Lipschitz triviality of deformations of matrix germs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether F + tθ has a Lipschitz canonical vector field.
    Analyze(AnalyzeArgs),
    /// Monomial basis of the normal space of a germ.
    NormalSpace(GermArgs),
    /// Pull the double ideal of F + tθ back along a curve.
    Pullback(PullbackArgs),
    /// Print I_D(F̃) and I_D(θ).
    Double(DirectionArgs),
    /// Run the catalog verdict table.
    ReproduceTable(TableArgs),
    /// Gröbner test of I_D(θ) ⊆ I_D(F̃) with cofactors.
    CheckInclusion(DirectionArgs),
}

#[derive(Args, Debug, Clone)]
struct GermArgs {
    /// Catalog row 1..6.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6), conflicts_with = "germ_file")]
    catalog: Option<u8>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    /// Germ in text form (`sym: a, b ; b, c`).
    #[arg(long)]
    germ_file: Option<PathBuf>,
    #[arg(long)]
    jet_degree: Option<u32>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct DirectionArgs {
    #[command(flatten)]
    germ: GermArgs,
    /// Catalog coefficients, `name=rational,…`.
    #[arg(long, conflicts_with = "theta_file")]
    theta: Option<String>,
    /// Direction matrix in the germ's text form.
    #[arg(long)]
    theta_file: Option<PathBuf>,
    /// Seeded random combination of the catalog coefficients.
    #[arg(long, conflicts_with_all = ["theta", "theta_file"])]
    random_direction: bool,
    /// Largest number of S-pairs for Gröbner computations.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    direction: DirectionArgs,
    #[arg(long)]
    max_exponent: Option<u32>,
    /// Extra curve tried before the enumerated ones.
    #[arg(long)]
    curve: Option<String>,
    #[arg(long, default_value = "real")]
    field: Field,
    /// Run every route and reject conflicting verdicts.
    #[arg(long)]
    audit: bool,
}

#[derive(Args, Debug)]
struct PullbackArgs {
    #[command(flatten)]
    direction: DirectionArgs,
    /// Components over (t, x, y, t', x', y') for catalog germs.
    #[arg(long)]
    curve: String,
    /// Same as --catalog.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    ideal_from_catalog: Option<u8>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value_t = 4)]
    max_k: u32,
    #[arg(long, default_value_t = 4)]
    max_l: u32,
    /// Restrict to these rows.
    #[arg(long, value_delimiter = ',')]
    rows: Vec<u8>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    audit: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit status. Text goes to `out`.
pub fn run<I, S>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            if e.is_budget() {
                EXIT_BUDGET
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::NormalSpace(g) => cmd_normal_space(g, out),
        Command::Pullback(p) => cmd_pullback(p, out),
        Command::Double(d) => cmd_double(d, out),
        Command::ReproduceTable(t) => cmd_table(t, out),
        Command::CheckInclusion(d) => cmd_check_inclusion(d, out),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Catalog(format!("i/o: {e}"))
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))
}

fn write_json(path: &Option<PathBuf>, value: &impl serde::Serialize) -> Result<()> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(value).expect("serializable report");
        std::fs::write(p, text + "\n")
            .map_err(|e| Error::Catalog(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

/// The germ and, for catalog input, its normal form.
fn load_germ(g: &GermArgs) -> Result<(MatrixGerm, Option<NormalForm>)> {
    match (&g.catalog, &g.germ_file) {
        (Some(id), None) => {
            let nf = NormalForm::new(*id, g.k, g.l)?;
            Ok((nf.germ().clone(), Some(nf)))
        }
        (None, Some(path)) => Ok((MatrixGerm::parse(&read(path)?)?, None)),
        _ => Err(Error::Catalog(
            "give exactly one of --catalog or --germ-file".into(),
        )),
    }
}

struct Loaded {
    germ: MatrixGerm,
    nf: Option<NormalForm>,
    theta: MatrixGerm,
    coefficients: BTreeMap<String, Rational>,
}

fn load_direction(d: &DirectionArgs) -> Result<Loaded> {
    let (germ, nf) = load_germ(&d.germ)?;
    let mut coefficients = BTreeMap::new();
    let theta = if let Some(path) = &d.theta_file {
        MatrixGerm::parse_in(&read(path)?, germ.ring())?
    } else if let Some(nf) = &nf {
        coefficients = if d.random_direction {
            random_coefficients(nf, RANDOM_DIRECTION_SEED)
        } else {
            parse_coefficients(d.theta.as_deref().unwrap_or(""))?
        };
        nf.theta(&coefficients)?
    } else if d.theta.is_some() || d.random_direction {
        return Err(Error::Catalog(
            "--theta and --random-direction need --catalog; use --theta-file".into(),
        ));
    } else {
        MatrixGerm::zero(germ.ring(), germ.rows(), germ.cols(), germ.is_symmetric())
    };
    Ok(Loaded {
        germ,
        nf,
        theta,
        coefficients,
    })
}

fn budget_from(pairs: Option<usize>) -> Budget {
    let mut b = Budget::default();
    if let Some(p) = pairs {
        b.max_pairs = p;
    }
    b
}

fn parameters(nf: &Option<NormalForm>) -> BTreeMap<String, u32> {
    nf.as_ref()
        .map(|nf| {
            nf.parameters()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect()
        })
        .unwrap_or_default()
}

fn cmd_analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = load_direction(&a.direction)?;
    let mut opts = match &loaded.nf {
        Some(nf) => AnalyzeOptions::for_normal_form(nf),
        None => AnalyzeOptions::default(),
    };
    opts.budget = budget_from(a.direction.budget);
    if let Some(e) = a.max_exponent {
        opts.curves = Some(CurveConfig::new(e));
    }
    if let Some(c) = &a.curve {
        opts.extra_curves.insert(0, c.clone());
    }
    opts.audit = a.audit;
    opts.field = a.field;
    let verdict = analyze(&loaded.germ, &loaded.theta, &opts)?;
    if let Some(nf) = &loaded.nf {
        writeln!(
            out,
            "germ: {} [{}] {}",
            nf.name(),
            nf.table_label(),
            loaded.germ
        )
        .map_err(io)?;
    } else {
        writeln!(out, "germ: {}", loaded.germ).map_err(io)?;
    }
    writeln!(out, "theta: {}", loaded.theta).map_err(io)?;
    writeln!(out, "{verdict}").map_err(io)?;
    let report = AnalysisReport::new(
        &loaded.germ,
        parameters(&loaded.nf),
        &loaded.coefficients,
        &loaded.theta,
        &verdict,
    );
    write_json(&a.direction.germ.json, &report)?;
    Ok(match verdict.outcome {
        Outcome::Inconclusive
            if verdict
                .log
                .iter()
                .any(|l| matches!(l.status, RouteStatus::BudgetExceeded(_))) =>
        {
            EXIT_BUDGET
        }
        Outcome::Inconclusive => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    })
}

fn cmd_normal_space(g: GermArgs, out: &mut dyn Write) -> Result<i32> {
    let (germ, nf) = load_germ(&g)?;
    let action = default_action(&germ);
    let d = g.jet_degree.unwrap_or_else(|| default_jet_degree(&germ));
    let res = normal_space_basis(&germ, action.as_ref(), d)?;
    writeln!(out, "germ: {germ}").map_err(io)?;
    writeln!(
        out,
        "action: {}, jet degree {d}, codimension {}{}",
        res.action,
        res.codimension,
        if res.stable {
            ""
        } else {
            " (not stable at the next degree)"
        }
    )
    .map_err(io)?;
    for e in &res.normal_basis {
        writeln!(out, "  {}: {}", e.label(), e.matrix).map_err(io)?;
    }
    let mut report = json!({
        "germ": germ.to_string(),
        "parameters": parameters(&nf),
        "action": res.action,
        "jet_degree": d,
        "codimension": res.codimension,
        "stable": res.stable,
        "basis": res.labels(),
    });
    if let Some(nf) = &nf {
        let shown = nf.displayed_normal_matrices();
        let matches = res.is_quotient_basis(&shown);
        writeln!(out, "milnor number: {}", nf.milnor_number()).map_err(io)?;
        writeln!(
            out,
            "displayed list {} a basis of the quotient",
            if matches { "is" } else { "is not" }
        )
        .map_err(io)?;
        report["milnor_number"] = json!(nf.milnor_number());
        report["displayed_list_is_basis"] = json!(matches);
    }
    write_json(&g.json, &report)?;
    Ok(EXIT_OK)
}

fn unfolding_of(loaded: &Loaded) -> Result<Unfolding> {
    build_unfolding(
        &loaded.germ,
        &loaded.theta,
        crate::double::DEFAULT_PARAMETER,
    )
}

fn cmd_pullback(mut p: PullbackArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(id) = p.ideal_from_catalog {
        if p.direction.germ.catalog.is_some_and(|c| c != id) {
            return Err(Error::Catalog(
                "--ideal-from-catalog and --catalog disagree".into(),
            ));
        }
        p.direction.germ.catalog = Some(id);
    }
    let loaded = load_direction(&p.direction)?;
    let unfolding = unfolding_of(&loaded)?;
    let ideal = unfolding.double_ideal()?;
    let curve = TestCurve::parse(&p.curve, unfolding.doubled_ring())?;
    let summary = pullback_ideal(&curve, ideal.ideal())?;
    writeln!(out, "curve: ({curve})").map_err(io)?;
    for (g, (pb, o)) in ideal
        .generators()
        .iter()
        .zip(summary.pullbacks.iter().zip(&summary.orders))
    {
        writeln!(out, "  {g}  ↦  {pb}  (order {o})").map_err(io)?;
    }
    writeln!(out, "ideal_order: {}", summary.ideal_order).map_err(io)?;
    let report = json!({
        "curve": curve.to_string(),
        "generators": ideal.generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "orders": summary.orders,
        "ideal_order": summary.ideal_order,
    });
    write_json(&p.direction.germ.json, &report)?;
    Ok(EXIT_OK)
}

fn cmd_double(d: DirectionArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = load_direction(&d)?;
    let unfolding = unfolding_of(&loaded)?;
    let family = unfolding.double_ideal()?;
    let direction = unfolding.direction_ideal()?;
    writeln!(out, "F + tθ: {}", unfolding.total()).map_err(io)?;
    writeln!(out, "{family}").map_err(io)?;
    let view = family.identified_view(unfolding.parameter())?;
    let shown: Vec<String> = view.iter().map(ToString::to_string).collect();
    writeln!(out, "with t' = t: ⟨{}⟩", shown.join(", ")).map_err(io)?;
    writeln!(out, "{direction}").map_err(io)?;
    let report = json!({
        "total": unfolding.total().to_string(),
        "family": family.generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "family_identified": shown,
        "direction": direction.generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    write_json(&d.germ.json, &report)?;
    Ok(EXIT_OK)
}

fn cmd_check_inclusion(d: DirectionArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = load_direction(&d)?;
    let unfolding = unfolding_of(&loaded)?;
    let family = unfolding.double_ideal()?;
    let direction = unfolding.direction_ideal()?;
    let budget = budget_from(d.budget);
    let mut all = true;
    let mut members = Vec::new();
    for h in direction.generators() {
        let lift = family.ideal().lift(h, &budget)?;
        match &lift {
            Some(c) => {
                debug_assert!(verify_lift(h, family.generators(), c));
                writeln!(out, "  {h} ∈ I_D(F̃)").map_err(io)?;
                let parts: Vec<String> = c.iter().map(|p| format!("({p})")).collect();
                writeln!(out, "    cofactors: {}", parts.join(", ")).map_err(io)?;
            }
            None => {
                all = false;
                writeln!(out, "  {h} ∉ I_D(F̃)").map_err(io)?;
            }
        }
        members.push(json!({
            "element": h.to_string(),
            "cofactors": lift.map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>()),
        }));
    }
    writeln!(out, "I_D(θ) {} I_D(F̃)", if all { "⊆" } else { "⊄" }).map_err(io)?;
    let report = json!({
        "family": family.generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "contained": all,
        "members": members,
    });
    write_json(&d.germ.json, &report)?;
    Ok(EXIT_OK)
}

fn cmd_table(t: TableArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = TableConfig {
        max_k: t.max_k,
        max_l: t.max_l,
        audit: t.audit,
        budget: budget_from(t.budget),
        ..TableConfig::default()
    };
    if !t.rows.is_empty() {
        cfg.rows = t.rows;
    }
    let report = reproduce_table(&cfg);
    for c in &report.cells {
        writeln!(out, "{c}").map_err(io)?;
    }
    writeln!(
        out,
        "{} of {} cells pass",
        report.passed(),
        report.cells.len()
    )
    .map_err(io)?;
    write_json(&t.json, &report)?;
    Ok(if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_TABLE_MISMATCH
    })
}

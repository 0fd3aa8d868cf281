//! Command-line front end: compute payment bounds, run truthful
//! mechanisms, and execute the verification suite.
//!
//! Exit codes are part of the contract so runs can be scripted:
//! 0 success, 1 malformed input (with line/column diagnostics for JSON
//! files), 2 a monopolist blocks the computation, 3 a work cap was hit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use frugality::{
    all_bounds_for_set, enumerate_feasible, frugality, min_feasible_cost, resolve_instance,
    run_criterion, AgentSet, BoundKind, Caps, CostVector, CriterionReport, CsvRow, Error,
    FrugalityReport, RatioValue, Rule, SetSystem, CRITERIA, CSV_HEADER,
};
use frugality::suite::{suite_caps, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "frugality",
    version,
    about = "Payment bounds and truthful mechanisms for set-system procurement auctions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the four payment bounds (TUmin, NTUmin, NTUmax, TUmax) with witnesses.
    Bounds(BoundsArgs),
    /// Run a truthful mechanism and measure it against the bounds.
    Mech(MechArgs),
    /// Run the verification suite and report pass/fail per criterion.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Work caps, e.g. `enum=1000000,cover=20,bisect=128`; overrides FRUGALITY_CAPS.
    #[arg(long)]
    caps: Option<String>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct BoundsArgs {
    /// Instance: a JSON file, a named instance, `random:...`, or `matroid:uNK`.
    #[arg(long)]
    instance: String,
    /// Which cheapest feasible set to price: `S1`, `S2`, ... in
    /// lexicographic order. Defaults to S1.
    #[arg(long)]
    set: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct MechArgs {
    /// Allocation rule: vcg | greedy | local-ratio, each optionally
    /// followed by `+transform`.
    #[arg(long)]
    rule: String,
    /// Instance spec; repeat the flag for a batch run.
    #[arg(long, required = true)]
    instance: Vec<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SuiteArgs {
    /// Run every criterion (the default when --only is absent).
    #[arg(long)]
    all: bool,
    /// Run only the named criteria (name or number; repeatable).
    #[arg(long)]
    only: Vec<String>,
    /// Base seed for the random sweeps.
    #[arg(long, default_value_t = 17)]
    seeds: u64,
    /// Instances per random sweep.
    #[arg(long, default_value_t = 500)]
    sweep: usize,
    /// Restrict the audit criterion to one degree parameter.
    #[arg(long)]
    delta: Option<usize>,
    /// Restrict the audit criterion to one allocation rule.
    #[arg(long)]
    rule: Option<String>,
    /// Also write every measured row as CSV to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if ok { 0 } else { 1 });
        }
    };
    let result = match cli.command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Mech(args) => cmd_mech(args),
        Command::Suite(args) => cmd_suite(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::MonopolyDetected(_) => 2,
        Error::CapExceeded(_) => 3,
        _ => 1,
    }
}

/// Flag > environment > default.
fn resolve_caps(flag: &Option<String>, default: Caps) -> Result<Caps, Error> {
    if let Some(spec) = flag {
        return Caps::from_spec(spec);
    }
    if let Ok(spec) = std::env::var("FRUGALITY_CAPS") {
        return Caps::from_spec(&spec);
    }
    Ok(default)
}

fn set_label(system: &SetSystem, set: &AgentSet) -> String {
    let names: Vec<String> = set.iter().map(|&e| system.label(e)).collect();
    format!("{{{}}}", names.join(", "))
}

fn witness_label(system: &SetSystem, bound: &frugality::PaymentBound) -> String {
    bound
        .witness
        .iter()
        .map(|(&e, v)| format!("{}={v}", system.label(e)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn witness_json(system: &SetSystem, bound: &frugality::PaymentBound) -> serde_json::Value {
    serde_json::Value::Object(
        bound
            .witness
            .iter()
            .map(|(&e, v)| (system.label(e), serde_json::Value::String(v.to_string())))
            .collect(),
    )
}

const KIND_NAMES: [(BoundKind, &str); 4] = [
    (BoundKind::TuMin, "TUmin"),
    (BoundKind::NtuMin, "NTUmin"),
    (BoundKind::NtuMax, "NTUmax"),
    (BoundKind::TuMax, "TUmax"),
];

/// All cheapest feasible sets of the instance, lexicographically sorted,
/// so `S1` is the canonical choice the rest of the library uses.
fn cheapest_sets(
    system: &SetSystem,
    costs: &CostVector,
    caps: &Caps,
) -> Result<Vec<AgentSet>, Error> {
    let best = min_feasible_cost(system, costs, caps)?;
    let mut sets: Vec<AgentSet> = enumerate_feasible(system, false, caps)?
        .into_iter()
        .filter(|set| costs.total(set.iter().copied()) == best)
        .collect();
    sets.sort();
    Ok(sets)
}

fn parse_set_index(token: &str, available: usize) -> Result<usize, Error> {
    let digits = token.strip_prefix(['S', 's']).unwrap_or(token);
    let k: usize = digits
        .parse()
        .map_err(|_| Error::InvalidInstance(format!("bad set selector `{token}`; use S1, S2, ...")))?;
    if k == 0 || k > available {
        return Err(Error::InvalidInstance(format!(
            "set selector `{token}` out of range; the instance has {available} cheapest set(s)"
        )));
    }
    Ok(k - 1)
}

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode, Error> {
    let caps = resolve_caps(&args.common.caps, Caps::default())?;
    let (system, costs) = resolve_instance(&args.instance)?;
    let sets = cheapest_sets(&system, &costs, &caps)?;
    let idx = match &args.set {
        None => 0,
        Some(token) => parse_set_index(token, sets.len())?,
    };
    let bounds = all_bounds_for_set(&system, &costs, &sets[idx], &caps)?;
    // The TU bounds may depend on which cheapest set is priced; compare
    // against the canonical S1 to flag the rows that moved.
    let baseline = if idx > 0 {
        Some(all_bounds_for_set(&system, &costs, &sets[0], &caps)?)
    } else {
        None
    };
    let dependent = |kind: BoundKind| -> bool {
        baseline
            .as_ref()
            .is_some_and(|b| b.get(kind).value != bounds.get(kind).value)
    };

    let instance_name = match idx {
        0 => args.instance.clone(),
        k => format!("{}#S{}", args.instance, k + 1),
    };
    match args.common.format {
        Format::Table => {
            println!(
                "instance {}: {} agents, priced set S{} = {} (cost {})",
                args.instance,
                system.n(),
                idx + 1,
                set_label(&system, &sets[idx]),
                costs.total(sets[idx].iter().copied()),
            );
            if sets.len() > 1 {
                println!("cheapest sets available: {}", (1..=sets.len()).map(|k| format!("S{k}")).collect::<Vec<_>>().join(", "));
            }
            println!("{:<8} {:<10} witness", "bound", "value");
            for (kind, name) in KIND_NAMES {
                let flag = if dependent(kind) { "  [set-dependent]" } else { "" };
                println!(
                    "{:<8} {:<10} {}{flag}",
                    name,
                    bounds.get(kind).value.to_string(),
                    witness_label(&system, bounds.get(kind)),
                );
            }
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("instance".into(), args.instance.clone().into());
            obj.insert(
                "set".into(),
                sets[idx].iter().map(|&e| system.label(e)).collect::<Vec<_>>().into(),
            );
            for (kind, name) in KIND_NAMES {
                obj.insert(
                    name.to_ascii_lowercase(),
                    serde_json::json!({
                        "value": bounds.get(kind).value.to_string(),
                        "witness": witness_json(&system, bounds.get(kind)),
                        "set_dependent": dependent(kind),
                    }),
                );
            }
            println!("{}", serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("serializable"));
        }
        Format::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", CsvRow::bounds_only(instance_name, &bounds).to_line());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_mech_table(spec: &str, system: &SetSystem, report: &FrugalityReport) {
    println!("instance {spec} — rule {}", report.rule);
    println!(
        "selected {} (cost {})",
        set_label(system, &report.outcome.selected),
        report.outcome.allocation_cost,
    );
    let payments = report
        .outcome
        .payments
        .iter()
        .map(|(&e, p)| format!("{}={p}", system.label(e)))
        .collect::<Vec<_>>()
        .join(", ");
    println!("payments {payments} (total {})", report.outcome.total);
    println!("{:<8} {:<10} total/bound", "bound", "value");
    for (kind, name) in KIND_NAMES {
        let ratio = match report.ratio(kind) {
            RatioValue::Finite(r) => r.to_string(),
            RatioValue::Infinite => "inf".into(),
        };
        println!("{:<8} {:<10} {ratio}", name, report.bounds.get(kind).value.to_string());
    }
}

fn mech_json(spec: &str, system: &SetSystem, report: &FrugalityReport) -> serde_json::Value {
    let ratio_value = |kind| match report.ratio(kind) {
        RatioValue::Finite(r) => serde_json::Value::String(r.to_string()),
        RatioValue::Infinite => serde_json::Value::String("inf".into()),
    };
    serde_json::json!({
        "instance": spec,
        "rule": report.rule.to_string(),
        "selected": report.outcome.selected.iter().map(|&e| system.label(e)).collect::<Vec<_>>(),
        "allocation_cost": report.outcome.allocation_cost.to_string(),
        "payments": serde_json::Value::Object(
            report.outcome.payments.iter()
                .map(|(&e, p)| (system.label(e), serde_json::Value::String(p.to_string())))
                .collect(),
        ),
        "total": report.outcome.total.to_string(),
        "max_degree": report.max_degree,
        "bounds": {
            "tumin": report.bounds.tumin.value.to_string(),
            "ntumin": report.bounds.ntumin.value.to_string(),
            "ntumax": report.bounds.ntumax.value.to_string(),
            "tumax": report.bounds.tumax.value.to_string(),
        },
        "ratios": {
            "phi_ntumin": ratio_value(BoundKind::NtuMin),
            "phi_ntumax": ratio_value(BoundKind::NtuMax),
            "phi_tumin": ratio_value(BoundKind::TuMin),
            "phi_tumax": ratio_value(BoundKind::TuMax),
        },
    })
}

fn cmd_mech(args: MechArgs) -> Result<ExitCode, Error> {
    let caps = resolve_caps(&args.common.caps, Caps::default())?;
    let rule: Rule = args.rule.parse()?;
    let mut json_reports = Vec::new();
    if args.common.format == Format::Csv {
        println!("{CSV_HEADER}");
    }
    for (i, spec) in args.instance.iter().enumerate() {
        let (system, costs) = resolve_instance(spec)?;
        let report = frugality(&rule, &system, &costs, &caps)?;
        match args.common.format {
            Format::Table => {
                if i > 0 {
                    println!();
                }
                print_mech_table(spec, &system, &report);
            }
            Format::Json => json_reports.push(mech_json(spec, &system, &report)),
            Format::Csv => println!("{}", CsvRow::from_report(spec.clone(), &report).to_line()),
        }
    }
    if args.common.format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&serde_json::Value::Array(json_reports)).expect("serializable"));
    }
    Ok(ExitCode::SUCCESS)
}

fn suite_json(reports: &[CriterionReport]) -> serde_json::Value {
    serde_json::json!({
        "criteria": reports.iter().map(|r| serde_json::json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed,
            "detail": r.detail,
        })).collect::<Vec<_>>(),
        "rows": reports.iter().flat_map(|r| r.rows.iter().map(|row| row.to_line())).collect::<Vec<_>>(),
    })
}

fn cmd_suite(args: SuiteArgs) -> Result<ExitCode, Error> {
    let ids: Vec<usize> = if args.only.is_empty() {
        (1..=CRITERIA.len()).collect()
    } else {
        args.only
            .iter()
            .map(|token| {
                frugality::criterion_id(token).ok_or_else(|| {
                    Error::InvalidInstance(format!(
                        "unknown criterion `{token}`; valid names: {}",
                        CRITERIA.join(", ")
                    ))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let mut config = SuiteConfig {
        sweep: args.sweep,
        seed: args.seeds,
        caps: resolve_caps(&args.common.caps, suite_caps())?,
        ..SuiteConfig::default()
    };
    if let Some(delta) = args.delta {
        config.audit_deltas = vec![delta];
    }
    if let Some(rule) = &args.rule {
        config.audit_rules = vec![rule.parse()?];
    }

    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        let report = run_criterion(id, &config)?;
        if args.common.format == Format::Table {
            let verdict = if report.passed { "PASS" } else { "FAIL" };
            println!("criterion {} ({}): {verdict} — {}", report.id, report.name, report.detail);
        }
        reports.push(report);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    match args.common.format {
        Format::Table => println!("{} criteria run, {passed} passed", reports.len()),
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&suite_json(&reports)).expect("serializable"))
        }
        Format::Csv => {
            println!("{CSV_HEADER}");
            for report in &reports {
                for row in &report.rows {
                    println!("{}", row.to_line());
                }
            }
        }
    }
    if let Some(path) = &args.csv {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for report in &reports {
            for row in &report.rows {
                out.push_str(&row.to_line());
                out.push('\n');
            }
        }
        std::fs::write(path, out)
            .map_err(|e| Error::InvalidInstance(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if passed == reports.len() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

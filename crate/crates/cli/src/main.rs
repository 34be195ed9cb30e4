use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use kmreduce::config::ConfigFile;
use kmreduce::report::ParamsJson;
use kmreduce::suite::{exit_code, run_degenerations, run_params, run_suite};
use kmreduce::{radius_sweep, render_sweep, SuiteConfig, SuiteReport};
use kmreduce_core::identities::{list_identities, IdentityId, SlotKind};
use kmreduce_core::sampler::sample_at;
use serde_json::json;

#[derive(Parser)]
#[command(name = "kmreduce", version, about = "Numerical checks of multilateral U(n) series identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the identity registry.
    List {
        /// Also write the registry as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check one identity on sampled or supplied parameters.
    Check {
        #[arg(long)]
        id: String,
        /// JSON parameter set (or array of sets) instead of sampling.
        #[arg(long)]
        params: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the seeded suite over the selected identities.
    Suite {
        /// Comma-separated identity ids; all when omitted.
        #[arg(long, value_delimiter = ',')]
        id: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate the error against the truncation radius.
    Sweep {
        #[arg(long)]
        id: String,
        /// Comma-separated radii.
        #[arg(long, value_delimiter = ',', default_value = "4,8,12,16,20,24")]
        radii: Vec<u32>,
        /// Index of the sampled parameter set.
        #[arg(long, default_value_t = 0)]
        sample: u64,
        #[arg(long)]
        params: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the documented degenerate cases.
    Degenerations {
        #[arg(long, value_delimiter = ',')]
        id: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "prec-bits")]
    prec_bits: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long)]
    samples: Option<usize>,
    /// TOML config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Classical identities: sample terminating parameters (default true).
    #[arg(long, value_name = "BOOL")]
    terminating: Option<bool>,
    /// Run checks one at a time.
    #[arg(long)]
    serial: bool,
}

impl Common {
    fn resolve(&self, ids: &[String]) -> Result<SuiteConfig> {
        let mut file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        if !ids.is_empty() {
            file.identities = Some(kmreduce::IdentityFilter::List(ids.to_vec()));
        }
        if let Some(s) = self.seed {
            file.sampler.seed = Some(s);
        }
        if let Some(b) = self.prec_bits {
            file.precision_bits = Some(b);
        }
        if let Some(t) = self.tol {
            file.tolerance = Some(t);
        }
        if let Some(r) = self.radius {
            file.truncation.radius = Some(r);
        }
        if let Some(n) = self.samples {
            file.samples = Some(n);
        }
        if let Some(t) = self.terminating {
            file.sampler.terminating = Some(t);
        }
        if self.serial {
            file.parallel = Some(false);
        }
        if let Some(o) = &self.out {
            file.output = Some(o.clone());
        }
        file.resolve()
    }
}

fn write_report(report: &SuiteReport, out: Option<&Path>) -> Result<()> {
    for r in &report.reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let detail = match (&r.rel_error, &r.error) {
            (_, Some(e)) => format!("error: {e}"),
            (Some(e), None) => format!("rel_error {e}"),
            (None, None) => String::new(),
        };
        println!("{status} {:<22} {:<14} {detail}", r.id, r.sample);
    }
    for g in &report.summary.groups {
        println!(
            "  {:<22} {}/{} passed, worst rel_error {}",
            g.id,
            g.passed,
            g.checks,
            g.worst_rel_error.as_deref().unwrap_or("-")
        );
    }
    let s = &report.summary;
    println!("{}/{} checks passed in {} ms", s.passed, s.checks, s.wall_time_ms);
    if let Some(p) = out {
        std::fs::write(p, report.to_json() + "\n").with_context(|| format!("writing {}", p.display()))?;
        println!("report written to {}", p.display());
    }
    Ok(())
}

fn read_params(path: &Path) -> Result<Vec<ParamsJson>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    Ok(match v {
        serde_json::Value::Array(items) => {
            items.into_iter().map(serde_json::from_value).collect::<std::result::Result<_, _>>()?
        }
        other => vec![serde_json::from_value(other)?],
    })
}

fn list(out: Option<&Path>) -> Result<()> {
    let mut entries = Vec::new();
    for d in list_identities() {
        let slots: Vec<String> = d
            .schema
            .slots
            .iter()
            .map(|s| match s.kind {
                SlotKind::Dim => s.name.to_string(),
                SlotKind::Scalar => s.name.to_string(),
                SlotKind::Vector(_) | SlotKind::Ints(_) => format!("{}[]", s.name),
            })
            .collect();
        let mode = if d.id.is_classical() { "classical" } else { "q" };
        println!("{:<22} {:<9} {}", d.id.as_str(), mode, d.anchor);
        println!("    params: {}", slots.join(" "));
        for c in &d.constraints {
            println!("    {:<24} {}", c.kind.as_str(), c.expression);
        }
        entries.push(json!({
            "id": d.id.as_str(),
            "mode": mode,
            "anchor": d.anchor,
            "dependent": d.dependent,
            "params": slots,
            "constraints": d.constraints.iter().map(|c| json!({
                "kind": c.kind.as_str(),
                "expression": c.expression,
            })).collect::<Vec<_>>(),
        }));
    }
    if let Some(p) = out {
        let doc = json!({ "schema_version": kmreduce::SCHEMA_VERSION, "identities": entries });
        std::fs::write(p, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::List { out } => {
            list(out.as_deref())?;
            Ok(0)
        }
        Cmd::Check { id, params, common } => {
            let cfg = common.resolve(std::slice::from_ref(&id))?;
            let ident: IdentityId = id.parse()?;
            let report = match params {
                Some(p) => {
                    let sets = read_params(&p)?.iter().map(ParamsJson::to_params).collect::<Result<Vec<_>>>()?;
                    run_params(ident, &sets, &cfg)?
                }
                None => run_suite(&cfg)?,
            };
            write_report(&report, cfg.output.as_deref())?;
            Ok(exit_code(&report))
        }
        Cmd::Suite { id, common } => {
            let cfg = common.resolve(&id)?;
            let report = run_suite(&cfg)?;
            write_report(&report, cfg.output.as_deref())?;
            Ok(exit_code(&report))
        }
        Cmd::Degenerations { id, common } => {
            let cfg = common.resolve(&id)?;
            let report = run_degenerations(&cfg)?;
            write_report(&report, cfg.output.as_deref())?;
            Ok(exit_code(&report))
        }
        Cmd::Sweep { id, radii, sample, params, common } => {
            let cfg = common.resolve(std::slice::from_ref(&id))?;
            let ident: IdentityId = id.parse()?;
            let ps = match params {
                Some(p) => match read_params(&p)?.as_slice() {
                    [one] => one.to_params()?,
                    _ => bail!("sweep takes exactly one parameter set"),
                },
                None => sample_at(ident, &cfg.sampler, sample)?,
            };
            let rows = radius_sweep(ident, &ps, &cfg.policy, &radii)?;
            print!("{}", render_sweep(&rows));
            if let Some(p) = &cfg.output {
                let doc = json!({
                    "schema_version": kmreduce::SCHEMA_VERSION,
                    "id": ident.as_str(),
                    "params": ParamsJson::from_params(&ps),
                    "rows": rows.iter().map(|r| json!({
                        "radius": r.radius,
                        "value": kmreduce::report::Complex::from_value(&r.value),
                        "abs_error": kmreduce::report::real_str(r.abs_error),
                        "rel_error": kmreduce::report::real_str(r.rel_error),
                        "shell_tail": kmreduce::report::real_str(r.shell_tail),
                        "converged": r.converged,
                    })).collect::<Vec<_>>(),
                });
                std::fs::write(p, serde_json::to_string_pretty(&doc)? + "\n")?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

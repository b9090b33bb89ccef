//! Command-line front-end for the `hironaka` rewriting engine.
//!
//! Every command produces a [`Report`], an ordered list of key/value pairs
//! rendered either for reading (`plain`) or one `key=value` per line (`kv`).

use std::fmt::{self, Display};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hironaka::ars::{self, ArsProperties, Conversion};
use hironaka::rewrite::{
    cofactors, confluence_probe, congruence_test, falsify_standard_basis, normalize_with,
    CertificateSource, MembershipVerdict,
};
use hironaka::text::{parse_rules, parse_series};
use hironaka::{MonomialOrder, RuleSet, Strategy, TruncatedSeries};

#[derive(Parser, Debug)]
#[command(
    name = "hironaka",
    version,
    about = "Exact rewriting of formal power series"
)]
pub struct Cli {
    #[command(flatten)]
    pub session: SessionArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SessionArgs {
    /// Number of variables x1..xn.
    #[arg(long = "vars", global = true)]
    pub vars: Option<usize>,
    /// Monomial order.
    #[arg(long, global = true, default_value = "deglex")]
    pub order: String,
    /// Working precision: coefficients below this total degree are exact.
    #[arg(long = "prec", global = true)]
    pub prec: Option<u64>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Rule file, one series per line.
    #[arg(long, global = true)]
    pub rules: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = ReportMode::Plain)]
    pub report: ReportMode,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Normalize a series and print the reduction trace.
    Nf { series: String },
    /// Normalize a series and print the cofactors of the chain.
    Cofactors { series: String },
    /// Test whether a series lies in the ideal generated by the rules.
    Member {
        series: String,
        /// Treat the rules as a standard basis, so a nonzero normal form
        /// proves non-membership.
        #[arg(long)]
        assume_sb: bool,
    },
    /// Test whether two series are congruent modulo the rules.
    Congruent {
        f: String,
        g: String,
        #[arg(long)]
        assume_sb: bool,
    },
    /// Distance 2^-val(f - g) between two series.
    Delta { f: String, g: String },
    /// Search for evidence that the rules are not a standard basis.
    CheckSb {
        /// Random combinations tried after the pairwise phase.
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Normalize under several random strategies and compare the results.
    Probe {
        series: String,
        /// Number of strategies; seeds are consecutive from `--seed`.
        #[arg(long, default_value_t = 5)]
        strategies: u64,
    },
    /// Finite abstract rewriting systems.
    #[command(subcommand)]
    Ars(ArsCommand),
}

#[derive(Subcommand, Debug, Clone)]
pub enum ArsCommand {
    /// Decide the normal-form properties of a system file.
    Check { system: PathBuf },
    /// Remove the valleys of a conversion between normal forms.
    Valleys {
        system: PathBuf,
        /// e.g. `4 <- 0 -> 2 <- 1 -> 4`
        conversion: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportMode {
    #[default]
    Plain,
    Kv,
}

/// Validated session settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    pub vars: Option<usize>,
    pub order: MonomialOrder,
    pub prec: Option<u64>,
    pub seed: Option<u64>,
    pub rules: Option<PathBuf>,
    pub report: ReportMode,
}

impl SessionConfig {
    pub fn from_args(args: &SessionArgs) -> Result<Self> {
        let order = MonomialOrder::from_name(&args.order)
            .ok_or_else(|| anyhow!("unknown order `{}` (supported: deglex)", args.order))?;
        if args.vars == Some(0) {
            bail!("--vars must be at least 1");
        }
        if args.prec == Some(0) {
            bail!("--prec must be at least 1");
        }
        Ok(SessionConfig {
            vars: args.vars,
            order,
            prec: args.prec,
            seed: args.seed,
            rules: args.rules.clone(),
            report: args.report,
        })
    }

    fn vars(&self) -> Result<usize> {
        self.vars.context("this command needs --vars")
    }

    fn prec(&self) -> Result<u64> {
        self.prec.context("this command needs --prec")
    }

    fn seed(&self) -> Result<u64> {
        self.seed
            .context("this command is randomized and needs --seed")
    }

    fn series(&self, text: &str) -> Result<TruncatedSeries> {
        parse_series(text, self.vars()?).with_context(|| format!("parsing `{text}`"))
    }

    fn rule_set(&self) -> Result<RuleSet> {
        let path = self
            .rules
            .as_deref()
            .context("this command needs --rules")?;
        let text = read(path)?;
        parse_rules(&text, self.vars()?, self.order)
            .with_context(|| format!("rule file {}", path.display()))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Ordered key/value output of a command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self, mode: ReportMode) -> String {
        let sep = match mode {
            ReportMode::Plain => ": ",
            ReportMode::Kv => "=",
        };
        self.entries
            .iter()
            .map(|(k, v)| format!("{k}{sep}{v}\n"))
            .collect()
    }
}

fn push_flags(r: &mut Report, p: &ArsProperties) {
    r.push("normalising", p.normalising);
    r.push("nf_property", p.nf_property);
    r.push("unique_nf_property", p.unique_nf_property);
    r.push("unique_nf_reached", p.unique_nf_reached);
    r.push("confluent", p.confluent);
    r.push("anti_reflexive", p.anti_reflexive);
}

struct Source<'a>(&'a CertificateSource);

impl fmt::Display for Source<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            CertificateSource::Pairwise(i, j) => write!(f, "pairwise {i} {j}"),
            CertificateSource::RandomTrial(k) => write!(f, "trial {k}"),
        }
    }
}

fn push_cofactors(r: &mut Report, q: &[TruncatedSeries]) {
    for (k, qi) in q.iter().enumerate() {
        r.push(format!("q.{}", k + 1), qi);
    }
}

fn push_verdict(r: &mut Report, verdict: MembershipVerdict) {
    match verdict {
        MembershipVerdict::Member { cofactors } => {
            r.push("verdict", "member");
            push_cofactors(r, &cofactors);
        }
        MembershipVerdict::NotMember {
            normal_form_witness,
        } => {
            r.push("verdict", "not-member");
            r.push("normal_form", normal_form_witness);
        }
        MembershipVerdict::UnknownAtPrecision { residual } => {
            r.push("verdict", "unknown");
            r.push("residual", residual);
        }
    }
}

/// Executes one command. Errors carry the diagnostic for the caller to print.
pub fn run_command(cfg: &SessionConfig, command: &Command) -> Result<Report> {
    let mut r = Report::default();
    match command {
        Command::Nf { series } => {
            let f = cfg.series(series)?;
            let rules = cfg.rule_set()?;
            let prec = cfg.prec()?;
            let strategy = cfg.seed.map_or(Strategy::Canonical, Strategy::Seeded);
            let trace = normalize_with(&f, &rules, prec, strategy)?;
            r.push("command", "nf");
            r.push("start", &trace.start);
            r.push("rules", rules.len());
            r.push("target", prec);
            r.push(
                "strategy",
                match strategy {
                    Strategy::Canonical => "canonical".to_string(),
                    Strategy::Seeded(s) => format!("seeded {s}"),
                },
            );
            r.push("steps", trace.steps.len());
            for (k, step) in trace.steps.iter().enumerate() {
                r.push(format!("step.{}", k + 1), step);
            }
            r.push("normal_form", &trace.end);
            r.push("end_precision", trace.end_precision());
        }
        Command::Cofactors { series } => {
            let f = cfg.series(series)?;
            let rules = cfg.rule_set()?;
            let trace = normalize_with(&f, &rules, cfg.prec()?, Strategy::Canonical)?;
            let q = cofactors(&trace, &rules)?;
            r.push("command", "cofactors");
            r.push("start", &trace.start);
            r.push("normal_form", &trace.end);
            r.push("end_precision", trace.end_precision());
            push_cofactors(&mut r, &q);
        }
        Command::Member { series, assume_sb } => {
            let f = cfg.series(series)?;
            let zero = TruncatedSeries::zero(f.nvars());
            let verdict = congruence_test(&f, &zero, &cfg.rule_set()?, cfg.prec()?, *assume_sb)?;
            r.push("command", "member");
            r.push("series", &f);
            push_verdict(&mut r, verdict);
        }
        Command::Congruent { f, g, assume_sb } => {
            let (f, g) = (cfg.series(f)?, cfg.series(g)?);
            let verdict = congruence_test(&f, &g, &cfg.rule_set()?, cfg.prec()?, *assume_sb)?;
            r.push("command", "congruent");
            r.push("f", &f);
            r.push("g", &g);
            push_verdict(&mut r, verdict);
        }
        Command::Delta { f, g } => {
            let (f, g) = (cfg.series(f)?, cfg.series(g)?);
            let d = f.delta(&g)?;
            r.push("command", "delta");
            r.push("f", &f);
            r.push("g", &g);
            r.push("delta", &d.value);
            r.push("upper_bound", d.upper_bound);
        }
        Command::CheckSb { trials } => {
            let rules = cfg.rule_set()?;
            let (prec, seed) = (cfg.prec()?, cfg.seed()?);
            r.push("command", "check-sb");
            r.push("rules", rules.len());
            r.push("precision", prec);
            r.push("trials", trials);
            r.push("seed", seed);
            match falsify_standard_basis(&rules, prec, *trials, seed) {
                Some(cert) => {
                    r.push("certificate", "found");
                    r.push("source", Source(&cert.source));
                    for (k, m) in cert.multipliers.iter().enumerate() {
                        r.push(format!("multiplier.{}", k + 1), m);
                    }
                    r.push("combination", &cert.combination);
                    r.push("normal_form", &cert.normal_form);
                }
                None => r.push("certificate", "none"),
            }
        }
        Command::Probe { series, strategies } => {
            let f = cfg.series(series)?;
            let rules = cfg.rule_set()?;
            let (prec, seed) = (cfg.prec()?, cfg.seed()?);
            if *strategies == 0 {
                bail!("--strategies must be at least 1");
            }
            let seeds: Vec<u64> = (0..*strategies).map(|k| seed.wrapping_add(k)).collect();
            let report = confluence_probe(&f, &rules, prec, &seeds)?;
            r.push("command", "probe");
            r.push("series", &f);
            r.push("precision", prec);
            for (k, (s, nf)) in report.results.iter().enumerate() {
                r.push(format!("result.{}", k + 1), format_args!("seed {s}: {nf}"));
            }
            for (a, b, d) in &report.distances {
                r.push(format!("delta.{}.{}", a + 1, b + 1), d);
            }
            r.push("max_delta", report.max_distance());
            match report.divergence() {
                Some((a, b, d)) => r.push("divergence", format_args!("{} {} {}", a + 1, b + 1, d)),
                None => r.push("divergence", "none"),
            }
        }
        Command::Ars(ArsCommand::Check { system }) => {
            let sys = ars::parse_system(&read(system)?)
                .with_context(|| format!("system file {}", system.display()))?;
            r.push("command", "ars-check");
            r.push("size", sys.size());
            r.push("edges", sys.edges().count());
            r.push("normal_forms", join(sys.normal_forms()));
            push_flags(&mut r, &sys.check_properties());
        }
        Command::Ars(ArsCommand::Valleys { system, conversion }) => {
            let sys = ars::parse_system(&read(system)?)
                .with_context(|| format!("system file {}", system.display()))?;
            let conv: Conversion = ars::parse_conversion(conversion)?;
            let history = ars::eliminate_valleys_traced(&sys, &conv)?;
            r.push("command", "ars-valleys");
            r.push("input", &conv);
            r.push("valleys", conv.valleys().len());
            for (k, c) in history.iter().enumerate().skip(1) {
                r.push(format!("iteration.{k}"), c);
            }
            r.push("output", history.last().expect("nonempty history"));
        }
    }
    Ok(r)
}

fn join(items: impl IntoIterator<Item = usize>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses arguments, runs the command and renders the report.
pub fn run(cli: &Cli) -> Result<String> {
    let cfg = SessionConfig::from_args(&cli.session)?;
    Ok(run_command(&cfg, &cli.command)?.render(cfg.report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(vars: Option<usize>, prec: Option<u64>, order: &str) -> SessionArgs {
        SessionArgs {
            vars,
            order: order.into(),
            prec,
            seed: None,
            rules: None,
            report: ReportMode::Kv,
        }
    }

    #[test]
    fn config_validation() {
        assert!(SessionConfig::from_args(&args(Some(2), Some(5), "deglex")).is_ok());
        assert!(SessionConfig::from_args(&args(Some(0), None, "deglex")).is_err());
        assert!(SessionConfig::from_args(&args(None, Some(0), "deglex")).is_err());
        assert!(SessionConfig::from_args(&args(None, None, "grevlex")).is_err());
    }

    #[test]
    fn report_rendering() {
        let mut r = Report::default();
        r.push("delta", "1/2");
        r.push("upper_bound", false);
        assert_eq!(r.render(ReportMode::Kv), "delta=1/2\nupper_bound=false\n");
        assert_eq!(
            r.render(ReportMode::Plain),
            "delta: 1/2\nupper_bound: false\n"
        );
        assert_eq!(r.get("delta"), Some("1/2"));
    }
}

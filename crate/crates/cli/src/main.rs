mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use avoid132::algebra::{catalan, gf_from_ed, to_f64};
use avoid132::enumerate::{
    exact_distribution, exact_power_moments, CountMethod, ExactOptions, DEFAULT_CAP,
};
use avoid132::excursion::{sample_excursion_stats, PsiPattern};
use avoid132::expectation::ExpectationEngine;
use avoid132::moments::MomentEngine;
use avoid132::perm::{avoiders_132, parse_pattern};
use avoid132::sampler::sample_scaled_stats;
use avoid132::verify::{run_verification, VerifyOptions};
use avoid132::{Monomial, Pattern, Permutation, Rational};

use config::Config;

#[derive(Parser, Debug)]
#[command(
    name = "avoid132",
    version,
    about = "Pattern statistics of random 132-avoiding permutations"
)]
struct Cli {
    /// Defaults file with `key = value` lines (cap, seed, threads, reps).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for enumeration and sampling.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expectation polynomial E_d X_s and the asymptotic constant A_s.
    Expect {
        pattern: String,
        /// Also print the first K generating-function coefficients.
        #[arg(long, value_name = "K")]
        gf: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Mixed moment of a monomial such as `12^2` or `213*231`.
    Moment {
        monomial: String,
        #[arg(long)]
        json: bool,
    },
    /// Exact finite-n statistics by enumerating every tree.
    Exact {
        /// A size `5` or an inclusive range `1-9`.
        #[arg(long)]
        n: String,
        /// Comma-separated patterns.
        #[arg(long)]
        pattern: String,
        #[arg(long, value_enum, default_value_t = Stat::Mean)]
        stat: Stat,
        /// Highest power for `--stat moments`.
        #[arg(long, default_value_t = 2)]
        max_power: u32,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Naive)]
        method: Method,
        #[arg(long)]
        csv: bool,
    },
    /// Generating-function coefficients of a monomial.
    Gf {
        monomial: String,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Monte Carlo moments of scaled counts on uniform random trees.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long, default_value = "12,213,231,312")]
        patterns: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Write JSON here instead of printing a summary.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo moments of excursion functionals.
    Excursion {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long, default_value = "12,213,231,312")]
        patterns: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Tables of asymptotic constants and second moments.
    Table {
        /// Longest pattern in the constant table.
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the engines against each other; fails on any mismatch.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        random_trees: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Stat {
    Mean,
    Var,
    Moments,
    Dist,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Naive,
    Recursive,
}

/// Bad input from the user; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn is_usage_error(err: &anyhow::Error) -> bool {
    use avoid132::Error as E;
    err.chain().any(|e| {
        e.is::<UsageError>()
            || e.is::<toml::de::Error>()
            || matches!(
                e.downcast_ref::<E>(),
                Some(
                    E::Parse { .. }
                        | E::NotBijective(_)
                        | E::Contains132(_)
                        | E::LengthMismatch(..)
                        | E::CapExceeded { .. }
                        | E::Unsupported(_)
                        | E::InvalidArgument(_)
                )
            )
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| usage(format!("{e:#}")))?,
        None => Config::default(),
    };
    if let Some(t) = cli.threads.or(cfg.threads) {
        if t == 0 {
            return Err(usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("starting thread pool")?;
    }
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Expect { pattern, gf, json } => expect(&mut out, &pattern, gf, json)?,
        Command::Moment { monomial, json } => moment(&mut out, &monomial, json)?,
        Command::Exact {
            n,
            pattern,
            stat,
            max_power,
            cap,
            method,
            csv,
        } => {
            let opts = ExactOptions {
                cap: cap.or(cfg.cap).unwrap_or(DEFAULT_CAP),
                method: match method {
                    Method::Naive => CountMethod::Naive,
                    Method::Recursive => CountMethod::Recursive,
                },
            };
            exact(&mut out, &n, &pattern, stat, max_power, opts, csv)?
        }
        Command::Gf {
            monomial,
            terms,
            csv,
        } => gf(&mut out, &monomial, terms, csv)?,
        Command::Sample {
            n,
            reps,
            patterns,
            seed,
            out: path,
            json,
        } => {
            let pats = parse_list(&patterns)?;
            let stats = sample_scaled_stats(
                n,
                &pats,
                reps.or(cfg.reps).unwrap_or(10_000),
                seed.or(cfg.seed).unwrap_or(0),
            )?;
            let rendered = serde_json::to_string_pretty(&stats)?;
            emit_json_or(&mut out, rendered, path, json, |w| {
                writeln!(
                    w,
                    "n = {}, reps = {}, seed = {}",
                    stats.n, stats.reps, stats.seed
                )?;
                for name in &stats.patterns {
                    let s = &stats.per_pattern[name];
                    writeln!(
                        w,
                        "{name:>6}  mean {:.6} ± {:.6}  var {:.6}  E[.^2] {:.6} ± {:.6}",
                        s.mean, s.se, s.var, s.second_moment, s.second_moment_se
                    )?;
                }
                for c in &stats.covariances {
                    writeln!(
                        w,
                        "{:>6} x {:<6} E[ab] {:.6} ± {:.6}  cov {:.6}",
                        c.a, c.b, c.product_mean, c.product_mean_se, c.covariance
                    )?;
                }
                Ok(())
            })?
        }
        Command::Excursion {
            m,
            reps,
            patterns,
            seed,
            out: path,
            json,
        } => {
            let pats: Vec<PsiPattern> = parse_list(&patterns)?
                .iter()
                .map(PsiPattern::from_permutation)
                .collect::<avoid132::Result<_>>()?;
            let stats = sample_excursion_stats(
                m,
                &pats,
                reps.or(cfg.reps).unwrap_or(1_000),
                seed.or(cfg.seed).unwrap_or(0),
            )?;
            let rendered = serde_json::to_string_pretty(&stats)?;
            emit_json_or(&mut out, rendered, path, json, |w| {
                writeln!(
                    w,
                    "m = {}, reps = {}, seed = {}",
                    stats.m, stats.reps, stats.seed
                )?;
                for name in &stats.patterns {
                    let s = &stats.per_pattern[name];
                    writeln!(
                        w,
                        "{name:>6}  mean {:.6} ± {:.6}  E[.^2] {:.6} ± {:.6}",
                        s.mean, s.se, s.second_moment, s.second_moment_se
                    )?;
                }
                writeln!(
                    w,
                    "largest decomposition error {:.3e}",
                    stats.max_decomposition_error
                )?;
                writeln!(
                    w,
                    "fraction with |Psi_231 - Psi_312| > 0.01: {:.4}",
                    stats.fraction_231_312_apart
                )?;
                Ok(())
            })?
        }
        Command::Table { max_k, json } => table(&mut out, max_k, json)?,
        Command::Verify {
            max_k,
            max_n,
            random_trees,
            seed,
            json,
        } => {
            let opts = VerifyOptions {
                max_k,
                max_n,
                random_trees,
                seed: seed.or(cfg.seed).unwrap_or(0),
            };
            let report = run_verification(opts)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                for c in &report.checks {
                    writeln!(
                        out,
                        "{} {}: {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    )?;
                }
            }
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_list(text: &str) -> Result<Vec<Permutation>> {
    let pats: Vec<Permutation> = text
        .split(',')
        .map(|s| parse_pattern(s.trim()))
        .collect::<avoid132::Result<_>>()?;
    if pats.is_empty() {
        return Err(usage("no patterns given"));
    }
    Ok(pats)
}

fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("bad size {s:?}")))
    };
    match text.split_once('-') {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(usage(format!("empty range {text}")));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![num(text)?]),
    }
}

fn emit_json_or(
    out: &mut impl Write,
    rendered: String,
    path: Option<PathBuf>,
    json: bool,
    text: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(&p, rendered + "\n").with_context(|| format!("writing {}", p.display()))?;
        writeln!(out, "wrote {}", p.display())?;
    } else if json {
        writeln!(out, "{rendered}")?;
    } else {
        text(out)?;
    }
    Ok(())
}

fn superscript(k: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize])
        .collect()
}

/// `E Λ²` for a single pattern, `E Λ_12 Λ_213` otherwise.
fn moment_label(m: &Monomial) -> String {
    let factors: Vec<(&Permutation, u32)> = m.factors().collect();
    let power = |k: u32| {
        if k == 1 {
            String::new()
        } else {
            superscript(k)
        }
    };
    if let [(_, k)] = factors.as_slice() {
        return format!("E Λ{}", power(*k));
    }
    let parts: Vec<String> = factors
        .iter()
        .map(|(s, k)| format!("Λ_{s}{}", power(*k)))
        .collect();
    format!("E {}", parts.join(" "))
}

fn expect(out: &mut impl Write, text: &str, gf_terms: Option<usize>, json: bool) -> Result<()> {
    let sigma = parse_pattern(text)?;
    let pat = Pattern::avoiding_132(sigma.clone())?;
    let mut eng = ExpectationEngine::new();
    let f = eng.ed_expectation(&sigma)?;
    let e = eng.leading_coeff(&sigma)?;
    let a = eng.asymptotic_constant(&sigma)?;
    let coeffs = match gf_terms {
        Some(k) => gf_from_ed(&f, k)?
            .coeffs()
            .iter()
            .skip(1)
            .take(k)
            .cloned()
            .collect(),
        None => Vec::new(),
    };
    if json {
        let value = json!({
            "pattern": sigma.to_string(),
            "lambda": pat.lambda(),
            "polynomial": f.format_with(" "),
            "terms": f.to_json_map(),
            "leading_coefficient": e.to_string(),
            "constant": a.to_json(),
            "gf": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        return Ok(());
    }
    writeln!(out, "E_d X_{sigma} = {}", f.format_with(" "))?;
    writeln!(out, "lambda = {}", pat.lambda())?;
    writeln!(out, "e = {e}")?;
    writeln!(out, "A = {a}")?;
    writeln!(out, "A ≈ {:.12}", a.to_f64())?;
    for (i, c) in coeffs.iter().enumerate() {
        writeln!(out, "[x^{}] = {c}", i + 1)?;
    }
    Ok(())
}

fn moment(out: &mut impl Write, text: &str, json: bool) -> Result<()> {
    let m: Monomial = text.parse()?;
    if m.is_one() {
        return Err(usage("empty monomial"));
    }
    let mut eng = MomentEngine::new();
    let f = eng.ed_monomial(&m)?;
    let a = eng.asymptotic_mixed(&m)?;
    if json {
        let value = json!({
            "monomial": m.to_string(),
            "weight": m.weight(),
            "polynomial": f.format_with(" "),
            "terms": f.to_json_map(),
            "constant": a.to_json(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        return Ok(());
    }
    writeln!(out, "E_d [{m}] = {}", f.format_with(" "))?;
    writeln!(out, "{} = {}", moment_label(&m), a.value())?;
    writeln!(out, "decimal ≈ {:.12}", a.to_f64())?;
    writeln!(out, "n-exponent = {}", a.n_exponent)?;
    Ok(())
}

fn exact(
    out: &mut impl Write,
    sizes: &str,
    patterns: &str,
    stat: Stat,
    max_power: u32,
    opts: ExactOptions,
    csv_out: bool,
) -> Result<()> {
    let sizes = parse_sizes(sizes)?;
    let pats = parse_list(patterns)?;
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut lines = Vec::new();
    match stat {
        Stat::Mean | Stat::Var | Stat::Moments => {
            let power = match stat {
                Stat::Mean => 1,
                Stat::Var => 2,
                _ => max_power.max(1),
            };
            let header: Vec<String> = match stat {
                Stat::Mean => vec!["n".into(), "pattern".into(), "mean".into()],
                Stat::Var => vec![
                    "n".into(),
                    "pattern".into(),
                    "mean".into(),
                    "variance".into(),
                ],
                _ => ["n", "pattern"]
                    .iter()
                    .map(|s| s.to_string())
                    .chain((1..=power).map(|j| format!("m{j}")))
                    .collect(),
            };
            w.write_record(&header)?;
            for &n in &sizes {
                let m = exact_power_moments(&pats, n, power, opts)?;
                for (s, row) in pats.iter().zip(&m) {
                    let values: Vec<Rational> = match stat {
                        Stat::Var => vec![row[0].clone(), &row[1] - &row[0] * &row[0]],
                        _ => row.clone(),
                    };
                    let mut rec = vec![n.to_string(), s.to_string()];
                    rec.extend(values.iter().map(|v| v.to_string()));
                    w.write_record(&rec)?;
                    let named: Vec<String> = header[2..]
                        .iter()
                        .zip(&values)
                        .map(|(h, v)| format!("{h} = {v} (≈ {:.6})", to_f64(v)))
                        .collect();
                    lines.push(format!("n = {n}, {s}: {}", named.join(", ")));
                }
            }
        }
        Stat::Dist => {
            w.write_record(["n", "pattern", "count", "trees"])?;
            for &n in &sizes {
                for s in &pats {
                    let dist = exact_distribution(s, n, opts)?;
                    let parts: Vec<String> = dist.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                    lines.push(format!("n = {n}, {s}: {{{}}}", parts.join(", ")));
                    for (k, v) in dist {
                        w.write_record(&[
                            n.to_string(),
                            s.to_string(),
                            k.to_string(),
                            v.to_string(),
                        ])?;
                    }
                }
            }
        }
    }
    if csv_out {
        out.write_all(&w.into_inner().context("flushing csv")?)?;
    } else {
        for l in lines {
            writeln!(out, "{l}")?;
        }
    }
    Ok(())
}

fn gf(out: &mut impl Write, text: &str, terms: usize, csv_out: bool) -> Result<()> {
    let m: Monomial = text.parse()?;
    if terms == 0 {
        bail!(usage("--terms must be positive"));
    }
    let f = MomentEngine::new().ed_monomial(&m)?;
    let series = gf_from_ed(&f, terms)?;
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(["n", "coefficient", "catalan", "mean"])?;
    for n in 1..=terms {
        let c = series.coeff(n);
        let cat = catalan(n);
        let mean = &c / Rational::from_integer(cat.clone().into());
        if csv_out {
            w.write_record(&[
                n.to_string(),
                c.to_string(),
                cat.to_string(),
                mean.to_string(),
            ])?;
        } else {
            writeln!(out, "n = {n:>3}  [x^n] = {c}  C_n = {cat}  E = {mean}")?;
        }
    }
    if csv_out {
        out.write_all(&w.into_inner().context("flushing csv")?)?;
    }
    Ok(())
}

fn table(out: &mut impl Write, max_k: usize, json: bool) -> Result<()> {
    if max_k == 0 {
        return Err(usage("--max-k must be positive"));
    }
    let mut ex = ExpectationEngine::new();
    let mut mom = MomentEngine::new();
    let mut constants = Vec::new();
    for k in 1..=max_k {
        for s in avoiders_132(k) {
            let a = ex.asymptotic_constant(&s)?;
            constants.push((s.clone(), Pattern::new(s)?.lambda(), a));
        }
    }
    let core: Vec<Permutation> = ["12", "123", "213", "231", "312"]
        .iter()
        .map(|s| parse_pattern(s))
        .collect::<avoid132::Result<_>>()?;
    let mut matrix = Vec::new();
    for a in &core {
        let mut row = Vec::new();
        for b in &core {
            let m = Monomial::single(a.clone()).product(&Monomial::single(b.clone()));
            row.push(mom.asymptotic_mixed(&m)?.value());
        }
        matrix.push(row);
    }
    let var12 = mom.asymptotic_variance(&core[0])?;
    if json {
        let value = json!({
            "constants": constants.iter().map(|(s, l, a)| json!({
                "pattern": s.to_string(), "lambda": l, "constant": a.to_json(),
            })).collect::<Vec<_>>(),
            "patterns": core.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "second_moments": matrix.iter().map(|r| r.iter().map(|c| c.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "variance_12": { "exact": var12.to_string(), "decimal": var12.to_f64() },
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        return Ok(());
    }
    writeln!(
        out,
        "{:<8} {:>6}  {:<28} {:>14}",
        "pattern", "lambda", "A", "decimal"
    )?;
    for (s, l, a) in &constants {
        writeln!(
            out,
            "{:<8} {:>6}  {:<28} {:>14.10}",
            s.to_string(),
            l,
            a.to_string(),
            a.to_f64()
        )?;
    }
    writeln!(out)?;
    writeln!(out, "E Λ_a Λ_b")?;
    write!(out, "{:<6}", "")?;
    for b in &core {
        write!(out, " {:>16}", b.to_string())?;
    }
    writeln!(out)?;
    for (a, row) in core.iter().zip(&matrix) {
        write!(out, "{:<6}", a.to_string())?;
        for c in row {
            write!(out, " {:>16}", c.to_string())?;
        }
        writeln!(out)?;
    }
    writeln!(out)?;
    writeln!(out, "Var Λ_12 = {var12} ≈ {:.10}", var12.to_f64())?;
    Ok(())
}

mod args;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use equilab::chargroup::{compose_tuple, CompositeModulus, DirichletCharacter, PrimePowerModulus};
use equilab::charsum::{
    composite_bound_check, prop1_check, weil_check, AuditStatus, CharSumResult,
};
use equilab::families::{
    check_nice, good_primes_in_range, is_good_prime, FamilyError, GoodPrimeReport, NiceFamily,
};
use equilab::lab::{self, ExperimentConfig};
use equilab::multfun::{
    semismooth_count, MultiplicativeFunction, SieveConfig, DEFAULT_SEGMENT_WIDTH,
};
use equilab::polynomials::IntPolynomial;
use equilab::Error;

use args::{parse_choices, parse_classes, parse_family, parse_list, parse_range, parse_u64};

/// Largest number of character tuples an audit enumerates per modulus.
const MAX_AUDIT_TUPLES: u64 = 1_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "equilab",
    version,
    about = "Character sum audits and residue class experiments"
)]
struct Cli {
    /// Worker threads (defaults to all cores). Never changes a reported number.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here, with a manifest next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Brute,
    Chars,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that the prime polynomials form a nice family.
    CheckFamily {
        #[arg(long, alias = "family")]
        polys: String,
    },
    /// List good primes in a range.
    GoodPrimes {
        #[arg(long, alias = "polys")]
        family: String,
        #[arg(long, value_parser = parse_range)]
        p_range: (u64, u64),
    },
    /// Audit character sum bounds modulo p^m for primes in a range, or modulo a composite q.
    CharsumAudit {
        #[arg(long, alias = "polys")]
        family: String,
        #[arg(long, value_parser = parse_range)]
        p_range: Option<(u64, u64)>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_parser = parse_u64)]
        q: Option<u64>,
        /// Every character tuple instead of the generator tuples.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Count V: J-tuples of units whose F_k-value products hit the targets.
    Vm {
        #[arg(long, value_parser = parse_u64)]
        q: u64,
        #[arg(long, alias = "polys")]
        family: String,
        #[arg(long = "J")]
        j: u32,
        /// Target units u_k.
        #[arg(long)]
        u: Option<String>,
        /// With --a, targets u_k = f_k(m)^-1 a_k.
        #[arg(long, value_parser = parse_u64)]
        m: Option<u64>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Also report the main term and the guaranteed error bound.
        #[arg(long)]
        claim: bool,
    },
    /// Joint distribution of (f_1(n), ..., f_K(n)) mod q over n <= x.
    Equidist {
        #[arg(long, value_parser = parse_u64)]
        x: u64,
        #[arg(long, value_parser = parse_u64)]
        q: u64,
        #[arg(long, alias = "polys")]
        family: String,
        /// Classes to report, e.g. `1,1,1;2,3,5`.
        #[arg(long)]
        a: Option<String>,
        #[arg(long, value_parser = parse_u64)]
        segment_width: Option<u64>,
    },
    /// Count n <= x whose J-th largest prime factor is at most y.
    Semismooth {
        #[arg(long, value_parser = parse_u64)]
        x: u64,
        #[arg(long, value_parser = parse_u64)]
        y: u64,
        #[arg(long = "J")]
        j: u32,
        #[arg(long, value_parser = parse_u64)]
        segment_width: Option<u64>,
    },
    /// Sift (u, v] by one class per prime.
    Sift {
        #[arg(long, value_parser = parse_u64, default_value = "0")]
        u: u64,
        #[arg(long, value_parser = parse_u64)]
        v: u64,
        #[arg(long, value_parser = parse_u64)]
        z: u64,
        /// Remove n = a mod p for every prime p <= z.
        #[arg(long, value_parser = parse_u64, default_value = "0", conflicts_with = "choices")]
        a: u64,
        /// JSON map of forbidden classes, e.g. `{"2": 0, "3": 1}`.
        #[arg(long)]
        choices: Option<String>,
    },
    /// Count n <= x with f_1(n) ... f_K(n) coprime to q against the lower bound.
    CoprimeLower {
        #[arg(long, value_parser = parse_u64)]
        x: u64,
        #[arg(long, value_parser = parse_u64)]
        q: u64,
        #[arg(long, alias = "polys")]
        family: String,
    },
    /// Primes n = p0 mod p overloading one class tuple mod a small prime p.
    RangeLimit {
        #[arg(long, value_parser = parse_u64)]
        x: u64,
        #[arg(long, alias = "polys")]
        family: String,
        #[arg(long, value_parser = parse_u64)]
        p0: u64,
        #[arg(long, value_parser = parse_u64)]
        p: Option<u64>,
    },
    /// Run again from a manifest. A global --out or --threads overrides the recorded one.
    Rerun { manifest: PathBuf },
}

/// Written next to every report.
#[derive(Debug, Serialize, Deserialize)]
struct RunManifest {
    subcommand: String,
    /// Arguments after the program name, without --out.
    args: Vec<String>,
    threads: Option<usize>,
    version: String,
    wall_time_secs: f64,
    outputs: Vec<PathBuf>,
    exit_code: u8,
}

struct Outcome {
    body: String,
    summary: String,
    violation: bool,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn family_polys(tokens: &str) -> Result<(Vec<MultiplicativeFunction>, Vec<IntPolynomial>)> {
    let functions = parse_family(tokens).map_err(|e| anyhow!(e))?;
    if functions.is_empty() {
        bail!("empty family");
    }
    let polys = functions.iter().map(|f| f.prime_poly().clone()).collect();
    Ok((functions, polys))
}

fn nice_family(tokens: &str) -> Result<(Vec<MultiplicativeFunction>, NiceFamily)> {
    let (functions, polys) = family_polys(tokens)?;
    let fam = NiceFamily::new(polys).map_err(|e| anyhow!("{e}"))?;
    Ok((functions, fam))
}

fn json_only(format: Format) -> Result<()> {
    if format == Format::Csv {
        bail!("CSV output is only available for equidist");
    }
    Ok(())
}

#[derive(Serialize)]
struct FamilyReport {
    family: Vec<String>,
    nice: bool,
    polys: Vec<IntPolynomial>,
    degree_sum: Option<usize>,
    d_main: Option<usize>,
    discriminant: Option<String>,
    violations: Vec<String>,
}

fn cmd_check_family(tokens: &str) -> Result<Outcome> {
    let (functions, polys) = family_polys(tokens)?;
    let names: Vec<String> = functions.iter().map(|f| f.name().to_string()).collect();
    let report = match check_nice(polys.clone()) {
        Ok(fam) => FamilyReport {
            family: names,
            nice: true,
            polys,
            degree_sum: Some(fam.degree_sum()),
            d_main: Some(fam.d_main()),
            discriminant: Some(fam.discriminant().to_string()),
            violations: vec![],
        },
        Err(e) => FamilyReport {
            family: names,
            nice: false,
            polys,
            degree_sum: None,
            d_main: None,
            discriminant: None,
            violations: match e {
                FamilyError::NotNice(v) => v.iter().map(|x| format!("{x:?}")).collect(),
                other => vec![other.to_string()],
            },
        },
    };
    Ok(Outcome {
        summary: format!("nice: {}", report.nice),
        violation: !report.nice,
        body: to_json(&report)?,
    })
}

#[derive(Serialize)]
struct GoodPrimesReport {
    family: Vec<String>,
    p_range: (u64, u64),
    good_primes: Vec<u64>,
    /// Primes in the range that fail at least one condition.
    rejected: Vec<GoodPrimeReport>,
}

fn cmd_good_primes(tokens: &str, (lo, hi): (u64, u64)) -> Result<Outcome> {
    let (functions, fam) = nice_family(tokens)?;
    let good = good_primes_in_range(&fam, lo, hi);
    let rejected = equilab::arith::primes_up_to(hi)
        .into_iter()
        .filter(|&p| p >= lo)
        .map(|p| is_good_prime(&fam, p))
        .filter(|r| !r.good)
        .collect();
    let report = GoodPrimesReport {
        family: functions.iter().map(|f| f.name().to_string()).collect(),
        p_range: (lo, hi),
        good_primes: good,
        rejected,
    };
    Ok(Outcome {
        summary: format!("{} good primes in [{lo}, {hi}]", report.good_primes.len()),
        violation: false,
        body: to_json(&report)?,
    })
}

#[derive(Serialize)]
struct Skipped {
    modulus: u64,
    reason: String,
}

#[derive(Serialize)]
struct AuditReport {
    family: Vec<String>,
    moduli: Vec<u64>,
    exhaustive: bool,
    checked: u64,
    hypothesis_not_established: u64,
    violations: u64,
    /// Largest `|S| / bound` over checked instances.
    max_ratio: f64,
    skipped: Vec<Skipped>,
    failures: Vec<CharSumResult>,
}

impl AuditReport {
    fn record(&mut self, r: CharSumResult) {
        match r.status {
            AuditStatus::HypothesisNotEstablished => self.hypothesis_not_established += 1,
            status => {
                self.checked += 1;
                if r.bound > 0.0 {
                    self.max_ratio = self.max_ratio.max(r.abs_value / r.bound);
                }
                if status == AuditStatus::Fail {
                    self.violations += 1;
                    self.failures.push(r);
                }
            }
        }
    }
}

/// Exponent vectors over the given group orders, in mixed radix with the
/// first coordinate varying slowest.
fn exponent_vectors(orders: &[u64], exhaustive: bool) -> Result<Vec<Vec<u64>>> {
    if !exhaustive {
        // each coordinate alone at the generator, then all at the generator
        let k = orders.len();
        let mut out: Vec<Vec<u64>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 1 } else { orders[j] }).collect())
            .collect();
        if k > 1 {
            out.push(vec![1; k]);
        }
        return Ok(out);
    }
    let total = orders
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(n))
        .unwrap_or(u64::MAX);
    if total > MAX_AUDIT_TUPLES {
        bail!("{total} character tuples exceed {MAX_AUDIT_TUPLES}; drop --exhaustive or narrow the range");
    }
    let mut out = Vec::with_capacity(total as usize);
    for mut t in 0..total {
        let mut v = vec![0; orders.len()];
        for (slot, &n) in v.iter_mut().zip(orders).rev() {
            *slot = t % n + 1;
            t /= n;
        }
        out.push(v);
    }
    Ok(out)
}

fn cmd_charsum_audit(
    tokens: &str,
    p_range: Option<(u64, u64)>,
    m: u32,
    q: Option<u64>,
    exhaustive: bool,
) -> Result<Outcome> {
    let (functions, polys) = family_polys(tokens)?;
    let mut report = AuditReport {
        family: functions.iter().map(|f| f.name().to_string()).collect(),
        moduli: vec![],
        exhaustive,
        checked: 0,
        hypothesis_not_established: 0,
        violations: 0,
        max_ratio: 0.0,
        skipped: vec![],
        failures: vec![],
    };
    let k = polys.len();
    match (p_range, q) {
        (Some((lo, hi)), None) => {
            if m == 0 {
                bail!("m must be at least 1");
            }
            for p in equilab::arith::primes_up_to(hi)
                .into_iter()
                .filter(|&p| p >= lo && p > 2)
            {
                let modulus = PrimePowerModulus::new(p, m)?;
                report.moduli.push(modulus.modulus());
                let n = modulus.group_order();
                for exps in exponent_vectors(&vec![n; k], exhaustive)? {
                    let chars: Vec<DirichletCharacter> = exps
                        .iter()
                        .map(|&a| DirichletCharacter::new(modulus.clone(), a))
                        .collect();
                    if !chars.iter().any(DirichletCharacter::is_primitive) {
                        continue;
                    }
                    let r = if m == 1 {
                        weil_check(p, &polys, &chars)
                    } else {
                        prop1_check(p, m, &polys, &chars)
                    };
                    match r {
                        Ok(r) => report.record(r),
                        Err(Error::Precondition(reason)) => {
                            report.skipped.push(Skipped {
                                modulus: modulus.modulus(),
                                reason,
                            });
                            if m > 1 {
                                break;
                            }
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
        (None, Some(q)) => {
            let fam = NiceFamily::new(polys).map_err(|e| anyhow!("{e}"))?;
            let md = CompositeModulus::new(q)?;
            report.moduli.push(q);
            let orders: Vec<u64> = (0..k)
                .flat_map(|_| md.locals().iter().map(|l| l.group_order()))
                .collect();
            let w = md.locals().len();
            for exps in exponent_vectors(&orders, exhaustive)? {
                let chars = (0..k)
                    .map(|kk| {
                        md.locals()
                            .iter()
                            .enumerate()
                            .map(|(i, l)| DirichletCharacter::new(l.clone(), exps[kk * w + i]))
                            .collect()
                    })
                    .collect();
                let tuple = compose_tuple(q, chars)?;
                match composite_bound_check(q, &fam, &tuple) {
                    Ok(r) => report.record(r.result),
                    Err(Error::BoundVacuous) => {}
                    Err(Error::Precondition(reason)) => {
                        report.skipped.push(Skipped { modulus: q, reason });
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
        _ => bail!("give exactly one of --p-range and --q"),
    }
    Ok(Outcome {
        summary: format!(
            "{} checked, {} violations, {} skipped moduli",
            report.checked,
            report.violations,
            report.skipped.len()
        ),
        violation: report.violations > 0,
        body: to_json(&report)?,
    })
}

#[derive(Serialize)]
struct VmReport {
    q: u64,
    family: Vec<String>,
    j: u32,
    u: Vec<u64>,
    method: Method,
    brute: Option<u128>,
    chars: Option<lab::CharacterCount>,
    /// Both methods ran and agree to within the rounding budget.
    agree: Option<bool>,
    claim: Option<lab::ClaimAudit>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_vm(
    q: u64,
    tokens: &str,
    j: u32,
    u: Option<&str>,
    m: Option<u64>,
    a: Option<&str>,
    method: Method,
    claim: bool,
) -> Result<Outcome> {
    let (functions, fam) = nice_family(tokens)?;
    let u = match (u, m, a) {
        (Some(u), None, None) => parse_list(u).map_err(|e| anyhow!(e))?,
        (None, Some(m), Some(a)) => {
            lab::target_units(&functions, m, &parse_list(a).map_err(|e| anyhow!(e))?, q)?
        }
        _ => bail!("give either --u or both --m and --a"),
    };
    let brute = match method {
        Method::Brute | Method::Both => Some(lab::vm_bruteforce(q, &fam, &u, j)?),
        Method::Chars => None,
    };
    let chars = match method {
        Method::Chars | Method::Both => Some(lab::vm_via_characters(q, &fam, &u, j)?),
        Method::Brute => None,
    };
    let agree = match (&brute, &chars) {
        (Some(b), Some(c)) => {
            Some((*b as f64 - c.value).abs() <= c.rounding_budget.max(1e-6 * (*b as f64).max(1.0)))
        }
        _ => None,
    };
    let claim = if claim {
        Some(lab::vm_claim_audit(q, &fam, &u, j)?)
    } else {
        None
    };
    let bound_ok = claim.as_ref().is_none_or(|c| c.bound_ok);
    let summary = match (&brute, &chars) {
        (Some(b), Some(c)) => format!("#V = {b} (characters: {:.6})", c.value),
        (Some(b), None) => format!("#V = {b}"),
        (None, Some(c)) => format!("#V ~ {:.6} +- {:.3e}", c.value, c.rounding_budget),
        (None, None) => unreachable!(),
    };
    let report = VmReport {
        q,
        family: functions.iter().map(|f| f.name().to_string()).collect(),
        j,
        u,
        method,
        brute,
        chars,
        agree,
        claim,
    };
    Ok(Outcome {
        summary,
        violation: agree == Some(false) || !bound_ok,
        body: to_json(&report)?,
    })
}

fn segment_width(w: Option<u64>) -> usize {
    w.map_or(DEFAULT_SEGMENT_WIDTH, |w| w.max(1) as usize)
}

fn cmd_equidist(
    x: u64,
    q: u64,
    tokens: &str,
    a: Option<&str>,
    width: Option<u64>,
    format: Format,
) -> Result<Outcome> {
    let (functions, _) = family_polys(tokens)?;
    let mut config = ExperimentConfig::new(x, q, functions);
    config.targets = a.map(parse_classes).transpose().map_err(|e| anyhow!(e))?;
    config.segment_width = segment_width(width);
    let report = lab::joint_distribution(&config)?;
    let conserved = config.targets.is_some()
        || report.counts.0.iter().map(|c| c.1).sum::<u64>() == report.rhs_count;
    Ok(Outcome {
        summary: format!(
            "{} classes, rhs_count {}, max_rel_dev {:.6}, tv {:.6}",
            report.stats.classes,
            report.rhs_count,
            report.stats.max_rel_dev,
            report.stats.tv_distance
        ),
        violation: !conserved,
        body: match format {
            Format::Json => to_json(&report)?,
            Format::Csv => report.to_csv(),
        },
    })
}

fn cmd_semismooth(x: u64, y: u64, j: u32, width: Option<u64>) -> Result<Outcome> {
    let cfg = SieveConfig::default().with_segment_width(segment_width(width));
    let report = semismooth_count(x, y, j, &cfg)?;
    Ok(Outcome {
        summary: format!("count {} (ratio {:.4})", report.count, report.ratio),
        violation: false,
        body: to_json(&report)?,
    })
}

fn cmd_sift(u: u64, v: u64, z: u64, a: u64, choices: Option<&str>) -> Result<Outcome> {
    let choices = match choices {
        Some(c) => parse_choices(c).map_err(|e| anyhow!(e))?,
        None => lab::constant_choices(z, a),
    };
    let report = lab::sifted_interval_count(u, v, z, &choices)?;
    Ok(Outcome {
        summary: format!(
            "count {} vs main term {:.3} (relative error {:.5}, lemma scale {:.5})",
            report.count, report.main_term, report.relative_error, report.lemma_scale
        ),
        violation: false,
        body: to_json(&report)?,
    })
}

fn cmd_coprime_lower(x: u64, q: u64, tokens: &str) -> Result<Outcome> {
    let (functions, _) = family_polys(tokens)?;
    let report = lab::coprime_lower_bound_check(x, q, &functions)?;
    Ok(Outcome {
        summary: format!(
            "count {} vs bound {:.3}: {:?}",
            report.count, report.bound, report.status
        ),
        violation: false,
        body: to_json(&report)?,
    })
}

fn cmd_range_limit(x: u64, tokens: &str, p0: u64, p: Option<u64>) -> Result<Outcome> {
    let (_, polys) = family_polys(tokens)?;
    let report = lab::range_limit_demo(x, &polys, p0, p)?;
    Ok(Outcome {
        summary: format!(
            "p = {}: {} primes = {p0} mod p vs threshold {:.3}",
            report.p, report.lower_count, report.threshold
        ),
        violation: !report.pass,
        body: to_json(&report)?,
    })
}

fn run_command(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Equidist {
            x,
            q,
            family,
            a,
            segment_width,
        } => return cmd_equidist(*x, *q, family, a.as_deref(), *segment_width, cli.format),
        Command::Rerun { .. } => unreachable!(),
        _ => json_only(cli.format)?,
    }
    match &cli.command {
        Command::CheckFamily { polys } => cmd_check_family(polys),
        Command::GoodPrimes { family, p_range } => cmd_good_primes(family, *p_range),
        Command::CharsumAudit {
            family,
            p_range,
            m,
            q,
            exhaustive,
        } => cmd_charsum_audit(family, *p_range, *m, *q, *exhaustive),
        Command::Vm {
            q,
            family,
            j,
            u,
            m,
            a,
            method,
            claim,
        } => cmd_vm(
            *q,
            family,
            *j,
            u.as_deref(),
            *m,
            a.as_deref(),
            *method,
            *claim,
        ),
        Command::Semismooth {
            x,
            y,
            j,
            segment_width,
        } => cmd_semismooth(*x, *y, *j, *segment_width),
        Command::Sift {
            u,
            v,
            z,
            a,
            choices,
        } => cmd_sift(*u, *v, *z, *a, choices.as_deref()),
        Command::CoprimeLower { x, q, family } => cmd_coprime_lower(*x, *q, family),
        Command::RangeLimit { x, family, p0, p } => cmd_range_limit(*x, family, *p0, *p),
        Command::Equidist { .. } | Command::Rerun { .. } => unreachable!(),
    }
}

fn subcommand_name(args: &[String]) -> String {
    args.iter()
        .find(|a| !a.starts_with('-'))
        .cloned()
        .unwrap_or_default()
}

/// Drops `--out` and `--threads` (and their values) from an argument list.
fn strip_run_flags(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--out" || a == "--threads" {
            it.next();
        } else if !(a.starts_with("--out=") || a.starts_with("--threads=")) {
            out.push(a.clone());
        }
    }
    out
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn execute(cli: Cli, args: Vec<String>) -> Result<u8> {
    if let Command::Rerun { manifest } = &cli.command {
        let text = std::fs::read_to_string(manifest)
            .with_context(|| format!("reading {}", manifest.display()))?;
        let recorded: RunManifest = serde_json::from_str(&text).context("parsing manifest")?;
        let mut argv = vec!["equilab".to_string()];
        argv.extend(recorded.args.iter().cloned());
        let mut inner = Cli::try_parse_from(&argv).context("recorded arguments no longer parse")?;
        inner.out = cli
            .out
            .clone()
            .or_else(|| recorded.outputs.first().cloned());
        inner.threads = cli.threads.or(recorded.threads);
        if matches!(inner.command, Command::Rerun { .. }) {
            bail!("a manifest cannot point at another rerun");
        }
        return execute(inner, recorded.args);
    }
    if let Some(n) = cli.threads {
        // a second call in the same process (rerun) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let start = Instant::now();
    let outcome = run_command(&cli)?;
    let code = if outcome.violation { 2 } else { 0 };
    match &cli.out {
        None => print!("{}", outcome.body),
        Some(out) => {
            std::fs::write(out, &outcome.body)
                .with_context(|| format!("writing {}", out.display()))?;
            let out_abs = std::path::absolute(out)?;
            let manifest = RunManifest {
                subcommand: subcommand_name(&args),
                args: strip_run_flags(&args),
                threads: cli.threads,
                version: env!("CARGO_PKG_VERSION").to_string(),
                wall_time_secs: start.elapsed().as_secs_f64(),
                outputs: vec![out_abs],
                exit_code: code,
            };
            std::fs::write(manifest_path(out), to_json(&manifest)?)?;
            println!("{}", outcome.summary);
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli, args[1..].to_vec()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(Error::ComplexityGate(_) | Error::MemoryBudget { .. }) =
                e.downcast_ref::<Error>()
            {
                eprintln!("hint: lower the parameters, raise EQUILAB_MEM_MB, or pass a smaller --segment-width");
            }
            ExitCode::from(1)
        }
    }
}

//! `aperiodic` — words with quantitative aperiodicity gauges from the
//! command line.
//!
//! Exit codes: 0 success (or verdict true), 1 verdict false, 2 usage or
//! parse error, 3 search budget exhausted.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use aperiodic_core::classics::{is_fc_aperiodic_at_zero, morse_thue_window, ContinuedFraction};
use aperiodic_core::counting::{
    condition_3_2, construct_word, count_good_words, growth_flags, lower_bound_sequence,
    CountingError, Feasibility, Margin, SearchOptions, SymbolOrder, TailTreatment,
};
use aperiodic_core::hyperbolic::theorem_4_3_pipeline;
use aperiodic_core::interval::Interval;
use aperiodic_core::recurrence::min_recurrence_time;
use aperiodic_core::verify::verify_phi_aperiodic;
use aperiodic_core::{Alphabet, FiniteWord, Profile, Rational, Verdict};

const SCHEMA: &str = "aperiodic/v1";

const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "aperiodic",
    version,
    about = "Generate, verify and count words with aperiodicity gauges",
    after_help = "PROFILE GRAMMAR:\n  linear                    phi(l) = l\n  pow2                      phi(l) = 2^l\n  exp:k=4,delta=3/10        phi(l) = 4^(0.3 l)\n  thresh:l0=5;exp:...       0 up to l0, inner gauge past it\n  table:0,1,5/2,+           listed values; trailing + extends with slope 1\n\nCONTINUED FRACTIONS:  \"a0;a1,a2,(p1,p2)\" — parenthesized periodic tail,\ne.g. \"1;(1)\" for the golden ratio.\n\nWORD FILES: one line of symbols 0-9a-z, optional \"# k=<int>\" header line."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for enumeration (0 = all cores). Counts are bitwise
    /// identical for any setting; generated words are deterministic only
    /// with --threads 1.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a gauge-respecting word by backtracking search.
    Generate {
        #[arg(short)]
        k: u32,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        len: usize,
        /// Shuffle branch order with this seed (omitted = lexicographic).
        #[arg(long)]
        seed: Option<u64>,
        /// Node budget for the search.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Check a word file against a gauge.
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        profile: String,
        /// Alphabet size override (else the file header, else inferred).
        #[arg(short)]
        k: Option<u32>,
    },
    /// Exact number of gauge-respecting words per length.
    Count {
        #[arg(short)]
        k: u32,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        mmax: usize,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Exact counts next to the recursive lower bound and c^m.
    Bound {
        #[arg(short)]
        k: u32,
        #[arg(long)]
        profile: String,
        /// Growth constant, e.g. 2 or 5/2.
        #[arg(long)]
        c: String,
        #[arg(long)]
        mmax: usize,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Minimal recurrence time per window length for a word file.
    Recurrence {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        lmax: usize,
        /// Alphabet size override.
        #[arg(short)]
        k: Option<u32>,
    },
    /// Emit a window of the Morse-Thue word (two-sided indices).
    Mt {
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
    },
    /// Decide q * dist(q * alpha, Z) >= c for all q up to a horizon.
    Rotation {
        /// Continued fraction of alpha, e.g. "1;(1)".
        #[arg(long)]
        cf: String,
        #[arg(long)]
        c: String,
        #[arg(long = "Q")]
        q: u64,
    },
    /// Run the full hyperbolic parameter pipeline.
    Hyperbolic {
        /// Dimension of the hyperbolic space.
        #[arg(long)]
        n: u32,
        /// Target gauge exponent in (0, 1), e.g. 1/2.
        #[arg(long)]
        delta: String,
        /// Injectivity radius.
        #[arg(long)]
        im: f64,
        /// Distance constant of the continuous gauge.
        #[arg(long)]
        eps0: f64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .expect("thread pool built once");
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.cmd {
        Cmd::Generate {
            k,
            profile,
            len,
            seed,
            budget,
        } => cmd_generate(cli, *k, profile, *len, *seed, *budget),
        Cmd::Verify { file, profile, k } => cmd_verify(cli, file, profile, *k),
        Cmd::Count {
            k,
            profile,
            mmax,
            budget,
        } => cmd_count(cli, *k, profile, *mmax, *budget),
        Cmd::Bound {
            k,
            profile,
            c,
            mmax,
            budget,
        } => cmd_bound(cli, *k, profile, c, *mmax, *budget),
        Cmd::Recurrence { file, lmax, k } => cmd_recurrence(cli, file, *lmax, *k),
        Cmd::Mt { from, to } => cmd_mt(cli, *from, *to),
        Cmd::Rotation { cf, c, q } => cmd_rotation(cli, cf, c, *q),
        Cmd::Hyperbolic {
            n,
            delta,
            im,
            eps0,
        } => cmd_hyperbolic(cli, *n, delta, *im, *eps0),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn parse_profile(spec: &str) -> Result<Profile, Failure> {
    spec.parse::<Profile>()
        .map_err(|e| fail(EXIT_USAGE, format!("profile spec: {e}")))
}

fn parse_rational(text: &str) -> Result<Rational, Failure> {
    let parse_int = |s: &str| {
        s.trim()
            .parse::<num::BigInt>()
            .map_err(|_| fail(EXIT_USAGE, format!("invalid rational '{text}'")))
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d == num::BigInt::from(0) {
                return Err(fail(EXIT_USAGE, "zero denominator"));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(text)?)),
    }
}

/// Word file: optional `# k=<int>` header lines, then one line of symbols.
fn read_word_file(path: &PathBuf, k_override: Option<u32>) -> Result<FiniteWord, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let mut header_k = None;
    let mut word_line = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("k=") {
                header_k = v
                    .trim()
                    .parse::<u32>()
                    .ok()
                    .or_else(|| {
                        eprintln!("warning: unreadable k header ignored");
                        None
                    });
            }
            continue;
        }
        if word_line.is_some() {
            return Err(fail(EXIT_USAGE, "word file has more than one word line"));
        }
        word_line = Some(line.to_string());
    }
    let word_line = word_line.ok_or_else(|| fail(EXIT_USAGE, "word file has no word line"))?;
    let k = match k_override.or(header_k) {
        Some(k) => k,
        None => {
            // Infer the smallest alphabet covering the symbols used.
            let max = word_line
                .chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| fail(EXIT_USAGE, format!("invalid symbol '{c}'")))
                })
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .max()
                .unwrap_or(1);
            (max + 1).max(2)
        }
    };
    let alphabet =
        Alphabet::new(k).map_err(|e| fail(EXIT_USAGE, format!("alphabet size {k}: {e}")))?;
    FiniteWord::parse(alphabet, &word_line).map_err(|e| fail(EXIT_USAGE, e.to_string()))
}

fn word_to_string(w: &FiniteWord) -> String {
    w.symbols()
        .iter()
        .map(|&s| w.alphabet().symbol_char(s))
        .collect()
}

fn emit(cli: &Cli, payload: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, payload)
            .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display()))),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn emit_json(cli: &Cli, inputs: Value, result: Value) -> Result<(), Failure> {
    let doc = json!({ "schema": SCHEMA, "inputs": inputs, "result": result });
    emit(cli, &serde_json::to_string_pretty(&doc).expect("serializable"))
}

fn rational_str(r: &Rational) -> String {
    r.to_string()
}

fn interval_json(iv: &Interval, formula: &str) -> Value {
    json!({ "lo": iv.lo(), "hi": iv.hi(), "formula": formula })
}

fn budget_failure(e: CountingError) -> Failure {
    let code = match e {
        CountingError::BudgetExceeded { .. } | CountingError::Exhausted { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    };
    fail(code, e.to_string())
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_generate(
    cli: &Cli,
    k: u32,
    profile: &str,
    len: usize,
    seed: Option<u64>,
    budget: u64,
) -> Result<u8, Failure> {
    let profile = parse_profile(profile)?;
    let order = match seed {
        Some(s) => SymbolOrder::Seeded(s),
        None => SymbolOrder::Lexicographic,
    };
    let opts = SearchOptions {
        node_budget: budget,
    };
    let word = construct_word(k, &profile, len, order, &opts).map_err(budget_failure)?;
    // Never stamp a word "verified" without re-running the verifier.
    let verified = verify_phi_aperiodic(&word, &profile).is_ok();
    if !verified {
        return Err(fail(
            EXIT_FALSE,
            "internal error: constructed word failed re-verification",
        ));
    }
    match cli.format {
        Format::Json => emit_json(
            cli,
            json!({ "k": k, "profile": profile.to_string(), "len": len, "seed": seed }),
            json!({ "word": word_to_string(&word), "verified": verified }),
        )?,
        _ => emit(
            cli,
            &format!("# k={k}\n{}\n# verified\n", word_to_string(&word)),
        )?,
    }
    Ok(0)
}

fn cmd_verify(
    cli: &Cli,
    file: &PathBuf,
    profile: &str,
    k: Option<u32>,
) -> Result<u8, Failure> {
    let profile = parse_profile(profile)?;
    let word = read_word_file(file, k)?;
    let verdict = verify_phi_aperiodic(&word, &profile);
    let (code, result) = match verdict {
        Verdict::Ok => (0u8, json!({ "verdict": "ok" })),
        Verdict::Violation { i, s, l } => (
            EXIT_FALSE,
            json!({ "verdict": "violation", "i": i, "s": s, "l": l }),
        ),
    };
    match cli.format {
        Format::Json => emit_json(
            cli,
            json!({ "file": file.display().to_string(), "profile": profile.to_string(),
                    "k": word.alphabet().size(), "len": word.len() }),
            result,
        )?,
        _ => match verdict {
            Verdict::Ok => emit(cli, "ok")?,
            Verdict::Violation { i, s, l } => {
                emit(cli, &format!("violation: window ({i}, {l}) recurs at shift {s}"))?
            }
        },
    }
    Ok(code)
}

/// Counts for `m = 0 ..= m_max`, retreating to the longest prefix of
/// lengths that fits the budget. Returns the counts and whether they are
/// partial.
fn counts_within_budget(
    k: u32,
    profile: &Profile,
    m_max: usize,
    budget: u64,
) -> Result<(Vec<num::BigUint>, bool), Failure> {
    let opts = SearchOptions {
        node_budget: budget,
    };
    // Cost grows geometrically in m, so stepping up from below costs at
    // most a constant factor over the final run.
    let mut best = None;
    for m in 0..=m_max {
        match count_good_words(k, profile, m, &opts) {
            Ok(counts) => best = Some(counts),
            Err(CountingError::BudgetExceeded { .. }) => {
                return match best {
                    Some(counts) => Ok((counts, true)),
                    None => Err(fail(EXIT_BUDGET, "budget too small for any length")),
                }
            }
            Err(e) => return Err(budget_failure(e)),
        }
    }
    Ok((best.expect("m_max >= 0 ran at least once"), false))
}

fn cmd_count(
    cli: &Cli,
    k: u32,
    profile_spec: &str,
    m_max: usize,
    budget: u64,
) -> Result<u8, Failure> {
    let profile = parse_profile(profile_spec)?;
    let (counts, partial) = counts_within_budget(k, &profile, m_max, budget)?;
    match cli.format {
        Format::Json => {
            let rows: Vec<Value> = counts
                .iter()
                .enumerate()
                .map(|(m, c)| json!({ "m": m, "count": c.to_string() }))
                .collect();
            emit_json(
                cli,
                json!({ "k": k, "profile": profile.to_string(), "mmax": m_max }),
                json!({ "counts": rows, "partial": partial }),
            )?;
        }
        Format::Csv => {
            let mut out = String::from("m,count\n");
            for (m, c) in counts.iter().enumerate() {
                let _ = writeln!(out, "{m},{c}");
            }
            emit(cli, &out)?;
        }
        Format::Text => {
            let mut out = String::new();
            for (m, c) in counts.iter().enumerate() {
                let _ = writeln!(out, "{m:>4}  {c}");
            }
            if partial {
                let _ = writeln!(out, "(partial: budget exhausted)");
            }
            emit(cli, &out)?;
        }
    }
    Ok(if partial { EXIT_BUDGET } else { 0 })
}

fn condition_json(report: &aperiodic_core::counting::ConditionReport) -> Value {
    let margin = match &report.margin {
        Margin::Exact(m) => json!({ "exact": rational_str(m) }),
        Margin::Bracket { lo, hi } => {
            json!({ "lo": rational_str(lo), "hi": rational_str(hi) })
        }
        Margin::MinusInfinity => json!("-inf"),
    };
    let tail = match &report.tail {
        TailTreatment::ClosedForm => json!("closed-form"),
        TailTreatment::Truncated { terms, tail_upper } => {
            json!({ "terms": terms, "tail_upper": rational_str(tail_upper) })
        }
        TailTreatment::Divergent => json!("divergent"),
    };
    json!({
        "satisfied": report.outcome == Feasibility::Satisfied,
        "margin": margin,
        "tail": tail,
    })
}

fn cmd_bound(
    cli: &Cli,
    k: u32,
    profile_spec: &str,
    c_spec: &str,
    m_max: usize,
    budget: u64,
) -> Result<u8, Failure> {
    let profile = parse_profile(profile_spec)?;
    let c = parse_rational(c_spec)?;
    let condition = condition_3_2(k, &profile, &c).map_err(budget_failure)?;
    let (exact, partial) = counts_within_budget(k, &profile, m_max, budget)?;
    let bound = lower_bound_sequence(k, &profile, m_max);
    let flags = growth_flags(&bound, &c);
    let c_pow = |m: usize| num::traits::Pow::pow(c.clone(), m as u64);

    match cli.format {
        Format::Json => {
            let rows: Vec<Value> = (0..exact.len())
                .map(|m| {
                    json!({
                        "m": m,
                        "exact": exact[m].to_string(),
                        "bound": bound[m].to_string(),
                        "c_pow_m": rational_str(&c_pow(m)),
                        "growth_ok": flags[m],
                    })
                })
                .collect();
            emit_json(
                cli,
                json!({ "k": k, "profile": profile.to_string(), "c": rational_str(&c),
                        "mmax": m_max }),
                json!({ "condition": condition_json(&condition), "ledger": rows,
                        "partial": partial }),
            )?;
        }
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "# condition satisfied={} margin={:?}",
                condition.is_satisfied(),
                condition.margin
            );
            let _ = writeln!(out, "m,exact,bound,c_pow_m,growth_ok");
            for m in 0..exact.len() {
                let _ = writeln!(
                    out,
                    "{m},{},{},{},{}",
                    exact[m],
                    bound[m],
                    rational_str(&c_pow(m)),
                    flags[m]
                );
            }
            emit(cli, &out)?;
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "condition: {} (margin {:?})",
                if condition.is_satisfied() { "satisfied" } else { "not satisfied" },
                condition.margin
            );
            let _ = writeln!(out, "{:>4}  {:>14}  {:>14}  growth", "m", "exact", "bound");
            for m in 0..exact.len() {
                let _ = writeln!(
                    out,
                    "{m:>4}  {:>14}  {:>14}  {}",
                    exact[m].to_string(),
                    bound[m].to_string(),
                    if flags[m] { "ok" } else { "broken" }
                );
            }
            if partial {
                let _ = writeln!(out, "(partial: budget exhausted)");
            }
            emit(cli, &out)?;
        }
    }
    Ok(if partial { EXIT_BUDGET } else { 0 })
}

fn cmd_recurrence(
    cli: &Cli,
    file: &PathBuf,
    l_max: usize,
    k: Option<u32>,
) -> Result<u8, Failure> {
    let word = read_word_file(file, k)?;
    if word.len() < 2 {
        return Err(fail(EXIT_USAGE, "word too short for recurrence times"));
    }
    let l_max = l_max.min(word.len() - 2);
    let table = min_recurrence_time(&word, l_max)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    match cli.format {
        Format::Json => {
            let rows: Vec<Value> = table
                .iter()
                .map(|(l, r)| json!({ "l": l, "recurrence": r.attained() }))
                .collect();
            emit_json(
                cli,
                json!({ "file": file.display().to_string(), "len": word.len(), "lmax": l_max }),
                json!({ "table": rows }),
            )?;
        }
        Format::Csv => {
            let mut out = String::from("l,recurrence\n");
            for (l, r) in table.iter() {
                match r.attained() {
                    Some(s) => {
                        let _ = writeln!(out, "{l},{s}");
                    }
                    None => {
                        let _ = writeln!(out, "{l},");
                    }
                }
            }
            emit(cli, &out)?;
        }
        Format::Text => {
            let mut out = String::new();
            for (l, r) in table.iter() {
                match r.attained() {
                    Some(s) => {
                        let _ = writeln!(out, "{l:>4}  {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{l:>4}  -");
                    }
                }
            }
            emit(cli, &out)?;
        }
    }
    Ok(0)
}

fn cmd_mt(cli: &Cli, from: i64, to: i64) -> Result<u8, Failure> {
    if from > to {
        return Err(fail(EXIT_USAGE, "empty index range"));
    }
    let word = morse_thue_window(from, to);
    match cli.format {
        Format::Json => emit_json(
            cli,
            json!({ "from": from, "to": to }),
            json!({ "word": word_to_string(&word), "k": 2 }),
        )?,
        _ => emit(cli, &format!("# k=2\n{}\n", word_to_string(&word)))?,
    }
    Ok(0)
}

fn cmd_rotation(cli: &Cli, cf_spec: &str, c_spec: &str, q_max: u64) -> Result<u8, Failure> {
    let cf: ContinuedFraction = cf_spec
        .parse()
        .map_err(|e| fail(EXIT_USAGE, format!("{e}")))?;
    let c = parse_rational(c_spec)?;
    let verdict = is_fc_aperiodic_at_zero(&cf, &c, q_max)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    match cli.format {
        Format::Json => emit_json(
            cli,
            json!({ "cf": cf.to_string(), "c": rational_str(&c), "Q": q_max }),
            json!({ "holds": verdict.holds, "witness_q": verdict.witness_q,
                    "horizon": verdict.horizon }),
        )?,
        _ => match verdict.witness_q {
            Some(q) => emit(cli, &format!("false (witness q = {q})"))?,
            None => emit(cli, &format!("true (all q <= {})", verdict.horizon))?,
        },
    }
    Ok(if verdict.holds { 0 } else { EXIT_FALSE })
}

fn cmd_hyperbolic(
    cli: &Cli,
    n: u32,
    delta_spec: &str,
    i_m: f64,
    eps0: f64,
) -> Result<u8, Failure> {
    let delta = parse_rational(delta_spec)?;
    let report = theorem_4_3_pipeline(n, &delta, i_m, eps0)
        .map_err(|e| fail(EXIT_FALSE, e.to_string()))?;
    match cli.format {
        Format::Json => {
            let geometry = json!({
                "s": report.geometry.s,
                "r1": interval_json(&report.geometry.r1,
                    "2 sinh(eps_bar0 + asinh(e^{-(s-1-ell) r0} sqrt(n-1) R / 2))"),
                "r2": interval_json(&report.geometry.r2,
                    "2 asinh(e^{-(s-1) r0} sqrt(n-1) R / 4)"),
                "c1": report.geometry.c1,
                "c2": report.geometry.c2,
                "ceiling_straddle": report.geometry.ceiling_straddle,
                "cbar": report.geometry.cbar,
                "cbar_rough": report.geometry.cbar_rough,
            });
            let condition = json!({
                "growth_holds": report.condition.growth_holds,
                "sum_condition": format!("{:?}", report.condition.sum_condition),
                "margin": report.condition.margin.as_ref()
                    .map(|m| interval_json(m, "2^{n-1} - cbar * increment sum - c")),
                "terms": report.condition.terms,
            });
            emit_json(
                cli,
                json!({ "n": n, "delta": rational_str(&delta), "im": i_m, "eps0": eps0 }),
                json!({
                    "delta_bar": rational_str(&report.delta_bar),
                    "delta_tilde": interval_json(&report.delta_tilde,
                        "delta_bar ln 2 / ln(3 - delta_bar)"),
                    "r0": interval_json(&report.r0, "ln(3 - delta_bar)"),
                    "c": rational_str(&report.c),
                    "s_bar0": report.params.s_bar0,
                    "s0": interval_json(&report.s0, "(s_bar0 + 1) r0"),
                    "N": report.big_n,
                    "psi_coeff": interval_json(&report.psi_coeff,
                        "r0 / 2^{delta_bar (n-1)}"),
                    "l1": report.l1,
                    "ln_c0": interval_json(&report.ln_c0,
                        "ln coeff(l1) - delta_tilde (n-1) (2 s' + 2 N s0)"),
                    "l0": report.l0,
                    "l_tilde0": report.l_tilde0,
                    "geometry": geometry,
                    "condition": condition,
                }),
            )?;
        }
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "delta_bar   = {}", rational_str(&report.delta_bar));
            let _ = writeln!(out, "delta_tilde = {}", report.delta_tilde.midpoint());
            let _ = writeln!(out, "r0          = {}", report.r0.midpoint());
            let _ = writeln!(out, "c           = {}", rational_str(&report.c));
            let _ = writeln!(out, "s_bar0      = {}", report.params.s_bar0);
            let _ = writeln!(out, "s0          = {}", report.s0.midpoint());
            let _ = writeln!(out, "N           = {}", report.big_n);
            let _ = writeln!(out, "l1          = {}", report.l1);
            let _ = writeln!(out, "ln c0       = {}", report.ln_c0.midpoint());
            let _ = writeln!(out, "l0          = {:e}", report.l0);
            let _ = writeln!(out, "l_tilde0    = {:e}", report.l_tilde0);
            let _ = writeln!(
                out,
                "covering    = c1 {} * c2 {} = {} (rough bound {})",
                report.geometry.c1,
                report.geometry.c2,
                report.geometry.cbar,
                report.geometry.cbar_rough
            );
            let _ = writeln!(
                out,
                "condition   = growth {}, sum {:?}",
                report.condition.growth_holds, report.condition.sum_condition
            );
            emit(cli, &out)?;
        }
    }
    Ok(0)
}

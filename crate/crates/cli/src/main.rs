//! `cyheight`: heights, zeta functions and Stickelberger checks for Fermat
//! and Kummer Calabi-Yau varieties.
//!
//! Exit codes: 0 success, 1 check mismatch, 2 invalid input, 3 budget or
//! precision exhausted.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use cyheight::arith::{gcd, primes_in};
use cyheight::fermat::{
    alpha_count, artin_comparison, height_fermat, hodge_numbers_fermat, newton_slopes,
    predicted_height, stickelberger_ah, HeightValue, SlopeMultiset,
};
use cyheight::finite_field::FiniteField;
use cyheight::kummer::{kummer_example_for_curve, EllipticCurve};
use cyheight::padic::{valuation_adaptive, PadicContext, Valuation};
use cyheight::zeta::{
    brute_force_point_count_with_budget, point_count_from_zeta, zeta_from_table,
    DEFAULT_POINT_BUDGET,
};
use cyheight::{
    build_field, fully_rigged_fermat, Character, Error, FermatParams, FieldCache, JacobiCache,
    JacobiTable,
};

use output::{emit, Format, Report, Status, Table};

#[derive(Debug, Parser)]
#[command(
    name = "cyheight",
    version,
    about = "Arithmetic invariants of Fermat and Kummer Calabi-Yau varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Directory for field and Jacobi-sum caches. Nothing is cached when unset.
    #[arg(long, env = "CYHEIGHT_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,

    /// Worker threads for surveys and per-α work (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,

    /// Include wall-clock timings (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Debug, Args, Clone, Copy)]
struct Instance {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    r: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Formal-group height of a Fermat variety from its Newton slopes.
    Height(Instance),
    /// Zeta function, optionally checked against brute-force point counts.
    Zeta {
        #[command(flatten)]
        instance: Instance,
        /// Extension degrees s to check, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
        check: Vec<u32>,
        /// Maximum number of projective points enumerated per check.
        #[arg(long, default_value_t = DEFAULT_POINT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        point_budget: u64,
    },
    /// Compares the valuation of every Jacobi sum with its Stickelberger exponent.
    Stickelberger {
        #[command(flatten)]
        instance: Instance,
        /// Starting p-adic precision (default f·r + 2).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        precision: Option<u32>,
    },
    /// One row per prime over a range.
    Survey {
        kind: SurveyKind,
        #[arg(long)]
        m: Option<u32>,
        /// Defaults to m - 2.
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, default_value_t = 2)]
        p_min: u64,
        /// Exclusive upper bound.
        #[arg(long)]
        p_max: u64,
    },
    /// Height of the Kummer Calabi-Yau built on E³ for y² = x³ + ax + b.
    Kummer {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        b: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SurveyKind {
    Artin,
    Height,
    Kummer,
}

struct Context {
    cache_dir: Option<PathBuf>,
}

impl Context {
    fn field(&self, p: u64, f: u32) -> cyheight::Result<FiniteField> {
        match &self.cache_dir {
            Some(dir) => FieldCache::new(dir).load_or_build(p, f),
            None => build_field(p, f),
        }
    }

    fn jacobi(&self, params: FermatParams) -> cyheight::Result<(JacobiTable, Arc<FiniteField>)> {
        let field = Arc::new(self.field(params.p, params.f)?);
        let chi = Character::new(field.clone(), params.m)?;
        let table = match &self.cache_dir {
            Some(dir) => JacobiCache::new(dir).load_or_compute(params, &chi)?,
            None => JacobiTable::compute(params, &chi)?,
        };
        Ok((table, field))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
        {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    let ctx = Context {
        cache_dir: cli.cache_dir.clone(),
    };
    let start = Instant::now();
    let report = match run(&cli.command, &ctx) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_exhaustion() {
                ExitCode::from(3)
            } else if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            };
        }
    };
    let elapsed = cli.timings.then(|| start.elapsed());
    if let Err(e) = emit(&report, cli.format, elapsed) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    report.status.exit_code()
}

fn run(cmd: &Command, ctx: &Context) -> cyheight::Result<Report> {
    match *cmd {
        Command::Height(i) => cmd_height(i),
        Command::Zeta {
            instance,
            ref check,
            point_budget,
        } => cmd_zeta(ctx, instance, check, point_budget),
        Command::Stickelberger {
            instance,
            precision,
        } => cmd_stickelberger(ctx, instance, precision),
        Command::Survey {
            kind,
            m,
            r,
            p_min,
            p_max,
        } => cmd_survey(kind, m, r, p_min, p_max),
        Command::Kummer { p, a, b } => cmd_kummer(p, a, b),
    }
}

fn params(i: Instance) -> cyheight::Result<FermatParams> {
    FermatParams::new(i.p, i.m, i.r)
}

fn slopes_cell(s: &SlopeMultiset) -> String {
    s.slopes
        .iter()
        .map(|(slope, n)| format!("{slope}^{n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn opt_cell<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn cmd_height(i: Instance) -> cyheight::Result<Report> {
    let params = params(i)?;
    let h = height_fermat(&params)?;
    let slopes = newton_slopes(&params)?;
    let hodge = hodge_numbers_fermat(params.m, params.r)?;
    let predicted = params.is_calabi_yau().then(|| predicted_height(&params));
    let agree = predicted.map(|p| p == h.height);
    let fully_rigged = (params.r % 2 == 0 && params.m >= 4)
        .then(|| fully_rigged_fermat(params.p, params.m, params.r))
        .transpose()?;
    let count = alpha_count(params.m, params.r);

    let json = json!({
        "p": params.p, "m": params.m, "r": params.r, "f": params.f, "q": params.q,
        "height": h.height,
        "deficient": h.deficient,
        "predicted": predicted,
        "agree": agree,
        "slopes": slopes,
        "alpha_count": count.to_string(),
        "hodge": hodge,
        "fully_rigged": fully_rigged,
    });
    let mut table = Table::new(&[
        "p",
        "m",
        "r",
        "f",
        "q",
        "height",
        "deficient",
        "predicted",
        "agree",
        "slopes",
        "alpha_count",
        "hodge",
        "fully_rigged",
    ]);
    table.push(vec![
        params.p.to_string(),
        params.m.to_string(),
        params.r.to_string(),
        params.f.to_string(),
        params.q.to_string(),
        h.height.to_string(),
        h.deficient.to_string(),
        opt_cell(predicted),
        opt_cell(agree),
        slopes_cell(&slopes),
        count.to_string(),
        hodge
            .0
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        opt_cell(fully_rigged),
    ]);
    Ok(Report {
        schema: "height",
        json,
        table,
        status: if agree == Some(false) {
            Status::Mismatch
        } else {
            Status::Ok
        },
    })
}

#[derive(Serialize)]
struct PointCheck {
    s: u32,
    from_zeta: String,
    brute_force: String,
    #[serde(rename = "match")]
    matches: bool,
}

fn cmd_zeta(
    ctx: &Context,
    i: Instance,
    check: &[u32],
    point_budget: u64,
) -> cyheight::Result<Report> {
    let params = params(i)?;
    let (table, _) = ctx.jacobi(params)?;
    let zeta = zeta_from_table(&table)?;
    let mut checks = Vec::new();
    for &s in check {
        let from_zeta = point_count_from_zeta(&zeta, s)?;
        let brute = brute_force_point_count_with_budget(&params, s, point_budget)?;
        checks.push(PointCheck {
            s,
            matches: from_zeta == brute.into(),
            from_zeta: from_zeta.to_string(),
            brute_force: brute.to_string(),
        });
    }
    let status = if checks.iter().all(|c| c.matches) {
        Status::Ok
    } else {
        Status::Mismatch
    };
    let coeffs: Vec<String> = zeta.p_coeffs.iter().map(|c| c.to_string()).collect();

    let mut out = Table::new(&[
        "p",
        "m",
        "r",
        "q",
        "degree",
        "coefficients",
        "s",
        "from_zeta",
        "brute_force",
        "match",
    ]);
    let base = |row: &mut Vec<String>| {
        row.extend([
            params.p.to_string(),
            params.m.to_string(),
            params.r.to_string(),
            params.q.to_string(),
            zeta.degree().to_string(),
            coeffs.join(" "),
        ])
    };
    if checks.is_empty() {
        let mut row = Vec::new();
        base(&mut row);
        row.extend([String::new(), String::new(), String::new(), String::new()]);
        out.push(row);
    }
    for c in &checks {
        let mut row = Vec::new();
        base(&mut row);
        row.extend([
            c.s.to_string(),
            c.from_zeta.clone(),
            c.brute_force.clone(),
            c.matches.to_string(),
        ]);
        out.push(row);
    }
    let json = json!({
        "p": params.p, "m": params.m, "r": params.r, "f": params.f, "q": params.q,
        "degree": zeta.degree(),
        "p_coefficients": coeffs,
        "sign": zeta.sign,
        "pole_exponents": zeta.pole_exponents,
        "functional_equation": zeta.functional_equation_holds(),
        "checks": checks,
    });
    Ok(Report {
        schema: "zeta",
        json,
        table: out,
        status,
    })
}

#[derive(Serialize)]
struct StickelbergerRow {
    alpha: Vec<u32>,
    a_h: u32,
    valuation: Valuation,
    equal: bool,
}

fn cmd_stickelberger(
    ctx: &Context,
    i: Instance,
    precision: Option<u32>,
) -> cyheight::Result<Report> {
    let params = params(i)?;
    let (table, field) = ctx.jacobi(params)?;
    let k0 = precision.unwrap_or_else(|| PadicContext::default_precision(params.f, params.r));
    let entries: Vec<_> = table.iter().collect();
    let rows: Vec<StickelbergerRow> = entries
        .par_iter()
        .map(|(alpha, j)| {
            let a_h = stickelberger_ah(alpha, params.p)?;
            let valuation = valuation_adaptive(*j, &field, k0, Some(1))?;
            Ok(StickelbergerRow {
                alpha: alpha.components().to_vec(),
                a_h,
                equal: valuation == Valuation::Exact(a_h),
                valuation,
            })
        })
        .collect::<cyheight::Result<_>>()?;
    let exhausted: Vec<&StickelbergerRow> = rows
        .iter()
        .filter(|r| r.valuation.exact().is_none())
        .collect();
    for r in &exhausted {
        eprintln!(
            "precision exhausted for α = {:?}: valuation {}",
            r.alpha, r.valuation
        );
    }
    let equal = rows.iter().filter(|r| r.equal).count();
    let mismatches = rows.len() - equal - exhausted.len();
    let status = if mismatches > 0 {
        Status::Mismatch
    } else if !exhausted.is_empty() {
        Status::Exhausted
    } else {
        Status::Ok
    };
    let mut out = Table::new(&["alpha", "a_h", "valuation", "equal"]);
    for r in &rows {
        out.push(vec![
            r.alpha
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            r.a_h.to_string(),
            r.valuation.to_string(),
            r.equal.to_string(),
        ]);
    }
    let json = json!({
        "p": params.p, "m": params.m, "r": params.r, "f": params.f, "q": params.q,
        "precision": k0,
        "total": rows.len(),
        "equal": equal,
        "mismatches": mismatches,
        "exhausted": exhausted.len(),
        "rows": rows,
    });
    Ok(Report {
        schema: "stickelberger",
        json,
        table: out,
        status,
    })
}

/// Evaluates `f` for each prime in parallel, keeping rows in prime order
/// and reporting failed rows on stderr.
fn sweep<R: Send>(primes: &[u64], f: impl Fn(u64) -> cyheight::Result<R> + Sync) -> Vec<R> {
    let results: Vec<(u64, cyheight::Result<R>)> = primes.par_iter().map(|&p| (p, f(p))).collect();
    results
        .into_iter()
        .filter_map(|(p, r)| match r {
            Ok(row) => Some(row),
            Err(e) => {
                eprintln!("p = {p}: {e}");
                None
            }
        })
        .collect()
}

#[derive(Serialize)]
struct HeightRow {
    p: u64,
    f: u32,
    q: u64,
    height: HeightValue,
    deficient: u32,
    predicted: Option<HeightValue>,
    agree: Option<bool>,
}

#[derive(Serialize)]
struct ArtinRow {
    p: u64,
    height: HeightValue,
    additive_type: bool,
    fully_rigged: bool,
    separates: bool,
}

#[derive(Serialize)]
struct KummerRow {
    p: u64,
    #[serde(rename = "N")]
    n: u64,
    a_p: i64,
    p_rank: u32,
    abelian_p_rank: u32,
    height: HeightValue,
}

fn cmd_survey(
    kind: SurveyKind,
    m: Option<u32>,
    r: Option<u32>,
    p_min: u64,
    p_max: u64,
) -> cyheight::Result<Report> {
    if p_min >= p_max {
        return Err(Error::InvalidParameter(format!(
            "empty prime range [{p_min}, {p_max})"
        )));
    }
    let degree = || {
        let m =
            m.ok_or_else(|| Error::InvalidParameter("--m is required for this survey".into()))?;
        let r = match r {
            Some(r) => r,
            None => m.checked_sub(2).filter(|&r| r >= 1).ok_or_else(|| {
                Error::InvalidParameter(format!("no default dimension for m = {m}"))
            })?,
        };
        Ok::<_, Error>((m, r))
    };
    match kind {
        SurveyKind::Height => {
            let (m, r) = degree()?;
            let primes: Vec<u64> = primes_in(p_min, p_max)
                .into_iter()
                .filter(|&p| gcd(p, m as u64) == 1)
                .collect();
            let rows = sweep(&primes, |p| {
                let params = FermatParams::new(p, m, r)?;
                let h = height_fermat(&params)?;
                let predicted = params.is_calabi_yau().then(|| predicted_height(&params));
                Ok(HeightRow {
                    p,
                    f: params.f,
                    q: params.q,
                    height: h.height,
                    deficient: h.deficient,
                    predicted,
                    agree: predicted.map(|x| x == h.height),
                })
            });
            let mut table =
                Table::new(&["p", "f", "q", "height", "deficient", "predicted", "agree"]);
            for row in &rows {
                table.push(vec![
                    row.p.to_string(),
                    row.f.to_string(),
                    row.q.to_string(),
                    row.height.to_string(),
                    row.deficient.to_string(),
                    opt_cell(row.predicted),
                    opt_cell(row.agree),
                ]);
            }
            let mismatch = rows.iter().any(|row| row.agree == Some(false));
            Ok(Report {
                schema: "survey-height",
                json: json!({ "kind": "height", "m": m, "r": r, "p_min": p_min, "p_max": p_max, "rows": rows }),
                table,
                status: if mismatch {
                    Status::Mismatch
                } else {
                    Status::Ok
                },
            })
        }
        SurveyKind::Artin => {
            let (m, r) = degree()?;
            if m != r + 2 || r % 2 != 0 {
                return Err(Error::InvalidParameter(format!(
                    "artin survey needs m = r + 2 with r even, got m = {m}, r = {r}"
                )));
            }
            let primes: Vec<u64> = primes_in(p_min, p_max)
                .into_iter()
                .filter(|&p| gcd(p, m as u64) == 1)
                .collect();
            let rows = sweep(&primes, |p| {
                let cmp = artin_comparison(p, m, r)?;
                let height = height_fermat(&FermatParams::new(p, m, r)?)?.height;
                Ok(ArtinRow {
                    p,
                    height,
                    additive_type: cmp.additive_type,
                    fully_rigged: cmp.fully_rigged,
                    separates: cmp.separates_notions(),
                })
            });
            let mut table =
                Table::new(&["p", "height", "additive_type", "fully_rigged", "separates"]);
            for row in &rows {
                table.push(vec![
                    row.p.to_string(),
                    row.height.to_string(),
                    row.additive_type.to_string(),
                    row.fully_rigged.to_string(),
                    row.separates.to_string(),
                ]);
            }
            Ok(Report {
                schema: "survey-artin",
                json: json!({ "kind": "artin", "m": m, "r": r, "p_min": p_min, "p_max": p_max, "rows": rows }),
                table,
                status: Status::Ok,
            })
        }
        SurveyKind::Kummer => {
            let primes = primes_in(p_min.max(5), p_max);
            let rows = sweep(&primes, |p| {
                let ex = kummer_example_for_curve(EllipticCurve::fermat_cubic(p)?)?;
                Ok(KummerRow {
                    p,
                    n: ex.point_count,
                    a_p: ex.a_p,
                    p_rank: ex.p_rank,
                    abelian_p_rank: ex.abelian_p_rank,
                    height: ex.height,
                })
            });
            let mut table = Table::new(&["p", "N", "a_p", "p_rank", "abelian_p_rank", "height"]);
            for row in &rows {
                table.push(vec![
                    row.p.to_string(),
                    row.n.to_string(),
                    row.a_p.to_string(),
                    row.p_rank.to_string(),
                    row.abelian_p_rank.to_string(),
                    row.height.to_string(),
                ]);
            }
            Ok(Report {
                schema: "survey-kummer",
                json: json!({ "kind": "kummer", "p_min": p_min, "p_max": p_max, "rows": rows }),
                table,
                status: Status::Ok,
            })
        }
    }
}

fn cmd_kummer(p: u64, a: i64, b: i64) -> cyheight::Result<Report> {
    let ex = kummer_example_for_curve(EllipticCurve::new(p, a, b)?)?;
    let json = json!({
        "p": ex.p,
        "curve": { "a": ex.curve.a, "b": ex.curve.b },
        "N": ex.point_count,
        "a_p": ex.a_p,
        "p_rank": ex.p_rank,
        "abelian_dim": ex.abelian_dim,
        "abelian_p_rank": ex.abelian_p_rank,
        "height": ex.height,
    });
    let mut table = Table::new(&[
        "p",
        "a",
        "b",
        "N",
        "a_p",
        "p_rank",
        "abelian_dim",
        "abelian_p_rank",
        "height",
    ]);
    table.push(vec![
        ex.p.to_string(),
        ex.curve.a.to_string(),
        ex.curve.b.to_string(),
        ex.point_count.to_string(),
        ex.a_p.to_string(),
        ex.p_rank.to_string(),
        ex.abelian_dim.to_string(),
        ex.abelian_p_rank.to_string(),
        ex.height.to_string(),
    ]);
    Ok(Report {
        schema: "kummer",
        json,
        table,
        status: Status::Ok,
    })
}

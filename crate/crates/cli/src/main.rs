//! `hurwitz`: exact Hurwitz numbers, operator correlators, structure
//! coefficients, brute-force cross-checks and monotone models from the
//! command line. All numeric output is exact (`p/q`); decimals are opt-in.

mod cache;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::{One, Signed, Zero};
use serde_json::json;

use hurwitz_core::correlator::{connected, connected_traced, disconnected, hurwitz_word, OperatorWord};
use hurwitz_core::exactalg::{rat_to_decimal, rat_to_string};
use hurwitz_core::hurwitz::{
    asymptotic_estimate, check_gap_conjecture, factorial, hurwitz_number, set_partitions,
    structure_coefficients, HurwitzQuery,
};
use hurwitz_core::monotone::{fit_exp_linear, monotone_hurwitz, verify_conjecture, Normalisation};
use hurwitz_core::oracle::{
    aut_size, count_by_convolution, count_factorizations, monotone_count, FactorizationQuery,
    Target,
};
use hurwitz_core::wedge::{check_commutation, Partition};
use hurwitz_core::{golden, Int, Laurent, QRational, Rat};

use cache::Cache;
use output::{Format, Table};

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Exact Hurwitz number computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Additionally render rationals as decimals with this many significant figures
    #[arg(long, global = true)]
    decimals: Option<usize>,
    /// Cache directory (overrides HURWITZ_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Work budget for exhaustive enumeration
    #[arg(long, global = true, default_value_t = 1e8)]
    budget: f64,
    /// Worker threads for fan-out commands
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a connected correlator of an operator word or profile
    Correlator {
        /// Ramification profile, e.g. 2,1,1
        #[arg(long)]
        mu: Option<String>,
        /// Explicit word "a:b,a:b,...", e.g. 1:1,1:1,-2:0
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
        /// Orbifold parameter (with --mu)
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Evaluate the disconnected correlator instead
        #[arg(long)]
        disconnected: bool,
    },
    /// Hurwitz numbers for a profile over a genus range
    Hurwitz {
        #[arg(long)]
        mu: String,
        /// Genus or inclusive range, e.g. 2 or 0..3
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        g: String,
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Disconnected counts instead of connected
        #[arg(long)]
        disconnected: bool,
    },
    /// Structure coefficients C(mu, m) and prefactor of a profile
    Coeffs {
        #[arg(long)]
        mu: String,
        #[arg(long, default_value_t = 1)]
        r: u64,
    },
    /// Regenerate a reference table and compare against the embedded golden copy
    Tables {
        /// Which table: 1 (correlators), 2 (coefficients), 3 (monotone models)
        which: u8,
    },
    /// Count transposition factorisations directly in the symmetric group
    Oracle {
        #[arg(long)]
        mu: String,
        /// Number of transposition factors
        #[arg(long)]
        k: u64,
        /// Require the factors (and base) to act transitively
        #[arg(long)]
        transitive: bool,
        /// Restrict to monotone tuples
        #[arg(long)]
        monotone: bool,
        /// Orbifold parameter: prepend a permutation of cycle type (r,...,r)
        #[arg(long, default_value_t = 1)]
        r: u64,
    },
    /// Monotone Hurwitz numbers and exponential-plus-linear model fits
    Monotone {
        #[arg(long)]
        mu: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        g: String,
        /// Use the |Aut(mu)|/d! normalisation instead of fixed-target
        #[arg(long)]
        definition: bool,
        /// Fit the model on the first d genera and validate up to this genus
        #[arg(long)]
        verify: Option<i64>,
    },
    /// Run an invariant suite; nonzero exit on any failure
    Check {
        /// score | commutation | inclusion-exclusion | gap | asymptotics | oracle
        suite: String,
    },
}

fn parse_mu(s: &str) -> Result<Vec<u64>, String> {
    let mu: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| format!("invalid part {t:?}")))
        .collect::<Result<_, _>>()?;
    if mu.is_empty() || mu.contains(&0) {
        return Err("profile must be a nonempty list of positive integers".into());
    }
    Ok(mu)
}

fn parse_g_range(s: &str) -> Result<Vec<i64>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| format!("invalid genus {a:?}"))?;
        let b: i64 = b.trim().parse().map_err(|_| format!("invalid genus {b:?}"))?;
        if b < a {
            return Err(format!("empty genus range {s:?}"));
        }
        Ok((a..=b).collect())
    } else {
        let g: i64 = s.trim().parse().map_err(|_| format!("invalid genus {s:?}"))?;
        Ok(vec![g])
    }
}

fn rat_cell(x: &Rat, decimals: Option<usize>) -> String {
    match decimals {
        Some(n) => format!("{} ({})", rat_to_string(x), rat_to_decimal(x, n)),
        None => rat_to_string(x),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    match &cli.command {
        Command::Correlator { mu, word, r, disconnected } => {
            let mu = mu.as_deref().map(parse_mu).transpose()?;
            cmd_correlator(cli, mu.as_deref(), word.as_deref(), *r, *disconnected)
        }
        Command::Hurwitz { mu, g, r, disconnected } => {
            cmd_hurwitz(cli, &parse_mu(mu)?, g, *r, *disconnected)
        }
        Command::Coeffs { mu, r } => cmd_coeffs(cli, &parse_mu(mu)?, *r),
        Command::Tables { which } => cmd_tables(cli, *which),
        Command::Oracle { mu, k, transitive, monotone, r } => {
            cmd_oracle(cli, &parse_mu(mu)?, *k, *transitive, *monotone, *r)
        }
        Command::Monotone { mu, g, definition, verify } => {
            let norm = if *definition { Normalisation::Definition } else { Normalisation::FixedTarget };
            cmd_monotone(cli, &parse_mu(mu)?, g, norm, *verify)
        }
        Command::Check { suite } => cmd_check(cli, suite),
    }
}

fn cmd_correlator(
    cli: &Cli,
    mu: Option<&[u64]>,
    word: Option<&str>,
    r: u64,
    want_disconnected: bool,
) -> Result<bool, String> {
    let word = match (mu, word) {
        (Some(mu), None) => hurwitz_word(mu, r).map_err(|e| e.to_string())?,
        (None, Some(w)) => OperatorWord::parse(w).map_err(|e| e.to_string())?,
        _ => return Err("provide exactly one of --mu or --word".into()),
    };
    if want_disconnected {
        let value = disconnected(&word).map_err(|e| e.to_string())?;
        match cli.format {
            Format::Json => println!("{}", json!({ "word": word.to_string(), "value": value.to_string() })),
            _ => println!("{value}"),
        }
        return Ok(true);
    }
    let result = connected(&word).map_err(|e| e.to_string())?;
    match cli.format {
        Format::Json => println!("{}", result.to_json()),
        _ => {
            println!("{result}");
            if let Ok(p) = result.laurent() {
                println!("= {p}");
            }
        }
    }
    Ok(true)
}

fn cmd_hurwitz(cli: &Cli, mu: &[u64], g: &str, r: u64, want_disconnected: bool) -> Result<bool, String> {
    let genera = parse_g_range(g)?;
    let cache = Cache::open(cache::resolve_dir(cli.cache_dir.as_deref()));
    let d: u64 = mu.iter().sum();
    if matches!(cli.format, Format::Text) && !want_disconnected {
        let table = structure_coefficients(mu, r).map_err(|e| e.to_string())?;
        let coeffs = table
            .combo()
            .terms()
            .iter()
            .map(|(m, c)| format!("C({m}) = {}", rat_to_string(c)))
            .collect::<Vec<_>>()
            .join(", ");
        println!(
            "H = {} * sum_m C(m) m^k with k = {}/{r} + 2g - 2 + {}; {}",
            rat_to_string(table.prefactor()),
            d,
            mu.len(),
            coeffs
        );
    }
    let mut out = Table::new(&["g", "k", "value"]);
    for g in genera {
        let query = HurwitzQuery { mu: mu.to_vec(), g, r, connected: !want_disconnected };
        let key = format!(
            "hurwitz mu={mu:?} g={g} r={r} connected={}",
            !want_disconnected
        );
        let value = match cache.as_ref().and_then(|c| c.get(&key)) {
            Some(hit) => hurwitz_core::exactalg::rat_from_string(&hit).map_err(|e| e.to_string())?,
            None => {
                let v = hurwitz_number(&query).map_err(|e| e.to_string())?;
                if let Some(c) = &cache {
                    c.put(&key, &rat_to_string(&v));
                }
                v
            }
        };
        let k = (d / r) as i64 + 2 * g - 2 + mu.len() as i64;
        out.push(vec![g.to_string(), k.to_string(), rat_cell(&value, cli.decimals)]);
    }
    print!("{}", out.render(cli.format));
    Ok(true)
}

fn cmd_coeffs(cli: &Cli, mu: &[u64], r: u64) -> Result<bool, String> {
    let table = structure_coefficients(mu, r).map_err(|e| e.to_string())?;
    if matches!(cli.format, Format::Json) {
        println!("{}", table.to_json());
        return Ok(true);
    }
    let mut out = Table::new(&["m", "C"]);
    for (m, c) in table.combo().terms() {
        out.push(vec![m.to_string(), rat_to_string(c)]);
    }
    println!(
        "prefactor = {}, parity = {}",
        rat_to_string(table.prefactor()),
        table.combo().parity().as_str()
    );
    print!("{}", out.render(cli.format));
    Ok(true)
}

fn cmd_tables(cli: &Cli, which: u8) -> Result<bool, String> {
    let mut out = Table::new(&["mu", "status", "content"]);
    let mut all_ok = true;
    let mu_label = |mu: &[u64]| {
        mu.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    };
    match which {
        1 => {
            for row in golden::table1().map_err(|e| e.to_string())? {
                let computed = connected(&hurwitz_word(&row.mu, 1).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let expected =
                    row.terms.iter().fold(Laurent::zero(), |acc, t| &acc + &t.expand());
                let ok = computed.laurent().map(|p| p == expected).unwrap_or(false);
                all_ok &= ok;
                out.push(vec![
                    mu_label(&row.mu),
                    if ok { "ok" } else { "MISMATCH" }.into(),
                    computed.to_string(),
                ]);
            }
        }
        2 => {
            for row in golden::table2().map_err(|e| e.to_string())? {
                let table = structure_coefficients(&row.mu, 1).map_err(|e| e.to_string())?;
                let d: u64 = row.mu.iter().sum();
                let ok = (1..=d * (d - 1) / 2).all(|m| {
                    table.coeff(m) == row.c.get(&m).cloned().unwrap_or_else(Int::zero)
                });
                all_ok &= ok;
                let content = table
                    .combo()
                    .terms()
                    .iter()
                    .map(|(m, c)| format!("C({m})={}", rat_to_string(c)))
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push(vec![mu_label(&row.mu), if ok { "ok" } else { "MISMATCH" }.into(), content]);
            }
        }
        3 => {
            for row in golden::table3().map_err(|e| e.to_string())? {
                let d: u64 = row.mu.iter().sum();
                let points: Result<Vec<(u64, Rat)>, String> = (0..d as i64)
                    .map(|g| {
                        let k = (d as i64 + 2 * g - 2 + row.mu.len() as i64) as u64;
                        monotone_hurwitz(&row.mu, g, Normalisation::FixedTarget)
                            .map(|v| (k, v))
                            .map_err(|e| e.to_string())
                    })
                    .collect();
                let model = fit_exp_linear(&row.mu, Normalisation::FixedTarget, &points?)
                    .map_err(|e| e.to_string())?;
                let golden_c: std::collections::BTreeMap<u64, Rat> =
                    row.c.iter().filter(|(_, v)| !v.is_zero()).map(|(m, v)| (*m, v.clone())).collect();
                let ok = model.c0() == &row.c0 && model.coefficients() == &golden_c;
                all_ok &= ok;
                let mut content: Vec<String> = model
                    .coefficients()
                    .iter()
                    .rev()
                    .map(|(m, c)| format!("{} {m}^k", rat_to_string(c)))
                    .collect();
                if !model.c0().is_zero() {
                    content.push(format!("{} k", rat_to_string(model.c0())));
                }
                out.push(vec![
                    mu_label(&row.mu),
                    if ok { "ok" } else { "MISMATCH" }.into(),
                    content.join(" + "),
                ]);
            }
        }
        _ => return Err("table must be 1, 2 or 3".into()),
    }
    print!("{}", out.render(cli.format));
    Ok(all_ok)
}

fn cmd_oracle(
    cli: &Cli,
    mu: &[u64],
    k: u64,
    transitive: bool,
    monotone: bool,
    r: u64,
) -> Result<bool, String> {
    let d: u64 = mu.iter().sum();
    let target = Target::Class(mu.to_vec());
    let mut query = FactorizationQuery::new(d, target.clone(), k);
    query.transitive = transitive;
    query.monotone = monotone;
    query.orbifold_r = (r > 1).then_some(r);
    query.budget = cli.budget;
    let (count, method) = if monotone && !transitive {
        (monotone_count(d, &target, k, false, cli.budget).map_err(|e| e.to_string())?, "monotone-dp")
    } else if !transitive && !monotone && d <= 7 {
        (count_by_convolution(&query).map_err(|e| e.to_string())?, "convolution")
    } else {
        (count_factorizations(&query).map_err(|e| e.to_string())?, "exhaustive")
    };
    let weighted = Rat::new(aut_size(mu), factorial(d)) * Rat::from(count.clone());
    let report = json!({
        "query": {
            "mu": mu,
            "k": k,
            "transitive": transitive,
            "monotone": monotone,
            "r": r,
        },
        "count": count.to_string(),
        "weighted": rat_to_string(&weighted),
        "method": method,
    });
    match cli.format {
        Format::Json => println!("{report}"),
        _ => println!(
            "count = {count}, weighted = {}, method = {method}",
            rat_to_string(&weighted)
        ),
    }
    Ok(true)
}

fn cmd_monotone(
    cli: &Cli,
    mu: &[u64],
    g: &str,
    norm: Normalisation,
    verify: Option<i64>,
) -> Result<bool, String> {
    if let Some(g_max) = verify {
        let report = verify_conjecture(mu, g_max, norm).map_err(|e| e.to_string())?;
        match cli.format {
            Format::Json => println!("{}", report.to_json()),
            _ => {
                let model = &report.model;
                let mut terms: Vec<String> = model
                    .coefficients()
                    .iter()
                    .rev()
                    .map(|(m, c)| format!("{} {m}^k", rat_to_string(c)))
                    .collect();
                if !model.c0().is_zero() {
                    terms.push(format!("{} k", rat_to_string(model.c0())));
                }
                println!("model: {}", terms.join(" + "));
                println!(
                    "validated g = {:?}, all_pass = {}",
                    report.validated_g, report.all_pass
                );
            }
        }
        return Ok(report.all_pass);
    }
    let genera = parse_g_range(g)?;
    let d: u64 = mu.iter().sum();
    let mut out = Table::new(&["g", "k", "value"]);
    for g in genera {
        let value = monotone_hurwitz(mu, g, norm).map_err(|e| e.to_string())?;
        let k = d as i64 + 2 * g - 2 + mu.len() as i64;
        out.push(vec![g.to_string(), k.to_string(), rat_cell(&value, cli.decimals)]);
    }
    print!("{}", out.render(cli.format));
    Ok(true)
}

fn profiles(d_range: std::ops::RangeInclusive<u64>) -> Vec<Vec<u64>> {
    d_range
        .flat_map(|d| Partition::all_of_size(d))
        .map(|p| p.parts().to_vec())
        .collect()
}

fn cmd_check(cli: &Cli, suite: &str) -> Result<bool, String> {
    let ok = match suite {
        "score" => check_score()?,
        "commutation" => check_commutation_suite()?,
        "inclusion-exclusion" => check_inclusion_exclusion()?,
        "gap" => check_gap()?,
        "asymptotics" => check_asymptotics()?,
        "oracle" => check_oracle(cli.jobs.max(1))?,
        _ => {
            return Err(format!(
                "unknown suite {suite:?}; expected score, commutation, inclusion-exclusion, gap, asymptotics or oracle"
            ))
        }
    };
    println!("{suite}: {}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn check_score() -> Result<bool, String> {
    let mut ok = true;
    for row in golden::table1().map_err(|e| e.to_string())? {
        let d: i64 = row.mu.iter().sum::<u64>() as i64;
        match connected_traced(&hurwitz_word(&row.mu, 1).map_err(|e| e.to_string())?) {
            Ok(result) => {
                if result.max_score() != Some(d * (d - 1)) {
                    eprintln!("score: mu = {:?} reported {:?}", row.mu, result.max_score());
                    ok = false;
                }
            }
            Err(e) => {
                eprintln!("score: mu = {:?} raised {e}", row.mu);
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn check_commutation_suite() -> Result<bool, String> {
    let mut ok = true;
    for d in 0..=4u64 {
        for lambda in Partition::all_of_size(d) {
            for a1 in -3..=3i64 {
                for a2 in -3..=3i64 {
                    for b1 in 0..=2u64 {
                        for b2 in 0..=2u64 {
                            if (a1 == 0 && b1 == 0) || (a2 == 0 && b2 == 0) {
                                continue;
                            }
                            if !check_commutation(a1, b1, a2, b2, &lambda, true)
                                .map_err(|e| e.to_string())?
                            {
                                eprintln!(
                                    "commutation failed: a=({a1},{a2}) b=({b1},{b2}) lambda={lambda}"
                                );
                                ok = false;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(ok)
}

fn check_inclusion_exclusion() -> Result<bool, String> {
    let mut ok = true;
    for mu in profiles(1..=5) {
        let d: u64 = mu.iter().sum();
        let lhs = disconnected(&hurwitz_word(&mu, 1).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let mut rhs = QRational::zero();
        for partition in set_partitions(mu.len()) {
            let mut term = QRational::one();
            let mut weight = Rat::from(factorial(d));
            for block in &partition {
                let sub: Vec<u64> = block.iter().map(|&i| mu[i]).collect();
                weight /= Rat::from(factorial(sub.iter().sum()));
                let c = connected(&hurwitz_word(&sub, 1).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                term = &term * c.value();
            }
            rhs = &rhs + &term.scale_laurent(&Laurent::monomial(0, weight));
        }
        if lhs != rhs {
            eprintln!("inclusion-exclusion failed for mu = {mu:?}");
            ok = false;
        }
    }
    Ok(ok)
}

fn check_gap() -> Result<bool, String> {
    let mut ok = true;
    for mu in profiles(2..=6) {
        let report = check_gap_conjecture(&mu).map_err(|e| e.to_string())?;
        if !report.holds() {
            eprintln!("{report}");
            ok = false;
        }
    }
    Ok(ok)
}

fn check_asymptotics() -> Result<bool, String> {
    let q3 = HurwitzQuery::simple(vec![3, 2], 3);
    let ratio3 = asymptotic_estimate(&q3).map_err(|e| e.to_string())?
        / hurwitz_number(&q3).map_err(|e| e.to_string())?;
    let first = rat_to_decimal(&ratio3, 8);
    let q20 = HurwitzQuery::simple(vec![3, 2], 20);
    let ratio20 = asymptotic_estimate(&q20).map_err(|e| e.to_string())?
        / hurwitz_number(&q20).map_err(|e| e.to_string())?;
    let dev = rat_to_decimal(&(ratio20 - Rat::one()).abs(), 6);
    let ok = (first == "1.0023778" || first == "1.0023779")
        && dev.starts_with("1.1369")
        && dev.ends_with("e-13");
    if !ok {
        eprintln!("asymptotics: got {first} and {dev}");
    }
    Ok(ok)
}

fn check_oracle(jobs: usize) -> Result<bool, String> {
    let cases: Vec<Vec<u64>> = profiles(1..=5);
    let check_one = |mu: &Vec<u64>| -> Result<bool, String> {
        let d: u64 = mu.iter().sum();
        for g in 0..=1i64 {
            let k = (d as i64 + 2 * g - 2 + mu.len() as i64) as u64;
            let wedge = hurwitz_number(&HurwitzQuery::simple(mu.clone(), g))
                .map_err(|e| e.to_string())?;
            let oracle = hurwitz_core::oracle::connected_count(d, mu, k)
                .map_err(|e| e.to_string())?;
            if wedge != oracle {
                eprintln!(
                    "oracle mismatch: mu = {mu:?}, g = {g}: {} vs {}",
                    rat_to_string(&wedge),
                    rat_to_string(&oracle)
                );
                return Ok(false);
            }
        }
        Ok(true)
    };
    if jobs <= 1 {
        let mut ok = true;
        for mu in &cases {
            ok &= check_one(mu)?;
        }
        return Ok(ok);
    }
    let chunk = cases.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = cases
            .chunks(chunk)
            .map(|chunk| scope.spawn(move || chunk.iter().map(&check_one).collect::<Vec<_>>()))
            .collect();
        let mut ok = true;
        for h in handles {
            for r in h.join().map_err(|_| "worker panicked".to_string())? {
                ok &= r?;
            }
        }
        Ok(ok)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_and_range_parsing() {
        assert_eq!(parse_mu("2,1,1").unwrap(), vec![2, 1, 1]);
        assert!(parse_mu("2,0").is_err());
        assert!(parse_mu("").is_err());
        assert_eq!(parse_g_range("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_g_range("-1").unwrap(), vec![-1]);
        assert!(parse_g_range("3..1").is_err());
    }
}

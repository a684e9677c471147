use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conjwidth::census::{enumerate_sl, sum_identity_symbolic, sum_set_census, verify_sum_identity, width_census};
use conjwidth::elemgen::{decompose_elementary, factor_count_census};
use conjwidth::norms::{run_config, NormConfig};
use conjwidth::widthred::{reduce_full, ReductionTrace};
use conjwidth::{Execution, Ideal, RingSpec, SqMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser, Debug)]
#[command(
    name = "conjwidth",
    version,
    about = "Conjugacy width reduction, norms and finite census for SL_n"
)]
struct Cli {
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a matrix to an elementary one and write the trace.
    Reduce(ReduceArgs),
    /// Check a trace file step by step.
    Replay { trace: PathBuf },
    /// Factor a matrix into elementary matrices.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the axiom harness on a norm described by a TOML file.
    Norm {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive census over a finite SL_n.
    Census(CensusArgs),
    /// Check the five-term sum identity.
    Sumid(SumidArgs),
    /// Growth of the sum sets of a two-generator subgroup of SL_2 modulo m.
    Sumset(SumsetArgs),
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(long, value_parser = parse_ring)]
    ring: RingSpec,
    /// Ideal generators, separated by spaces.
    #[arg(long)]
    ideal: String,
    /// Matrix file; without it a seeded random product of elementary
    /// matrices in the ideal is used.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, value_parser = parse_target)]
    target: (usize, usize),
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CensusKind {
    /// Minimal q-operations and word lengths for every sigma and target.
    Width,
    /// Histogram of elementary factor counts.
    Factors,
}

#[derive(Args, Debug)]
struct CensusArgs {
    /// `SL<n>,<ring>` with ring `F<p>` or `Z/<m>`.
    #[arg(long, value_parser = parse_group)]
    group: (usize, RingSpec),
    /// Ideal generators; the whole ring by default.
    #[arg(long)]
    ideal: Option<String>,
    #[arg(long, value_enum, default_value_t = CensusKind::Width)]
    kind: CensusKind,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SumidArgs {
    /// A single tuple `m,a,b,c,d`; otherwise random tuples from the seed.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_tuple)]
    tuple: Option<[i64; 5]>,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    /// Random entries are drawn from `[-range, range]`.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(i64).range(0..=1_000_000))]
    range: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also run the symbolic polynomial check.
    #[arg(long)]
    symbolic: bool,
}

#[derive(Args, Debug)]
struct SumsetArgs {
    /// Generators are `[[1, k], [0, 1]]` and `[[1, 0], [k, 1]]`.
    #[arg(long, default_value_t = 1)]
    k: i64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    modulus: u64,
    /// Target class is `{g = I mod level}`; `level` must divide the modulus.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    level: u64,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    max_sums: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Usage errors exit with 2, domain errors with 1.
enum Failure {
    Usage(String),
    Domain(String),
}

fn domain(e: impl ToString) -> Failure {
    Failure::Domain(e.to_string())
}

fn parse_ring(s: &str) -> Result<RingSpec, String> {
    s.parse().map_err(|e: conjwidth::ring::RingError| e.to_string())
}

fn parse_target(s: &str) -> Result<(usize, usize), String> {
    s.split_once(',')
        .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
        .ok_or_else(|| format!("expected `i,j`, got `{s}`"))
}

fn parse_group(s: &str) -> Result<(usize, RingSpec), String> {
    let bad = || format!("expected `SL<n>,F<p>` or `SL<n>,Z/<m>`, got `{s}`");
    let (head, ring) = s.split_once(',').ok_or_else(bad)?;
    let n: usize = head.strip_prefix("SL").and_then(|n| n.parse().ok()).ok_or_else(bad)?;
    if n < 2 {
        return Err(bad());
    }
    let ring = match ring.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()) {
        Some(p) => RingSpec::prime_field(p).map_err(|e| e.to_string())?,
        None => parse_ring(ring)?,
    };
    if !ring.is_finite() {
        return Err(format!("{ring} is not finite"));
    }
    Ok((n, ring))
}

fn parse_tuple(s: &str) -> Result<[i64; 5], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("expected five integers `m,a,b,c,d`, got `{s}`"))?;
    v.try_into().map_err(|_| format!("expected five integers, got `{s}`"))
}

fn parse_ideal(ring: RingSpec, text: &str) -> Result<Ideal, Failure> {
    let gens = text
        .split_whitespace()
        .map(|g| ring.parse_element(g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("--ideal: {e}")))?;
    if gens.is_empty() {
        return Err(Failure::Usage("--ideal: no generators".into()));
    }
    Ideal::new(ring, gens).map_err(|e| Failure::Usage(format!("--ideal: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Domain(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Product of `len` elementary matrices with entries `c g`, `0 < |c| <= 3`,
/// `g` the ideal's generator; redrawn while scalar.
fn random_sigma(ring: RingSpec, n: usize, q: &Ideal, seed: u64) -> Result<SqMatrix, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = q.canonical_generator().clone();
    for _ in 0..100 {
        let mut m = SqMatrix::identity(ring, n).map_err(domain)?;
        for _ in 0..10 {
            let i = rng.gen_range(1..=n);
            let mut j = rng.gen_range(1..n);
            if j >= i {
                j += 1;
            }
            let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let e = SqMatrix::elementary(ring, n, i, j, &ring.int(c) * &g).map_err(domain)?;
            m = &m * &e;
        }
        if !m.is_scalar() {
            return Ok(m);
        }
    }
    Err(Failure::Domain("no non-central sample in 100 draws".into()))
}

fn reduce(a: ReduceArgs) -> Result<(), Failure> {
    let q = parse_ideal(a.ring, &a.ideal)?;
    let (sigma, source) = match &a.input {
        Some(p) => (SqMatrix::from_text(&read(p)?).map_err(domain)?, p.display().to_string()),
        None => {
            if a.dim < 2 {
                return Err(Failure::Usage("--dim must be at least 2".into()));
            }
            (random_sigma(a.ring, a.dim, &q, a.seed)?, "random".to_string())
        }
    };
    if sigma.ring() != a.ring {
        return Err(domain(format!("matrix is over {}, --ring is {}", sigma.ring(), a.ring)));
    }
    let trace = reduce_full(&sigma, &q, a.target).map_err(domain)?;
    let comments = vec![format!("seed={}", a.seed), format!("source={source}")];
    emit(a.out.as_deref(), &trace.to_text_with_comments(&comments))
}

fn replay(path: &Path) -> Result<(), Failure> {
    let (trace, _) = ReductionTrace::from_text(&read(path)?).map_err(domain)?;
    trace.validate().map_err(domain)?;
    println!("OK steps={} word_length={}", trace.steps.len(), trace.word_length());
    Ok(())
}

fn decompose(input: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let g = SqMatrix::from_text(&read(input)?).map_err(domain)?;
    let f = decompose_elementary(&g).map_err(domain)?;
    if !f.verify() {
        return Err(Failure::Domain("factorization does not re-multiply".into()));
    }
    let mut text = format!("# ring={} n={} factors={}\ni,j,a\n", g.ring(), g.dim(), f.count());
    for x in &f.factors {
        let _ = writeln!(text, "{},{},{}", x.i, x.j, x.a);
    }
    emit(out, &text)
}

fn norm(config: &Path, seed: Option<u64>, out: Option<&Path>, exec: Execution) -> Result<(), Failure> {
    let cfg = NormConfig::from_toml(&read(config)?).map_err(domain)?;
    let report = run_config(&cfg, seed, exec).map_err(domain)?;
    emit(out, &report.to_text())?;
    if report.passed() {
        Ok(())
    } else {
        let bad: Vec<String> = report
            .results
            .iter()
            .filter(|r| r.violations > 0)
            .map(|r| format!("{}={}", r.axiom, r.violations))
            .collect();
        Err(Failure::Domain(format!("axiom violations: {}", bad.join(" "))))
    }
}

fn census(a: CensusArgs, exec: Execution) -> Result<(), Failure> {
    let (n, ring) = a.group;
    let q = match &a.ideal {
        Some(t) => parse_ideal(ring, t)?,
        None => Ideal::whole(ring),
    };
    let budget = usize::try_from(a.budget).unwrap_or(usize::MAX);
    let header = format!("# group=SL{n}({ring}) ideal={q} seed={}\n", a.seed);
    let body = match a.kind {
        CensusKind::Width => {
            let table = enumerate_sl(n, ring, budget).map_err(domain)?;
            width_census(&table, &q, exec).map_err(domain)?.to_csv()
        }
        CensusKind::Factors => factor_count_census(n, ring, budget, exec).map_err(domain)?.to_csv(),
    };
    emit(a.out.as_deref(), &(header + &body))
}

fn sumid(a: SumidArgs) -> Result<(), Failure> {
    let tuples: Vec<[i64; 5]> = match a.tuple {
        Some(t) => vec![t],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..a.count)
                .map(|_| std::array::from_fn(|_| rng.gen_range(-a.range..=a.range)))
                .collect()
        }
    };
    println!("# seed={} tuples={}", a.seed, tuples.len());
    if let Some([m, x, b, c, d]) = tuples
        .iter()
        .copied()
        .find(|&[m, x, b, c, d]| !verify_sum_identity(m, x, b, c, d).holds)
    {
        return Err(Failure::Domain(format!(
            "sum identity fails at m={m} a={x} b={b} c={c} d={d}"
        )));
    }
    if a.symbolic && !sum_identity_symbolic() {
        return Err(Failure::Domain("symbolic sum identity check fails".into()));
    }
    println!("OK");
    Ok(())
}

fn sumset(a: SumsetArgs, exec: Execution) -> Result<(), Failure> {
    if !a.modulus.is_multiple_of(a.level) {
        return Err(Failure::Usage("--level must divide --modulus".into()));
    }
    let z = RingSpec::Integers;
    let gens = vec![
        SqMatrix::from_ints(z, &[&[1, a.k], &[0, 1]]).map_err(domain)?,
        SqMatrix::from_ints(z, &[&[1, 0], &[a.k, 1]]).map_err(domain)?,
    ];
    let max = usize::try_from(a.max_sums).unwrap_or(usize::MAX);
    let report = sum_set_census(&gens, a.modulus, max, a.level, exec).map_err(domain)?;
    let header = format!("# k={} seed={}\n", a.k, a.seed);
    emit(a.out.as_deref(), &(header + &report.to_text()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Reduce(a) => reduce(a),
        Command::Replay { trace } => replay(&trace),
        Command::Decompose { input, out } => decompose(&input, out.as_deref()),
        Command::Norm { config, seed, out } => norm(&config, seed, out.as_deref(), exec),
        Command::Census(a) => census(a, exec),
        Command::Sumid(a) => sumid(a),
        Command::Sumset(a) => sumset(a, exec),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {}", msg.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}

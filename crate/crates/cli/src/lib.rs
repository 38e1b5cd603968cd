//! Subcommands of the `cubetest` binary.
//!
//! Every command writes flat `key value` lines (or a CSV / cochain file) and
//! is fully determined by its arguments, including the seed.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cubetest::lab::{
    cohomology, cohomology_unchecked, differential_matrix, expansion_exact, expansion_probe,
    verify_z2_structure,
};
use cubetest::testers::{
    decode_b1, decode_z2, test_b1, test_z2, Budget, DecodeReport, B1_CONSTANT, Z2_CONSTANT,
};
use cubetest::{
    bracket_cochain, delta, planted, seeded, Cochain, CochainFile, Estimate, NormValue, Ratio,
    Sign, VertexOrder,
};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "cubetest",
    version,
    about = "Cohomological property testing on complete cubical complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Write a planted or random cochain file.
    Gen(GenArgs),
    /// Run the one-sided tester on a cochain file.
    Test(TestArgs),
    /// Decode a cochain file to a nearby cocycle.
    Decode(DecodeArgs),
    /// Dimensions of cocycles, coboundaries and cohomology.
    Cohomology(CohomologyArgs),
    /// Expansion constant, exact (degree one) or probed (degree two).
    Expansion(ExpansionArgs),
    /// Rejection-versus-distance curve as CSV.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Coboundary,
    Cocycle,
    Noisy,
    Random,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Coboundary => "coboundary",
            Kind::Cocycle => "cocycle",
            Kind::Noisy => "noisy",
            Kind::Random => "random",
        }
    }
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    s.parse()
        .map_err(|()| format!("expected +1 or -1, got {s:?}"))
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probability of flipping each cell (noisy only).
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Planted sign; cocycles draw it at random when omitted, noisy uses +1.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    pub theta: Option<Sign>,
    /// Planted bracket sign in degree two, same defaults as `--theta`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    pub pi: Option<Sign>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TestArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also report the exact norm of the differential.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug, Clone)]
pub struct DecodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tuples per detector estimate (default 64 n^2).
    #[arg(long)]
    pub budget: Option<u64>,
    /// Evaluate the differential exactly regardless of size.
    #[arg(long)]
    pub exact: bool,
    /// Write the recovered cochain here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CohomologyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Skip the lower bound on n; generators may then be dependent.
    #[arg(long)]
    pub unchecked: bool,
    /// Also compare Z^2 with the directed coboundaries (d = 2).
    #[arg(long)]
    pub structure: bool,
    /// Export the differential out of degree d as `r c 1` lines.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionMode {
    Exact,
    Probe,
}

#[derive(Args, Debug, Clone)]
pub struct ExpansionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = ExpansionMode::Exact)]
    pub mode: ExpansionMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of probes.
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    #[arg(long, default_value_t = 4)]
    pub max_flips: usize,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Comma-separated noise rates.
    #[arg(long, value_delimiter = ',', default_value = "0,0.001,0.005,0.01,0.05")]
    pub noise: Vec<f64>,
    #[arg(long, default_value_t = 10000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact differential norms; the rejection column is then the exact probability.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// How a command ended when it did not fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Rejected,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Rejected => 1,
        }
    }
}

/// Flat `key value` report.
#[derive(Default, Debug, Clone)]
pub struct Report(Vec<(String, String)>);

impl Report {
    pub fn push(&mut self, key: &str, value: impl Display) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn write_to(&self, out: &mut dyn Write) -> Result<()> {
        for (k, v) in &self.0 {
            writeln!(out, "{k} {v}")?;
        }
        Ok(())
    }

    /// Parses report text back into pairs.
    pub fn parse(text: &str) -> Report {
        Report(
            text.lines()
                .filter_map(|l| l.split_once(' '))
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        )
    }
}

pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Test(a) => cmd_test(a, out),
        Command::Decode(a) => cmd_decode(a, out),
        Command::Cohomology(a) => cmd_cohomology(a, out),
        Command::Expansion(a) => cmd_expansion(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    }
}

fn ratio_f64(r: Ratio) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Planted instance and the number of flipped cells.
pub fn generate(args: &GenArgs) -> Result<(CochainFile, usize)> {
    let (n, d) = (args.n, args.d);
    let mut rng = seeded(args.seed);
    if !(0.0..=1.0).contains(&args.noise) {
        bail!("noise rate {} is outside [0, 1]", args.noise);
    }
    let mut meta = vec![
        ("kind".to_string(), args.kind.name().to_string()),
        ("seed".to_string(), args.seed.to_string()),
    ];
    let mut flipped = 0;
    let cochain = match args.kind {
        Kind::Coboundary => planted::coboundary(n, d, &mut rng)?,
        Kind::Random => Cochain::random(n, d, &mut rng)?,
        Kind::Cocycle | Kind::Noisy => {
            if !(1..=2).contains(&d) {
                bail!(
                    "{} cochains are generated in degrees 1 and 2, got {d}",
                    args.kind.name()
                );
            }
            let base = planted::coboundary(n, d, &mut rng)?;
            let pick = |s: Option<Sign>, rng: &mut cubetest::SeededRng| match (s, args.kind) {
                (Some(s), _) => s,
                (None, Kind::Cocycle) => Sign::from_bit(rand::Rng::random(rng)),
                (None, _) => Sign::PLUS,
            };
            let theta = pick(args.theta, &mut rng);
            let mut c = &base * theta;
            meta.push(("theta".into(), theta.to_string()));
            if d == 2 {
                let pi = pick(args.pi, &mut rng);
                c = &c * &bracket_cochain(pi, &VertexOrder::natural(n))?;
                meta.push(("pi".into(), pi.to_string()));
            }
            if args.kind == Kind::Noisy {
                flipped = planted::flip_random(&mut c, args.noise, &mut rng);
                meta.push(("noise".into(), args.noise.to_string()));
                meta.push(("flipped".into(), flipped.to_string()));
            }
            c
        }
    };
    Ok((CochainFile { cochain, meta }, flipped))
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<Outcome> {
    let (file, flipped) = generate(args)?;
    match &args.out {
        Some(path) => {
            fs::write(path, file.to_string())
                .with_context(|| format!("writing {}", path.display()))?;
            let mut r = Report::default();
            r.push("out", path.display());
            r.push("kind", args.kind.name());
            r.push("n", args.n);
            r.push("d", args.d);
            r.push("cells", file.cochain.len());
            r.push("flipped", flipped);
            r.push("norm", file.cochain.norm());
            r.write_to(out)?;
        }
        None => write!(out, "{file}")?,
    }
    Ok(Outcome::Success)
}

pub fn read_cochain(path: &Path) -> Result<CochainFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse::<CochainFile>()
        .with_context(|| format!("parsing {}", path.display()))
}

fn omega(d: usize) -> Ratio {
    match d {
        1 => Ratio::new(1, B1_CONSTANT),
        _ => Ratio::new(1, Z2_CONSTANT),
    }
}

pub fn cmd_test(args: &TestArgs, out: &mut dyn Write) -> Result<Outcome> {
    let file = read_cochain(&args.input)?;
    let g = &file.cochain;
    let mut rng = seeded(args.seed);
    let v = match g.dim() {
        1 => test_b1(g, args.trials, &mut rng)?,
        2 => test_z2(g, args.trials, &mut rng)?,
        d => bail!("the testers take 1- or 2-cochains, got a {d}-cochain"),
    };
    let est = Estimate::from_counts(v.rejections, v.trials);
    let w = omega(g.dim());
    // Rejection probability per trial is at least w * eps; T trials reach 2/3 once
    // (1 - w eps)^T <= 1/3.
    let eps = (1.0 - (1.0f64 / 3.0).powf(1.0 / args.trials.max(1) as f64)) / ratio_f64(w);
    let mut r = Report::default();
    r.push("verdict", if v.accepted { "accepted" } else { "rejected" });
    r.push("n", g.n());
    r.push("d", g.dim());
    r.push("trials", v.trials);
    r.push("queries_per_trial", v.queries_per_trial);
    r.push("rejections", v.rejections);
    r.push("rejection_rate", format!("{:.6}", est.value));
    r.push("rejection_half_width", format!("{:.6}", est.half_width));
    match &v.rejecting_witness {
        Some(c) => r.push("witness", c),
        None => r.push("witness", "none"),
    }
    if args.exact {
        r.push("delta_norm", delta(g)?.norm());
    }
    r.push("guarantee_omega", w);
    r.push("guarantee_eta", "2/3");
    if eps <= 1.0 {
        r.push("guarantee_epsilon", format!("{eps:.6}"));
    } else {
        r.push("guarantee_epsilon", "vacuous");
    }
    r.write_to(out)?;
    Ok(if v.accepted {
        Outcome::Success
    } else {
        Outcome::Rejected
    })
}

fn budget_for(n: usize, samples: Option<u64>, exact: bool) -> Budget {
    let mut b = Budget::for_vertices(n);
    if let Some(s) = samples {
        b.samples = s;
    }
    if exact {
        b.exact_cell_limit = u64::MAX;
    }
    b
}

pub fn decode(g: &Cochain, seed: u64, samples: Option<u64>, exact: bool) -> Result<DecodeReport> {
    let budget = budget_for(g.n(), samples, exact);
    let mut rng = seeded(seed);
    Ok(match g.dim() {
        1 => decode_b1(g, &budget, &mut rng)?,
        2 => decode_z2(g, &budget, &mut rng)?,
        d => bail!("the decoders take 1- or 2-cochains, got a {d}-cochain"),
    })
}

fn norm_field(v: &NormValue) -> String {
    match v {
        NormValue::Exact(r) => r.to_string(),
        NormValue::Estimated(e) => format!("{:.8}", e.value),
    }
}

pub fn decode_report(rep: &DecodeReport) -> Report {
    let mut r = Report::default();
    r.push("theta", rep.theta);
    if let Some(pi) = rep.pi {
        r.push("pi", pi);
    }
    let names = ["a", "b"];
    for (name, v) in names.iter().zip(&rep.vertices) {
        r.push(&format!("vertex_{name}"), v);
    }
    r.push("delta_norm", norm_field(&rep.delta_norm));
    r.push("delta_norm_exact", rep.delta_norm.is_exact());
    if let NormValue::Estimated(e) = rep.delta_norm {
        r.push("delta_norm_half_width", format!("{:.8}", e.half_width));
    }
    r.push("certified_bound", norm_field(&rep.certified_bound));
    r.push("achieved_distance", rep.achieved_distance);
    r.push(
        "achieved_distance_f64",
        format!("{:.8}", ratio_f64(rep.achieved_distance)),
    );
    r.push("certificate_holds", rep.certificate_holds());
    r.push("ratio", format!("{:.6}", rep.ratio()));
    if let Some(c) = rep.symmetrization_changes {
        r.push("symmetrization_changes", c);
    }
    r
}

pub fn cmd_decode(args: &DecodeArgs, out: &mut dyn Write) -> Result<Outcome> {
    let file = read_cochain(&args.input)?;
    let rep = decode(&file.cochain, args.seed, args.budget, args.exact)?;
    let mut r = Report::default();
    r.push("n", file.cochain.n());
    r.push("d", file.cochain.dim());
    r.0.extend(decode_report(&rep).0);
    if let Some(path) = &args.out {
        let mut f = CochainFile::new(rep.recovered.clone());
        f.meta
            .push(("recovered_from".into(), args.input.display().to_string()));
        fs::write(path, f.to_string()).with_context(|| format!("writing {}", path.display()))?;
        r.push("out", path.display());
    }
    r.write_to(out)?;
    Ok(Outcome::Success)
}

pub fn cmd_cohomology(args: &CohomologyArgs, out: &mut dyn Write) -> Result<Outcome> {
    let rep = if args.unchecked {
        cohomology_unchecked(args.n, args.d)?
    } else {
        cohomology(args.n, args.d)?
    };
    write!(out, "{rep}")?;
    if args.structure {
        if args.d != 2 {
            bail!("--structure applies to d = 2");
        }
        let s = verify_z2_structure(args.n)?;
        for line in s.to_string().lines().skip(1) {
            writeln!(out, "{line}")?;
        }
    }
    if let Some(path) = &args.matrix {
        let m = differential_matrix(args.n, args.d)?;
        let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        m.write_sparse(std::io::BufWriter::new(f))?;
        writeln!(out, "matrix {}", path.display())?;
        writeln!(out, "matrix_shape {}x{}", m.rows(), m.cols())?;
    }
    Ok(Outcome::Success)
}

pub fn cmd_expansion(args: &ExpansionArgs, out: &mut dyn Write) -> Result<Outcome> {
    let rep = match (args.mode, args.d) {
        (ExpansionMode::Exact, 1) => expansion_exact(args.n)?,
        (ExpansionMode::Probe, 2) => {
            expansion_probe(args.n, args.trials, args.max_flips, &mut seeded(args.seed))?
        }
        (ExpansionMode::Exact, d) => bail!("exact expansion is available for d = 1, got {d}"),
        (ExpansionMode::Probe, d) => bail!("expansion probes are available for d = 2, got {d}"),
    };
    write!(out, "{rep}")?;
    if !rep.exact {
        writeln!(out, "heuristic true")?;
    }
    Ok(Outcome::Success)
}

/// One row of the rejection-versus-distance curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub noise_rate: f64,
    /// Distance to the decoder's cocycle, an upper bound on the distance to the property.
    pub distance_upper_bound: f64,
    pub delta_norm: f64,
    pub delta_norm_exact: bool,
    pub per_trial_rejection: f64,
    pub empirical_rejection: f64,
    pub achieved_decode_distance: f64,
    pub trials: u64,
    pub seed: u64,
}

pub fn bench_rows(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &p in &args.noise {
        let gen = GenArgs {
            kind: Kind::Noisy,
            n: args.n,
            d: args.d,
            seed: args.seed,
            noise: p,
            theta: None,
            pi: None,
            out: None,
        };
        let (file, _) = generate(&gen)?;
        let g = &file.cochain;
        let rep = decode(g, args.seed, None, args.exact)?;
        let mut rng = seeded(args.seed ^ 0x5eed);
        let v = match args.d {
            1 => test_b1(g, args.trials, &mut rng)?,
            _ => test_z2(g, args.trials, &mut rng)?,
        };
        let empirical = v.rejection_rate();
        let exact = rep.delta_norm.is_exact();
        rows.push(BenchRow {
            noise_rate: p,
            distance_upper_bound: ratio_f64(rep.achieved_distance),
            delta_norm: rep.delta_norm.value(),
            delta_norm_exact: exact,
            per_trial_rejection: if args.exact && exact {
                rep.delta_norm.value()
            } else {
                empirical
            },
            empirical_rejection: empirical,
            achieved_decode_distance: ratio_f64(rep.achieved_distance),
            trials: args.trials,
            seed: args.seed,
        });
    }
    Ok(rows)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<Outcome> {
    let rows = bench_rows(args)?;
    let sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ),
        None => Box::new(&mut *out),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "noise_rate",
        "exact_distance_to_property",
        "delta_norm",
        "delta_norm_exact",
        "per_trial_rejection",
        "empirical_rejection",
        "trials",
        "seed",
    ])?;
    for r in &rows {
        w.write_record([
            r.noise_rate.to_string(),
            format!("{:.8}", r.distance_upper_bound),
            format!("{:.8}", r.delta_norm),
            r.delta_norm_exact.to_string(),
            format!("{:.8}", r.per_trial_rejection),
            format!("{:.8}", r.empirical_rejection),
            r.trials.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    drop(w);
    if let Some(path) = &args.out {
        writeln!(out, "out {}", path.display())?;
        writeln!(out, "rows {}", rows.len())?;
    }
    Ok(Outcome::Success)
}

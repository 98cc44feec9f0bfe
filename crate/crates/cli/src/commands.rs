//! Command implementations and the verification battery.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mirror_core::broken_lines::{
    basepoint_hazards, enumerate_broken_lines, positive_chamber_basepoint, theta_consistency_check,
};
use mirror_core::cluster::{compare_exchange, mutation_sequence, ClusterSeed};
use mirror_core::lattice::{CertifiedPoint, LatticeVector, RationalPoint, Seed};
use mirror_core::mirror::{generic_basepoints, radius_hazards, MirrorAlgebra, ThetaExpansion};
use mirror_core::scattering::{complete, cwall_supports, ScatteringDiagram};
use mirror_core::toric::{
    build_phi, degenerate_product, stanley_reisner_product, toric_product, Fan, PlSegment, Bound,
};
use mirror_core::Error;

use crate::formats::*;
use crate::svg;

#[derive(Parser, Debug)]
#[command(name = "mirror", version, about = "Scattering diagrams, theta functions and mirror algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Truncation order k.
    #[arg(long, global = true)]
    pub order: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Also write an SVG drawing (rank 2).
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Basepoint as comma-separated rationals, e.g. `5/7,3/11`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub basepoint: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Cluster,
    Toric,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Complete the initial diagram of a seed file.
    Scatter { seed: PathBuf },
    /// Theta function from broken lines.
    Theta {
        diagram: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Include every broken line.
        #[arg(long)]
        trace: bool,
    },
    /// Structure constants of theta_{p_1} ... theta_{p_n}.
    Multiply {
        diagram: PathBuf,
        #[arg(long = "p", required = true, allow_hyphen_values = true)]
        p: Vec<String>,
    },
    /// Toric mode on a fan file or one of P2, P1xP1, Bl1P2.
    Toric {
        fan: String,
        #[command(subcommand)]
        action: ToricAction,
    },
    /// Run a mutation sequence (1-based indices).
    Mutate {
        seed: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sequence: Vec<usize>,
    },
    /// Check invariants of a seed, diagram or fan.
    Verify {
        target: String,
        #[arg(long, value_enum, default_value = "full")]
        level: Level,
    },
}

#[derive(Subcommand, Debug)]
pub enum ToricAction {
    /// `theta_a theta_b = z^gamma theta_(a+b)`.
    Product {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Ray coordinates of a lattice point.
    Weight {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Class of `t -> point + t velocity` for `t` in `[from, to]` (omitted bounds are infinite).
    Segment {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        velocity: String,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
    },
    /// Kink class across every ray.
    Kinks,
    /// Nef cone generators.
    Nef,
    /// Degenerate product table on the box of the given radius.
    SrTable {
        #[arg(long, default_value_t = 1)]
        radius: i64,
    },
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Input(String),
    /// Exit code 1.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file and a rename.
pub fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let tmp = dir.join(format!(".{}.tmp", path.file_name().and_then(|n| n.to_str()).unwrap_or("out")));
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_diagram(path: &Path) -> CliResult<ScatteringDiagram<Coeff>> {
    Ok(from_toml::<DiagramRecord>(&read(path)?)?.to_diagram()?)
}

fn load_fan(name: &str) -> CliResult<Fan> {
    if let Some(f) = Fan::builtin(name) {
        return Ok(f);
    }
    Ok(from_toml::<FanRecord>(&read(Path::new(name))?)?.to_fan()?)
}

/// Runs one command and returns the text for standard output.
pub fn run(cli: &Cli) -> CliResult<String> {
    let text = match &cli.command {
        Command::Scatter { seed } => scatter(cli, seed)?,
        Command::Theta { diagram, m, trace } => theta_cmd(cli, diagram, m, *trace)?,
        Command::Multiply { diagram, p } => multiply_cmd(cli, diagram, p)?,
        Command::Toric { fan, action } => toric_cmd(fan, action)?,
        Command::Mutate { seed, sequence } => mutate_cmd(seed, sequence)?,
        Command::Verify { target, level } => {
            let report = verify_cmd(cli, target, *level)?;
            let text = report.render();
            if let Some(out) = &cli.out {
                write_atomic(out, &text)?;
            }
            if report.passed() {
                return Ok(text);
            }
            return Err(CliError::Verification(text));
        }
    };
    match &cli.out {
        Some(out) => {
            write_atomic(out, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn scatter(cli: &Cli, seed: &Path) -> CliResult<String> {
    let k = cli.order.ok_or_else(|| CliError::Input("scatter needs --order".into()))?;
    let seed = from_toml::<SeedRecord>(&read(seed)?)?.to_seed()?;
    let d = complete::<Coeff>(&seed, k)?;
    if let Some(p) = &cli.svg {
        write_atomic(p, &svg::render(&d)?)?;
    }
    Ok(to_toml(&DiagramRecord::from_diagram(&d)))
}

fn basepoint_for(
    cli: &Cli,
    d: &ScatteringDiagram<Coeff>,
    hazards: Vec<LatticeVector>,
    auto: impl FnOnce() -> mirror_core::Result<CertifiedPoint>,
) -> CliResult<CertifiedPoint> {
    match &cli.basepoint {
        Some(s) => {
            let point = RationalPoint::parse(s)?;
            if point.len() != d.seed().rank() {
                return Err(Error::DimensionMismatch { expected: d.seed().rank(), found: point.len() }.into());
            }
            let cert = CertifiedPoint { point, constraint: None, avoided: hazards };
            if !cert.verify() {
                return Err(Error::NonGenericEndpoint(format!("basepoint {s} is not generic")).into());
            }
            Ok(cert)
        }
        None => Ok(auto()?),
    }
}

fn order_for(cli: &Cli, d: &ScatteringDiagram<Coeff>) -> CliResult<u32> {
    let k = cli.order.unwrap_or(d.order());
    if k > d.order() {
        return Err(Error::OrderMismatch(k, d.order()).into());
    }
    Ok(k)
}

fn theta_cmd(cli: &Cli, path: &Path, m: &str, trace: bool) -> CliResult<String> {
    let d = load_diagram(path)?;
    let k = order_for(cli, &d)?;
    let m = parse_vector(m)?;
    if m.len() != d.seed().rank() {
        return Err(Error::DimensionMismatch { expected: d.seed().rank(), found: m.len() }.into());
    }
    let ms = [m.clone()];
    let bp = basepoint_for(cli, &d, basepoint_hazards(&d, &ms, k), || positive_chamber_basepoint(&d, &ms, k))?;
    let t = mirror_core::broken_lines::theta(&d, &m, &bp.point, k)?;
    let lines = if trace {
        enumerate_broken_lines(&d, &m, &bp.point, k)?
            .iter()
            .map(|l| LineRecord {
                segments: l
                    .segments
                    .iter()
                    .map(|s| SegmentRecord {
                        start: s.start.as_ref().map(point_strings).unwrap_or_default(),
                        exponent: s.exponent.coords().to_vec(),
                        coefficient: s.coefficient.to_string(),
                    })
                    .collect(),
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(to_toml(&ThetaRecord {
        m: m.coords().to_vec(),
        basepoint: point_strings(&bp.point),
        order: k,
        seed: SeedRecord::from_seed(d.seed()),
        series: SeriesRecord::from_series(&t.series),
        lines,
    }))
}

fn multiply_cmd(cli: &Cli, path: &Path, ps: &[String]) -> CliResult<String> {
    let d = load_diagram(path)?;
    let k = order_for(cli, &d)?;
    let ps = ps.iter().map(|p| parse_vector(p)).collect::<mirror_core::Result<Vec<_>>>()?;
    let radius = ps.iter().flat_map(|p| p.coords().iter().map(|x| x.abs())).sum::<i64>() + k as i64 + 2;
    let near = default_near(d.seed());
    let bp = basepoint_for(cli, &d, radius_hazards(&d, radius), || {
        Ok(generic_basepoints(&d, &near, 1, radius)?.remove(0))
    })?;
    let alg = MirrorAlgebra::new(&d, bp.clone(), k)?;
    let t = alg.structure_constants(&ps, k)?;
    Ok(to_toml(&TableRecord {
        order: k,
        basepoint: point_strings(&bp.point),
        seed: SeedRecord::from_seed(d.seed()),
        rows: vec![RowRecord::from_table(&t)],
    }))
}

fn default_near(seed: &Seed) -> RationalPoint {
    let r = seed.rank();
    RationalPoint::new(
        (0..r)
            .map(|i| {
                let v = if seed.is_unfrozen(i) { 11 + 2 * i as i64 } else { 0 };
                num_rational::BigRational::new(v.into(), 13.into())
            })
            .collect(),
    )
}

fn parse_bound(s: &Option<String>) -> CliResult<Bound> {
    match s {
        None => Ok(Bound::Infinite),
        Some(t) => Ok(Bound::At(
            mirror_core::lattice::parse_rational(t).ok_or_else(|| CliError::Input(format!("invalid rational {t:?}")))?,
        )),
    }
}

fn toric_cmd(fan: &str, action: &ToricAction) -> CliResult<String> {
    let fan = load_fan(fan)?;
    let phi = build_phi(&fan)?;
    let mut rec = ToricRecord {
        fan: FanRecord::from_fan(&fan),
        query: String::new(),
        inputs: Vec::new(),
        q: Vec::new(),
        gamma: None,
        weight: Vec::new(),
        kinks: Vec::new(),
        nef: Vec::new(),
        sr_table: Vec::new(),
    };
    let two = |v: LatticeVector| -> CliResult<LatticeVector> {
        if v.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: v.len() }.into());
        }
        Ok(v)
    };
    match action {
        ToricAction::Product { a, b } => {
            let (a, b) = (two(parse_vector(a)?)?, two(parse_vector(b)?)?);
            let (q, g) = toric_product(&phi, &a, &b)?;
            rec.query = "product".into();
            rec.inputs = vec![a.coords().to_vec(), b.coords().to_vec()];
            rec.q = q.coords().to_vec();
            rec.gamma = Some(ClassRecord::new(&fan, &g));
        }
        ToricAction::Weight { p } => {
            let p = two(parse_vector(p)?)?;
            rec.query = "weight".into();
            rec.inputs = vec![p.coords().to_vec()];
            rec.weight = fan.weight(&p).0;
        }
        ToricAction::Segment { point, velocity, from, to } => {
            let l = PlSegment {
                point: RationalPoint::parse(point)?,
                velocity: two(parse_vector(velocity)?)?,
                from: parse_bound(from)?,
                to: parse_bound(to)?,
            };
            if l.point.len() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: l.point.len() }.into());
            }
            rec.query = "segment".into();
            rec.gamma = Some(ClassRecord::new(&fan, &phi.segment_class(&l)?));
        }
        ToricAction::Kinks => {
            rec.query = "kinks".into();
            rec.kinks = (0..fan.len()).map(|i| fan.kink(i).0).collect();
        }
        ToricAction::Nef => {
            rec.query = "nef".into();
            rec.nef = fan.nef_generators();
        }
        ToricAction::SrTable { radius } => {
            rec.query = "sr-table".into();
            let pts = box_points(*radius);
            for a in &pts {
                for b in &pts {
                    let got = degenerate_product(&phi, a, b)?;
                    let rule = stanley_reisner_product(&fan, a, b);
                    rec.sr_table.push(SrRow {
                        a: a.coords().to_vec(),
                        b: b.coords().to_vec(),
                        product: got.as_ref().map(|v| v.coords().to_vec()).unwrap_or_default(),
                        agrees: got == rule,
                    });
                }
            }
        }
    }
    Ok(to_toml(&rec))
}

fn box_points(r: i64) -> Vec<LatticeVector> {
    (-r..=r).flat_map(|x| (-r..=r).map(move |y| LatticeVector::new(vec![x, y]))).collect()
}

fn mutate_cmd(seed: &Path, sequence: &[usize]) -> CliResult<String> {
    let text = read(seed)?;
    let cs = match from_toml::<ClusterSeedRecord>(&text) {
        Ok(r) => r.to_seed()?,
        Err(_) => ClusterSeed::from_seed(&from_toml::<SeedRecord>(&text)?.to_seed()?),
    };
    if sequence.contains(&0) {
        return Err(CliError::Input("mutation indices are 1-based".into()));
    }
    let seq: Vec<usize> = sequence.iter().map(|i| i - 1).collect();
    let trace = mutation_sequence::<Coeff>(&cs, &seq)?;
    Ok(to_toml(&TraceRecord::from_trace(&trace)))
}

/// One named invariant with its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub outcome: Result<(), String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome.is_ok())
    }

    fn push(&mut self, name: &str, outcome: Result<(), String>) {
        self.checks.push(Check { name: name.into(), outcome });
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            match &c.outcome {
                Ok(()) => s.push_str(&format!("PASS {}\n", c.name)),
                Err(e) => s.push_str(&format!("FAIL {}: {e}\n", c.name)),
            }
        }
        s
    }
}

fn verify_cmd(cli: &Cli, target: &str, level: Level) -> CliResult<Report> {
    let text = if Fan::builtin(target).is_some() { String::new() } else { read(Path::new(target))? };
    let table: toml::Table = if text.is_empty() { toml::Table::new() } else { from_toml(&text)? };
    if cli.mode == Some(Mode::Toric) || table.contains_key("rays") || Fan::builtin(target).is_some() {
        return Ok(verify_toric(&load_fan(target)?, level)?);
    }
    let (d, completed) = if table.contains_key("walls") {
        (from_toml::<DiagramRecord>(&text)?.to_diagram()?, false)
    } else {
        let seed = from_toml::<SeedRecord>(&text)?.to_seed()?;
        let k = cli.order.unwrap_or(6);
        (complete::<Coeff>(&seed, k)?, true)
    };
    if d.seed().rank() != 2 {
        return Err(Error::UnsupportedRank(d.seed().rank()).into());
    }
    let k = order_for(cli, &d)?;
    Ok(verify_diagram(&d, k, level, completed))
}

fn fail(e: impl ToString) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Invariant battery for a rank-2 diagram at order `k`.
pub fn verify_diagram(d: &ScatteringDiagram<Coeff>, k: u32, level: Level, completed: bool) -> Report {
    let mut r = Report::default();
    let full = level == Level::Full;
    let n_loops = if full { 64 } else { 16 };
    r.push(
        "consistency",
        d.random_loops(n_loops, 1)
            .and_then(|ls| d.loop_failures(&ls))
            .map_err(fail)
            .and_then(|bad| ensure(bad == 0, || format!("{bad} of {n_loops} loops are not the identity"))),
    );
    r.push("confinement", confinement(d, k));
    let ms: Vec<LatticeVector> = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1]].iter().map(|m| LatticeVector::from(*m)).collect();
    r.push(
        "theta-consistency",
        (|| {
            for i in 0..d.walls().len() {
                for m in &ms {
                    if !theta_consistency_check(d, m, i, k).map_err(fail)? {
                        return Err(format!("wall {i}, m = {m}"));
                    }
                }
            }
            Ok(())
        })(),
    );
    let algebra = generic_basepoints(d, &default_near(d.seed()), 5, 2 * k as i64 + 8)
        .map_err(fail)
        .and_then(|bps| {
            bps.into_iter()
                .map(|bp| MirrorAlgebra::new(d, bp, k).map_err(fail))
                .collect::<Result<Vec<_>, String>>()
        });
    let algs = match algebra {
        Ok(a) => a,
        Err(e) => {
            for name in ["commutativity", "associativity", "unit", "positivity", "frobenius", "chamber-independence"] {
                r.push(name, Err(e.clone()));
            }
            return r;
        }
    };
    let alg = &algs[0];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rv = |rng: &mut ChaCha8Rng| LatticeVector::new(vec![rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
    let trials = if full { 20 } else { 5 };
    let triples: Vec<[LatticeVector; 3]> = (0..trials).map(|_| [rv(&mut rng), rv(&mut rng), rv(&mut rng)]).collect();
    let basis = |p: &LatticeVector| ThetaExpansion::basis(p.clone(), k);
    r.push(
        "commutativity",
        (|| {
            for [a, b, c] in &triples {
                let t = alg.structure_constants(&[a.clone(), b.clone(), c.clone()], k).map_err(fail)?;
                for perm in [[b, a, c], [c, b, a], [a, c, b]] {
                    let u = alg.structure_constants(&perm.map(|x| x.clone()), k).map_err(fail)?;
                    ensure(u.entries == t.entries, || format!("inputs {a}, {b}, {c}"))?;
                }
            }
            Ok(())
        })(),
    );
    let mut products = Vec::new();
    r.push(
        "associativity",
        (|| {
            for [a, b, c] in &triples {
                let ab = alg.multiply(&basis(a), &basis(b)).map_err(fail)?;
                let left = alg.multiply(&ab, &basis(c)).map_err(fail)?;
                let bc = alg.multiply(&basis(b), &basis(c)).map_err(fail)?;
                let right = alg.multiply(&basis(a), &bc).map_err(fail)?;
                ensure(left == right, || format!("inputs {a}, {b}, {c}"))?;
                products.extend([ab, bc, left]);
            }
            Ok(())
        })(),
    );
    r.push(
        "unit",
        (|| {
            let zero = LatticeVector::zero(2);
            for [a, ..] in &triples {
                let t = alg.multiply(&basis(&zero), &basis(a)).map_err(fail)?;
                ensure(t == basis(a), || format!("theta_0 theta_{a} = {t:?}"))?;
            }
            Ok(())
        })(),
    );
    r.push(
        "positivity",
        (|| {
            for e in &products {
                ensure(e.is_nonnegative(), || format!("negative structure constant in {e:?}"))?;
                for (q, _) in e.terms() {
                    let deg = d.seed().degree(&(q - e.base()));
                    ensure(deg.is_some_and(|g| g <= k), || format!("q = {q} outside base + P"))?;
                }
            }
            for m in &ms {
                let t = alg.theta(m, k).map_err(fail)?;
                ensure(t.is_nonnegative(), || format!("negative coefficient in theta_{m}"))?;
            }
            Ok(())
        })(),
    );
    r.push(
        "frobenius",
        (|| {
            for i in 0..trials {
                let n = 2 + i % 3;
                let xs: Vec<ThetaExpansion<Coeff>> = (0..n).map(|_| basis(&rv(&mut rng))).collect();
                let a = alg.pairing(&xs).map_err(fail)?;
                let b = alg.pairing_direct(&xs).map_err(fail)?;
                ensure(a == b, || format!("pairing {a} vs {b}"))?;
            }
            Ok(())
        })(),
    );
    r.push(
        "chamber-independence",
        (|| {
            for [a, b, _] in &triples {
                let t0 = algs[0].structure_constants(&[a.clone(), b.clone()], k).map_err(fail)?;
                for other in &algs[1..] {
                    let t = other.structure_constants(&[a.clone(), b.clone()], k).map_err(fail)?;
                    ensure(t.entries == t0.entries, || format!("inputs {a}, {b} at {}", other.basepoint().point))?;
                }
            }
            Ok(())
        })(),
    );
    let comparable = d.seed().rank() == 2 && d.seed().form().is_unimodular();
    if full && comparable && (completed || d.walls().iter().any(|w| !w.is_initial())) {
        let cs = ClusterSeed::from_seed(d.seed());
        let report = compare_exchange(d, &cs, k.min(4));
        r.push(
            "cluster-exchange",
            ensure(report.all_matched(), || format!("{} exchange relations mismatched", report.mismatches())),
        );
    }
    r
}

fn confinement(d: &ScatteringDiagram<Coeff>, k: u32) -> Result<(), String> {
    let cw = cwall_supports(d.seed(), k);
    for w in d.walls().iter().filter(|w| !w.is_initial()) {
        ensure(!w.is_incoming(), || format!("generated wall {} is incoming", w.direction()))?;
        ensure(w.function().coeffs().iter().all(|c| !c.is_negative()), || {
            format!("wall {} has a negative coefficient", w.direction())
        })?;
        ensure(cw.iter().any(|c| c.confines(w.support(), w.direction())), || {
            format!("wall {} is not confined", w.direction())
        })?;
    }
    Ok(())
}

/// Toric invariants on a fixed box of lattice points.
pub fn verify_toric(fan: &Fan, level: Level) -> mirror_core::Result<Report> {
    let phi = build_phi(fan)?;
    let mut r = Report::default();
    let radius = if level == Level::Full { 2 } else { 1 };
    let pts = box_points(radius);
    let mut classes = Vec::new();
    let mut weight = Ok(());
    let mut support = Ok(());
    for a in &pts {
        for b in &pts {
            let (q, g) = toric_product(&phi, a, b)?;
            let lhs = fan.weight(a).add(&fan.weight(b));
            let rhs = fan.weight(&q).add(&g);
            if lhs != rhs && weight.is_ok() {
                weight = Err(format!("a = {a}, b = {b}"));
            }
            if g.is_zero() != fan.share_cone(a, b) && support.is_ok() {
                support = Err(format!("a = {a}, b = {b}, gamma = {g}"));
            }
            classes.push(g);
        }
    }
    r.push("weight-identity", weight);
    r.push("gamma-support", support);
    let mut cocycle = Ok(());
    for a in &pts {
        for b in &pts {
            for c in pts.iter().step_by(3) {
                let g1 = toric_product(&phi, a, b)?.1.add(&toric_product(&phi, &(a + b), c)?.1);
                let g2 = toric_product(&phi, a, &(b + c))?.1.add(&toric_product(&phi, b, c)?.1);
                if g1 != g2 && cocycle.is_ok() {
                    cocycle = Err(format!("a = {a}, b = {b}, c = {c}"));
                }
            }
        }
    }
    r.push("cocycle", cocycle);
    let nef = fan.nef_generators();
    r.push(
        "nef-pairing",
        ensure(classes.iter().all(|g| nef.iter().all(|f| g.pair_divisor(f) >= 0)), || "negative pairing".into()),
    );
    let mut sr = Ok(());
    for a in &pts {
        for b in &pts {
            if degenerate_product(&phi, a, b)? != stanley_reisner_product(fan, a, b) && sr.is_ok() {
                sr = Err(format!("a = {a}, b = {b}"));
            }
        }
    }
    r.push("stanley-reisner", sr);
    Ok(r)
}

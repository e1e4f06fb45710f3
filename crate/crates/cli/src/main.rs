use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monoclif::clifford::{order3_trace_check, random_symplectic, zauner_with_report, SymplecticMatrix};
use monoclif::crt::verify_product_iso;
use monoclif::linalg::{mat_pow, max_abs_diff, CMatrix};
use monoclif::monomial::{
    is_phase_permutation, monomial_clifford, monomial_conjugation_check, monomial_weyl_generators, monomial_zauner,
    stabilized_abelian_check,
};
use monoclif::mub::{entanglement_deviation, is_unbiased, prime_family, Basis, BasisLabel};
use monoclif::sic::{
    autocorrelation_check, count_distinct, fiducial_n16_with, fiducial_n4, fiducial_n9, orbit_projections,
    search_fiducial, verify_sic, Fiducial, FiducialFile, N16Options, SearchConfig, Transcription,
};
use monoclif::weyl::{standard_generators, BasisTag, Dimension};
use monoclif::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

const SEARCH_MAX_DIM: usize = 20;

#[derive(Parser)]
#[command(name = "monoclif", version, about = "Clifford groups, monomial representations, SIC fiducials and MUBs")]
struct Cli {
    /// Pass/fail tolerance for verification metrics.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path (a directory for `generate mub`); standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a construction and emit a JSON report.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Write fiducials, bases, projection data or operators.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Numerical fiducial search in the Zauner eigenspace.
    Search(SearchArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    Sic(VerifySicArgs),
    Mub(MubArgs),
    Monomial(SampledArgs),
    Crt(SampledArgs),
    Zauner(DimArgs),
}

#[derive(Subcommand)]
enum GenerateCmd {
    Sic(GenerateSicArgs),
    Mub(MubArgs),
    Projection(ProjectionArgs),
    Operators(OperatorArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    N4,
    N9,
    N16,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Standard,
    Monomial,
    Adapted16,
}

impl From<BasisArg> for BasisTag {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Standard => BasisTag::Standard,
            BasisArg::Monomial => BasisTag::Monomial,
            BasisArg::Adapted16 => BasisTag::Adapted16,
        }
    }
}

/// Parameters of the closed-form fiducials.
#[derive(Args, Clone)]
struct ClosedForm {
    #[arg(long, default_value_t = 0)]
    slot: usize,
    #[arg(long, default_value_t = 0)]
    s: u32,
    #[arg(long, default_value_t = 0)]
    t: u32,
    #[arg(long, default_value_t = 0)]
    u: u32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    s0: i32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    s1: i32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    s2: i32,
    #[arg(long, default_value_t = 0)]
    m3: u32,
    #[arg(long, default_value_t = 0)]
    m4: u32,
    /// Sign of t₂ for N = 16.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    t2_branch: i8,
    /// Use the N = 16 coefficients exactly as typeset.
    #[arg(long)]
    as_printed: bool,
    /// Evaluate N = 16 with √13 and √17 negated.
    #[arg(long)]
    galois: bool,
}

impl ClosedForm {
    fn build(&self, n: usize) -> Result<Fiducial, CliError> {
        match n {
            4 => Ok(fiducial_n4(self.slot, self.s, self.t, self.u)?),
            9 => Ok(fiducial_n9(self.s0, self.s1, self.s2, self.m3, self.m4)?),
            16 => {
                let transcription = if self.as_printed { Transcription::AsPrinted } else { Transcription::Reconciled };
                let opts = N16Options { t2_branch: self.t2_branch, transcription, galois_conjugate: self.galois };
                Ok(fiducial_n16_with(&opts)?)
            }
            _ => Err(CliError::Usage(format!("closed forms exist for N = 4, 9, 16, not {n}"))),
        }
    }
}

#[derive(Args)]
struct VerifySicArgs {
    /// Fiducial file to check.
    #[arg(long, conflicts_with = "builtin")]
    file: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "file")]
    builtin: Option<Builtin>,
    #[command(flatten)]
    params: ClosedForm,
}

#[derive(Args)]
struct GenerateSicArgs {
    #[arg(long)]
    dim: usize,
    /// Basis of the written amplitudes; defaults to the construction's own basis.
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
    #[command(flatten)]
    params: ClosedForm,
}

#[derive(Args)]
struct MubArgs {
    /// Prime p; the bases live in dimension p².
    #[arg(long)]
    p: usize,
}

#[derive(Args)]
struct SampledArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

#[derive(Args)]
struct DimArgs {
    #[arg(long)]
    dim: usize,
}

#[derive(Args)]
struct ProjectionArgs {
    /// Closed form for 4, 9, 16; otherwise a seeded search.
    #[arg(long, required_unless_present = "file")]
    dim: Option<usize>,
    #[arg(long, conflicts_with = "dim")]
    file: Option<PathBuf>,
    /// Basis of the probability vectors; monomial by default for square N.
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
}

#[derive(Args)]
struct OperatorArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, value_enum, default_value = "standard")]
    basis: BasisArg,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 50)]
    max_restarts: usize,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Io(s) => f.write_str(s),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: String,
    inputs: BTreeMap<String, Value>,
    pass: bool,
    metrics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    artifacts: Option<Value>,
}

impl Report {
    fn new(command: &str) -> Self {
        Self { command: command.into(), inputs: BTreeMap::new(), pass: true, metrics: BTreeMap::new(), artifacts: None }
    }

    fn input(&mut self, k: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(k.into(), v.into());
        self
    }

    fn metric(&mut self, k: &str, v: f64) -> &mut Self {
        self.metrics.insert(k.into(), v);
        self
    }
}

/// What a command produced. `to_stdout` forces stdout even when `--out` is set, because `--out`
/// already received a file.
struct Output {
    text: String,
    pass: bool,
    to_stdout: bool,
}

impl Output {
    fn new(text: String, pass: bool) -> Self {
        Self { text, pass, to_stdout: false }
    }
}

fn dim(n: usize) -> Result<Dimension, CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("dimension must be at least 2, got {n}")));
    }
    Ok(Dimension::new(n)?)
}

fn read_fiducial(path: &Path) -> Result<Fiducial, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(FiducialFile::parse(&text)?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn report_output(r: Report) -> Output {
    Output::new(to_json(&r), r.pass)
}

fn verify_sic_cmd(a: &VerifySicArgs, tol: f64) -> Result<Output, CliError> {
    let mut r = Report::new("verify sic");
    let f = match (&a.file, a.builtin) {
        (Some(p), _) => {
            r.input("file", p.display().to_string());
            read_fiducial(p)?
        }
        (None, Some(b)) => {
            let n = match b {
                Builtin::N4 => 4,
                Builtin::N9 => 9,
                Builtin::N16 => 16,
            };
            let f = a.params.build(n)?;
            r.input("builtin", format!("n{n}"));
            for (k, v) in &f.provenance {
                r.input(k, v.clone());
            }
            f
        }
        (None, None) => return Err(CliError::Usage("give --file or --builtin".into())),
    };
    r.input("N", f.dim.n()).input("basis", f.basis.as_str()).input("tol", tol);
    let cert = verify_sic(&f, tol)?;
    r.metric("max_abs_deviation", cert.max_abs_deviation);
    let mut identity: f64 = autocorrelation_check(&f, BasisTag::Standard)?.max();
    if f.dim.root().is_some() {
        identity = identity.max(autocorrelation_check(&f, BasisTag::Monomial)?.max());
    }
    r.metric("probability_identity_residual", identity);
    r.pass = cert.pass && identity <= tol.max(1e-10);
    Ok(report_output(r))
}

fn mub_family(p: usize) -> Result<Vec<Basis>, CliError> {
    match prime_family(p) {
        Err(Error::NotPrime(p)) => Err(CliError::Usage(format!("--p must be prime, got {p}"))),
        other => Ok(other?),
    }
}

fn verify_mub_cmd(a: &MubArgs, tol: f64) -> Result<Output, CliError> {
    let fam = mub_family(a.p)?;
    let mut r = Report::new("verify mub");
    r.input("p", a.p).input("N", a.p * a.p).input("tol", tol);
    let mut worst: f64 = 0.0;
    for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            worst = worst.max(is_unbiased(&fam[i], &fam[j], tol)?.1);
        }
    }
    let gram = fam.iter().map(|b| b.gram_deviation()).fold(0.0, f64::max);
    let mut ent: f64 = 0.0;
    for b in &fam[2..] {
        for v in &b.vectors {
            ent = ent.max(entanglement_deviation(b.dim, v)?);
        }
    }
    r.metric("bases", fam.len() as f64)
        .metric("max_unbiasedness_deviation", worst)
        .metric("max_gram_deviation", gram)
        .metric("max_entanglement_deviation", ent);
    r.pass = worst <= tol && gram <= tol && ent <= 1e-8;
    Ok(report_output(r))
}

fn verify_monomial_cmd(a: &SampledArgs, tol: f64, seed: u64) -> Result<Output, CliError> {
    let d = dim(a.dim)?;
    d.require_square()?;
    let mut r = Report::new("verify monomial");
    r.input("N", a.dim).input("samples", a.samples).input("seed", seed).input("tol", tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut conj: f64 = 0.0;
    let mut non_monomial = 0usize;
    for _ in 0..a.samples {
        let g = random_symplectic(d, &mut rng);
        if !is_phase_permutation(&monomial_clifford(&g, d, 0.0)?.entries, tol) {
            non_monomial += 1;
        }
        conj = conj.max(monomial_conjugation_check(&g, d)?);
    }
    let stab = stabilized_abelian_check(d, a.samples.clamp(1, 30), seed)?;
    r.metric("max_conjugation_residual", conj)
        .metric("non_phase_permutations", non_monomial as f64)
        .metric("stabilized_subgroup_residual", stab);
    r.pass = non_monomial == 0 && conj <= tol.max(1e-9) && stab <= tol;
    Ok(report_output(r))
}

fn verify_crt_cmd(a: &SampledArgs, tol: f64, seed: u64) -> Result<Output, CliError> {
    let d = dim(a.dim)?;
    let rep = verify_product_iso(d.n(), a.samples, seed)?;
    let mut r = Report::new("verify crt");
    r.input("N", a.dim).input("samples", a.samples).input("seed", seed).input("tol", tol);
    r.input(
        "factors",
        rep.factorization.factors.iter().map(|f| json!({"n": f.n, "nbar": f.nbar, "kappa": f.kappa})).collect::<Vec<_>>(),
    );
    r.metric("displacement_residual", rep.displacement_residual)
        .metric("clifford_residual", rep.clifford_residual)
        .metric("elements_checked", rep.elements_checked as f64);
    r.pass = rep.displacement_residual <= tol && rep.clifford_residual <= tol.max(1e-9);
    Ok(report_output(r))
}

fn verify_zauner_cmd(a: &DimArgs, tol: f64) -> Result<Output, CliError> {
    let d = dim(a.dim)?;
    let (u, rep) = zauner_with_report(d)?;
    let n = d.n();
    let cube = max_abs_diff(&mat_pow(&u.entries, 3), &CMatrix::identity(n, n));
    let o3 = order3_trace_check(&SymplecticMatrix::ZAUNER, d);
    let mut r = Report::new("verify zauner");
    r.input("N", n).input("tol", tol);
    r.metric("d0", rep.measured.d0 as f64)
        .metric("d1", rep.measured.d1 as f64)
        .metric("d2", rep.measured.d2 as f64)
        .metric("predicted_d0", rep.predicted.d0 as f64)
        .metric("predicted_d1", rep.predicted.d1 as f64)
        .metric("predicted_d2", rep.predicted.d2 as f64)
        .metric("cube_residual", cube)
        .metric("max_cluster_distance", rep.max_cluster_distance);
    let mut pass = rep.measured == rep.predicted && cube <= tol;
    if d.root().is_some() {
        let m = monomial_zauner(d)?.entries;
        let perm = is_phase_permutation(&m, tol);
        r.metric("monomial_is_phase_permutation", f64::from(u8::from(perm)));
        pass &= perm;
    }
    r.artifacts = Some(json!({
        "order3_mod_n": o3.order3_mod_n,
        "order3_mod_nbar": o3.order3_mod_nbar,
        "trace_minus_one_mod_n": o3.trace_minus_one_mod_n,
        "trace_minus_one_mod_nbar": o3.trace_minus_one_mod_nbar,
    }));
    r.pass = pass;
    Ok(report_output(r))
}

fn generate_sic_cmd(a: &GenerateSicArgs) -> Result<Output, CliError> {
    let mut f = a.params.build(a.dim)?;
    if let Some(b) = a.basis {
        f = f.to_basis(b.into())?;
    }
    Ok(Output::new(to_json(&FiducialFile::from_fiducial(&f)), true))
}

fn basis_payload(b: &Basis) -> Value {
    let label = match &b.label {
        BasisLabel::Latin(k) => json!({"kind": "latin", "k": k}),
        other => json!({"kind": other.name()}),
    };
    json!({
        "N": b.dim.n(),
        "basis": "monomial",
        "label": label,
        "vectors": b.vectors.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "format_version": 1,
    })
}

/// Basis files go into `--out` as a directory, or to stdout as one array.
fn generate_mub_cmd(a: &MubArgs, out: Option<&Path>) -> Result<Output, CliError> {
    let fam = mub_family(a.p)?;
    let payloads: Vec<(String, Value)> = fam.iter().map(|b| (b.label.name(), basis_payload(b))).collect();
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            for (name, v) in &payloads {
                let path = dir.join(format!("mub_p{}_{name}.json", a.p));
                fs::write(&path, to_json(v)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            let written: Vec<String> = payloads.iter().map(|(name, _)| format!("mub_p{}_{name}.json", a.p)).collect();
            Ok(Output { text: to_json(&json!({"directory": dir.display().to_string(), "files": written})), pass: true, to_stdout: true })
        }
        None => Ok(Output::new(to_json(&payloads.into_iter().map(|(_, v)| v).collect::<Vec<_>>()), true)),
    }
}

fn generate_projection_cmd(a: &ProjectionArgs, seed: u64) -> Result<Output, CliError> {
    let f = match (&a.file, a.dim) {
        (Some(p), _) => read_fiducial(p)?,
        (None, Some(n @ (4 | 9 | 16))) => {
            let defaults = ClosedForm::parse_defaults();
            defaults.build(n)?
        }
        (None, Some(n)) => search_or_fail(dim(n)?, seed, 1e-10, 50)?,
        (None, None) => return Err(CliError::Usage("give --dim or --file".into())),
    };
    let basis = match a.basis {
        Some(b) => b.into(),
        None if f.dim.root().is_some() => BasisTag::Monomial,
        None => BasisTag::Standard,
    };
    let g = f.to_basis(basis)?;
    let points = orbit_projections(&g)?;
    let distinct = count_distinct(&points, 1e-8);
    Ok(Output::new(
        to_json(&json!({
            "N": g.dim.n(),
            "basis": basis.as_str(),
            "distinct_points": distinct,
            "points": points,
            "provenance": g.provenance,
        })),
        true,
    ))
}

impl ClosedForm {
    fn parse_defaults() -> Self {
        #[derive(Parser)]
        struct Wrap {
            #[command(flatten)]
            p: ClosedForm,
        }
        Wrap::parse_from(["defaults"]).p
    }
}

fn matrix_payload(m: &CMatrix) -> Value {
    json!((0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn generate_operators_cmd(a: &OperatorArgs) -> Result<Output, CliError> {
    let d = dim(a.dim)?;
    let basis: BasisTag = a.basis.into();
    let ops: BTreeMap<&str, CMatrix> = match basis {
        BasisTag::Standard => {
            let (x, z) = standard_generators(d);
            BTreeMap::from([("X", x.entries), ("Z", z.entries), ("zauner", zauner_with_report(d)?.0.entries)])
        }
        BasisTag::Monomial => {
            let (x, z) = monomial_weyl_generators(d)?;
            BTreeMap::from([("X", x.entries), ("Z", z.entries), ("zauner", monomial_zauner(d)?.entries)])
        }
        BasisTag::Adapted16 => {
            if d.n() != 16 {
                return Err(CliError::Usage("adapted16 operators exist only for N = 16".into()));
            }
            let g = monoclif::sic::adapted16_generators();
            BTreeMap::from([("X", g.x.clone()), ("Z", g.z.clone()), ("basis_change", g.t.clone())])
        }
    };
    let payload: BTreeMap<&str, Value> = ops.iter().map(|(k, m)| (*k, matrix_payload(m))).collect();
    Ok(Output::new(to_json(&json!({"N": d.n(), "basis": basis.as_str(), "operators": payload})), true))
}

fn search_or_fail(d: Dimension, seed: u64, tol: f64, restarts: usize) -> Result<Fiducial, CliError> {
    let cfg = SearchConfig { max_restarts: restarts, ..SearchConfig::default() };
    let out = search_fiducial(d, seed, tol, &cfg)?;
    out.fiducial.ok_or(CliError::Lib(Error::NotFound { best: out.best_deviation }))
}

fn search_cmd(a: &SearchArgs, tol: f64, seed: u64, out: Option<&Path>) -> Result<Output, CliError> {
    if !(2..=SEARCH_MAX_DIM).contains(&a.dim) {
        return Err(CliError::Usage(format!("search supports 2 <= N <= {SEARCH_MAX_DIM}, got {}", a.dim)));
    }
    if a.max_restarts == 0 {
        return Err(CliError::Usage("--max-restarts must be positive".into()));
    }
    let d = dim(a.dim)?;
    let cfg = SearchConfig { max_restarts: a.max_restarts, ..SearchConfig::default() };
    let res = search_fiducial(d, seed, tol, &cfg)?;
    let mut r = Report::new("search");
    r.input("N", a.dim).input("seed", seed).input("tol", tol).input("max_restarts", a.max_restarts);
    r.metric("best_deviation", res.best_deviation)
        .metric("best_restart", res.best_restart as f64)
        .metric("restarts_run", res.restarts_run as f64)
        .metric("iterations", res.iterations as f64)
        .metric("subspace_dim", res.subspace_dim as f64);
    r.pass = res.fiducial.is_some();
    if let Some(f) = &res.fiducial {
        let file = FiducialFile::from_fiducial(f);
        if let Some(p) = out {
            fs::write(p, file.to_json()).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        }
        r.artifacts = Some(json!({ "fiducial": file }));
    }
    Ok(Output { pass: r.pass, text: to_json(&r), to_stdout: true })
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    let out = cli.out.as_deref();
    Ok(match &cli.cmd {
        Cmd::Verify(v) => match v {
            VerifyCmd::Sic(a) => verify_sic_cmd(a, cli.tol)?,
            VerifyCmd::Mub(a) => verify_mub_cmd(a, cli.tol)?,
            VerifyCmd::Monomial(a) => verify_monomial_cmd(a, cli.tol, cli.seed)?,
            VerifyCmd::Crt(a) => verify_crt_cmd(a, cli.tol, cli.seed)?,
            VerifyCmd::Zauner(a) => verify_zauner_cmd(a, cli.tol)?,
        },
        Cmd::Generate(g) => match g {
            GenerateCmd::Sic(a) => generate_sic_cmd(a)?,
            GenerateCmd::Mub(a) => generate_mub_cmd(a, out)?,
            GenerateCmd::Projection(a) => generate_projection_cmd(a, cli.seed)?,
            GenerateCmd::Operators(a) => generate_operators_cmd(a)?,
        },
        Cmd::Search(a) => search_cmd(a, cli.tol, cli.seed, out)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            match (&cli.out, o.to_stdout) {
                (Some(p), false) => {
                    if let Err(e) = fs::write(p, &o.text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                _ => print!("{}", o.text),
            }
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Lib(Error::NotFound { best })) => {
            eprintln!("error: no fiducial found (best deviation {best:e})");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

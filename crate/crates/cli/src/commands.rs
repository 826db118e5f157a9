use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use jacobi_core::ajf::{self, Basis, ChiRange};
use jacobi_core::algebra::{CoeffVector, HarmonicState};
use jacobi_core::analysis::{
    analyze_interval, analyze_s3, analyze_s3_dual, fit_interval, gram_matrix, s3_gram_check,
    synthesize_s3, S3Grid,
};
use jacobi_core::lattice::{family_j2, IndexTriple};
use jacobi_core::multiplication::Variant;
use jacobi_core::Sector;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::suites::{self, stream, Suite, SuiteConfig};
use crate::{report, CliError};

const REPORT_HELP: &str = "\
Report schema (version 1): {schema_version, suite, parameters, tolerance, max_residual, passed,
failure_count, failures: [{check, location, lhs, rhs, residual}], checks: [{name, count, scale,
tolerance, max_residual, failures}], measurements, discrepancies, seed, runtime_ms}.
--suite all prints {schema_version, passed, reports: [...]}.
Exit status: 0 pass, 1 verification failure, 2 usage or domain error.";

#[derive(Debug, Parser)]
#[command(
    name = "jacobi",
    version,
    about = "Algebraic Jacobi functions: evaluation, transforms and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function and its derivatives at a point
    Eval(EvalArgs),
    /// Tabulate a family on a uniform grid
    Table(TableArgs),
    /// Expand a function of x in one family
    Transform(TransformArgs),
    /// Expand a function on the three-sphere
    #[command(name = "s3-transform")]
    S3Transform(S3TransformArgs),
    /// Gram matrix of a family, or of the harmonics of one sector
    Gram(GramArgs),
    /// Run a verification suite and print its report
    #[command(after_help = REPORT_HELP)]
    Verify(VerifyArgs),
}

/// Parses `2`, `-1.5`, `3/2` into twice the value.
pub fn parse_half(s: &str) -> Result<i32, String> {
    let bad = || format!("{s:?} is not an integer or half-integer");
    let doubled = if let Some((n, d)) = s.split_once('/') {
        let n: i32 = n.trim().parse().map_err(|_| bad())?;
        match d.trim() {
            "1" => 2 * n,
            "2" => n,
            _ => return Err(bad()),
        }
    } else {
        let v: f64 = s.trim().parse().map_err(|_| bad())?;
        let d = 2.0 * v;
        if d.fract() != 0.0 || d.abs() > f64::from(i32::MAX) {
            return Err(bad());
        }
        d as i32
    };
    Ok(doubled)
}

#[derive(Debug, Args)]
pub struct TripleArgs {
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true, conflicts_with = "j2")]
    pub j: Option<i32>,
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true, conflicts_with = "m2")]
    pub m: Option<i32>,
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true, conflicts_with = "q2")]
    pub q: Option<i32>,
    /// Twice j
    #[arg(long, allow_hyphen_values = true)]
    pub j2: Option<i32>,
    /// Twice m
    #[arg(long, allow_hyphen_values = true)]
    pub m2: Option<i32>,
    /// Twice q
    #[arg(long, allow_hyphen_values = true)]
    pub q2: Option<i32>,
}

fn pick(name: &str, half: Option<i32>, doubled: Option<i32>) -> Result<i32, CliError> {
    half.or(doubled)
        .ok_or_else(|| CliError::Usage(format!("--{name} or --{name}2 is required")))
}

impl TripleArgs {
    fn labels(&self) -> Result<(i32, i32), CliError> {
        Ok((pick("m", self.m, self.m2)?, pick("q", self.q, self.q2)?))
    }

    fn triple(&self) -> Result<IndexTriple, CliError> {
        let (m2, q2) = self.labels()?;
        Ok(IndexTriple::new(pick("j", self.j, self.j2)?, m2, q2)?)
    }
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true, conflicts_with = "m2")]
    pub m: Option<i32>,
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true, conflicts_with = "q2")]
    pub q: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub m2: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub q2: Option<i32>,
}

impl LabelArgs {
    fn labels(&self) -> Result<(i32, i32), CliError> {
        Ok((pick("m", self.m, self.m2)?, pick("q", self.q, self.q2)?))
    }

    fn given(&self) -> bool {
        self.m.or(self.m2).or(self.q).or(self.q2).is_some()
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub triple: TripleArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value = "ajf")]
    pub basis: Basis,
    /// With --chi, also evaluate the harmonic N(x, phi, chi)
    #[arg(long, allow_hyphen_values = true, requires = "chi")]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "phi")]
    pub chi: Option<f64>,
    #[arg(long = "chi-range", default_value = "half")]
    pub chi_range: ChiRange,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub labels: LabelArgs,
    #[arg(long, value_parser = parse_half)]
    pub jmax: i32,
    #[arg(long, default_value = "ajf")]
    pub basis: Basis,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinFunction {
    X,
    Exp,
    Cos,
    Abs,
}

impl BuiltinFunction {
    fn eval(self, x: f64) -> f64 {
        match self {
            BuiltinFunction::X => x,
            BuiltinFunction::Exp => x.exp(),
            BuiltinFunction::Cos => (3.0 * x).cos(),
            BuiltinFunction::Abs => x.abs(),
        }
    }
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub labels: LabelArgs,
    #[arg(long, value_parser = parse_half)]
    pub jmax: i32,
    /// CSV samples with header `x,f`, fitted by least squares
    #[arg(long, conflicts_with = "function")]
    pub input: Option<PathBuf>,
    /// Built-in test function, expanded by quadrature
    #[arg(long, value_enum, default_value_t = BuiltinFunction::Exp)]
    pub function: BuiltinFunction,
}

#[derive(Debug, Args)]
pub struct S3TransformArgs {
    #[arg(long, default_value = "H")]
    pub sector: Sector,
    #[arg(long, value_parser = parse_half)]
    pub jmax: i32,
    #[arg(long = "chi-range", default_value = "half")]
    pub chi_range: ChiRange,
    /// CSV samples with header `x,phi,chi,re,im`, fitted by least squares;
    /// without it a seeded random state is synthesized and analyzed
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    #[command(flatten)]
    pub labels: LabelArgs,
    #[arg(long, value_parser = parse_half)]
    pub jmax: i32,
    #[arg(long, default_value = "najf")]
    pub basis: Basis,
    /// Gram matrix of the sphere harmonics instead of one family
    #[arg(long)]
    pub sector: Option<Sector>,
    #[arg(long = "chi-range", default_value = "half")]
    pub chi_range: ChiRange,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, value_parser = parse_half)]
    pub jmax: Option<i32>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Overridden by JACOBI_SEED when that is set
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub sector: Option<Sector>,
    #[arg(long, default_value = "corrected")]
    pub variant: Variant,
    #[arg(long = "chi-range")]
    pub chi_range: Option<ChiRange>,
}

/// Parses `argv` and runs the command, writing the result to `out`.
/// Returns the process exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Eval(a) => eval(a, cli.format, out),
        Command::Table(a) => table(a, cli.format, out),
        Command::Transform(a) => transform(a, cli.format, out),
        Command::S3Transform(a) => s3_transform(a, cli.format, out),
        Command::Gram(a) => gram(a, cli.format, out),
        Command::Verify(a) => verify(a, cli.format, out),
    }
}

fn write_json(out: &mut dyn Write, v: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().flexible(true).from_writer(out)
}

#[derive(Serialize)]
struct EvalOutput {
    triple: IndexTriple,
    j: f64,
    m: f64,
    q: f64,
    x: f64,
    basis: Basis,
    value: f64,
    d1: Option<f64>,
    d2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    harmonic: Option<Complex64>,
}

fn eval(a: &EvalArgs, format: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let t = a.triple.triple()?;
    let value = ajf::evaluate(a.basis, &t, a.x)?;
    let derivs = match a.basis {
        Basis::Ajf => ajf::ajf_derivatives(&t, a.x),
        Basis::Najf => ajf::najf_derivatives(&t, a.x),
    }
    .ok();
    let harmonic = match (a.phi, a.chi) {
        (Some(phi), Some(chi)) => Some(ajf::jacobi_harmonic(&t, a.x, phi, chi, a.chi_range)?),
        _ => None,
    };
    let o = EvalOutput {
        triple: t,
        j: t.j(),
        m: t.m(),
        q: t.q(),
        x: a.x,
        basis: a.basis,
        value,
        d1: derivs.map(|d| d.d1),
        d2: derivs.map(|d| d.d2),
        harmonic,
    };
    match format {
        Format::Json => write_json(out, &o)?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["j", "m", "q", "x", "basis", "value", "d1", "d2"])?;
            let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
            w.write_record([
                o.j.to_string(),
                o.m.to_string(),
                o.q.to_string(),
                o.x.to_string(),
                a.basis.to_string(),
                o.value.to_string(),
                opt(o.d1),
                opt(o.d2),
            ])?;
            w.flush()?;
        }
    }
    Ok(0)
}

fn family(m2: i32, q2: i32, j2max: i32) -> Result<Vec<IndexTriple>, CliError> {
    let js = family_j2(m2, q2, j2max)?;
    if js.is_empty() {
        return Err(CliError::Usage(format!(
            "no functions with labels ({m2}, {q2}) and 2j <= {j2max}"
        )));
    }
    Ok(js
        .into_iter()
        .map(|j2| IndexTriple::new(j2, m2, q2))
        .collect::<Result<_, _>>()?)
}

fn table(a: &TableArgs, format: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let (m2, q2) = a.labels.labels()?;
    let fam = family(m2, q2, a.jmax)?;
    if a.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let xs = jacobi_core::multiplication::check_grid(a.points);
    let rows: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| fam.iter().map(|t| ajf::evaluate(a.basis, t, x)).collect())
        .collect::<Result<_, _>>()?;
    match format {
        Format::Json => write_json(
            out,
            &json!({
                "m2": m2,
                "q2": q2,
                "basis": a.basis,
                "j2": fam.iter().map(|t| t.j2()).collect::<Vec<_>>(),
                "x": xs,
                "values": rows,
            }),
        )?,
        Format::Csv => {
            let mut w = csv_writer(out);
            let mut header = vec!["x".to_string()];
            header.extend(fam.iter().map(|t| format!("j={}", t.j())));
            w.write_record(&header)?;
            for (x, row) in xs.iter().zip(&rows) {
                let mut rec = vec![x.to_string()];
                rec.extend(row.iter().map(|v| v.to_string()));
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct CoefficientRow {
    j2: i32,
    m2: i32,
    q2: i32,
    re: f64,
    im: f64,
}

fn coefficient_rows(c: &CoeffVector) -> Vec<CoefficientRow> {
    c.iter()
        .map(|(j2, v)| CoefficientRow {
            j2,
            m2: c.m2(),
            q2: c.q2(),
            re: v.re,
            im: v.im,
        })
        .collect()
}

fn harmonic_rows(s: &HarmonicState) -> Vec<CoefficientRow> {
    s.iter()
        .map(|(t, v)| CoefficientRow {
            j2: t.j2(),
            m2: t.m2(),
            q2: t.q2(),
            re: v.re,
            im: v.im,
        })
        .collect()
}

fn write_rows(
    out: &mut dyn Write,
    format: Format,
    rows: &[CoefficientRow],
    summary: serde_json::Value,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let mut v = summary;
            v["coefficients"] = serde_json::to_value(rows)?;
            write_json(out, &v)
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["j2", "m2", "q2", "re", "im"])?;
            for r in rows {
                w.serialize((r.j2, r.m2, r.q2, r.re, r.im))?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn read_csv<const N: usize>(path: &Path, header: [&str; N]) -> Result<Vec<[f64; N]>, CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let h = r.headers()?.clone();
    let cols: Vec<usize> = header
        .iter()
        .map(|name| {
            h.iter().position(|c| c.trim() == *name).ok_or_else(|| {
                CliError::Usage(format!("{} has no column {name:?}", path.display()))
            })
        })
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let mut row = [0.0; N];
        for (k, &c) in cols.iter().enumerate() {
            let field = rec.get(c).unwrap_or("").trim();
            row[k] = field.parse().map_err(|_| {
                CliError::Usage(format!(
                    "{} row {}: bad number {field:?}",
                    path.display(),
                    line + 2
                ))
            })?;
        }
        rows.push(row);
    }
    Ok(rows)
}

fn transform(a: &TransformArgs, format: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let (m2, q2) = a.labels.labels()?;
    family(m2, q2, a.jmax)?;
    let (coeffs, source, residual) = match &a.input {
        Some(path) => {
            let samples: Vec<(f64, f64)> = read_csv(path, ["x", "f"])?
                .into_iter()
                .map(|[x, f]| (x, f))
                .collect();
            let c = fit_interval(&samples, m2, q2, a.jmax)?;
            let mut worst: f64 = 0.0;
            for &(x, f) in &samples {
                worst = worst.max((c.evaluate(x)?.re - f).abs());
            }
            (c, path.display().to_string(), worst)
        }
        None => {
            let f = a.function;
            let c = analyze_interval(|x| f.eval(x), m2, q2, a.jmax)?;
            let mut worst: f64 = 0.0;
            for x in jacobi_core::multiplication::check_grid(101) {
                worst = worst.max((c.evaluate(x)?.re - f.eval(x)).abs());
            }
            let name = f
                .to_possible_value()
                .expect("no skipped variants")
                .get_name()
                .to_string();
            (c, name, worst)
        }
    };
    let summary = json!({
        "m2": m2,
        "q2": q2,
        "j2max": a.jmax,
        "basis": Basis::Najf,
        "source": source,
        "max_abs_residual": residual,
    });
    write_rows(out, format, &coefficient_rows(&coeffs), summary)?;
    Ok(0)
}

/// Least-squares sphere coefficients from scattered complex samples.
fn fit_s3(samples: &[[f64; 5]], sector: Sector, j2max: i32) -> Result<HarmonicState, CliError> {
    let triples = S3Grid::new(sector, j2max, ChiRange::Full).triples();
    if samples.len() < triples.len() {
        return Err(CliError::Usage(format!(
            "{} samples cannot determine {} coefficients",
            samples.len(),
            triples.len()
        )));
    }
    let mut a = DMatrix::<Complex64>::zeros(samples.len(), triples.len());
    for (row, s) in samples.iter().enumerate() {
        for (col, t) in triples.iter().enumerate() {
            a[(row, col)] = ajf::jacobi_harmonic_unchecked(t, s[0], s[1], s[2])?;
        }
    }
    let b = DVector::from_iterator(
        samples.len(),
        samples.iter().map(|s| Complex64::new(s[3], s[4])),
    );
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-13)
        .map_err(|e| CliError::Usage(format!("least-squares solve failed: {e}")))?;
    let mut out = HarmonicState::new(sector);
    for (t, c) in triples.into_iter().zip(sol.iter()) {
        out.set(t, *c)?;
    }
    Ok(out)
}

fn s3_transform(a: &S3TransformArgs, format: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let (state, summary) = match &a.input {
        Some(path) => {
            let samples = read_csv(path, ["x", "phi", "chi", "re", "im"])?;
            let s = fit_s3(&samples, a.sector, a.jmax)?;
            let mut worst: f64 = 0.0;
            for r in &samples {
                let v = synthesize_s3(&s, r[0], r[1], r[2])?;
                worst = worst.max((v - Complex64::new(r[3], r[4])).norm());
            }
            let summary = json!({
                "sector": a.sector,
                "j2max": a.jmax,
                "source": path.display().to_string(),
                "max_abs_residual": worst,
            });
            (s, summary)
        }
        None => {
            use rand::Rng;
            let mut rng = stream(a.seed, 0);
            let mut original = HarmonicState::new(a.sector);
            for t in S3Grid::new(a.sector, a.jmax, a.chi_range).triples() {
                let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                original.set(t, c)?;
            }
            if original.is_empty() {
                return Err(CliError::Usage(format!(
                    "sector {} has no 2j <= {}",
                    a.sector, a.jmax
                )));
            }
            let f = |x, p, c| synthesize_s3(&original, x, p, c).expect("x in range");
            let dual = a.sector == Sector::H && a.chi_range == ChiRange::Half;
            let s = if dual {
                analyze_s3_dual(f, a.sector, a.jmax, a.chi_range)?
            } else {
                analyze_s3(f, a.sector, a.jmax, a.chi_range)?
            };
            let err = original
                .iter()
                .map(|(t, c)| (s.get(&t) - c).norm())
                .fold(0.0, f64::max);
            let summary = json!({
                "sector": a.sector,
                "j2max": a.jmax,
                "chi_range": a.chi_range,
                "source": "random",
                "seed": a.seed,
                "method": if dual { "gram-solve" } else { "projection" },
                "round_trip_error": err,
            });
            (s, summary)
        }
    };
    write_rows(out, format, &harmonic_rows(&state), summary)?;
    Ok(0)
}

fn gram(a: &GramArgs, format: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(sector) = a.sector {
        if a.labels.given() {
            return Err(CliError::Usage(
                "--sector cannot be combined with family labels".into(),
            ));
        }
        let r = s3_gram_check(sector, a.jmax, a.chi_range)?;
        match format {
            Format::Json => write_json(out, &r)?,
            Format::Csv => {
                let mut w = csv_writer(out);
                w.write_record(["j2", "m2", "q2", "j2'", "m2'", "q2'", "re", "im"])?;
                for (i, ti) in r.triples.iter().enumerate() {
                    for (k, tk) in r.triples.iter().enumerate() {
                        let v = r.gram[(i, k)];
                        w.serialize((
                            ti.j2(),
                            ti.m2(),
                            ti.q2(),
                            tk.j2(),
                            tk.m2(),
                            tk.q2(),
                            v.re,
                            v.im,
                        ))?;
                    }
                }
                w.flush()?;
            }
        }
        return Ok(0);
    }
    let (m2, q2) = a.labels.labels()?;
    let fam = family(m2, q2, a.jmax)?;
    let g = gram_matrix(m2, q2, a.jmax, a.basis)?;
    let n = g.nrows();
    let dev = (g.clone() - DMatrix::identity(n, n)).amax();
    match format {
        Format::Json => {
            let rows: Vec<Vec<f64>> = (0..n).map(|i| g.row(i).iter().copied().collect()).collect();
            write_json(
                out,
                &json!({
                    "m2": m2,
                    "q2": q2,
                    "j2max": a.jmax,
                    "basis": a.basis,
                    "j2": fam.iter().map(|t| t.j2()).collect::<Vec<_>>(),
                    "max_identity_deviation": dev,
                    "matrix": rows,
                }),
            )?;
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            let mut header = vec!["j2".to_string()];
            header.extend(fam.iter().map(|t| t.j2().to_string()));
            w.write_record(&header)?;
            for (i, t) in fam.iter().enumerate() {
                let mut rec = vec![t.j2().to_string()];
                rec.extend(g.row(i).iter().map(|v| v.to_string()));
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

/// `JACOBI_SEED` wins over `--seed`.
pub fn effective_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var("JACOBI_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("JACOBI_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn verify(a: &VerifyArgs, format: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(t) = a.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::Usage(format!(
                "--tol {t} must be a finite non-negative number"
            )));
        }
    }
    let cfg = SuiteConfig {
        j2max: a.jmax,
        tol: a.tol,
        seed: effective_seed(a.seed)?,
        sector: a.sector,
        variant: a.variant,
        chi_range: a.chi_range,
    };
    let reports = suites::run(a.suite, &cfg)?;
    let passed = reports.iter().all(|r| r.passed);
    match format {
        Format::Json if a.suite == Suite::All => write_json(out, &suites::bundle(reports))?,
        Format::Json => write_json(out, &reports[0])?,
        Format::Csv => report::write_csv(&reports, &mut *out)?,
    }
    Ok(if passed { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_parsing() {
        assert_eq!(parse_half("2"), Ok(4));
        assert_eq!(parse_half("-1.5"), Ok(-3));
        assert_eq!(parse_half("3/2"), Ok(3));
        assert_eq!(parse_half("-1/2"), Ok(-1));
        assert!(parse_half("0.25").is_err());
        assert!(parse_half("1/3").is_err());
        assert!(parse_half("abc").is_err());
    }
}

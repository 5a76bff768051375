//! `hsas`: pipelines over HSAS1 files, demos and verification suites.

mod io;
mod selftest;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use scheffers::algebra::{AlgebraSpec, Direction};
use scheffers::features::{amplitude, bedrosian_check, inst_frequency, phase, MaskedGrid, BAND_EPS};
use scheffers::grid::{AnalyticGrid, GridFile, GridSignal, Lattice};
use scheffers::holo::{HoloExtension, UpperPoint};
use scheffers::noncomm::{ordering_search, SearchSpace};
use scheffers::oracle::{cube_signal, oracle_cube_amplitude, ClosedForm};
use scheffers::par::with_threads;
use scheffers::transform::{
    analytic_signal_padded, hft_forward, hft_forward_field, hft_inverse, partial_hilbert_padded,
};
use scheffers::{Error, ErrorClass};

use crate::io::{read_input, write_output, CsvMeta};

#[derive(Parser, Debug)]
#[command(name = "hsas", version, about = "Hypercomplex analytic signals over the Scheffers algebra")]
struct Cli {
    /// Zero-pad every axis this many times before transforming.
    #[arg(long, global = true, default_value_t = 1)]
    pad: usize,
    /// Worker threads (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Lattice origin for CSV inputs, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    origin: Option<Vec<f64>>,
    /// Lattice spacing for CSV inputs, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    spacing: Option<Vec<f64>>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Forward transform of a grid or analytic file, or inverse of a spectrum.
    Transform {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Analytic signal with all 2^d components.
    Analytic { input: PathBuf, output: PathBuf },
    /// Partial Hilbert transform along the axes of a direction.
    Hilbert {
        input: PathBuf,
        output: PathBuf,
        /// Direction bit string, first character is the first axis.
        #[arg(long)]
        j: String,
    },
    /// Instantaneous amplitude.
    Amplitude { input: PathBuf, output: PathBuf },
    /// Instantaneous phase atan2(f_j, f); masked samples are written as 0.
    Phase {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        j: String,
        /// Also write a grid with 1 at masked samples.
        #[arg(long)]
        mask_out: Option<PathBuf>,
    },
    /// Instantaneous frequency: derivative of the phase along the axes of j.
    Freq {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        j: String,
        #[arg(long)]
        mask_out: Option<PathBuf>,
    },
    /// Holomorphic extension of a positively supported spectrum at height y.
    Extend {
        input: PathBuf,
        output: PathBuf,
        /// One height for all axes or one per axis, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<f64>,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Closed-form demos; prints the error against the reference.
    Demo {
        #[command(subcommand)]
        what: Demo,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Compare H_j[f g] with f H_j[g].
    Bedrosian {
        /// Low-pass factor; a Gaussian example is used when omitted.
        #[arg(long, requires = "high")]
        low: Option<PathBuf>,
        #[arg(long, requires = "low")]
        high: Option<PathBuf>,
        #[arg(long)]
        j: Option<String>,
        /// Relative threshold for band edges.
        #[arg(long, default_value_t = BAND_EPS)]
        eps: f64,
        /// Largest accepted relative L2 discrepancy.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Search for transform orderings that reproduce every phase-shifted component.
    Noncomm {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Algebra::Clifford)]
        algebra: Algebra,
        #[arg(long, value_enum, default_value_t = Space::Placement)]
        space: Space,
    },
    /// Property checks at reduced sizes.
    Selftest,
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Separable Gaussian-windowed cosine cube on [-1, 1)^3.
    Cube {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product of cosines rotated by 45 degrees.
    Rotated {
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-dimensional cosine embedded in the plane, aligned and rotated.
    Lowdim {
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Algebra {
    Clifford,
    Commutative,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Space {
    Placement,
    Permutation,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Config(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) => match e.class() {
                ErrorClass::Config => 2,
                ErrorClass::Io => 3,
                ErrorClass::Numerical => 4,
            },
            Failure::Config(_) => 2,
            Failure::Verification(_) => 5,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.code(),
            Failure::Config(_) => "config",
            Failure::Verification(_) => "verification",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Config(m) | Failure::Verification(m) => m.clone(),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx {
    pad: usize,
    meta: CsvMeta,
}

impl Ctx {
    fn read(&self, path: &Path) -> std::result::Result<GridFile, Failure> {
        Ok(read_input(path, &self.meta)?)
    }

    fn read_grid(&self, path: &Path) -> std::result::Result<GridSignal, Failure> {
        match self.read(path)? {
            GridFile::Grid(g) => Ok(g),
            other => Err(Failure::Config(format!("{} holds a {} file, expected a grid", path.display(), other.kind()))),
        }
    }

    fn analytic(&self, path: &Path) -> std::result::Result<AnalyticGrid, Failure> {
        match self.read(path)? {
            GridFile::Grid(g) => Ok(analytic_signal_padded(&g, self.pad)?),
            GridFile::Analytic(a) => Ok(a),
            GridFile::Spectrum(_) => {
                Err(Failure::Config(format!("{} holds a spectrum, expected a grid or analytic file", path.display())))
            }
        }
    }
}

fn distinct(input: &Path, output: &Path) -> Outcome {
    let same = input == output
        || matches!((input.canonicalize(), output.canonicalize()), (Ok(a), Ok(b)) if a == b);
    if same {
        return Err(Failure::Config(format!("input and output are the same path: {}", input.display())));
    }
    Ok(())
}

fn write_masked(values: &MaskedGrid, output: &Path, mask_out: Option<&Path>) -> Outcome {
    write_output(output, &GridFile::Grid(values.values.clone()))?;
    if let Some(m) = mask_out {
        let lat = values.values.lattice().clone();
        let data = values.masked.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        write_output(m, &GridFile::Grid(GridSignal::new(lat, data)?))?;
    }
    if values.masked_count() > 0 {
        eprintln!("masked {} of {} samples", values.masked_count(), values.masked.len());
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { pad: cli.pad, meta: CsvMeta { origin: cli.origin, spacing: cli.spacing } };
    if ctx.pad == 0 {
        return Err(Failure::Config("--pad must be at least 1".into()));
    }
    match cli.command {
        Command::Transform { input, output, inverse } => {
            distinct(&input, &output)?;
            let out = match (ctx.read(&input)?, inverse) {
                (GridFile::Grid(g), false) => {
                    let g = if ctx.pad > 1 { g.zero_pad(ctx.pad)? } else { g };
                    GridFile::Spectrum(hft_forward(&g))
                }
                (GridFile::Analytic(a), false) => GridFile::Spectrum(hft_forward_field(&a)),
                (GridFile::Spectrum(s), true) => GridFile::Analytic(hft_inverse(&s)),
                (f, inv) => {
                    return Err(Failure::Config(format!(
                        "{} transform does not accept a {} file",
                        if inv { "inverse" } else { "forward" },
                        f.kind()
                    )))
                }
            };
            write_output(&output, &out)?;
        }
        Command::Analytic { input, output } => {
            distinct(&input, &output)?;
            write_output(&output, &GridFile::Analytic(ctx.analytic(&input)?))?;
        }
        Command::Hilbert { input, output, j } => {
            distinct(&input, &output)?;
            let g = ctx.read_grid(&input)?;
            let j = Direction::parse(&j)?;
            write_output(&output, &GridFile::Grid(partial_hilbert_padded(&g, j, ctx.pad)?))?;
        }
        Command::Amplitude { input, output } => {
            distinct(&input, &output)?;
            write_output(&output, &GridFile::Grid(amplitude(&ctx.analytic(&input)?)))?;
        }
        Command::Phase { input, output, j, mask_out } => {
            distinct(&input, &output)?;
            let p = phase(&ctx.analytic(&input)?, Direction::parse(&j)?)?;
            write_masked(&p, &output, mask_out.as_deref())?;
        }
        Command::Freq { input, output, j, mask_out } => {
            distinct(&input, &output)?;
            let j = Direction::parse(&j)?;
            let w = inst_frequency(&phase(&ctx.analytic(&input)?, j)?, j)?;
            write_masked(&w, &output, mask_out.as_deref())?;
        }
        Command::Extend { input, output, y } => {
            distinct(&input, &output)?;
            let s = match ctx.read(&input)? {
                GridFile::Spectrum(s) => s,
                other => return Err(Failure::Config(format!("extend expects a spectrum file, got {}", other.kind()))),
            };
            let lat = s.lattice().clone();
            let d = lat.dim();
            let heights = match y.len() {
                1 => vec![y[0]; d],
                n if n == d => y,
                n => return Err(Error::DimensionMismatch { expected: d, found: n }.into()),
            };
            let ext = HoloExtension::new(&s)?;
            let points = (0..lat.len())
                .map(|i| UpperPoint::new(lat.point(i), heights.clone()))
                .collect::<scheffers::Result<Vec<_>>>()?;
            let vals = ext.eval_many(&points)?;
            let comps = (0..1u32 << d).map(|b| vals.iter().map(|v| v.coeff(b)).collect()).collect();
            write_output(&output, &GridFile::Analytic(AnalyticGrid::new(lat, comps)?))?;
        }
        Command::Verify { what } => verify(&ctx, what)?,
        Command::Demo { what } => demo(&ctx, what)?,
    }
    Ok(())
}

fn verify(ctx: &Ctx, what: Verify) -> Outcome {
    match what {
        Verify::Bedrosian { low, high, j, eps, tol } => {
            let (f, g) = match (low, high) {
                (Some(l), Some(h)) => (ctx.read_grid(&l)?, ctx.read_grid(&h)?),
                _ => {
                    let lat = Lattice::periodic(vec![1024], &[-8.0 * PI], &[8.0 * PI])?;
                    let w = 2.0 * PI * 80.0 / (16.0 * PI);
                    (
                        GridSignal::from_fn(lat.clone(), |p| (-p[0] * p[0] / 2.0).exp())?,
                        GridSignal::from_fn(lat, move |p| (w * p[0]).cos())?,
                    )
                }
            };
            let j = match j {
                Some(s) => Direction::parse(&s)?,
                None => Direction::ones(f.dim())?,
            };
            let r = bedrosian_check(&f, &g, j, eps)?;
            let bands = |v: &[(usize, f64)]| v.iter().map(|(a, w)| format!("{a}:{w:.6}")).collect::<Vec<_>>().join(",");
            println!(
                "bedrosian j={j} max_abs={:.3e} max_rel={:.3e} l2_rel={:.3e} band_low={} band_high={} verdict={}",
                r.max_abs,
                r.max_rel,
                r.l2_rel,
                bands(&r.band_low),
                bands(&r.band_high),
                r.verdict().replace(' ', "_")
            );
            if r.l2_rel > tol {
                return Err(Failure::Verification(format!("relative discrepancy {:.3e} exceeds {tol:e}", r.l2_rel)));
            }
        }
        Verify::Noncomm { d, algebra, space } => {
            let spec = match algebra {
                Algebra::Clifford => AlgebraSpec::clifford(d)?,
                Algebra::Commutative => AlgebraSpec::scheffers(d)?,
            };
            let space = match space {
                Space::Placement => SearchSpace::Placement,
                Space::Permutation => SearchSpace::Permutation,
            };
            let report = ordering_search(&spec, space)?;
            println!("{}", report.render());
            if !report.any_consistent() {
                return Err(Failure::Verification(format!("no consistent ordering for d={d}")));
            }
        }
        Verify::Selftest => {
            let failed = selftest::run();
            if failed > 0 {
                return Err(Failure::Verification(format!("{failed} self-test checks failed")));
            }
        }
    }
    Ok(())
}

fn demo(ctx: &Ctx, what: Demo) -> Outcome {
    let (err, tol, out, amp) = match what {
        Demo::Cube { n, out } => {
            let lat = Lattice::periodic(vec![n; 3], &[-1.0; 3], &[1.0; 3])?;
            let g = GridSignal::from_fn(lat.clone(), cube_signal)?;
            let amp = amplitude(&analytic_signal_padded(&g, ctx.pad)?);
            let mut err = 0.0f64;
            for i in 0..lat.len() {
                let idx = lat.multi_index(i);
                if idx.iter().all(|&k| k >= n / 8 && k < n - n / 8) {
                    let p = lat.point(i);
                    err = err.max((amp.data()[i] - oracle_cube_amplitude(p[0], p[1], p[2])?).abs());
                }
            }
            println!("demo cube n={n} interior amplitude max_error={err:.3e}");
            (err, 1e-3, out, amp)
        }
        Demo::Rotated { n, out } => {
            let (err, amp) = closed_form_demo(ClosedForm::RotatedProduct, n, ctx.pad)?;
            println!("demo rotated n={n} squared amplitude max_error={err:.3e}");
            (err, 1e-8, out, amp)
        }
        Demo::Lowdim { n, out } => {
            let (aligned, _) = closed_form_demo(ClosedForm::LowDim, n, ctx.pad)?;
            let (err, amp) = closed_form_demo(ClosedForm::LowDimRotated, n, ctx.pad)?;
            println!("demo lowdim n={n} aligned max_error={aligned:.3e} rotated max_error={err:.3e}");
            (err.max(aligned), 1e-8, out, amp)
        }
    };
    if let Some(path) = out {
        write_output(&path, &GridFile::Grid(amp))?;
    }
    if !(err <= tol) {
        return Err(Failure::Verification(format!("demo error {err:.3e} exceeds {tol:e}")));
    }
    Ok(())
}

/// Amplitude on one commensurate period and the largest deviation of its
/// square from the closed form.
fn closed_form_demo(cf: ClosedForm, n: usize, pad: usize) -> std::result::Result<(f64, GridSignal), Failure> {
    let l = cf.period();
    let lat = Lattice::periodic(vec![n, n], &[0.0, 0.0], &[l, l])?;
    let g = GridSignal::from_fn(lat.clone(), |p| cf.signal(p[0], p[1]))?;
    let amp = amplitude(&analytic_signal_padded(&g, pad)?);
    let err = (0..lat.len())
        .map(|i| {
            let p = lat.point(i);
            (amp.data()[i].powi(2) - cf.amplitude_sq(p[0], p[1])).abs()
        })
        .fold(0.0, f64::max);
    Ok((err, amp))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_threads(cli.threads, || run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = f.exit_code();
            eprintln!("error code={code} kind={} message={}", f.kind(), f.message().replace('\n', " "));
            ExitCode::from(code)
        }
    }
}

//! Argument parsing and subcommand dispatch.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use latdir::consts::parse_real;
use latdir::diophantine::{dioph_scan, parse_rational, rational_divergence_probe};
use latdir::escape::{escape_integral, CuspSpec, DEFAULT_QUADRATURE};
use latdir::io::{csv_comment, fmt_g17};
use latdir::lattice::{enumerate_directions, expected_count, LatticeJob};
use latdir::limit::{
    known_moment, sample_counts, siegel_check, tail_fit, KSamples, SiegelKind, XiClass,
};
use latdir::stats::{
    mixed_moment, mixed_moment_exact, pair_correlation, spacing_histogram, Histogram, Interval, IntervalBox,
    MeasureSpec, MomentSpec,
};
use latdir::{AffineLatticeSpec, DirectionSet, DomainShape, Error, Mat2, Result};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "latdir", version, about = "Fine-scale statistics of directions in affine lattices")]
struct Cli {
    /// Worker threads (falls back to LATDIR_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Directions of the lattice points in the domain, as CSV.
    Enumerate {
        #[command(flatten)]
        lat: LatticeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histograms of k-th neighbour gaps, one CSV per k.
    Spacings {
        #[command(flatten)]
        lat: LatticeArgs,
        /// A single k or a range `a..b` (inclusive).
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long, default_value = "0:6:0.1", allow_hyphen_values = true)]
        bins: String,
        /// Output directory.
        #[arg(long, default_value = "spacings")]
        out: PathBuf,
    },
    /// Pair correlation histogram of the directions.
    Paircorr {
        #[command(flatten)]
        lat: LatticeArgs,
        #[arg(long, default_value = "-10:10:0.5", allow_hyphen_values = true)]
        bins: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mixed moments of the window counts under the uniform measure.
    Moments {
        #[command(flatten)]
        lat: LatticeArgs,
        #[command(flatten)]
        mom: MomentArgs,
        /// Evaluate exactly from the breakpoints instead of the quadrature grid.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo law of the cone counts of the limiting process.
    LimitSample {
        #[command(flatten)]
        lim: LimitArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo moments of the limiting process.
    LimitMoments {
        #[command(flatten)]
        lim: LimitArgs,
        #[arg(long = "s", allow_hyphen_values = true)]
        s: Vec<String>,
        #[arg(long)]
        shifted: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Power-law tail exponent of the first cone count.
    Tails {
        #[command(flatten)]
        lim: LimitArgs,
        #[arg(long, default_value_t = 5)]
        kmin: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Siegel mean-value checks with Gaussian test functions.
    Siegel {
        #[arg(long, default_value = "classic")]
        which: String,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Horocycle integrals of the cusp function over a grid of (R, v).
    CuspSum {
        #[arg(long, default_value = "cbrt4,cbrt2", allow_hyphen_values = true)]
        xi: String,
        #[arg(long, default_value = "1,0,0,1", allow_hyphen_values = true)]
        basis: String,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Comma-separated cusp heights.
        #[arg(long = "R", default_value = "2,8,32")]
        r: String,
        /// Comma-separated heights of the horocycle.
        #[arg(long, default_value = "1e-2,1e-3,1e-4")]
        v: String,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Support of the bump weight.
        #[arg(long, default_value = "-0.5:0.5", allow_hyphen_values = true)]
        support: String,
        #[arg(long, default_value_t = DEFAULT_QUADRATURE)]
        nquad: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive scan for small values of |r·ξ + m|·|r|^κ.
    Dioph {
        #[arg(long, default_value = "cbrt4,cbrt2", allow_hyphen_values = true)]
        xi: String,
        #[arg(long, default_value_t = 2.0)]
        kappa: f64,
        #[arg(long, default_value_t = 200)]
        radius: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Window counts along a rational line through the origin.
    SingularProbe {
        /// Rational shift, e.g. `1/2,1/2`.
        #[arg(long, default_value = "1/2,1/2", allow_hyphen_values = true)]
        xi: String,
        #[arg(long, default_value = "1,0,0,1", allow_hyphen_values = true)]
        basis: String,
        #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value = "annulus:0")]
        shape: String,
        /// Comma-separated radii.
        #[arg(long = "T", default_value = "250,500,1000")]
        t: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// Shift ξ as two reals; symbolic names cbrt2, cbrt4, sqrt2, golden, pi are accepted.
    #[arg(long, default_value = "cbrt4,cbrt2", allow_hyphen_values = true)]
    xi: String,
    /// Basis M₀ as a,b,c,d (rows (a,b) and (c,d)).
    #[arg(long, default_value = "1,0,0,1", allow_hyphen_values = true)]
    basis: String,
    /// `annulus:c`, `disc` or `square`.
    #[arg(long, default_value = "annulus:0")]
    shape: String,
    #[arg(long = "T")]
    t: Option<String>,
    /// JSON job file with basis, shift, shape and T; overrides the flags.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MomentArgs {
    /// Window `a:b`, repeatable.
    #[arg(long = "I", allow_hyphen_values = true, required = true)]
    intervals: Vec<String>,
    /// Exponent per window, `re` or `re+imi`; repeatable.
    #[arg(long = "s", allow_hyphen_values = true)]
    s: Vec<String>,
    /// Restrict to samples with all counts ≤ K.
    #[arg(long = "K")]
    cap: Option<u64>,
    /// Use (k+1)^s instead of k^s.
    #[arg(long)]
    shifted: bool,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// `irrational`, `integer` or `p1,p2/q`.
    #[arg(long, default_value = "irrational")]
    class: String,
    /// Cone parameter via `annulus:c`.
    #[arg(long, default_value = "annulus:0")]
    shape: String,
    #[arg(long = "I", allow_hyphen_values = true, default_values_t = vec!["0:1".to_string()])]
    intervals: Vec<String>,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn reals(s: &str, what: &str, len: Option<usize>) -> Result<Vec<f64>> {
    let v: Vec<f64> = s.split(',').map(parse_real).collect::<Result<_>>()?;
    if let Some(n) = len {
        if v.len() != n {
            return Err(Error::InvalidInput(format!("{what} needs {n} comma-separated values, got `{s}`")));
        }
    }
    if v.is_empty() {
        return Err(Error::InvalidInput(format!("{what} is empty")));
    }
    Ok(v)
}

fn parse_shape(s: &str) -> Result<DomainShape> {
    let shape = match s.trim() {
        "square" => DomainShape::Square,
        "disc" => DomainShape::DISC,
        t => match t.split_once(':') {
            Some(("annulus", c)) => DomainShape::Annulus(parse_real(c)?),
            _ => return Err(Error::InvalidInput(format!("shape `{s}`: expected annulus:c, disc or square"))),
        },
    };
    shape.validate()?;
    Ok(shape)
}

fn cone_parameter(s: &str) -> Result<f64> {
    match parse_shape(s)? {
        DomainShape::Annulus(c) => Ok(c),
        DomainShape::Square => Err(Error::Unsupported("the limiting process is defined for annuli only".into())),
    }
}

fn parse_basis(s: &str) -> Result<Mat2> {
    let v = reals(s, "--basis", Some(4))?;
    let m = Mat2::new(v[0], v[1], v[2], v[3]);
    m.check_unimodular()?;
    Ok(m)
}

fn parse_k_range(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidInput(format!("--k `{s}`: expected k or a..b"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

struct Lattice {
    spec: AffineLatticeSpec,
    shape: DomainShape,
    t: f64,
}

impl LatticeArgs {
    fn resolve(&self) -> Result<Lattice> {
        if let Some(path) = &self.spec {
            let job = LatticeJob::from_json(&fs::read_to_string(path)?)?;
            return Ok(Lattice { spec: job.spec()?, shape: job.shape, t: job.t });
        }
        let xi = reals(&self.xi, "--xi", Some(2))?;
        let spec = AffineLatticeSpec::new(parse_basis(&self.basis)?, [xi[0], xi[1]])?;
        let t = match &self.t {
            Some(t) => parse_real(t)?,
            None => return Err(Error::InvalidInput("--T is required".into())),
        };
        Ok(Lattice { spec, shape: parse_shape(&self.shape)?, t })
    }

    fn directions(&self) -> Result<(Lattice, DirectionSet)> {
        let l = self.resolve()?;
        let d = enumerate_directions(&l.spec, l.shape, l.t)?;
        Ok((l, d))
    }
}

impl MomentArgs {
    fn resolve(&self) -> Result<(IntervalBox, MomentSpec)> {
        let intervals: Vec<Interval> = self.intervals.iter().map(|s| Interval::parse(s)).collect::<Result<_>>()?;
        let m = intervals.len();
        let exps = if self.s.is_empty() {
            vec![MomentSpec::parse_exponent("1")?; m]
        } else {
            self.s.iter().map(|s| MomentSpec::parse_exponent(s)).collect::<Result<Vec<_>>>()?
        };
        if exps.len() != m {
            return Err(Error::InvalidInput(format!("{} windows but {} exponents", m, exps.len())));
        }
        let mut spec = if self.shifted { MomentSpec::shifted(exps) } else { MomentSpec::raw(exps) };
        if let Some(k) = self.cap {
            spec = spec.with_cap(k);
        }
        Ok((IntervalBox::new(intervals)?, spec))
    }
}

impl LimitArgs {
    fn resolve(&self) -> Result<(f64, XiClass, IntervalBox)> {
        let c = cone_parameter(&self.shape)?;
        let class = XiClass::parse(&self.class)?;
        let intervals: Vec<Interval> = self.intervals.iter().map(|s| Interval::parse(s)).collect::<Result<_>>()?;
        Ok((c, class, IntervalBox::new(intervals)?))
    }

    fn samples(&self) -> Result<(f64, XiClass, IntervalBox, KSamples)> {
        let (c, class, bx) = self.resolve()?;
        let s = sample_counts(c, class, &bx, self.n, self.seed)?;
        Ok((c, class, bx, s))
    }
}

/// The command line recorded in CSV headers: arguments after the program
/// name, without `--threads` and `--out`, which do not affect the results.
fn recorded_cmd(argv: &[String]) -> String {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--threads" || a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--threads=") || a.starts_with("--out=") {
            continue;
        }
        out.push(a.as_str());
    }
    out.join(" ")
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: Option<&Path>, v: &Value) -> Result<()> {
    let mut w = open_out(path)?;
    writeln!(w, "{}", serde_json::to_string_pretty(v)?)?;
    w.flush()?;
    Ok(())
}

fn real_exponents(spec: &MomentSpec) -> Option<Vec<f64>> {
    spec.exponents.iter().map(|s| (s.im == 0.0).then_some(s.re)).collect()
}

fn execute(cli: Cli, cmd_line: &str) -> Result<String> {
    match cli.cmd {
        Command::Enumerate { lat, out } => {
            let (l, dirs) = lat.directions()?;
            let mut w = open_out(out.as_deref())?;
            csv_comment(&mut w, None, cmd_line)?;
            dirs.write_csv(&mut w)?;
            w.flush()?;
            Ok(format!(
                "N = {} directions, N/expected = {}",
                dirs.len(),
                fmt_g17(dirs.n() / expected_count(l.shape, l.t))
            ))
        }
        Command::Spacings { lat, k, bins, out } => {
            let (_, dirs) = lat.directions()?;
            let ks = parse_k_range(&k)?;
            let edges = Histogram::parse_edges(&bins)?;
            fs::create_dir_all(&out)?;
            for &k in &ks {
                let h = spacing_histogram(&dirs, k, &edges)?;
                let mut w = open_out(Some(&out.join(format!("spacings_k{k}.csv"))))?;
                csv_comment(&mut w, None, cmd_line)?;
                h.write_csv(&mut w)?;
                w.flush()?;
            }
            Ok(format!("{} histograms over N = {} directions in {}", ks.len(), dirs.len(), out.display()))
        }
        Command::Paircorr { lat, bins, out } => {
            let (_, dirs) = lat.directions()?;
            let edges = Histogram::parse_edges(&bins)?;
            let h = pair_correlation(&dirs, &edges, None)?;
            let mut w = open_out(out.as_deref())?;
            csv_comment(&mut w, None, cmd_line)?;
            h.write_csv(&mut w)?;
            w.flush()?;
            let dev = h.masses.iter().fold(0f64, |m, x| m.max((x - 1.0).abs()));
            Ok(format!("N = {}, max |R2 - 1| = {}", dirs.len(), fmt_g17(dev)))
        }
        Command::Moments { lat, mom, exact, out } => {
            let (l, dirs) = lat.directions()?;
            let (bx, spec) = mom.resolve()?;
            let lam = MeasureSpec::uniform();
            let value =
                if exact { mixed_moment_exact(&dirs, &bx, &spec, &lam)? } else { mixed_moment(&dirs, &bx, &spec, &lam)? };
            let limit = if spec.cap.is_none() {
                real_exponents(&spec).and_then(|e| known_moment(&bx.intervals, &e, spec.shifted))
            } else {
                None
            };
            write_json(
                out.as_deref(),
                &json!({
                    "estimate": value.re,
                    "estimate_im": value.im,
                    "se": 0.0,
                    "exact": limit,
                    "n": dirs.len(),
                    "seed": null,
                    "T": l.t,
                    "method": if exact { "breakpoints" } else { "grid" },
                }),
            )?;
            Ok(format!("moment = {} + {}i over N = {}", fmt_g17(value.re), fmt_g17(value.im), dirs.len()))
        }
        Command::LimitSample { lim, out } => {
            let (_, class, _, s) = lim.samples()?;
            let d = s.distribution();
            let mut w = open_out(out.as_deref())?;
            csv_comment(&mut w, Some(lim.seed), cmd_line)?;
            d.write_csv(&mut w)?;
            w.flush()?;
            Ok(format!("{} samples ({class}), {} distinct count vectors", d.total, d.counts.len()))
        }
        Command::LimitMoments { lim, s, shifted, out } => {
            let (_, class, bx, samples) = lim.samples()?;
            let m = bx.dim();
            let exps: Vec<f64> = if s.is_empty() { vec![1.0; m] } else { s.iter().map(|x| parse_real(x)).collect::<Result<_>>()? };
            if exps.len() != m {
                return Err(Error::InvalidInput(format!("{m} windows but {} exponents", exps.len())));
            }
            let f = |k: &[u32]| -> f64 {
                k.iter()
                    .zip(&exps)
                    .map(|(&k, &e)| {
                        let base = k as f64 + if shifted { 1.0 } else { 0.0 };
                        if e == 0.0 { 1.0 } else { base.powf(e) }
                    })
                    .product()
            };
            let total: f64 = exps.iter().map(|e| e.max(0.0)).sum();
            let heavy = match class {
                XiClass::Irrational => total >= 2.0,
                _ => total >= 1.5,
            };
            let est = if heavy { samples.median_of_means(f) } else { samples.mean(f) };
            write_json(
                out.as_deref(),
                &json!({
                    "estimate": est.estimate,
                    "se": est.se,
                    "exact": known_moment(&bx.intervals, &exps, shifted),
                    "n": est.n,
                    "seed": lim.seed,
                    "method": if heavy { "median_of_means" } else { "mean" },
                }),
            )?;
            Ok(format!("moment = {} ± {}", fmt_g17(est.estimate), fmt_g17(est.se)))
        }
        Command::Tails { lim, kmin, out } => {
            let (_, _, _, samples) = lim.samples()?;
            let fit = tail_fit(&samples.distribution(), kmin)?;
            write_json(
                out.as_deref(),
                &json!({
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "k_min": fit.k_min,
                    "k_max": fit.k_max,
                    "points": fit.points,
                    "n": samples.len(),
                    "seed": lim.seed,
                }),
            )?;
            Ok(format!("tail slope {} over k in [{}, {}]", fmt_g17(fit.slope), fit.k_min, fit.k_max))
        }
        Command::Siegel { which, n, seed, out } => {
            let kind = SiegelKind::parse(&which)?;
            let r = siegel_check(kind, n, seed)?;
            write_json(out.as_deref(), &serde_json::to_value(r)?)?;
            Ok(format!("{which}: {} ± {} (exact {})", fmt_g17(r.estimate), fmt_g17(r.se), fmt_g17(r.exact)))
        }
        Command::CuspSum { xi, basis, beta, r, v, width, support, nquad, out } => {
            let xi = reals(&xi, "--xi", Some(2))?;
            let m = parse_basis(&basis)?;
            let rs = reals(&r, "--R", None)?;
            let vs = reals(&v, "--v", None)?;
            let sup = Interval::parse(&support)?;
            let mut w = open_out(out.as_deref())?;
            csv_comment(&mut w, None, cmd_line)?;
            writeln!(w, "R,v,integral")?;
            for &rr in &rs {
                let spec = CuspSpec::new(beta, rr, width)?;
                for &vv in &vs {
                    let x = escape_integral(&m, [xi[0], xi[1]], &spec, vv, sup, nquad)?;
                    writeln!(w, "{},{},{}", fmt_g17(rr), fmt_g17(vv), fmt_g17(x))?;
                }
            }
            w.flush()?;
            Ok(format!("{} (R, v) pairs", rs.len() * vs.len()))
        }
        Command::Dioph { xi, kappa, radius, out } => {
            let xi = reals(&xi, "--xi", Some(2))?;
            let rep = dioph_scan([xi[0], xi[1]], kappa, radius)?;
            write_json(out.as_deref(), &serde_json::to_value(&rep)?)?;
            Ok(format!("min = {} at (r1, r2, m) = {:?}", fmt_g17(rep.min_value), rep.argmin))
        }
        Command::SingularProbe { xi, basis, r, eps, shape, t, out } => {
            let q: Vec<_> = xi.split(',').map(parse_rational).collect::<Result<_>>()?;
            if q.len() != 2 {
                return Err(Error::InvalidInput("--xi needs two rationals".into()));
            }
            let rv: Vec<i64> = r
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("--r `{r}`"))))
                .collect::<Result<_>>()?;
            if rv.len() != 2 {
                return Err(Error::InvalidInput("--r needs two integers".into()));
            }
            let c = cone_parameter(&shape)?;
            let ts = reals(&t, "--T", None)?;
            let counts = rational_divergence_probe([q[0], q[1]], [rv[0], rv[1]], &parse_basis(&basis)?, eps, c, &ts)?;
            let mut w = open_out(out.as_deref())?;
            csv_comment(&mut w, None, cmd_line)?;
            writeln!(w, "T,count")?;
            for (t, k) in ts.iter().zip(&counts) {
                writeln!(w, "{},{}", fmt_g17(*t), k)?;
            }
            w.flush()?;
            Ok(format!("counts {counts:?}"))
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::InvalidInput(_)
        | Error::Unsupported(_)
        | Error::InsufficientData(_)
        | Error::Precondition(_)
        | Error::Json(_) => EXIT_INVALID,
        Error::Io(_) => EXIT_FAILURE,
    }
}

fn thread_count(flag: Option<usize>) -> std::result::Result<Option<usize>, String> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var("LATDIR_THREADS") {
        Ok(s) => s.trim().parse::<usize>().map(Some).map_err(|_| format!("LATDIR_THREADS=`{s}` is not a count")),
        Err(_) => Ok(None),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = match thread_count(cli.threads) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID;
        }
    };
    let cmd_line = recorded_cmd(argv);
    let job = move || execute(cli, &cmd_line);
    let result = match threads {
        Some(0) => {
            eprintln!("error: thread count must be positive");
            return EXIT_INVALID;
        }
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(job),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_FAILURE;
            }
        },
        None => job(),
    };
    match result {
        Ok(summary) => {
            eprintln!("{summary}");
            EXIT_OK
        }
        // a closed downstream pipe (e.g. `| head`) is not a failure
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn recorded_command_drops_threads_and_out() {
        let a = args("latdir siegel --threads 4 --n 10 --out x.json --seed=3 --threads=2");
        assert_eq!(recorded_cmd(&a), "siegel --n 10 --seed=3");
    }

    #[test]
    fn small_parsers() {
        assert_eq!(parse_k_range("1..15").unwrap().len(), 15);
        assert_eq!(parse_k_range("3").unwrap(), vec![3]);
        assert!(parse_k_range("0..2").is_err());
        assert_eq!(parse_shape("annulus:0.5").unwrap(), DomainShape::Annulus(0.5));
        assert_eq!(parse_shape("square").unwrap(), DomainShape::Square);
        assert!(parse_shape("annulus:1.5").is_err());
        assert!(parse_basis("2,0,0,1").is_err());
        assert_eq!(reals("cbrt4,cbrt2", "--xi", Some(2)).unwrap(), latdir::consts::cubic_shift().to_vec());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&args("latdir frobnicate")), EXIT_INVALID);
        assert_eq!(run(&args("latdir siegel --bogus 1")), EXIT_INVALID);
        assert_eq!(run(&args("latdir --help")), EXIT_OK);
    }
}

//! Command-line front end.
//!
//! `run` never exits the process; it returns 0 on success, 1 on a domain
//! error (printed as `error[Name]: message`) and 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graphs::{dimer_measure, from_grassmannian, tree_measure};
use crate::io::{self, Document};
use crate::linalg::{Coloring, IndexSet, RationalMatrix};
use crate::measure::{
    brute_force_dist, charpoly, pencil_roots, validate_with, KDetMeasure, MarginalQuery, ValidationOptions,
    DEFAULT_CAP, DEFAULT_TOLERANCE,
};
use crate::perm::{perm_measure_from_matrix, pfaffian_signing_search, support_enum};
use crate::pure::{decode_to_measure, pure2_from_pair, pure_k_from_rows, PureKOutcome};
use crate::sampler::{ChainSampler, SamplerState, WilsonSampler};

#[derive(Parser, Debug)]
#[command(name = "multidet", version, about = "Exact multideterminantal measures")]
struct Cli {
    /// Enumeration cap on k^n (and on minors and permutations where relevant).
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u128,
    /// Tolerance for floating-point paths.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Write output here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Total mass, minimum probability and support size.
    Validate {
        measure: PathBuf,
        /// Random colorings to check when k^n exceeds the cap.
        #[arg(long, default_value_t = 0)]
        spot_checks: usize,
    },
    /// Exact probability of one coloring.
    Prob {
        measure: PathBuf,
        #[arg(long)]
        coloring: String,
    },
    /// Exact probability that the given positions carry the given colors.
    Marginal {
        measure: PathBuf,
        /// `position=color`, both 1-based; repeatable.
        #[arg(long = "at", required = true)]
        at: Vec<String>,
    },
    /// Chain-rule samples as CSV; a conductance graph is sampled with Wilson's
    /// algorithm instead.
    Sample {
        measure: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// Characteristic polynomial coefficients, one `(exponents): value` per line.
    Charpoly { measure: PathBuf },
    /// Real zero set of the characteristic polynomial on an affine chart (k = 3).
    Vinnikov {
        measure: PathBuf,
        /// Variable held fixed, e.g. `x1=1`.
        #[arg(long, default_value = "x1=1")]
        chart: String,
        /// `lo,hi,steps` for the first free variable.
        #[arg(long, default_value = "-10,10,201", allow_hyphen_values = true)]
        grid: String,
        /// Also emit roots of the measure restricted to these positions, e.g.
        /// `1,2`. The curves interlace when the matrices are symmetric and
        /// positive semidefinite.
        #[arg(long)]
        interlace: Option<String>,
    },
    /// Build a measure file from a construction input.
    Construct {
        kind: ConstructKind,
        input: PathBuf,
        /// perm: treat the input as unsigned weights and search for a signing.
        #[arg(long)]
        sign_search: bool,
    },
    /// Full distribution as CSV.
    Enum { measure: PathBuf },
    /// Permutations with nonzero probability, from a signed matrix.
    PermSupport { matrix: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructKind {
    Grassmannian,
    Dimer,
    Tree,
    Pure2,
    Purek,
    Perm,
}

/// Parses `args` (including the program name) and writes results to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
                None => out.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string())),
            };
            match written {
                Ok(()) => 0,
                Err(e) => report(err, &e),
            }
        }
        Err(e) => report(err, &e),
    }
}

fn report(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error[{}]: {e}", e.name());
    1
}

/// A measure file, or a pure encoding decoded to one.
fn load_measure(path: &Path) -> Result<KDetMeasure> {
    measure_from(io::read_document(path)?)
}

fn measure_from(doc: Document) -> Result<KDetMeasure> {
    match doc {
        doc @ Document::PureEncoding { .. } => decode_to_measure(&doc.into_pure_encoding()?),
        doc => doc.into_measure(),
    }
}

fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Validate { measure, spot_checks } => {
            let m = load_measure(measure)?;
            let r = validate_with(
                &m,
                ValidationOptions {
                    cap: cli.cap,
                    spot_checks: *spot_checks,
                    seed: 0,
                },
            )?;
            let mut s = String::new();
            let _ = writeln!(s, "n: {}", m.n());
            let _ = writeln!(s, "k: {}", m.k());
            let _ = writeln!(s, "exhaustive: {}", r.exhaustive);
            let _ = writeln!(s, "checked: {}", r.checked);
            if let Some(t) = &r.total {
                let _ = writeln!(s, "total: {t}");
            }
            let _ = writeln!(s, "min: {}", r.min);
            if let Some(x) = &r.min_at {
                let _ = writeln!(s, "min_at: {x}");
            }
            if let Some(size) = r.support_size {
                let _ = writeln!(s, "support: {size}");
            }
            if let Some(w) = &r.negative_witness {
                let _ = writeln!(s, "negative_witness: {w}");
            }
            let _ = writeln!(s, "valid: {}", r.is_valid());
            Ok(s)
        }
        Command::Prob { measure, coloring } => {
            let m = load_measure(measure)?;
            let x: Coloring = coloring.parse()?;
            Ok(format!("{}\n", m.point_prob(&x)?))
        }
        Command::Marginal { measure, at } => {
            let m = load_measure(measure)?;
            let pairs = at.iter().map(|a| parse_at(a)).collect::<Result<Vec<_>>>()?;
            Ok(format!("{}\n", m.marginal_prob(&MarginalQuery::new(pairs))?))
        }
        Command::Sample { measure, seed, samples } => {
            let mut state = SamplerState::new(*seed);
            let doc = io::read_document(measure)?;
            if let Document::ConductanceGraph { .. } = doc {
                let w = WilsonSampler::new(&doc.into_conductance_graph()?)?;
                let draws: Vec<Coloring> = (0..*samples).map(|_| w.sample(&mut state).coloring).collect();
                return Ok(io::samples_csv(&draws));
            }
            let m = measure_from(doc)?;
            let mut sampler = ChainSampler::new(&m);
            let draws = (0..*samples)
                .map(|_| sampler.sample(&mut state))
                .collect::<Result<Vec<_>>>()?;
            Ok(io::samples_csv(&draws))
        }
        Command::Charpoly { measure } => Ok(charpoly(&load_measure(measure)?, cli.cap)?.to_string()),
        Command::Vinnikov {
            measure,
            chart,
            grid,
            interlace,
        } => {
            let m = load_measure(measure)?;
            vinnikov_csv(&m, chart, grid, interlace.as_deref(), cli.tolerance)
        }
        Command::Construct {
            kind,
            input,
            sign_search,
        } => {
            let doc = io::read_document(input)?;
            let m = match kind {
                ConstructKind::Grassmannian => from_grassmannian(&doc.into_grassmann_slice()?)?.measure,
                ConstructKind::Dimer => dimer_measure(&doc.into_bipartite_graph()?)?,
                ConstructKind::Tree => tree_measure(&doc.into_conductance_graph()?)?,
                ConstructKind::Pure2 => decode_to_measure(&pure2_from_pair(&doc.into_grassmann_pair()?)?)?,
                ConstructKind::Purek => match pure_k_from_rows(&doc.into_pure_rows()?, cli.cap)? {
                    PureKOutcome::Accepted(e) => decode_to_measure(&e)?,
                    PureKOutcome::Rejected { witness, value } => {
                        return Err(Error::InvalidInput(format!(
                            "rows give a negative coefficient {value} at coloring {witness}"
                        )))
                    }
                },
                ConstructKind::Perm => {
                    let mut v = doc.into_signed_matrix()?;
                    if *sign_search {
                        v = pfaffian_signing_search(&v)?;
                    }
                    perm_measure_from_matrix(&v)?.measure().clone()
                }
            };
            Ok(io::to_json(&Document::from(&m)))
        }
        Command::Enum { measure } => Ok(io::distribution_csv(&brute_force_dist(
            &load_measure(measure)?,
            cli.cap,
        )?)),
        Command::PermSupport { matrix } => {
            let v = io::read_document(matrix)?.into_signed_matrix()?;
            let pm = perm_measure_from_matrix(&v)?;
            Ok(io::permutation_csv(&support_enum(&pm, factorial_cap(cli.cap))?))
        }
    }
}

/// Largest n with n! within the cap.
fn factorial_cap(cap: u128) -> usize {
    let (mut n, mut f) = (1usize, 1u128);
    while let Some(next) = f.checked_mul(n as u128 + 1).filter(|&x| x <= cap) {
        f = next;
        n += 1;
    }
    n
}

fn parse_at(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("expected position=color, got {s:?}"));
    let (p, c) = s.split_once('=').ok_or_else(bad)?;
    Ok((
        p.trim().parse().map_err(|_| bad())?,
        c.trim().parse().map_err(|_| bad())?,
    ))
}

/// `x<i>=<value>` with `i` in `1..=3`.
fn parse_chart(s: &str) -> Result<(usize, f64)> {
    let bad = || Error::InvalidInput(format!("expected a chart like x1=1, got {s:?}"));
    let (var, value) = s.split_once('=').ok_or_else(bad)?;
    let i: usize = var
        .trim()
        .strip_prefix('x')
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    if !(1..=3).contains(&i) {
        return Err(bad());
    }
    Ok((i - 1, value.trim().parse().map_err(|_| bad())?))
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize)> {
    let bad = || Error::InvalidInput(format!("expected lo,hi,steps, got {s:?}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [lo, hi, steps] = parts[..] else {
        return Err(bad());
    };
    let (lo, hi): (f64, f64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    let steps: usize = steps.parse().map_err(|_| bad())?;
    if steps == 0 || !(lo <= hi) {
        return Err(bad());
    }
    Ok((lo, hi, steps))
}

/// Rows `curve,x,y`: for each grid value of the first free variable, the real
/// roots in the second. `curve` is `P` or `restricted`.
fn vinnikov_csv(m: &KDetMeasure, chart: &str, grid: &str, interlace: Option<&str>, tol: f64) -> Result<String> {
    if m.k() != 3 {
        return Err(Error::InvalidInput(format!("vinnikov needs k = 3, got k = {}", m.k())));
    }
    let (fixed, value) = parse_chart(chart)?;
    let (lo, hi, steps) = parse_grid(grid)?;
    let free: Vec<usize> = (0..3).filter(|&i| i != fixed).collect();
    let mut curves = vec![("P", m.mats().iter().map(RationalMatrix::to_f64).collect::<Vec<_>>())];
    if let Some(subset) = interlace {
        let idx: Vec<usize> = subset
            .split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad subset {subset:?}")))
            })
            .collect::<Result<_>>()?;
        let r = m.restrict(&IndexSet::new(idx, m.n())?)?;
        curves.push(("restricted", r.mats().iter().map(RationalMatrix::to_f64).collect()));
    }
    let mut s = String::from("curve,x,y\n");
    for step in 0..steps {
        let x = if steps == 1 {
            lo
        } else {
            lo + (hi - lo) * step as f64 / (steps - 1) as f64
        };
        for (name, mats) in &curves {
            let e: DMatrix<f64> = &mats[fixed] * value + &mats[free[0]] * x;
            // a pencil that vanishes identically puts the whole line in the zero set
            let roots = match pencil_roots(&e, &mats[free[1]], tol) {
                Ok((roots, _)) => roots,
                Err(Error::RootFindingFailure(_)) => continue,
                Err(other) => return Err(other),
            };
            let mut real: Vec<f64> = roots
                .iter()
                .filter(|z| z.im.abs() <= tol.sqrt() * z.norm().max(1.0))
                .map(|z| if z.re.abs() <= tol { 0.0 } else { z.re })
                .collect();
            real.sort_by(f64::total_cmp);
            for y in real {
                let _ = writeln!(s, "{name},{x},{y}");
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::three_dimer_measure;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("multidet").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn dimer_file(dir: &Path) -> PathBuf {
        let path = dir.join("dimer.json");
        io::write_document(&path, &Document::from(&three_dimer_measure())).unwrap();
        path
    }

    #[test]
    fn prob_and_marginal() {
        let dir = tempfile::tempdir().unwrap();
        let f = dimer_file(dir.path());
        let f = f.to_str().unwrap();
        assert_eq!(
            call(&["prob", f, "--coloring", "132"]),
            (0, "1/3\n".into(), String::new())
        );
        assert_eq!(call(&["marginal", f, "--at", "1=1"]).1, "2/3\n");
        let (code, _, err) = call(&["prob", f, "--coloring", "12"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error["), "{err}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["prob"]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["enum", "x.json", "--frobnicate"]).0, 2);
        let (code, _, err) = call(&["enum", "/no/such/file.json"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error[FileNotFound]"));
    }

    #[test]
    fn chart_and_grid() {
        assert_eq!(parse_chart("x2=0.5").unwrap(), (1, 0.5));
        assert!(parse_chart("y1=1").is_err());
        assert_eq!(parse_grid("-1,1,3").unwrap(), (-1.0, 1.0, 3));
        assert!(parse_grid("1,-1,3").is_err());
        assert_eq!(factorial_cap(DEFAULT_CAP), 10);
    }
}

//! Command-line front end: evaluation, figures and verification campaigns.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::numerics::{
    dyadic_unit, int, parse_rational, pow, quotient_enclose, rat, to_decimal, to_f64, Rational,
};
use crate::selfsim::{reduce_domain, Ifs, DEFAULT_DEPTH};
use crate::verify::{self, BlowupParams, Caps, Report};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ilgraph",
    version,
    about = "Exact evaluation, figures and certified checks for a self-affine 1/2-Hölder graph"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Largest iterate level any command may build.
    #[arg(long, default_value_t = Caps::default().max_level)]
    pub max_level: u32,
    /// Largest number of pairs a pairwise sweep may visit.
    #[arg(long, default_value_t = Caps::default().max_pairs)]
    pub max_pairs: u128,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            max_level: self.max_level,
            max_pairs: self.max_pairs,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enclose u(t); t may be any rational, e.g. 4/9, -0.25 or 3.
    Eval {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
    },
    /// Polylines of the iterates u_n.
    PlotIterates {
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        levels: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Images of the unit square under all depth-fold compositions of the
    /// three maps.
    PlotIfs {
        #[arg(long, default_value_t = 5)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Run a verification campaign and write its JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Campaign {
    Holder,
    Claim2,
    Claim3,
    Cone,
    Oscillation,
    BlowupDivergence,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub campaign: Campaign,
    /// Iterate level (holder).
    #[arg(long, default_value_t = 6)]
    pub level: u32,
    /// Extra points per segment (holder).
    #[arg(long, default_value_t = 0)]
    pub refine: u32,
    /// Number of equispaced base points (claim2).
    #[arg(long, default_value_t = 10_001)]
    pub grid: u32,
    /// Number of random samples (claim3, cone). Defaults to 1000 and 10000.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Evaluation depth. Defaults to 40, or 30 for cone.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Base points (oscillation, blowup-divergence); repeatable.
    #[arg(long = "t-hat", allow_hyphen_values = true)]
    pub t_hat: Vec<String>,
    /// Scales 9^-j for j up to this (oscillation) or below it (blowup-divergence).
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub target1: String,
    /// Defaults to a rational just above the infimum 1/sqrt(5) of the quotient at 0.
    #[arg(long, allow_hyphen_values = true)]
    pub target2: Option<String>,
    #[arg(long, default_value = "1")]
    pub radius: String,
    #[arg(long, default_value = "1/1000000")]
    pub tol: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record the measured wall time instead of 0, which makes reports of
    /// identical runs differ.
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub caps: CapArgs,
}

/// Why a command did not complete.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_BAD_INPUT,
            CliError::Io(..) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Io(p, e) => write!(f, "cannot write {}: {e}", p.display()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse(s: &str) -> CliResult<Rational> {
    parse_rational(s).map_err(|e| CliError::Input(format!("{s:?}: {e}")))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn check_level(level: u32, caps: &Caps) -> CliResult<()> {
    if level > caps.max_level {
        return Err(CliError::Input(format!(
            "level {level} exceeds the cap of {}",
            caps.max_level
        )));
    }
    Ok(())
}

/// Coordinates in SVG output use this many decimals.
const SVG_DIGITS: usize = 6;

fn svg_header(out: &mut String) {
    out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" width=\"600\" height=\"600\">\n");
    out.push_str("<g transform=\"matrix(1 0 0 -1 0 1)\" fill=\"none\" stroke-width=\"0.002\">\n");
}

fn svg_footer(out: &mut String) {
    out.push_str("</g>\n</svg>\n");
}

fn coord(x: &Rational) -> String {
    to_decimal(x, SVG_DIGITS)
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf",
];

pub fn iterates_svg(ifs: &Ifs, levels: &[u32]) -> crate::Result<String> {
    let mut out = String::new();
    svg_header(&mut out);
    for (i, &n) in levels.iter().enumerate() {
        let pts = ifs.iterate(n)?;
        let coords: Vec<String> = pts
            .points()
            .iter()
            .map(|(x, y)| format!("{},{}", coord(x), coord(y)))
            .collect();
        writeln!(
            out,
            "<polyline data-level=\"{n}\" stroke=\"{}\" points=\"{}\"/>",
            PALETTE[i % PALETTE.len()],
            coords.join(" ")
        )
        .unwrap();
    }
    svg_footer(&mut out);
    Ok(out)
}

pub fn iterates_csv(ifs: &Ifs, levels: &[u32]) -> crate::Result<String> {
    let mut out = String::from("level,index,t,u\n");
    for &n in levels {
        for (i, (x, y)) in ifs.iterate(n)?.points().iter().enumerate() {
            writeln!(out, "{n},{i},{x},{y}").unwrap();
        }
    }
    Ok(out)
}

/// Axis-parallel image of the unit square: `[x0, x1] × [y0, y1]` with
/// `y0`, `y1` the images of 0 and 1 (so `y1 < y0` on reversing cells).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

/// All `3^depth` images, ordered by address.
pub fn ifs_rects(ifs: &Ifs, depth: u32) -> Vec<Rect> {
    let mut rects = vec![Rect {
        x0: int(0),
        x1: int(1),
        y0: int(0),
        y1: int(1),
    }];
    for _ in 0..depth {
        rects = ifs
            .branches()
            .iter()
            .flat_map(|b| {
                rects.iter().map(move |r| Rect {
                    x0: b.map_x(&r.x0),
                    x1: b.map_x(&r.x1),
                    y0: b.map_y(&r.y0),
                    y1: b.map_y(&r.y1),
                })
            })
            .collect();
    }
    rects
}

pub fn ifs_svg(ifs: &Ifs, depth: u32) -> String {
    let rects = ifs_rects(ifs, depth);
    let mut out = String::new();
    svg_header(&mut out);
    for r in &rects {
        let (ylo, yhi) = if r.y0 <= r.y1 {
            (&r.y0, &r.y1)
        } else {
            (&r.y1, &r.y0)
        };
        writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" stroke=\"#333\"/>",
            coord(&r.x0),
            coord(ylo),
            coord(&(&r.x1 - &r.x0)),
            coord(&(yhi - ylo))
        )
        .unwrap();
    }
    let mut dots: Vec<(Rational, Rational)> = rects
        .iter()
        .flat_map(|r| [(r.x0.clone(), r.y0.clone()), (r.x1.clone(), r.y1.clone())])
        .collect();
    dots.sort();
    dots.dedup();
    for (x, y) in dots {
        writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"0.006\" fill=\"red\"/>",
            coord(&x),
            coord(&y)
        )
        .unwrap();
    }
    svg_footer(&mut out);
    out
}

pub fn ifs_csv(ifs: &Ifs, depth: u32) -> String {
    let mut out = String::from("index,x0,x1,y0,y1\n");
    for (i, r) in ifs_rects(ifs, depth).iter().enumerate() {
        writeln!(out, "{i},{},{},{},{}", r.x0, r.x1, r.y0, r.y1).unwrap();
    }
    out
}

/// The rational just above `1/√5 = Δ(5/9, 0)` used as the default second
/// blow-up target. `1/√5` is the infimum of `s ↦ Δ(s, 0)`, so the value
/// itself has no sign change to bracket.
pub fn default_target2() -> Rational {
    quotient_enclose(&rat(1, 3), &rat(5, 9), &dyadic_unit(30))
        .expect("positive")
        .hi()
        .clone()
}

fn run_campaign(args: &VerifyArgs) -> CliResult<Report> {
    let ifs = Ifs::standard();
    let caps = args.caps.caps();
    let depth = args.depth.unwrap_or(if args.campaign == Campaign::Cone {
        30
    } else {
        40
    });
    if depth == 0 || depth > 4096 {
        return Err(CliError::Input(format!(
            "depth {depth} must be in 1..=4096"
        )));
    }
    let t_hats = || -> CliResult<Vec<Rational>> {
        if args.t_hat.is_empty() {
            Ok(vec![int(0), rat(1, 2)])
        } else {
            args.t_hat.iter().map(|s| parse(s)).collect()
        }
    };
    let report = match args.campaign {
        Campaign::Holder => verify::verify_holder(&ifs, args.level, args.refine, &caps)?,
        Campaign::Claim2 => verify::verify_claim2(&ifs, args.grid, depth)?,
        Campaign::Claim3 => {
            let samples = verify::claim3_samples(args.samples.unwrap_or(1000), args.seed);
            verify::verify_claim3(&ifs, &samples, depth)?
        }
        Campaign::Cone => {
            verify::verify_cone(&ifs, args.samples.unwrap_or(10_000), depth, args.seed)?
        }
        Campaign::Oscillation => {
            let top = args.levels.unwrap_or(8);
            check_level(
                top,
                &Caps {
                    max_level: 64,
                    ..caps
                },
            )?;
            let deltas: Vec<_> = (1..=top).map(|j| pow(&rat(1, 9), j)).collect();
            verify::verify_oscillation(&ifs, &t_hats()?, &deltas, depth)?
        }
        Campaign::BlowupDivergence => {
            let t_hat = match args.t_hat.first() {
                Some(s) => parse(s)?,
                None => int(0),
            };
            let target2 = match &args.target2 {
                Some(s) => parse(s)?,
                None => default_target2(),
            };
            let mut p = BlowupParams::new(t_hat, parse(&args.target1)?, target2);
            p.levels = args.levels.unwrap_or(4);
            check_level(
                p.levels,
                &Caps {
                    max_level: 16,
                    ..caps
                },
            )?;
            p.radius = parse(&args.radius)?;
            p.tol = parse(&args.tol)?;
            p.depth = depth;
            if p.target1 == p.target2 {
                return Err(CliError::Input("targets must differ".into()));
            }
            verify::blowup_divergence(&ifs, &p)?.0
        }
    };
    Ok(report)
}

fn eval_text(t: &str, depth: u32) -> CliResult<String> {
    let t = parse(t)?;
    let reduced = reduce_domain(&t);
    let enc = Ifs::standard().eval_u(&reduced, depth)?;
    let mut out = String::new();
    writeln!(out, "t = {t}").unwrap();
    if reduced != t {
        writeln!(out, "reduced to {reduced}").unwrap();
    }
    writeln!(out, "u(t) in {enc}").unwrap();
    writeln!(
        out,
        "      ~ [{}, {}]  width {:.3e}",
        to_decimal(enc.lo(), 15),
        to_decimal(enc.hi(), 15),
        to_f64(&enc.width())
    )
    .unwrap();
    Ok(out)
}

/// Executes one parsed command; output files are written once at the end.
pub fn execute(cli: &Cli, stdout: &mut dyn std::io::Write) -> CliResult<i32> {
    let ifs = Ifs::standard();
    let print = |stdout: &mut dyn std::io::Write, s: &str| {
        stdout
            .write_all(s.as_bytes())
            .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
    };
    match &cli.command {
        Command::Eval { t, depth } => {
            if *depth > 100_000 {
                return Err(CliError::Input(format!(
                    "depth {depth} is unreasonably large"
                )));
            }
            print(stdout, &eval_text(t, *depth)?)?;
            Ok(EXIT_CERTIFIED)
        }
        Command::PlotIterates {
            levels,
            format,
            out,
            caps,
        } => {
            let caps = caps.caps();
            for &n in levels {
                check_level(n, &caps)?;
            }
            let body = match format {
                Format::Svg => iterates_svg(&ifs, levels)?,
                Format::Csv => iterates_csv(&ifs, levels)?,
                Format::Json => return Err(CliError::Input("plots are svg or csv".into())),
            };
            write_file(out, &body)?;
            Ok(EXIT_CERTIFIED)
        }
        Command::PlotIfs {
            depth,
            format,
            out,
            caps,
        } => {
            check_level(*depth, &caps.caps())?;
            let body = match format {
                Format::Svg => ifs_svg(&ifs, *depth),
                Format::Csv => ifs_csv(&ifs, *depth),
                Format::Json => return Err(CliError::Input("plots are svg or csv".into())),
            };
            write_file(out, &body)?;
            Ok(EXIT_CERTIFIED)
        }
        Command::Verify(args) => {
            if args.format != Format::Json {
                return Err(CliError::Input("reports are json".into()));
            }
            if let Some(out) = &args.out {
                // fail on an unwritable path before spending time on the run
                if out
                    .parent()
                    .is_some_and(|p| !p.as_os_str().is_empty() && !p.is_dir())
                {
                    return Err(CliError::Io(
                        out.clone(),
                        std::io::Error::new(std::io::ErrorKind::NotFound, "no such directory"),
                    ));
                }
            }
            let mut report = run_campaign(args)?;
            let elapsed = report.wall_time_s;
            if !args.timing {
                report = report.without_timing();
            }
            let json = report.to_json() + "\n";
            match &args.out {
                Some(path) => {
                    write_file(path, &json)?;
                    let verdict = if report.certified {
                        "certified"
                    } else {
                        "FAILED"
                    };
                    writeln!(
                        stdout,
                        "{} {verdict}: {} checked, {} failures, {elapsed:.2}s",
                        report.campaign, report.checked, report.failure_count
                    )
                    .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))?;
                }
                None => print(stdout, &json)?,
            }
            Ok(if report.certified {
                EXIT_CERTIFIED
            } else {
                EXIT_FAILURES
            })
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_BAD_INPUT
            } else {
                EXIT_CERTIFIED
            };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_rectangles() {
        let r = ifs_rects(&Ifs::standard(), 1);
        let dims: Vec<_> = r.iter().map(|r| (&r.x1 - &r.x0, &r.y1 - &r.y0)).collect();
        assert_eq!(
            dims,
            vec![
                (rat(4, 9), rat(2, 3)),
                (rat(1, 9), rat(-1, 3)),
                (rat(4, 9), rat(2, 3))
            ]
        );
        assert_eq!(ifs_rects(&Ifs::standard(), 0).len(), 1);
        assert_eq!(ifs_rects(&Ifs::standard(), 5).len(), 243);
    }

    #[test]
    fn csv_rows_are_exact() {
        let csv = iterates_csv(&Ifs::standard(), &[1]).unwrap();
        assert_eq!(
            csv,
            "level,index,t,u\n1,0,0,0\n1,1,4/9,2/3\n1,2,5/9,1/3\n1,3,1,1\n"
        );
    }

    #[test]
    fn svg_vertex_counts() {
        let svg = iterates_svg(&Ifs::standard(), &[0, 1, 2, 3]).unwrap();
        let counts: Vec<usize> = svg
            .lines()
            .filter(|l| l.starts_with("<polyline"))
            .map(|l| l.split("points=\"").nth(1).unwrap().split(' ').count())
            .collect();
        assert_eq!(counts, vec![2, 4, 10, 28]);
        assert!(svg.contains("points=\"0.000000,0.000000 1.000000,1.000000\""));
    }

    #[test]
    fn eval_output() {
        let text = eval_text("0", 1).unwrap();
        assert!(text.contains("u(t) in [0, 0]"));
        let text = eval_text("3/2", 20).unwrap();
        assert!(text.contains("reduced to 1/2"));
        assert!(eval_text("one half", 3).is_err());
    }

    #[test]
    fn default_target_is_just_above_inv_sqrt5() {
        let t = default_target2();
        assert!(t.clone() * &t * int(5) > int(1));
        assert!(t < rat(4473, 10_000));
    }
}

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use relcap::capacity::{hcap_estimate, relcap_estimate, ApproachPath, CapacityEstimate, PathKind};
use relcap::extremal::{
    analytic_jet, class_b_residual, default_steps, numeric_jet, schwarzian_at_one, MapSpec, TaylorJet,
};
use relcap::geometry::{parse_region, rasterize_cartesian, rasterize_polar, Point, Rect, Region, RingSpacing};
use relcap::harness::sets::{complement_about_one, inner_polar_cells};
use relcap::harness::{emit_csv, format_number, run_suite, thread_limit, Suite, SuiteConfig};
use relcap::potential::WalkParams;
use relcap::symmetrize::{
    averaging_transform, band_region, centered_arc_region, circular_symmetrize, compose_halves, marcus_radial,
    mask_region, polarize, r_transform, star_region, steiner_symmetrize, AveragingSpec, Direction, DEFAULT_ARC_STEP,
};

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(name = "relcap", version, about = "Capacity estimates, symmetrization transforms and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relative capacity of E at the boundary point 1 of the unit disk.
    Relcap {
        #[arg(long)]
        region: PathBuf,
        #[arg(long)]
        samples: u64,
        /// Geometric ladder "D0,Q,K": offsets D0·Q^k for k < K.
        #[arg(long)]
        offsets: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Half-plane capacity of E ∩ H.
    Hcap {
        #[arg(long)]
        region: PathBuf,
        #[arg(long)]
        heights: String,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        seed: u64,
        /// Finish walks in the open half-plane with an exact Cauchy jump.
        #[arg(long)]
        fast_exit: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Apply a rearrangement to a region and write the result as a region file.
    Symmetrize {
        #[arg(long)]
        region: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        center: String,
        /// "NR,NT" for polar operations, "NX,NY" for cartesian ones.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Boundary jet and Schwarzian data of a catalog extremal map.
    Extremal {
        #[arg(long, value_enum)]
        map: MapKind,
        #[arg(long)]
        param: f64,
        /// Compare the analytic jet with a least-squares fit of map values.
        #[arg(long)]
        numeric_check: bool,
    },
    /// Run a verification suite; exits nonzero if any case fails.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    CrMinus,
    CrPlus,
    Steiner,
    Marcus,
    Average,
    Polarize,
    Compose,
    RTransform,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    Sector,
    Pick,
    TwoSlit,
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<Vec<T>> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| format!("invalid {what} entry '{s}'").into()))
        .collect()
}

fn parse_pair<T: std::str::FromStr + Copy>(text: &str, what: &str) -> CliResult<(T, T)> {
    match parse_list::<T>(text, what)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("{what} needs two comma-separated values, got '{text}'").into()),
    }
}

fn read_region(path: &Path) -> CliResult<Region> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parse_region(&text)?)
}

fn write_estimate_csv(path: &Path, label: &str, est: &CapacityEstimate) -> CliResult<()> {
    let mut out = String::from("kind,offset,value,stderr\n");
    for (d, v) in est.offsets_used.iter().zip(&est.rung_values) {
        writeln!(out, "{label},{},{},", format_number(*d), format_number(*v))?;
    }
    writeln!(out, "estimate,0,{},{}", format_number(est.value), format_number(est.stderr))?;
    std::fs::write(path, out)?;
    Ok(())
}

fn print_estimate(name: &str, offset_name: &str, est: &CapacityEstimate) {
    println!("{name} = {} ± {}", format_number(est.value), format_number(est.stderr));
    println!("fit residual = {}", format_number(est.fit_residual));
    for (d, v) in est.offsets_used.iter().zip(&est.rung_values) {
        println!("  {offset_name} = {}  value = {}", format_number(*d), format_number(*v));
    }
    if est.flagged {
        println!("flagged: value or rung drift exceeds the noise level");
    }
}

fn relcap_cmd(region: &Path, samples: u64, offsets: &str, eps: f64, seed: u64, csv: Option<&Path>) -> CliResult<()> {
    let e = read_region(region)?;
    let parts = parse_list::<f64>(offsets, "offsets")?;
    let [d0, q, k] = parts[..] else {
        return Err(format!("--offsets needs \"D0,Q,K\", got '{offsets}'").into());
    };
    if k < 1.0 || k.fract() != 0.0 {
        return Err(format!("rung count K must be a positive integer, got {k}").into());
    }
    let path = ApproachPath::geometric(PathKind::DiskRealAxis, d0, q, k as usize)?;
    let est = relcap_estimate(&e, &path, samples, Some(eps), seed)?;
    print_estimate("relcap", "delta", &est);
    if let Some(p) = csv {
        write_estimate_csv(p, "rung", &est)?;
    }
    Ok(())
}

fn hcap_cmd(args: (&Path, &str, u64, f64, u64, bool), csv: Option<&Path>) -> CliResult<()> {
    let (region, heights, samples, eps, seed, fast_exit) = args;
    let e = read_region(region)?;
    let heights = parse_list::<f64>(heights, "heights")?;
    let params = WalkParams::new(eps).with_fast_exit(fast_exit);
    let est = hcap_estimate(&e, &heights, samples, seed, &params)?;
    print_estimate("hcap", "1/height", &est);
    if let Some(p) = csv {
        write_estimate_csv(p, "inverse-height", &est)?;
    }
    Ok(())
}

/// Radius about `center` reaching every point of the bounded region.
fn covering_radius(e: &Region, center: Point) -> CliResult<f64> {
    let b = e.bbox().ok_or("region must be bounded and nonempty")?;
    let corners = [(b.x0, b.y0), (b.x1, b.y0), (b.x0, b.y1), (b.x1, b.y1)];
    let r = corners.iter().map(|&(x, y)| (Complex64::new(x, y) - center).norm()).fold(0.0, f64::max);
    Ok(1.05 * r.max(1e-9))
}

/// Cartesian mask on a square about `center`, translated so `center` is the origin.
fn centered_mask(e: &Region, center: Point, nx: usize, ny: usize) -> CliResult<(relcap::geometry::CartesianMask, Point)> {
    let local = e.similarity(Complex64::new(1.0, 0.0), -center)?;
    let r = covering_radius(&local, Complex64::new(0.0, 0.0))?;
    let mask = rasterize_cartesian(&local, Rect::new(-r, -r, r, r), nx, ny, Default::default())?;
    Ok((mask, center))
}

fn translated(r: Region, shift: Point) -> CliResult<Region> {
    Ok(r.similarity(Complex64::new(1.0, 0.0), shift)?)
}

fn symmetrize_cmd(region: &Path, op: Op, center: &str, grid: &str, out: &Path) -> CliResult<()> {
    let e = read_region(region)?;
    let (cx, cy) = parse_pair::<f64>(center, "center")?;
    let c = Complex64::new(cx, cy);
    let (n1, n2) = parse_pair::<usize>(grid, "grid")?;
    let polar = |r: &Region| -> CliResult<_> {
        let r_max = covering_radius(&e, c)?;
        Ok(rasterize_polar(r, c, r_max, n1, n2, RingSpacing::Uniform, Default::default())?)
    };
    let result = match op {
        Op::CrMinus | Op::CrPlus => {
            let dir = if matches!(op, Op::CrMinus) { Direction::Minus } else { Direction::Plus };
            let sym = circular_symmetrize(&polar(&e)?, dir);
            centered_arc_region(&sym, dir, DEFAULT_ARC_STEP)?
        }
        Op::Steiner => {
            let (mask, shift) = centered_mask(&e, c, n1, n2)?;
            translated(mask_region(&steiner_symmetrize(&mask)?)?, shift)?
        }
        Op::Polarize => {
            let (mask, shift) = centered_mask(&e, c, n1, n2)?;
            translated(mask_region(&polarize(&mask)?)?, shift)?
        }
        Op::Compose => {
            let (mask, shift) = centered_mask(&e, c, n1, n2)?;
            let (plus, minus) = compose_halves(&mask)?;
            let plus = translated(mask_region(&plus)?, shift)?;
            let minus = translated(mask_region(&minus)?, shift)?;
            let json = format!("{{\"plus\":{},\"minus\":{}}}\n", plus.to_json(), minus.to_json());
            std::fs::write(out, json)?;
            println!("wrote the two symmetric halves to {}", out.display());
            return Ok(());
        }
        Op::Marcus => star_region(&marcus_radial(&polar(&e)?, false)?, DEFAULT_ARC_STEP)?,
        Op::Average => {
            // Mirror in the horizontal line through the center.
            let mirror = translated(e.conj(), Complex64::new(0.0, 2.0 * cy))?;
            let spec = AveragingSpec::new(vec![0.5, 0.5])?;
            let profile = averaging_transform(&[polar(&e)?, polar(&mirror)?], &spec, false)?;
            star_region(&profile, DEFAULT_ARC_STEP)?
        }
        Op::RTransform => {
            if (c - 1.0).norm() > 1e-12 {
                return Err("r-transform works about the boundary point 1; use --center \"1,0\"".into());
            }
            let outside = complement_about_one(&inner_polar_cells(&e, n1, n2)?);
            band_region(&r_transform(&outside)?.inner, DEFAULT_ARC_STEP)?
        }
    };
    std::fs::write(out, result.to_json() + "\n")?;
    println!("wrote {} primitives to {}", result.primitives().len(), out.display());
    Ok(())
}

fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", format_number(z.re), format_number(z.im.abs()))
}

fn print_jet(label: &str, jet: &TaylorJet) {
    println!("{label}:");
    println!("  a1 = {}", format_number(jet.a1));
    for (name, a) in [("a2", jet.a2), ("a3", jet.a3)] {
        println!("  {name} = {}", format_complex(a));
    }
}

fn extremal_cmd(map: MapKind, param: f64, numeric_check: bool) -> CliResult<()> {
    let spec = match map {
        MapKind::Sector => MapSpec::Sector { alpha: param },
        MapKind::Pick => MapSpec::Pick { rho: param },
        MapKind::TwoSlit => MapSpec::TwoSlit { t: param },
    };
    spec.validate()?;
    let jet = analytic_jet(&spec)?;
    print_jet("analytic jet at 1", &jet);
    let s = schwarzian_at_one(&jet)?;
    println!("S_f(1) = {}", format_complex(s));
    println!("class-B residual = {}", format_number(class_b_residual(&jet)));
    println!("Re S_f(1) / a1^2 = {}", format_number(s.re / (jet.a1 * jet.a1)));
    println!("stated bound = {}", format_number(spec.schwarzian_bound()));
    println!("relcap of the omitted set = {}", format_number(spec.equality_relcap()));
    if let MapSpec::Sector { alpha } = spec {
        println!("opening angle = {} pi", format_number(alpha / PI));
    }
    if numeric_check {
        let num = numeric_jet(&spec, &default_steps(&spec))?;
        print_jet("numeric jet", &num.jet);
        let a = jet.coefficients();
        let b = num.jet.coefficients();
        for (k, (x, y)) in a.iter().zip(&b).enumerate() {
            println!(
                "  |a{} analytic - numeric| = {}  (fit error {})",
                k + 1,
                format_number((x - y).norm()),
                format_number(num.errors[k])
            );
        }
    }
    Ok(())
}

fn verify_cmd(suite: Suite, trials: usize, samples: u64, seed: u64, csv: Option<&Path>, tolerance: Option<f64>) -> CliResult<bool> {
    let mut config = SuiteConfig::new(suite, trials, seed);
    config.samples = samples;
    if let Some(k) = tolerance {
        config.tolerance = k;
    }
    let report = run_suite(&config)?;
    for row in &report.rows {
        let note = row.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default();
        println!(
            "{}  lhs={}  rhs={}  slack={}  stderr={}  {}{note}",
            row.case,
            format_number(row.lhs),
            format_number(row.rhs),
            format_number(row.slack),
            format_number(row.stderr),
            row.status
        );
    }
    let s = report.summary();
    println!(
        "{suite}: {} pass ({} equality), {} flagged, {} fail in {:.1} s",
        s.pass,
        s.equality,
        s.flagged,
        s.fail,
        report.runtime.as_secs_f64()
    );
    if let Some(p) = csv {
        emit_csv(&report, p)?;
    }
    Ok(s.fail == 0)
}

fn run(cli: Cli) -> CliResult<bool> {
    if let Some(n) = thread_limit() {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Relcap { region, samples, offsets, eps, seed, csv } => {
            relcap_cmd(&region, samples, &offsets, eps, seed, csv.as_deref())?
        }
        Command::Hcap { region, heights, samples, eps, seed, fast_exit, csv } => {
            hcap_cmd((&region, &heights, samples, eps, seed, fast_exit), csv.as_deref())?
        }
        Command::Symmetrize { region, op, center, grid, out } => symmetrize_cmd(&region, op, &center, &grid, &out)?,
        Command::Extremal { map, param, numeric_check } => extremal_cmd(map, param, numeric_check)?,
        Command::Verify { suite, trials, samples, seed, csv, tolerance } => {
            return verify_cmd(suite, trials, samples, seed, csv.as_deref(), tolerance)
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

//! Command-line front end: `scatter`, `reconstruct`, `evolve`, `asymptote`
//! and `verify`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::asymptotics::{
    classify_region, full_profile, region1_breather_frame, region1_generic, region2, region3_breather_frame,
    region3_dressed_constant, region3_soliton_frame, region3_soliton_omega, ErrorOrder, ModeRef, RegionOptions,
    RegionTag,
};
use crate::evolve::{init_state, run, RunParams};
use crate::io;
use crate::painleve::{alpha_hypothesis, solve_painleve, PainleveSolution};
use crate::phase::{kappa_of, partition_sets, phi_at_z0, FrameContext, Variant};
use crate::reflectionless::reconstruct_profile;
use crate::scattering::{evolve_scattering, scatter, validate_genericity, PotentialSample, ScatteringData, ZGrid};
use crate::verify;
use crate::{Error, Result};

/// Largest |r| accepted as reflectionless by `reconstruct` and `evolve --data`.
pub const REFLECTIONLESS_THRESHOLD: f64 = 1e-5;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mkdv", version, about = "Focusing mKdV inverse scattering and long-time asymptotics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Direct scattering of a potential CSV ("x,u") into scattering data JSON.
    Scatter(ScatterArgs),
    /// Reflectionless profile at time t from scattering data.
    Reconstruct(ReconstructArgs),
    /// Spectral PDE integration with checkpoint profiles.
    Evolve(EvolveArgs),
    /// Long-time asymptotic profile and region report.
    Asymptote(AsymptoteArgs),
    /// Run acceptance suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(rename_all = "kebab-case")]
pub struct ScatterArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 3.0)]
    pub zmax: f64,
    #[arg(long, default_value_t = 601)]
    pub nz: usize,
    #[arg(long)]
    pub allow_nongeneric: bool,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct Window {
    #[arg(long, allow_hyphen_values = true, default_value_t = -20.0)]
    pub xmin: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 20.0)]
    pub xmax: f64,
    #[arg(long, default_value_t = 401)]
    pub nx: usize,
}

impl Window {
    pub fn nodes(&self) -> Result<Vec<f64>> {
        if self.nx < 2 || !(self.xmax > self.xmin) || !self.xmin.is_finite() || !self.xmax.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "x window [{}, {}] with {} nodes is malformed",
                self.xmin, self.xmax, self.nx
            )));
        }
        let h = (self.xmax - self.xmin) / (self.nx - 1) as f64;
        Ok((0..self.nx).map(|i| if i == self.nx - 1 { self.xmax } else { self.xmin + i as f64 * h }).collect())
    }
}

#[derive(Debug, Args)]
#[command(rename_all = "kebab-case")]
pub struct ReconstructArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub t: f64,
    #[command(flatten)]
    pub window: Window,
    /// Ignore the continuous spectrum instead of rejecting data with r ≠ 0.
    #[arg(long)]
    pub discrete_only: bool,
}

#[derive(Debug, Args)]
#[command(rename_all = "kebab-case")]
pub struct EvolveArgs {
    /// Initial potential CSV ("x,u").
    #[arg(long, conflicts_with = "data", required_unless_present = "data")]
    pub input: Option<PathBuf>,
    /// Reflectionless scattering data; the initial profile is reconstructed at its t.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Output directory for `u_t<T>.csv` checkpoints and `conserved.csv`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long = "L", default_value_t = 256.0)]
    pub l: f64,
    #[arg(long = "N", default_value_t = 4096)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Checkpoint times, comma separated.
    #[arg(long = "T", value_delimiter = ',', required = true)]
    pub times: Vec<f64>,
    /// Velocity of the co-moving computational frame.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub velocity: f64,
}

/// Frame selector for `asymptote`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameSelector {
    Auto,
    Radiation,
    Soliton(usize),
    Breather(usize),
}

impl FromStr for FrameSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let index = |v: &str| v.parse::<usize>().map_err(|_| format!("bad frame index in {s:?}"));
        match s.split_once(':') {
            None if s == "auto" => Ok(FrameSelector::Auto),
            None if s == "radiation" => Ok(FrameSelector::Radiation),
            Some(("soliton", k)) => Ok(FrameSelector::Soliton(index(k)?)),
            Some(("breather", k)) => Ok(FrameSelector::Breather(index(k)?)),
            _ => Err(format!("unknown frame {s:?} (auto | radiation | soliton:k | breather:j)")),
        }
    }
}

#[derive(Debug, Args)]
#[command(rename_all = "kebab-case")]
pub struct AsymptoteArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Region report JSON; printed to stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub t: f64,
    #[command(flatten)]
    pub window: Window,
    #[arg(long, default_value = "auto")]
    pub frame: FrameSelector,
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
    #[arg(long, default_value_t = 0.05)]
    pub frame_tol: f64,
    /// Painlevé parameter for the self-similar region; defaults to the
    /// r(0) hypothesis value.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 20.0)]
    pub t_min: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `closed-forms`, `all`, or a comma-separated list of criterion numbers.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Results JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERICAL
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    let res = match cli.command {
        Command::Scatter(a) => cmd_scatter(&a).map(|()| EXIT_OK),
        Command::Reconstruct(a) => cmd_reconstruct(&a).map(|()| EXIT_OK),
        Command::Evolve(a) => cmd_evolve(&a).map(|()| EXIT_OK),
        Command::Asymptote(a) => cmd_asymptote(&a).map(|()| EXIT_OK),
        Command::Verify(a) => cmd_verify(&a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn cmd_scatter(a: &ScatterArgs) -> Result<()> {
    let pot = io::read_potential(&a.input)?;
    let data = scatter(&pot, &ZGrid::symmetric(a.zmax, a.nz))?;
    let report = validate_genericity(&data);
    io::write_atomic(&a.out, io::data_to_json_with_report(&data, &report)?.as_bytes())?;
    eprintln!(
        "{} solitons, {} breathers, max |r| = {:.3e}",
        data.solitons.len(),
        data.breathers.len(),
        data.max_abs_r()
    );
    if !report.passed() && !a.allow_nongeneric {
        return Err(Error::NonGeneric(report.violations.join("; ")));
    }
    Ok(())
}

pub fn reconstruct_window(data: &ScatteringData, t: f64, xs: &[f64], discrete_only: bool) -> Result<Vec<f64>> {
    if !discrete_only && !data.is_reflectionless(REFLECTIONLESS_THRESHOLD) {
        return Err(Error::NotReflectionless(data.max_abs_r()));
    }
    reconstruct_profile(data, xs, t)
}

pub fn cmd_reconstruct(a: &ReconstructArgs) -> Result<()> {
    let data = io::read_data(&a.data)?;
    let xs = a.window.nodes()?;
    let u = reconstruct_window(&data, a.t, &xs, a.discrete_only)?;
    io::write_profile(&a.out, &xs, &u)
}

fn checkpoint_name(t: f64) -> String {
    format!("u_t{t}.csv")
}

pub fn cmd_evolve(a: &EvolveArgs) -> Result<()> {
    if a.times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("checkpoint times must be finite".into()));
    }
    let (pot, t0) = match (&a.input, &a.data) {
        (Some(p), _) => (io::read_potential(p)?, 0.0),
        (None, Some(d)) => {
            let data = io::read_data(d)?;
            let xs: Vec<f64> = (0..a.n).map(|j| -0.5 * a.l + j as f64 * a.l / a.n as f64).collect();
            if a.n < 8 {
                return Err(Error::InvalidArgument(format!("N = {} is too small", a.n)));
            }
            let u = reconstruct_window(&data, data.t, &xs, false)?;
            (PotentialSample::new(&xs, u)?, data.t)
        }
        (None, None) => return Err(Error::InvalidArgument("one of --input or --data is required".into())),
    };
    let mut state = init_state(&pot, a.l, a.n)?;
    state.t = t0;
    let out = run(state, &a.times, RunParams { dt: a.dt, frame_velocity: a.velocity })?;
    std::fs::create_dir_all(&a.out)?;
    for cp in &out.checkpoints {
        let x: Vec<f64> = out.x.iter().map(|xi| xi + a.velocity * cp.t).collect();
        io::write_profile(&a.out.join(checkpoint_name(cp.t)), &x, &cp.u)?;
    }
    io::write_conserved(&a.out.join("conserved.csv"), &out.conserved)?;
    if out.boundary_max > 1e-8 {
        eprintln!("warning: boundary level reached {:.3e}", out.boundary_max);
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Segment {
    pub x_start: f64,
    pub x_end: f64,
    pub region: RegionTag,
    pub frame: Option<ModeRef>,
    pub error_order: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationaryReport {
    pub x: f64,
    pub z0: f64,
    pub kappa: f64,
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DressingReport {
    pub mode: ModeRef,
    pub velocity: f64,
    /// Region III dressed norming constant [re, im].
    pub dressed_c: [f64; 2],
    /// Soliton shift ω.
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    pub t: f64,
    pub frame: String,
    pub c2: f64,
    pub frame_tol: f64,
    pub alpha: Option<f64>,
    pub segments: Vec<Segment>,
    pub stationary: Vec<StationaryReport>,
    pub dressing: Vec<DressingReport>,
}

fn painleve_for(data: &ScatteringData, t: f64, xs: &[f64], c2: f64, alpha: Option<f64>) -> Result<Option<PainleveSolution>> {
    let scale = (3.0 * t).cbrt();
    let reach = c2 * t.cbrt();
    if !xs.iter().any(|x| x.abs() <= reach) {
        return Ok(None);
    }
    let alpha = match alpha {
        Some(a) => a,
        None => alpha_hypothesis(data.r_at(0.0)?),
    };
    let s_min = (-(reach / scale) - 1.0).max(-30.0);
    Ok(Some(solve_painleve(alpha, s_min, 10.0)?))
}

fn stationary_report(data: &ScatteringData, x: f64, t: f64) -> Result<StationaryReport> {
    let ctx = FrameContext::new(x, t)?;
    let z0 = ctx.stationary_point()?;
    let kappa = kappa_of(data.r_at(z0)?);
    let phi = match partition_sets(data, ctx.velocity, Variant::RegionI) {
        Ok(part) => phi_at_z0(data, z0, &part.b_set).ok(),
        Err(_) => None,
    };
    Ok(StationaryReport { x, z0, kappa, phi })
}

/// Profile and report for one `asymptote` invocation.
pub fn asymptote(
    data: &ScatteringData,
    t: f64,
    xs: &[f64],
    frame: FrameSelector,
    opts: RegionOptions,
    alpha: Option<f64>,
) -> Result<(Vec<f64>, RegionReport)> {
    let data = evolve_scattering(data, 0.0);
    let nsol = data.solitons.len();
    let nbr = data.breathers.len();
    let mut painleve = None;
    let u = match frame {
        FrameSelector::Auto => {
            painleve = painleve_for(&data, t, xs, opts.c2, alpha)?;
            full_profile(xs, t, &data, painleve.as_ref(), opts)?.u_values
        }
        FrameSelector::Soliton(k) if k < nsol => {
            xs.iter().map(|&x| region3_soliton_frame(k, x, t, &data)).collect::<Result<_>>()?
        }
        FrameSelector::Breather(j) if j < nbr => {
            if data.breathers[j].velocity() < 0.0 {
                region1_breather_frame(j, xs, t, &data)?.iter().map(|v| v.total()).collect()
            } else {
                xs.iter().map(|&x| region3_breather_frame(j, x, t, &data)).collect::<Result<_>>()?
            }
        }
        FrameSelector::Radiation => {
            painleve = painleve_for(&data, t, xs, opts.c2, alpha)?;
            let reach = opts.c2 * t.cbrt();
            xs.iter()
                .map(|&x| {
                    if x.abs() <= reach {
                        painleve.as_ref().map_or(Ok(0.0), |p| region2(x, t, p))
                    } else if x < 0.0 {
                        region1_generic(x, t, &data)
                    } else {
                        Ok(0.0)
                    }
                })
                .collect::<Result<_>>()?
        }
        FrameSelector::Soliton(k) | FrameSelector::Breather(k) => {
            return Err(Error::InvalidArgument(format!("no mode with index {k} for frame {frame:?}")))
        }
    };

    let mut segments: Vec<Segment> = Vec::new();
    for &x in xs {
        let cl = classify_region(x, t, &data, opts.c2, opts.frame_tol);
        match segments.last_mut() {
            Some(s) if s.region == cl.tag && s.frame == cl.frame => s.x_end = x,
            _ => segments.push(Segment {
                x_start: x,
                x_end: x,
                region: cl.tag,
                frame: cl.frame,
                error_order: ErrorOrder::for_tag(cl.tag).label(),
            }),
        }
    }
    let stationary = segments
        .iter()
        .filter(|s| s.region == RegionTag::OscillatoryI)
        .filter_map(|s| stationary_report(&data, 0.5 * (s.x_start + s.x_end), t).ok())
        .collect();
    let mut dressing = Vec::new();
    for (k, p) in data.solitons.iter().enumerate() {
        let c = region3_dressed_constant(&data, p);
        dressing.push(DressingReport {
            mode: ModeRef::Soliton(k),
            velocity: p.velocity(),
            dressed_c: [c.re, c.im],
            omega: Some(region3_soliton_omega(k, &data)?),
        });
    }
    for (j, p) in data.breathers.iter().enumerate() {
        let c = region3_dressed_constant(&data, p);
        dressing.push(DressingReport { mode: ModeRef::Breather(j), velocity: p.velocity(), dressed_c: [c.re, c.im], omega: None });
    }
    let report = RegionReport {
        t,
        frame: format!("{frame:?}"),
        c2: opts.c2,
        frame_tol: opts.frame_tol,
        alpha: painleve.as_ref().map(|p| p.alpha),
        segments,
        stationary,
        dressing,
    };
    Ok((u, report))
}

pub fn cmd_asymptote(a: &AsymptoteArgs) -> Result<()> {
    if !(a.t >= a.t_min) {
        return Err(Error::InvalidArgument(format!("t = {} is below t_min = {}", a.t, a.t_min)));
    }
    if !(a.c2 > 0.0 && a.frame_tol > 0.0) {
        return Err(Error::InvalidArgument("--c2 and --frame-tol must be positive".into()));
    }
    let data = io::read_data(&a.data)?;
    let xs = a.window.nodes()?;
    let opts = RegionOptions { c2: a.c2, frame_tol: a.frame_tol };
    let (u, report) = asymptote(&data, a.t, &xs, a.frame, opts, a.alpha)?;
    io::write_profile(&a.out, &xs, &u)?;
    let text = serde_json::to_string_pretty(&report)?;
    match &a.report {
        Some(p) => io::write_atomic(p, text.as_bytes())?,
        None => println!("{text}"),
    }
    Ok(())
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let ids = verify::suite_ids(&a.suite)?;
    let report = verify::run_suite(&ids, a.seed);
    for r in &report.results {
        println!("{}", r.summary_line());
    }
    if let Some(p) = &a.out {
        write_json(p, &report)?;
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    io::write_atomic(path, s.as_bytes())
}

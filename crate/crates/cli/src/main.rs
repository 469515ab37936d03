//! `thermoscreen`: scans of the thermal polarizability and the screened
//! impurity potential, written as CSV or JSON.
//!
//! Momenta are in units of the electron mass (`m = ħ = c = 1`), temperatures
//! in units of the Fermi temperature. Distances default to `1/m`; pass
//! `--r-unit two-pf` to give them in units of `1/(2p_F)` instead.

mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use thermoscreen::analyticity::{continuity_profile, rectangle_integral_chi_t, rectangle_reference, Orientation, RectangleSpec};
use thermoscreen::polarizability::{chi0_complex, chi_t};
use thermoscreen::potential::{debye_pole, Method, ScreenedPotential};
use thermoscreen::{acceptance, ElectronGas, MuMode, QuadratureConfig};

use table::{format_float, Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "thermoscreen", version, about = "Thermal RPA polarizability and screened impurity potential")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Density parameter r_s (Bohr radii).
    #[arg(long, global = true, default_value_t = 3.0)]
    rs: f64,
    /// Temperature in units of the Fermi temperature.
    #[arg(long, global = true, default_value_t = 0.01)]
    t_over_tf: f64,
    /// Chemical potential: solved at fixed density, or pinned to the Fermi energy.
    #[arg(long, global = true, value_enum, default_value_t = MuArg::Solved)]
    mu_mode: MuArg,
    #[arg(long, global = true, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    rel_tol: f64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MuArg {
    Solved,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Contour,
    Asymptotic,
    Closed,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RUnit {
    /// 1/m.
    Mass,
    /// 1/(2p_F).
    TwoPf,
}

/// `start:stop:count`, count ≥ 1, points equally spaced and inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Grid {
    start: f64,
    stop: f64,
    count: usize,
}

impl Grid {
    fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.stop } else { self.start + step * k as f64 })
            .collect()
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err("expected <start>:<stop>:<count>".into());
    };
    let start: f64 = a.trim().parse().map_err(|e| format!("start: {e}"))?;
    let stop: f64 = b.trim().parse().map_err(|e| format!("stop: {e}"))?;
    let count: usize = n.trim().parse().map_err(|e| format!("count: {e}"))?;
    if !start.is_finite() || !stop.is_finite() {
        return Err("grid bounds must be finite".into());
    }
    if count == 0 {
        return Err("grid count must be at least 1".into());
    }
    if stop < start || (count > 1 && stop == start) {
        return Err("grid needs start < stop (or count 1)".into());
    }
    Ok(Grid { start, stop, count })
}

fn parse_rect(s: &str) -> Result<[f64; 4], String> {
    let v = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<f64>, String>>()?;
    v.try_into().map_err(|_| "expected <x0>:<y0>:<x1>:<y1>".to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// χᵀ(q_re + i q_i) over a grid of q_re.
    Chi {
        /// Real parts of q.
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
        /// Imaginary part of q.
        #[arg(long, default_value_t = 0.0)]
        qi: f64,
        /// Add χ⁰(q, p_F) columns.
        #[arg(long)]
        overlay: bool,
    },
    /// Screened impurity potential V(r).
    Potential {
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = RUnit::Mass)]
        r_unit: RUnit,
    },
    /// Loop integral of χᵀ around a rectangle against the cut superposition.
    Analyticity {
        /// Rectangle `x0:y0:x1:y1`; defaults to [p_F, 3p_F] x [0.001, 0.005].
        #[arg(long, value_parser = parse_rect)]
        rect: Option<[f64; 4]>,
    },
    /// Debye pole q = i y_D over a grid of T/T_F.
    Pole {
        #[arg(long, value_parser = parse_grid, default_value = "0:0.1:11")]
        grid: Grid,
    },
    /// χᵀ and χ⁰(·, p_F) along Im q = q_i across the cut at 2p_F.
    Fig1 {
        /// Real parts of q; defaults to [p_F, 3p_F] with 201 points.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<Grid>,
        #[arg(long, default_value_t = 1.0)]
        qi: f64,
    },
    /// Runs the acceptance criteria and prints a pass/fail table.
    Check {
        /// Restrict to these criteria (comma separated, 1 to 12).
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=12))]
        criteria: Vec<u8>,
    },
}

enum Failure {
    Usage(String),
    Numeric(anyhow::Error),
}

impl From<thermoscreen::Error> for Failure {
    fn from(e: thermoscreen::Error) -> Self {
        Failure::Numeric(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numeric(e.into())
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let c = &cli.common;
    let cfg = QuadratureConfig::new(c.abs_tol, c.rel_tol).map_err(|e| Failure::Usage(e.to_string()))?;
    let mu_mode = match c.mu_mode {
        MuArg::Solved => MuMode::Solved,
        MuArg::Fixed => MuMode::FixedAtFermiEnergy,
    };
    let gas_at = |t: f64| ElectronGas::derive(c.rs, t, mu_mode).map_err(|e| Failure::Usage(e.to_string()));
    let gas = gas_at(c.t_over_tf)?;
    let needs_t = |what: &str| {
        if gas.t_over_tf() > 0.0 {
            Ok(())
        } else {
            Err(Failure::Usage(format!(
                "{what} needs --t-over-tf > 0: chi_T is a quadrature over the thermal weight, which is singular at T = 0"
            )))
        }
    };

    match cli.command {
        Command::Chi { grid, qi, overlay } => {
            needs_t("chi")?;
            emit(c, &chi_table(&gas, &cfg, &grid.points(), qi, overlay))
        }
        Command::Potential { grid, method, r_unit } => {
            needs_t("potential")?;
            let methods: Vec<Method> = match method {
                MethodArg::Direct => vec![Method::Direct],
                MethodArg::Contour => vec![Method::Contour],
                MethodArg::Asymptotic => vec![Method::Asymptotic],
                MethodArg::Closed => vec![Method::ClosedForm],
                MethodArg::All => Method::ALL.to_vec(),
            };
            let scale = match r_unit {
                RUnit::Mass => 1.0,
                RUnit::TwoPf => 1.0 / (2.0 * gas.p_fermi()),
            };
            let rs: Vec<f64> = grid.points().iter().map(|x| x * scale).collect();
            if rs[0] <= 0.0 {
                return Err(Failure::Usage("potential needs r > 0".into()));
            }
            let solver = ScreenedPotential::new(gas, cfg)?;
            emit(c, &potential_table(&solver, &rs, &methods))
        }
        Command::Analyticity { rect } => {
            needs_t("analyticity")?;
            let p_f = gas.p_fermi();
            let [x0, y0, x1, y1] = rect.unwrap_or([p_f, 0.001, 3.0 * p_f, 0.005]);
            let rect = RectangleSpec::new(x0, y0, x1, y1).map_err(|e| Failure::Usage(e.to_string()))?;
            analyticity(c, &rect, &gas, &cfg)
        }
        Command::Pole { grid } => {
            let rows = grid
                .points()
                .par_iter()
                .map(|&t| {
                    let g = gas_at(t)?;
                    let tf = (g.p_fermi() * g.lambda()).sqrt() / std::f64::consts::PI;
                    Ok(match debye_pole(&g, &cfg) {
                        Ok(p) => vec![t.into(), p.y_d.into(), p.residual.into(), p.slope.into(), tf.into(), "ok".into()],
                        Err(e) => vec![t.into(), Cell::Missing, Cell::Missing, Cell::Missing, tf.into(), e.to_string().into()],
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let mut table = Table::new(vec!["t_over_tf", "y_d", "residual", "slope", "y_d_thomas_fermi", "status"]);
            rows.into_iter().for_each(|r| table.push(r));
            emit(c, &table)
        }
        Command::Fig1 { grid, qi } => {
            needs_t("fig1")?;
            let p_f = gas.p_fermi();
            let grid = grid.unwrap_or(Grid { start: p_f, stop: 3.0 * p_f, count: 201 });
            let xs = grid.points();
            let (center, half) = (0.5 * (grid.start + grid.stop), 0.5 * (grid.stop - grid.start));
            let mut table = Table::new(vec!["q_re", "q_im", "re_chiT", "im_chiT", "err", "re_chi0", "im_chi0"]);
            if grid.count >= 3 {
                for p in continuity_profile(center, qi, half, grid.count, &gas, &cfg)? {
                    table.push(vec![
                        p.x.into(),
                        qi.into(),
                        p.chi_t.re.into(),
                        p.chi_t.im.into(),
                        p.chi_t_err.into(),
                        p.chi0.map(|z| z.re).into(),
                        p.chi0.map(|z| z.im).into(),
                    ]);
                }
            } else {
                for x in xs {
                    let q = Complex64::new(x, qi);
                    let t = chi_t(q, &gas, &cfg)?;
                    let z = chi0_complex(q, p_f).ok();
                    table.push(vec![
                        x.into(),
                        qi.into(),
                        t.value.re.into(),
                        t.value.im.into(),
                        t.err_estimate.into(),
                        z.map(|z| z.re).into(),
                        z.map(|z| z.im).into(),
                    ]);
                }
            }
            emit(c, &table)
        }
        Command::Check { criteria } => {
            let ids: Vec<u8> = if criteria.is_empty() { (1..=12).collect() } else { criteria };
            let mut all = true;
            let mut out = open_out(c)?;
            for id in ids {
                let o = acceptance::run(id);
                all &= o.passed;
                writeln!(out, "{o}")?;
                out.flush()?;
            }
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn open_out(c: &Common) -> Result<Box<dyn Write>, Failure> {
    Ok(match &c.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::Numeric(anyhow::anyhow!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes the table; rows whose status is not `ok` make the exit code 1.
fn emit(c: &Common, table: &Table) -> Outcome {
    let mut out = open_out(c)?;
    table.write(&mut out, c.format)?;
    out.flush()?;
    let status = table.headers.iter().position(|h| *h == "status");
    let failed = status.map_or(0, |k| {
        table.rows.iter().filter(|r| !matches!(&r[k], Cell::Text(s) if s == "ok")).count()
    });
    if failed > 0 {
        eprintln!("{failed} row(s) failed; see the status column");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn chi_table(gas: &ElectronGas, cfg: &QuadratureConfig, xs: &[f64], qi: f64, overlay: bool) -> Table {
    let mut headers = vec!["q_re", "q_im", "re_chiT", "im_chiT", "err"];
    if overlay {
        headers.extend(["re_chi0", "im_chi0"]);
    }
    headers.push("status");
    let rows: Vec<Vec<Cell>> = xs
        .par_iter()
        .map(|&x| {
            let q = Complex64::new(x, qi);
            let mut row: Vec<Cell> = vec![x.into(), qi.into()];
            let status = match chi_t(q, gas, cfg) {
                Ok(t) => {
                    row.extend([t.value.re.into(), t.value.im.into(), t.err_estimate.into()]);
                    "ok".to_string()
                }
                Err(e) => {
                    row.extend([Cell::Missing, Cell::Missing, Cell::Missing]);
                    e.to_string()
                }
            };
            if overlay {
                let z = chi0_complex(q, gas.p_fermi()).ok();
                row.extend([z.map(|z| z.re).into(), z.map(|z| z.im).into()]);
            }
            row.push(status.into());
            row
        })
        .collect();
    let mut table = Table::new(headers);
    rows.into_iter().for_each(|r| table.push(r));
    table
}

fn potential_table(solver: &ScreenedPotential, rs: &[f64], methods: &[Method]) -> Table {
    let mut headers = vec!["r"];
    for m in methods {
        headers.extend(match m {
            Method::Direct => ["V_direct", "err_direct"],
            Method::Contour => ["V_contour", "err_contour"],
            Method::Asymptotic => ["V_asymptotic", "err_asymptotic"],
            Method::ClosedForm => ["V_closed", "err_closed"],
        });
    }
    headers.push("status");
    let jobs: Vec<(f64, Method)> = rs.iter().flat_map(|&r| methods.iter().map(move |&m| (r, m))).collect();
    let values: Vec<_> = jobs.par_iter().map(|&(r, m)| solver.v_of_r(r, m)).collect();
    let mut table = Table::new(headers);
    for (k, &r) in rs.iter().enumerate() {
        let mut row: Vec<Cell> = vec![r.into()];
        let mut problems = Vec::new();
        for (j, m) in methods.iter().enumerate() {
            match &values[k * methods.len() + j] {
                Ok(v) => row.extend([v.value.into(), v.err_estimate.into()]),
                Err(e) => {
                    row.extend([Cell::Missing, Cell::Missing]);
                    problems.push(format!("{}: {e}", m.name()));
                }
            }
        }
        row.push(if problems.is_empty() { "ok".into() } else { problems.join("; ").into() });
        table.push(row);
    }
    table
}

fn analyticity(c: &Common, rect: &RectangleSpec, gas: &ElectronGas, cfg: &QuadratureConfig) -> Outcome {
    let contour = rectangle_integral_chi_t(rect, Orientation::Counterclockwise, gas, cfg)?;
    let reference = rectangle_reference(rect, gas, cfg)?;
    let err = contour.err_estimate + reference.err_estimate;
    let certificate = contour.value.norm() / err;
    let agreement = (contour.value - reference.value).norm() / reference.value.norm();
    let nonzero = certificate > 10.0;
    let mut table = Table::new(vec![
        "x0", "y0", "x1", "y1", "re_contour", "im_contour", "err_contour", "re_reference", "im_reference",
        "err_reference", "agreement", "certificate", "nonzero",
    ]);
    table.push(vec![
        rect.x0.into(),
        rect.y0.into(),
        rect.x1.into(),
        rect.y1.into(),
        contour.value.re.into(),
        contour.value.im.into(),
        contour.err_estimate.into(),
        reference.value.re.into(),
        reference.value.im.into(),
        reference.err_estimate.into(),
        agreement.into(),
        certificate.into(),
        nonzero.to_string().into(),
    ]);
    let summary = format!(
        "rectangle [{}, {}] x [{}, {}]\ncontour   {} + {}i (err {})\nreference {} + {}i (err {})\nrelative disagreement {}\n|contour|/err {} -> {}",
        format_float(rect.x0),
        format_float(rect.x1),
        format_float(rect.y0),
        format_float(rect.y1),
        format_float(contour.value.re),
        format_float(contour.value.im),
        format_float(contour.err_estimate),
        format_float(reference.value.re),
        format_float(reference.value.im),
        format_float(reference.err_estimate),
        format_float(agreement),
        format_float(certificate),
        if nonzero { "nonzero: chi_T is not analytic inside" } else { "not certified nonzero" },
    );
    if c.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    emit(c, &table)
}

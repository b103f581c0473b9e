use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use qdiff_core::clinear::{solve_clinear, SchrodingerParams};
use qdiff_core::hlinear::solve_ivp;
use qdiff_core::matrix::{diagonalize, jordanize, right_eigenpairs, Matrix2CL, Matrix2H, QVector};
use qdiff_core::oracle::{clinear_rhs, quaternionic_rhs, rk4_integrate};
use qdiff_core::quadratic::{residual, solve, RootSet};
use qdiff_core::scatter::{find_bound_states, solve_barrier, solve_step, ScatteringResult};
use qdiff_core::{Quaternion, RightLinearScalarOp};

use crate::parse::{SweepParam, SweepSpec};
use crate::{BoundArgs, Cli, Command, OdeArgs, OdeKind, OutputFormat, PotentialArgs, ScatterKind};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Solver(m) => f.write_str(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Solver(format!("write failed: {e}"))
    }
}

fn solver(e: qdiff_core::Error) -> CliError {
    CliError::Solver(e.to_string())
}

fn q4(q: Quaternion) -> [f64; 4] {
    q.to_array()
}

fn qv(v: QVector) -> [[f64; 4]; 2] {
    [q4(v[0]), q4(v[1])]
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Solver(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    if !(cli.hbar > 0.0 && cli.hbar.is_finite() && cli.mass > 0.0 && cli.mass.is_finite()) {
        return Err(CliError::Usage(format!("--hbar and --mass must be positive, got {} and {}", cli.hbar, cli.mass)));
    }
    match &cli.command {
        Command::Quad { coefficients } => quad(coefficients, out),
        Command::Ode(args) => ode(args, out),
        Command::Eig { entries } => eig(entries, out),
        Command::Scatter(args) => scatter(args.kind, &args.potential, args.sweep.as_ref(), args.format, cli, out),
        Command::Sweep(args) => {
            let param = crate::parse::SweepParam::parse(&args.param).map_err(CliError::Usage)?;
            let spec = SweepSpec::new(param, args.start, args.stop, args.count).map_err(CliError::Usage)?;
            scatter(args.kind, &args.potential, Some(&spec), args.format, cli, out)
        }
        Command::Bound(args) => bound(args, cli, out),
    }
}

fn quad(c: &[f64], out: &mut dyn Write) -> Result<(), CliError> {
    let a = Quaternion::new(c[0], c[1], c[2], c[3]);
    let b = Quaternion::new(c[4], c[5], c[6], c[7]);
    if !(a.is_finite() && b.is_finite()) {
        return Err(CliError::Usage("coefficients must be finite".into()));
    }
    let sol = solve(a, b).map_err(solver)?;
    writeln!(out, "case {}", sol.case.name())?;
    if let RootSet::Sphere { center, alpha } = sol.roots {
        writeln!(out, "sphere alpha={alpha} center={center}")?;
    }
    for r in sol.roots.representatives() {
        writeln!(out, "root {} {} {} {}", r.q0, r.q1, r.q2, r.q3)?;
        writeln!(out, "residual {}", residual(a, b, r))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct OdePoint {
    x: f64,
    phi: [f64; 4],
    residual: f64,
}

#[derive(Serialize)]
struct OracleReport {
    steps: usize,
    interval: [f64; 2],
    max_disagreement: f64,
}

#[derive(Serialize)]
struct OdeReport {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<&'static str>,
    points: Vec<OdePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

fn ode(args: &OdeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.x.0.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Usage("evaluation points must be finite".into()));
    }
    let (phi0, dphi0) = (args.phi0, args.dphi0);
    let (eval, case, rhs): (Box<dyn Fn(f64) -> (Quaternion, f64)>, _, Box<dyn Fn(f64, QVector) -> QVector>) = match args.kind {
        OdeKind::H => {
            let sol = solve_ivp(args.a, args.b, phi0, dphi0).map_err(solver)?;
            let case = Some(sol.roots.case.name());
            (Box::new(move |x| (sol.evaluate(x)[0], sol.residual(x))), case, Box::new(quaternionic_rhs(args.a, args.b)))
        }
        OdeKind::C => {
            let a = RightLinearScalarOp::new(args.a, args.ai);
            let b = RightLinearScalarOp::new(args.b, args.bi);
            let m = Matrix2CL::companion(a, b);
            let sol = solve_clinear(&m, phi0, dphi0).map_err(solver)?;
            (Box::new(move |x| (sol.evaluate(x)[0], sol.residual(x))), None, Box::new(clinear_rhs(m)))
        }
    };
    let points = args
        .x
        .0
        .iter()
        .map(|&x| {
            let (phi, residual) = eval(x);
            OdePoint { x, phi: q4(phi), residual }
        })
        .collect();
    let oracle = if args.oracle {
        let end = args.x.0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(end > 0.0) {
            return Err(CliError::Usage("--oracle integrates from 0 and needs a positive evaluation point".into()));
        }
        let traj = rk4_integrate(rhs, phi0, dphi0, 0.0, end, args.steps).map_err(|e| match e {
            qdiff_core::Error::InvalidParameter { .. } => CliError::Usage(e.to_string()),
            other => solver(other),
        })?;
        let max_disagreement =
            traj.xs.iter().zip(&traj.values).map(|(&x, v)| (eval(x).0 - v[0]).norm()).fold(0.0, f64::max);
        Some(OracleReport { steps: args.steps, interval: [0.0, end], max_disagreement })
    } else {
        None
    };
    let kind = match args.kind {
        OdeKind::H => "h",
        OdeKind::C => "c",
    };
    write_json(out, &OdeReport { kind, case, points, oracle })
}

#[derive(Serialize)]
struct Reduction {
    kind: &'static str,
    transform: [[[f64; 4]; 2]; 2],
    inverse: [[[f64; 4]; 2]; 2],
}

#[derive(Serialize)]
struct EigReport {
    eigenvalues: [[f64; 2]; 2],
    defective: bool,
    eigenvectors: Vec<[[f64; 4]; 2]>,
    reduction: Option<Reduction>,
}

fn rows(m: &Matrix2H) -> [[[f64; 4]; 2]; 2] {
    m.m.map(|row| row.map(q4))
}

fn eig(e: &[f64], out: &mut dyn Write) -> Result<(), CliError> {
    if e.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Usage("matrix entries must be finite".into()));
    }
    let entry = |k: usize| Quaternion::new(e[4 * k], e[4 * k + 1], e[4 * k + 2], e[4 * k + 3]);
    let m = Matrix2H::new(entry(0), entry(1), entry(2), entry(3));
    let dec = right_eigenpairs(&m).map_err(solver)?;
    let reduction = if dec.defective {
        jordanize(&m).ok().map(|j| Reduction { kind: "jordan", transform: rows(&j.j), inverse: rows(&j.j_inv) })
    } else {
        diagonalize(&m).ok().map(|d| Reduction { kind: "diagonal", transform: rows(&d.s), inverse: rows(&d.s_inv) })
    };
    let report = EigReport {
        eigenvalues: dec.eigenvalues.map(|z| [z.re, z.im]),
        defective: dec.defective,
        eigenvectors: dec.eigenvectors.iter().map(|v| qv(*v)).collect(),
        reduction,
    };
    write_json(out, &report)
}

pub const CSV_HEADER: &str =
    "E,V,Wabs,Warg,a,regime,R,T,r_re,r_im,rt_re,rt_im,t_re,t_im,tt_re,tt_im,current_residual";

#[derive(Clone, Copy, Debug)]
struct RowInput {
    energy: f64,
    potential: f64,
    wabs: f64,
    warg: f64,
    width: f64,
}

#[derive(Serialize)]
struct Row {
    #[serde(rename = "E")]
    energy: f64,
    #[serde(rename = "V")]
    potential: f64,
    #[serde(rename = "Wabs")]
    wabs: f64,
    #[serde(rename = "Warg")]
    warg: f64,
    a: f64,
    regime: String,
    #[serde(rename = "R")]
    reflection: f64,
    #[serde(rename = "T")]
    transmission: f64,
    r_re: f64,
    r_im: f64,
    rt_re: f64,
    rt_im: f64,
    t_re: f64,
    t_im: f64,
    tt_re: f64,
    tt_im: f64,
    current_residual: f64,
}

impl Row {
    fn new(inp: RowInput, res: Result<ScatteringResult, String>) -> (Row, Option<String>) {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let (regime, rr, tt, r, rt, t, ttl, cur, err) = match res {
            Ok(s) => (s.regime.to_string(), s.reflection, s.transmission, s.r, s.r_tilde, s.t, s.t_tilde, s.current_residual, None),
            Err(e) => ("ERROR".to_string(), f64::NAN, f64::NAN, nan, nan, nan, nan, f64::NAN, Some(e)),
        };
        let row = Row {
            energy: inp.energy,
            potential: inp.potential,
            wabs: inp.wabs,
            warg: inp.warg,
            a: inp.width,
            regime,
            reflection: rr,
            transmission: tt,
            r_re: r.re,
            r_im: r.im,
            rt_re: rt.re,
            rt_im: rt.im,
            t_re: t.re,
            t_im: t.im,
            tt_re: ttl.re,
            tt_im: ttl.im,
            current_residual: cur,
        };
        (row, err)
    }

    fn csv(&self) -> String {
        let f = |x: f64| format!("{x:.16e}");
        let nums_a = [self.energy, self.potential, self.wabs, self.warg, self.a].map(f).join(",");
        let nums_b = [
            self.reflection,
            self.transmission,
            self.r_re,
            self.r_im,
            self.rt_re,
            self.rt_im,
            self.t_re,
            self.t_im,
            self.tt_re,
            self.tt_im,
            self.current_residual,
        ]
        .map(f)
        .join(",");
        format!("{nums_a},{},{nums_b}", self.regime)
    }
}

fn scatter_point(kind: ScatterKind, inp: RowInput, hbar: f64, mass: f64) -> Result<ScatteringResult, String> {
    let w = Complex64::from_polar(inp.wabs, inp.warg);
    let p = SchrodingerParams::new(inp.energy, inp.potential, w).with_units(hbar, mass);
    match kind {
        ScatterKind::Step => solve_step(&p),
        ScatterKind::Barrier => solve_barrier(&p, inp.width),
    }
    .map_err(|e| e.to_string())
}

fn scatter(
    kind: ScatterKind,
    pot: &PotentialArgs,
    sweep: Option<&SweepSpec>,
    format: OutputFormat,
    cli: &Cli,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let base = RowInput {
        energy: pot.energy,
        potential: pot.potential,
        wabs: pot.wabs,
        warg: pot.warg,
        width: if kind == ScatterKind::Step { 0.0 } else { pot.width },
    };
    let inputs: Vec<RowInput> = match sweep {
        None => vec![base],
        Some(spec) => spec
            .values()
            .into_iter()
            .map(|v| {
                let mut r = base;
                match spec.param {
                    SweepParam::Energy => r.energy = v,
                    SweepParam::Potential => r.potential = v,
                    SweepParam::WAbs => r.wabs = v,
                    SweepParam::Width => r.width = v,
                }
                r
            })
            .collect(),
    };
    let (hbar, mass) = (cli.hbar, cli.mass);
    let results: Vec<(Row, Option<String>)> =
        inputs.par_iter().map(|&inp| Row::new(inp, scatter_point(kind, inp, hbar, mass))).collect();
    let mut failures = 0;
    for (row, err) in &results {
        if let Some(e) = err {
            failures += 1;
            log::error!("E={} V={} Wabs={} Warg={} a={}: {e}", row.energy, row.potential, row.wabs, row.warg, row.a);
        }
    }
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for (row, _) in &results {
                writeln!(out, "{}", row.csv())?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<&Row> = results.iter().map(|(r, _)| r).collect();
            write_json(out, &rows)?;
        }
    }
    out.flush()?;
    if failures > 0 {
        return Err(CliError::Solver(format!("{failures} of {} rows failed", results.len())));
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundParams {
    #[serde(rename = "V")]
    depth: f64,
    a: f64,
    #[serde(rename = "Wabs")]
    wabs: f64,
    #[serde(rename = "Warg")]
    warg: f64,
    hbar: f64,
    mass: f64,
    grid: usize,
}

#[derive(Serialize)]
struct BoundReport {
    energies: Vec<f64>,
    residuals: Vec<f64>,
    params: BoundParams,
}

fn bound(args: &BoundArgs, cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    if !(args.depth > 0.0 && args.depth.is_finite()) {
        return Err(CliError::Usage(format!("well depth must be positive, got {}", args.depth)));
    }
    if !(args.width > 0.0 && args.width.is_finite()) {
        return Err(CliError::Usage(format!("well width must be positive, got {}", args.width)));
    }
    if args.grid < 3 || !(args.wabs >= 0.0 && args.wabs.is_finite()) || !args.warg.is_finite() {
        return Err(CliError::Usage("grid must be at least 3 and W finite with non-negative modulus".into()));
    }
    let w = Complex64::from_polar(args.wabs, args.warg);
    let set = find_bound_states(args.depth, w, args.width, cli.hbar, cli.mass, args.grid).map_err(solver)?;
    let mut states = set.states.clone();
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let report = BoundReport {
        energies: states.iter().map(|s| s.energy).collect(),
        residuals: states.iter().map(|s| s.residual).collect(),
        params: BoundParams {
            depth: args.depth,
            a: args.width,
            wabs: args.wabs,
            warg: args.warg,
            hbar: cli.hbar,
            mass: cli.mass,
            grid: args.grid,
        },
    };
    write_json(out, &report)
}

//! Configuration, commands and JSON output behind the `kphase` binary.
//!
//! Every command takes a [`RunConfig`] and produces JSON records. Numbers are
//! written with 17 significant digits so reports are reproducible byte for
//! byte; angles are wrapped into `(−π, π]` with the raw values alongside.

use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dynamics::{find_cycle, total_phase, trajectory, CrossCheck, HamiltonianSchedule};
use crate::error::{Error, Result};
use crate::kernels::{self, projective_distance, validate_point, Family, LevelSpec, ManifoldSpec, PointMatrix};
use crate::loops::LoopSpec;
use crate::matrix::{c64, json as mjson, CMat};
use crate::phase::{
    assemble_report, dynamical_phase, line_integral_phase, polygon_phase, triangle_phase, wrap_angle, PhaseReport,
};
use crate::su2::{bloch_projection, coherent_vector, quantum_phases, schrodinger_evolve, spin_operators};
use crate::topology::{betti_validate, min_orbit, parse_quotient, parse_simple, poincare};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Malformed input or a point outside the domain.
pub const EXIT_INPUT: i32 = 2;
/// No closed orbit.
pub const EXIT_NO_CYCLE: i32 = 3;
/// Independent computations disagree.
pub const EXIT_CROSS_CHECK: i32 = 4;

/// Tolerance for the quantum–classical comparisons.
pub const ORACLE_TOL: f64 = 1e-6;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoCycleFound | Error::NotCyclic { .. } => EXIT_NO_CYCLE,
        Error::CrossCheckFailure { .. } | Error::NonRealExpectation { .. } | Error::NotCoherent { .. } => {
            EXIT_CROSS_CHECK
        }
        _ => EXIT_INPUT,
    }
}

/// Variant name of an error, e.g. `"OutsideDomain"`.
pub fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

pub fn error_json(e: &Error) -> Value {
    json!({ "error": { "kind": error_kind(e), "message": e.to_string(), "exit_code": exit_code(e) } })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Integration {
    #[serde(default = "Integration::default_dt")]
    pub dt: f64,
    #[serde(rename = "T", default = "Integration::default_t")]
    pub t: f64,
    #[serde(default = "Integration::default_stride")]
    pub stride: usize,
    #[serde(default = "Integration::default_tol")]
    pub cyclicity_tol: f64,
}

impl Integration {
    fn default_dt() -> f64 {
        1e-3
    }
    fn default_t() -> f64 {
        10.0
    }
    fn default_stride() -> usize {
        1
    }
    fn default_tol() -> f64 {
        1e-6
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Parse(format!("integration.dt must be positive, got {}", self.dt)));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Parse(format!("integration.T must be positive, got {}", self.t)));
        }
        if self.stride == 0 {
            return Err(Error::Parse("integration.stride must be at least 1".into()));
        }
        if !(self.cyclicity_tol > 0.0 && self.cyclicity_tol.is_finite()) {
            return Err(Error::Parse("integration.cyclicity_tol must be positive".into()));
        }
        Ok(())
    }
}

impl Default for Integration {
    fn default() -> Self {
        Integration { dt: 1e-3, t: 10.0, stride: 1, cyclicity_tol: 1e-6 }
    }
}

/// Input to every command. Fields a command does not need are ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub manifold: Option<ManifoldSpec>,
    #[serde(default)]
    pub level: LevelSpec,
    pub schedule: Option<HamiltonianSchedule>,
    #[serde(default)]
    pub integration: Integration,
    /// Initial point of `evolve` (origin when absent).
    #[serde(default, with = "crate::matrix::json_opt")]
    pub z0: Option<CMat>,
    #[serde(default, with = "crate::matrix::json_opt")]
    pub z: Option<CMat>,
    #[serde(default, with = "crate::matrix::json_opt")]
    pub w: Option<CMat>,
    /// Known period; skips cycle detection.
    pub period: Option<f64>,
    #[serde(default)]
    pub oracle: bool,
    #[serde(rename = "loop")]
    pub loop_spec: Option<LoopSpec>,
    pub samples: Option<usize>,
    pub quotient: Option<String>,
    pub min_orbit: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    fn manifold(&self) -> Result<ManifoldSpec> {
        self.manifold.ok_or_else(|| Error::Parse("config needs a \"manifold\"".into()))
    }

    fn point(&self, spec: &ManifoldSpec, name: &str, m: &Option<CMat>) -> Result<PointMatrix> {
        let m = m.clone().ok_or_else(|| Error::Parse(format!("config needs a point \"{name}\"")))?;
        validate_point(spec, m)
    }

    fn schedule(&self) -> Result<&HamiltonianSchedule> {
        self.schedule.as_ref().ok_or_else(|| Error::Parse("config needs a \"schedule\"".into()))
    }
}

/// Parses a point given on the command line: either a nested JSON matrix
/// `[[[re, im], ...], ...]` or `re,im` for a 1×1 chart.
pub fn parse_point_arg(text: &str) -> Result<CMat> {
    let t = text.trim();
    if t.starts_with('[') {
        let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(t).map_err(|e| Error::Parse(format!("point: {e}")))?;
        return mjson::from_nested(&rows).map_err(Error::Parse);
    }
    let parts: Vec<&str> = t.split(',').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?} in point")));
    match parts.as_slice() {
        [re] => Ok(crate::matrix::scalar(c64(num(re)?, 0.0))),
        [re, im] => Ok(crate::matrix::scalar(c64(num(re)?, num(im)?))),
        _ => Err(Error::Parse(format!("cannot read point {text:?}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Kernel,
    Triangle,
    Evolve,
    Stokes,
    Poincare,
    OracleCompare,
}

/// Records of one command plus the exit code it asks for. A command can
/// succeed in producing output yet fail a comparison (exit 4).
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub records: Vec<Value>,
    pub exit_code: i32,
}

impl CommandOutput {
    fn ok(records: Vec<Value>) -> Self {
        CommandOutput { records, exit_code: EXIT_OK }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<CommandOutput> {
    cfg.integration.validate()?;
    match cmd {
        Command::Kernel => Ok(CommandOutput::ok(vec![cmd_kernel(cfg)?])),
        Command::Triangle => Ok(CommandOutput::ok(vec![to_value(&cmd_triangle(cfg)?)])),
        Command::Evolve => {
            let out = cmd_evolve(cfg)?;
            let mut records: Vec<Value> =
                out.samples.iter().map(|(t, z)| json!({ "t": t, "Z": mjson::to_nested(z) })).collect();
            let failed = out.summary.oracle_defect.is_some_and(|d| !(d < ORACLE_TOL));
            records.push(to_value(&out.summary));
            Ok(CommandOutput { records, exit_code: if failed { EXIT_CROSS_CHECK } else { EXIT_OK } })
        }
        Command::Stokes => Ok(CommandOutput::ok(vec![to_value(&cmd_stokes(cfg)?)])),
        Command::Poincare => Ok(CommandOutput::ok(vec![cmd_poincare(cfg)?])),
        Command::OracleCompare => {
            let out = cmd_oracle_compare(cfg)?;
            let code = if out.passed { EXIT_OK } else { EXIT_CROSS_CHECK };
            Ok(CommandOutput { records: vec![to_value(&out)], exit_code: code })
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// `K(Z, W̄)` as `{"re", "im"}`.
pub fn cmd_kernel(cfg: &RunConfig) -> Result<Value> {
    let spec = cfg.manifold()?;
    let z = cfg.point(&spec, "z", &cfg.z)?;
    let w = cfg.point(&spec, "w", &cfg.w)?;
    let k = kernels::kernel(&z, &w)?;
    Ok(json!({ "re": k.re, "im": k.im }))
}

/// Geodesic triangle `(0, z, w)` as a report with `γ` set and `β = 0`.
pub fn cmd_triangle(cfg: &RunConfig) -> Result<PhaseReport> {
    let spec = cfg.manifold()?;
    let level = cfg.level.single()?;
    let z = cfg.point(&spec, "z", &cfg.z)?;
    let w = cfg.point(&spec, "w", &cfg.w)?;
    let g = triangle_phase(level, &z, &w)?;
    Ok(assemble_report(g, 0.0, g, 0.0).with_method("triangle"))
}

/// Summary record of `evolve`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolveSummary {
    #[serde(flatten)]
    pub report: PhaseReport,
    pub period: f64,
    pub steps: usize,
    pub dt: f64,
    pub detected: bool,
    pub cross_check: Option<CrossCheck>,
    pub oracle: Option<PhaseReport>,
    pub oracle_defect: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveOutput {
    /// `(t, Z)` every `stride` steps of the final run.
    pub samples: Vec<(f64, CMat)>,
    pub summary: EvolveSummary,
}

fn is_cp1(spec: &ManifoldSpec) -> bool {
    spec.family() == Family::AIII && spec.p() == 1 && spec.q() == 1 && spec.compact()
}

/// Trajectory, cycle, then `β`, `γ` and `α` over exactly one period.
///
/// Without an explicit `period` the orbit is integrated over `[0, T]` and the
/// first return is located; the run is then repeated on a grid that divides
/// the period evenly. With `oracle` set (CP¹ only), the spin `j = λ/2`
/// Schrödinger evolution over the same period supplies `α` independently.
pub fn cmd_evolve(cfg: &RunConfig) -> Result<EvolveOutput> {
    let spec = cfg.manifold()?;
    let level = cfg.level.single()?;
    let schedule = cfg.schedule()?;
    let integ = cfg.integration;
    let z0 = match &cfg.z0 {
        Some(m) => validate_point(&spec, m.clone())?,
        None => spec.origin(),
    };
    if cfg.oracle && !is_cp1(&spec) {
        return Err(Error::InvalidSpec("the spin oracle needs the CP1 manifold".into()));
    }
    let (period, detected) = match cfg.period {
        Some(p) if p > 0.0 && p.is_finite() => (p, false),
        Some(p) => return Err(Error::Parse(format!("period must be positive, got {p}"))),
        None => {
            let probe = trajectory(&z0, schedule, integ.t, integ.dt)?;
            let cyc = find_cycle(&probe, integ.cyclicity_tol)?;
            if cyc.stationary {
                return Err(Error::NoCycleFound);
            }
            (cyc.period, true)
        }
    };
    let steps = ((period / integ.dt).round() as usize).max(1);
    let dt = period / steps as f64;
    let traj = trajectory(&z0, schedule, period, dt)?;
    let pts = traj.points();
    let residual = projective_distance(&pts[pts.len() - 1], &pts[0])?;
    if residual > integ.cyclicity_tol {
        return Err(Error::NotClosed { residual, tol: integ.cyclicity_tol });
    }
    let beta = dynamical_phase(level, &traj, schedule)?;
    let gamma = line_integral_phase(level, pts, integ.cyclicity_tol)?;
    let u_end = traj.unitaries().and_then(|u| u.last()).expect("unitaries are stored");
    let alpha = total_phase(level, u_end, &z0)?;
    let report = assemble_report(alpha, beta, gamma, residual);

    let (oracle, oracle_defect) = if cfg.oracle {
        let j = 0.5 * level.as_f64();
        let rep = spin_operators(j)?;
        let psi0 = coherent_vector(j, z0.entries()[(0, 0)])?;
        let qt = schrodinger_evolve(&rep, &psi0, schedule, period, dt)?;
        let q = quantum_phases(&rep, &qt, schedule)?;
        let d = wrap_angle(q.alpha_raw - beta - gamma).abs();
        (Some(q), Some(d))
    } else {
        (None, None)
    };
    let samples = traj
        .times()
        .iter()
        .zip(pts)
        .enumerate()
        .filter(|(k, _)| k % integ.stride == 0 || *k == steps)
        .map(|(_, (&t, p))| (t, p.entries().clone()))
        .collect();
    Ok(EvolveOutput {
        samples,
        summary: EvolveSummary {
            report,
            period,
            steps,
            dt,
            detected,
            cross_check: traj.cross_check(),
            oracle,
            oracle_defect,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StokesReport {
    pub line_integral: f64,
    pub polygon: f64,
    pub difference: f64,
    pub samples: usize,
}

/// Line integral and geodesic-fan value of the same sampled loop.
pub fn cmd_stokes(cfg: &RunConfig) -> Result<StokesReport> {
    let spec = cfg.manifold()?;
    let level = cfg.level.single()?;
    let lp = cfg.loop_spec.as_ref().ok_or_else(|| Error::Parse("config needs a \"loop\"".into()))?;
    let n = cfg.samples.unwrap_or(2000);
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let pts = lp.samples(&spec, n)?;
    let line = line_integral_phase(level, &pts, cfg.integration.cyclicity_tol)?;
    let poly = polygon_phase(level, &pts[..n])?;
    Ok(StokesReport { line_integral: line, polygon: poly, difference: line - poly, samples: n })
}

/// Poincaré polynomial of `quotient`, or the minimal-orbit row of `min_orbit`.
pub fn cmd_poincare(cfg: &RunConfig) -> Result<Value> {
    if let Some(g) = &cfg.min_orbit {
        let row = min_orbit(&parse_simple(g)?)?;
        return Ok(json!({ "group": g, "min_orbit": row }));
    }
    let q = cfg.quotient.as_deref().ok_or_else(|| Error::Parse("need a quotient such as \"G2/A1xU1\"".into()))?;
    let p = poincare(q)?;
    let (g, h) = parse_quotient(q)?;
    let mut caveats = g.caveats();
    caveats.extend(h.caveats());
    let check = betti_validate(&p);
    Ok(json!({
        "quotient": q,
        "G": g.to_string(),
        "H": h.to_string(),
        "coefficients": p.coefficients,
        "rendered": p.render(),
        "real_dimension": p.degree(),
        "euler_characteristic": p.eval(1),
        "betti_check": check,
        "caveats": caveats,
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleComparison {
    pub j: f64,
    pub steps: usize,
    /// Largest distance between the Bloch-projected quantum state and the
    /// Möbius orbit.
    pub quantum_distance: f64,
    pub cross_check: Option<CrossCheck>,
    /// Present when `period` is given: phases over one cycle.
    pub classical: Option<PhaseReport>,
    pub quantum: Option<PhaseReport>,
    pub decomposition_defect: Option<f64>,
    pub passed: bool,
}

/// Runs the spin-`j` oracle (`j = λ/2`) against the classical CP¹ flow on
/// `[0, T]`, or over one `period` when given.
pub fn cmd_oracle_compare(cfg: &RunConfig) -> Result<OracleComparison> {
    let spec = cfg.manifold.unwrap_or_else(ManifoldSpec::cp1);
    if !is_cp1(&spec) {
        return Err(Error::InvalidSpec("the spin oracle needs the CP1 manifold".into()));
    }
    let level = cfg.level.single()?;
    let schedule = cfg.schedule()?;
    let z0 = match &cfg.z0 {
        Some(m) => validate_point(&spec, m.clone())?,
        None => spec.origin(),
    };
    let t_end = cfg.period.unwrap_or(cfg.integration.t);
    let (steps, dt) = crate::dynamics::time_grid(0.0, t_end, cfg.integration.dt)?;
    let j = 0.5 * level.as_f64();
    let rep = spin_operators(j)?;
    let traj = trajectory(&z0, schedule, t_end, dt)?;
    let qt = schrodinger_evolve(&rep, &coherent_vector(j, z0.entries()[(0, 0)])?, schedule, t_end, dt)?;
    let mut worst: f64 = 0.0;
    for (psi, p) in qt.states.iter().zip(traj.points()) {
        let zq = bloch_projection(&rep, psi)?;
        let q = validate_point(&spec, crate::matrix::scalar(zq))?;
        worst = worst.max(projective_distance(&q, p)?);
    }
    let (classical, quantum, defect) = if cfg.period.is_some() {
        let beta = dynamical_phase(level, &traj, schedule)?;
        let gamma = line_integral_phase(level, traj.points(), cfg.integration.cyclicity_tol)?;
        let u_end = traj.unitaries().and_then(|u| u.last()).expect("unitaries are stored");
        let pts = traj.points();
        let residual = projective_distance(&pts[pts.len() - 1], &pts[0])?;
        let c = assemble_report(total_phase(level, u_end, &z0)?, beta, gamma, residual);
        let q = quantum_phases(&rep, &qt, schedule)?;
        let d = wrap_angle(q.alpha_raw - beta - gamma).abs();
        (Some(c), Some(q), Some(d))
    } else {
        (None, None, None)
    };
    let passed = worst < ORACLE_TOL && defect.is_none_or(|d| d < ORACLE_TOL);
    Ok(OracleComparison {
        j,
        steps,
        quantum_distance: worst,
        cross_check: traj.cross_check(),
        classical,
        quantum,
        decomposition_defect: defect,
        passed,
    })
}

/// Runs `configs` in parallel; results keep input order.
pub fn sweep(cmd: Command, configs: &[RunConfig]) -> Vec<Result<CommandOutput>> {
    configs.par_iter().map(|c| run(cmd, c)).collect()
}

/// Outcome of one sweep entry as a JSON record.
pub fn sweep_record(index: usize, result: &Result<CommandOutput>) -> Value {
    match result {
        Ok(out) => json!({ "index": index, "exit_code": out.exit_code, "records": out.records }),
        Err(e) => {
            let mut v = error_json(e);
            v["index"] = json!(index);
            v["exit_code"] = json!(exit_code(e));
            v
        }
    }
}

/// Writes floats with 17 significant digits, trailing zeros removed, in
/// `%.17g` style.
#[derive(Clone, Copy, Debug, Default)]
pub struct G17;

pub fn format_g17(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let strip = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        strip(format!("{:.*}", decimals, x))
    } else {
        let m = strip(mant.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

impl serde_json::ser::Formatter for G17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_g17(value).as_bytes())
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        w.write_all(format_g17(value as f64).as_bytes())
    }
}

/// One JSON record on one line.
pub fn to_line<T: Serialize>(x: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17);
    x.serialize(&mut ser).expect("records serialize");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Helper for sample configs: the generator list of `Σ b_k σ_k`.
pub fn pauli_schedule(b: [f64; 3]) -> Result<HamiltonianSchedule> {
    HamiltonianSchedule::constant(crate::matrix::pauli().to_vec(), &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::scalar;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn cp1_cfg() -> RunConfig {
        RunConfig { manifold: Some(ManifoldSpec::cp1()), ..RunConfig::default() }
    }

    #[test]
    fn g17_formatting() {
        assert_eq!(format_g17(PI), "3.1415926535897931");
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(-0.5), "-0.5");
        assert_eq!(format_g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_g17(1e20), "1e+20");
        assert_eq!(format_g17(0.0), "0");
        assert_eq!(format_g17(f64::NAN), "null");
        assert_eq!(to_line(&json!({"a": 0.25, "b": [1, 2.5]})), r#"{"a":0.25,"b":[1,2.5]}"#);
    }

    #[test]
    fn g17_round_trips() {
        for x in [PI, 1.0 / 3.0, 6.02e23, -1.5e-300, 123456.789] {
            assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn kernel_command() {
        let cfg = RunConfig { z: Some(scalar(c64(1.0, 0.0))), w: Some(scalar(c64(0.0, 1.0))), ..cp1_cfg() };
        assert_eq!(cmd_kernel(&cfg).unwrap(), json!({"re": 1.0, "im": -1.0}));
        let disc = RunConfig {
            manifold: Some(ManifoldSpec::disc()),
            z: Some(scalar(c64(1.5, 0.0))),
            w: Some(scalar(c64(0.0, 0.0))),
            ..RunConfig::default()
        };
        let e = run(Command::Kernel, &disc).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT);
        assert_eq!(error_json(&e)["error"]["kind"], "OutsideDomain");
    }

    #[test]
    fn triangle_command() {
        let mut cfg = RunConfig { z: Some(scalar(c64(1.0, 0.0))), w: Some(scalar(c64(0.0, 1.0))), ..cp1_cfg() };
        assert!((cmd_triangle(&cfg).unwrap().gamma - FRAC_PI_4).abs() < 1e-15);
        cfg.level = serde_json::from_str("2").unwrap();
        assert!((cmd_triangle(&cfg).unwrap().gamma - FRAC_PI_2).abs() < 1e-15);
        cfg.w = cfg.z.clone();
        assert_eq!(cmd_triangle(&cfg).unwrap().gamma, 0.0);
    }

    #[test]
    fn evolve_zero_hamiltonian_has_no_cycle() {
        let cfg = RunConfig {
            schedule: Some(HamiltonianSchedule::constant(vec![CMat::zeros(2, 2)], &[0.0]).unwrap()),
            z0: Some(scalar(c64(0.5, 0.0))),
            integration: Integration { t: 1.0, dt: 0.01, ..Integration::default() },
            ..cp1_cfg()
        };
        let e = run(Command::Evolve, &cfg).unwrap_err();
        assert_eq!(e, Error::NoCycleFound);
        assert_eq!(exit_code(&e), EXIT_NO_CYCLE);
    }

    #[test]
    fn evolve_equator_is_geometric() {
        let cfg = RunConfig {
            schedule: Some(pauli_schedule([0.0, 0.0, -1.0]).unwrap()),
            z0: Some(scalar(c64(1.0, 0.0))),
            integration: Integration { t: 4.0, dt: 1e-3, stride: 100, ..Integration::default() },
            oracle: true,
            ..cp1_cfg()
        };
        let out = cmd_evolve(&cfg).unwrap();
        let s = &out.summary;
        assert!(s.detected && (s.period - PI).abs() < 1e-6, "{s:?}");
        assert!(s.report.beta.abs() < 1e-8, "{s:?}");
        assert!(wrap_angle(s.report.gamma - PI).abs() < 1e-6, "{s:?}");
        assert!(s.oracle_defect.unwrap() < 1e-6);
        assert_eq!(out.samples.first().unwrap().0, 0.0);
        assert_eq!(out.samples.last().unwrap().0, s.period);
    }

    #[test]
    fn stokes_constant_loop_is_zero() {
        let cfg = RunConfig {
            loop_spec: Some(LoopSpec::Constant { point: scalar(c64(0.3, 0.1)) }),
            samples: Some(50),
            ..cp1_cfg()
        };
        let r = cmd_stokes(&cfg).unwrap();
        assert_eq!((r.line_integral, r.polygon), (0.0, 0.0));
    }

    #[test]
    fn poincare_command() {
        let cfg = RunConfig { quotient: Some("G2/A1xU1".into()), ..RunConfig::default() };
        let v = cmd_poincare(&cfg).unwrap();
        assert_eq!(v["coefficients"], json!([1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]));
        assert_eq!(v["euler_characteristic"], json!(6));
        let cfg = RunConfig { min_orbit: Some("E8".into()), ..RunConfig::default() };
        assert_eq!(cmd_poincare(&cfg).unwrap()["min_orbit"]["dimension"], json!(114));
    }

    #[test]
    fn config_parsing() {
        let cfg = RunConfig::from_json(
            r#"{"manifold": {"family": "AIII", "p": 1, "compact": true}, "level": 2,
                "integration": {"dt": 0.01, "T": 5},
                "z": [[[1, 0]]]}"#,
        )
        .unwrap();
        assert_eq!(cfg.integration.t, 5.0);
        assert_eq!(cfg.integration.stride, 1);
        assert_eq!(cfg.level.single().unwrap().get(), 2);
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
        let bad = RunConfig { integration: Integration { stride: 0, ..Integration::default() }, ..cp1_cfg() };
        assert!(run(Command::Kernel, &bad).is_err());
    }

    #[test]
    fn point_arguments() {
        assert_eq!(parse_point_arg("1,-2").unwrap(), scalar(c64(1.0, -2.0)));
        assert_eq!(parse_point_arg("0.5").unwrap(), scalar(c64(0.5, 0.0)));
        assert_eq!(parse_point_arg("[[[1,0],[0,1]]]").unwrap().shape(), (1, 2));
        assert!(parse_point_arg("x").is_err());
    }

    #[test]
    fn sweep_keeps_order() {
        let cfgs: Vec<RunConfig> = (0..8)
            .map(|k| RunConfig {
                z: Some(scalar(c64(k as f64, 0.0))),
                w: Some(scalar(c64(1.0, 0.0))),
                ..cp1_cfg()
            })
            .collect();
        let out = sweep(Command::Kernel, &cfgs);
        for (k, r) in out.iter().enumerate() {
            let rec = sweep_record(k, r);
            assert_eq!(rec["index"], json!(k));
            assert_eq!(rec["records"][0]["re"], json!(1.0 + k as f64));
        }
    }
}

//! Configuration and command implementations behind the `qdirac` binary.
//!
//! Every command returns its document as a string; the binary decides where
//! it goes. Nothing here reads the clock or the environment, so the same
//! configuration always yields the same bytes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::band::SectorNorm;
use crate::basis::TruncatedSpace;
use crate::error::Error;
use crate::halfint::HalfInt;
use crate::pairing::{
    build_projector, closed_form_pairing, cm_pairing, dixmier_estimate, fredholm_pairing, hochschild_operator,
    projector_residuals, PairingMethod, PairingReport, HOCHSCHILD_TOL,
};
use crate::rep::{
    calibrate_conventions, commutativity_residual, equivariance_residual, radius_residual, unitarity_residual,
    Generator, ResidualReport,
};
use crate::report::{convergence_csv, spectrum_csv, to_json};
use crate::triple::{
    classify_decay, commutant_residual, order_one_bound, order_one_max, order_one_residual, sign_table, spectrum,
    triple_on, DecayClass, QuasiSpectralTriple, SignTable, DEFAULT_D_OFFSET,
};

/// Extra sectors built beyond the reported range so that band-3 products
/// stay exact there.
pub const MARGIN: i32 = 8;

/// Largest truncation accepted by the matrix-backed pairing methods.
pub const MATRIX_PAIRING_LMAX: i32 = 200;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration; exit code 2.
    Usage(String),
    /// A computation failed; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Radius,
    Commutativity,
    Equivariance,
    Unitarity,
    Signs,
    Commutant,
    OrderOne,
    Hochschild,
    Projector,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Radius,
        Check::Commutativity,
        Check::Equivariance,
        Check::Unitarity,
        Check::Signs,
        Check::Commutant,
        Check::OrderOne,
        Check::Hochschild,
        Check::Projector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Radius => "radius",
            Check::Commutativity => "commutativity",
            Check::Equivariance => "equivariance",
            Check::Unitarity => "unitarity",
            Check::Signs => "signs",
            Check::Commutant => "commutant",
            Check::OrderOne => "order-one",
            Check::Hochschild => "hochschild",
            Check::Projector => "projector",
        }
    }
}

impl FromStr for Check {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| usage(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(usage(format!("unknown format {other:?}"))),
        }
    }
}

/// Raw, unvalidated settings from a config file or the command line.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub n: Option<String>,
    pub lmax: Option<String>,
    pub d1: Option<String>,
    pub d_offset: Option<String>,
    pub tol: Option<String>,
    pub checks: Option<String>,
    pub format: Option<String>,
    pub method: Option<String>,
    pub window: Option<String>,
}

impl Settings {
    /// Parses a flat `key = value` file; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key = value", no + 1)))?;
            let v = Some(v.trim().to_string());
            match k.trim() {
                "N" | "n" => s.n = v,
                "lmax" => s.lmax = v,
                "d1" => s.d1 = v,
                "d_offset" | "d-offset" => s.d_offset = v,
                "tol" => s.tol = v,
                "checks" => s.checks = v,
                "format" => s.format = v,
                "method" => s.method = v,
                "window" => s.window = v,
                other => return Err(usage(format!("config line {}: unknown key {other:?}", no + 1))),
            }
        }
        Ok(s)
    }

    /// Values set in `self` win over `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            n: self.n.or(base.n),
            lmax: self.lmax.or(base.lmax),
            d1: self.d1.or(base.d1),
            d_offset: self.d_offset.or(base.d_offset),
            tol: self.tol.or(base.tol),
            checks: self.checks.or(base.checks),
            format: self.format.or(base.format),
            method: self.method.or(base.method),
            window: self.window.or(base.window),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub n: HalfInt,
    pub lmax: HalfInt,
    pub d1: f64,
    pub d_offset: f64,
    pub tol: f64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

pub const DEFAULT_N: HalfInt = HalfInt::HALF;
pub const DEFAULT_LMAX: HalfInt = HalfInt::from_int(40);
pub const DEFAULT_TOL: f64 = 1e-10;

fn parse_f64(name: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = v.trim().parse().map_err(|_| usage(format!("{name}: not a number: {v:?}")))?;
    if !x.is_finite() {
        return Err(usage(format!("{name} must be finite")));
    }
    Ok(x)
}

fn parse_half(name: &str, v: &str) -> Result<HalfInt, CliError> {
    v.parse::<HalfInt>().map_err(|_| usage(format!("{name}: not a half-integer: {v:?}")))
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<RunConfig, CliError> {
        let n = s.n.as_deref().map(|v| parse_half("N", v)).transpose()?.unwrap_or(DEFAULT_N);
        if n < 0 {
            return Err(usage(format!("N must be non-negative, got {n}")));
        }
        let lmax = s.lmax.as_deref().map(|v| parse_half("lmax", v)).transpose()?.unwrap_or(DEFAULT_LMAX);
        if lmax < n {
            return Err(usage(format!("lmax {lmax} is below N = {n}")));
        }
        let d1 = s.d1.as_deref().map(|v| parse_f64("d1", v)).transpose()?.unwrap_or(1.0);
        if d1 == 0.0 {
            return Err(usage("d1 must be non-zero"));
        }
        let d_offset = s.d_offset.as_deref().map(|v| parse_f64("d-offset", v)).transpose()?.unwrap_or(DEFAULT_D_OFFSET);
        let tol = s.tol.as_deref().map(|v| parse_f64("tol", v)).transpose()?.unwrap_or(DEFAULT_TOL);
        if tol <= 0.0 {
            return Err(usage("tol must be positive"));
        }
        let checks = match s.checks.as_deref() {
            None | Some("all") => Check::ALL.to_vec(),
            Some(list) => {
                let mut v: Vec<Check> = list
                    .split(',')
                    .filter(|x| !x.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_, _>>()?;
                v.sort();
                v.dedup();
                if v.is_empty() {
                    return Err(usage("empty check list"));
                }
                v
            }
        };
        let format = s.format.as_deref().map(str::parse).transpose()?;
        Ok(RunConfig { n, lmax, d1, d_offset, tol, checks, format })
    }

    /// The largest admissible sector `≤ lmax`.
    pub fn reported_lmax(&self) -> HalfInt {
        TruncatedSpace::with_cutoff(self.n, self.lmax).expect("validated").lmax()
    }

    pub fn require_lmax_margin(&self, margin: i32) -> Result<(), CliError> {
        if self.lmax < self.n + margin {
            return Err(usage(format!("lmax {} must be at least N + {margin} = {}", self.lmax, self.n + margin)));
        }
        Ok(())
    }

    /// A triple covering the reported sectors plus `MARGIN` extra ones.
    fn padded_triple(&self) -> Result<QuasiSpectralTriple, CliError> {
        let space = TruncatedSpace::new(self.n, self.reported_lmax() + MARGIN)?;
        Ok(triple_on(space, self.d1, self.d_offset)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub status: Status,
    pub tol: f64,
    pub max_residual: f64,
    pub first_offending_sector: Option<HalfInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<DecayClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub per_sector: Vec<SectorNorm>,
}

impl CheckResult {
    fn from_norms(check: Check, tol: f64, per_sector: Vec<SectorNorm>) -> Self {
        let max_residual = per_sector.iter().map(|s| s.norm).fold(0.0, f64::max);
        let first_offending_sector = per_sector.iter().find(|s| s.norm > tol).map(|s| s.l);
        CheckResult {
            check,
            status: if first_offending_sector.is_none() { Status::Pass } else { Status::Fail },
            tol,
            max_residual,
            first_offending_sector,
            classification: None,
            note: None,
            per_sector,
        }
    }

    fn failed(check: Check, tol: f64, note: String) -> Self {
        CheckResult {
            check,
            status: Status::Fail,
            tol,
            max_residual: f64::NAN,
            first_offending_sector: None,
            classification: None,
            note: Some(note),
            per_sector: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    /// Highest sector covered by the per-sector lists.
    pub lmax_checked: HalfInt,
    pub checks: Vec<CheckResult>,
    pub sign_table: Option<SignTable>,
    pub ko_dimension: Option<u8>,
    pub all_pass: bool,
}

fn clip(norms: Vec<SectorNorm>, top: HalfInt) -> Vec<SectorNorm> {
    norms.into_iter().filter(|s| s.l <= top).collect()
}

fn clip_report(r: ResidualReport, top: HalfInt) -> Vec<SectorNorm> {
    clip(r.per_sector, top)
}

fn run_check(check: Check, cfg: &RunConfig, t: &QuasiSpectralTriple, top: HalfInt) -> Result<CheckResult, Error> {
    let tol = cfg.tol;
    Ok(match check {
        Check::Radius => CheckResult::from_norms(check, tol, clip_report(radius_residual(&t.gens)?, top)),
        Check::Commutativity => CheckResult::from_norms(check, tol, clip_report(commutativity_residual(&t.gens)?, top)),
        Check::Equivariance => CheckResult::from_norms(check, tol, clip_report(equivariance_residual(&t.gens)?, top)),
        Check::Unitarity => CheckResult::from_norms(check, tol, clip_report(unitarity_residual(&t.gens)?, top)),
        Check::Signs => {
            let st = sign_table(t)?;
            let want = if cfg.n.is_integer() { 6 } else { 2 };
            let mut r = CheckResult::from_norms(check, tol, Vec::new());
            if st.ko_dimension != want {
                r.status = Status::Fail;
                r.note = Some(format!("KO-dimension {} where {want} is expected", st.ko_dimension));
            }
            r
        }
        Check::Commutant => {
            let rep = commutant_residual(t)?;
            let best = rep
                .conventions
                .iter()
                .min_by(|a, b| a.classification.cmp(&b.classification))
                .expect("two conventions");
            let len = best.generators.iter().map(|g| g.per_sector.len()).min().unwrap_or(0);
            let norms = (0..len)
                .map(|i| SectorNorm {
                    l: best.generators[0].per_sector[i].l,
                    norm: best.generators.iter().map(|g| g.per_sector[i].norm).fold(0.0, f64::max),
                })
                .collect();
            let mut r = CheckResult::from_norms(check, tol, clip(norms, top));
            r.classification = Some(best.classification);
            r.status = if rep.holds { Status::Pass } else { Status::Fail };
            r.note = serde_json::to_value(best.convention).ok().and_then(|v| v.as_str().map(|c| format!("best convention: {c}")));
            r
        }
        Check::OrderOne => {
            let norms = clip_report(order_one_max(t)?, top);
            let mut r = CheckResult::from_norms(check, tol, norms);
            let (class, slope) = classify_decay(&r.per_sector, tol);
            r.classification = Some(class);
            let lower = cfg.n + cfg.n + 2;
            let bound_ok = r
                .per_sector
                .iter()
                .filter(|s| s.l >= lower)
                .all(|s| s.norm <= order_one_bound(cfg.n, cfg.d1, s.l) * (1.0 + 1e-12));
            let ok = class == DecayClass::Exact || (class == DecayClass::Decaying && bound_ok);
            r.status = if ok { Status::Pass } else { Status::Fail };
            if class != DecayClass::Exact {
                r.note = Some(format!(
                    "compact residual: log-log slope {}, bound 2|d1||4N^2-1|/l {}",
                    slope.map_or("n/a".to_string(), |p| format!("{p:.4}")),
                    if bound_ok { "holds" } else { "violated" }
                ));
            }
            r
        }
        Check::Hochschild => {
            let e = build_projector(t)?;
            let h = hochschild_operator(t, &e)?;
            let norms = h.sectors.iter().map(|s| SectorNorm { l: s.l, norm: s.residual }).collect();
            let mut r = CheckResult::from_norms(check, tol.max(HOCHSCHILD_TOL), clip(norms, top));
            r.note = Some(format!("measured eigenvalue {:.12}", h.measured_eigenvalue));
            r
        }
        Check::Projector => {
            let e = build_projector(t)?;
            let p = projector_residuals(&e)?;
            let norms = p
                .idempotency
                .per_sector
                .iter()
                .zip(&p.self_adjointness.per_sector)
                .map(|(a, b)| SectorNorm { l: a.l, norm: a.norm.max(b.norm) })
                .collect();
            CheckResult::from_norms(check, tol, clip(norms, top))
        }
    })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerificationReport, CliError> {
    cfg.require_lmax_margin(6)?;
    let t = cfg.padded_triple()?;
    let top = cfg.reported_lmax();
    let checks = cfg
        .checks
        .iter()
        .map(|&c| run_check(c, cfg, &t, top).unwrap_or_else(|e| CheckResult::failed(c, cfg.tol, e.to_string())))
        .collect::<Vec<_>>();
    let st = sign_table(&t).ok();
    let all_pass = checks.iter().all(|c| c.status == Status::Pass);
    Ok(VerificationReport {
        config: cfg.clone(),
        lmax_checked: top,
        checks,
        sign_table: st,
        ko_dimension: st.map(|s| s.ko_dimension),
        all_pass,
    })
}

pub fn render_verify(report: &VerificationReport, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => Ok(to_json(report)?),
        OutputFormat::Csv => {
            let mut out = String::from("check,status,max_residual,first_offending_sector,classification\n");
            for c in &report.checks {
                let class = c.classification.map(|x| serde_json::to_value(x).unwrap_or_default());
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.check.name(),
                    if c.status == Status::Pass { "pass" } else { "fail" },
                    crate::report::format_float(c.max_residual),
                    c.first_offending_sector.map(|l| l.to_string()).unwrap_or_default(),
                    class.and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
                ));
            }
            Ok(out)
        }
    }
}

/// Whether a pairing report meets its method's contract.
pub fn pairing_passes(r: &PairingReport) -> bool {
    match r.method {
        PairingMethod::LocalIndex => r.abs_error <= 0.05,
        PairingMethod::Fredholm | PairingMethod::ClosedForm => {
            let n = r.n.to_f64();
            let l = r.lmax.to_f64() + 1.0;
            (r.target - r.estimate - 2.0 * n.powi(3) / (l * l)).abs() <= 1e-9
        }
    }
}

pub fn cmd_pairing(cfg: &RunConfig, method: PairingMethod) -> Result<PairingReport, CliError> {
    cfg.require_lmax_margin(6)?;
    let top = cfg.reported_lmax();
    if method != PairingMethod::ClosedForm && top > MATRIX_PAIRING_LMAX {
        return Err(usage(format!(
            "method {method} is limited to lmax <= {MATRIX_PAIRING_LMAX}; use closed-form for larger truncations"
        )));
    }
    Ok(match method {
        PairingMethod::ClosedForm => closed_form_pairing(cfg.n, top)?,
        PairingMethod::Fredholm => {
            let t = cfg.padded_triple()?;
            let e = build_projector(&t)?;
            fredholm_pairing(&t, &e, top)?
        }
        PairingMethod::LocalIndex => {
            let t = cfg.padded_triple()?;
            let e = build_projector(&t)?;
            let mut r = cm_pairing(&t, &e)?;
            let keep = r.sectors.iter().take_while(|&&l| l <= top).count();
            r.sectors.truncate(keep);
            r.contributions.truncate(keep);
            r.partial_sums.truncate(keep);
            r.lmax = top;
            r
        }
    })
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String, CliError> {
    let space = TruncatedSpace::with_cutoff(cfg.n, cfg.lmax).map_err(|e| usage(e.to_string()))?;
    let t = triple_on(space, cfg.d1, cfg.d_offset)?;
    let lines = spectrum(&t)?;
    match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => Ok(spectrum_csv(&lines)),
        OutputFormat::Json => Ok(to_json(&lines)?),
    }
}

pub fn cmd_calibrate(cfg: &RunConfig, require_unitarity: bool) -> Result<String, CliError> {
    cfg.require_lmax_margin(4)?;
    let space = TruncatedSpace::with_cutoff(cfg.n, cfg.lmax).map_err(|e| usage(e.to_string()))?;
    let report = calibrate_conventions(space, cfg.tol, require_unitarity)?;
    Ok(to_json(&report)?)
}

pub fn parse_window(s: &str) -> Result<(HalfInt, HalfInt), CliError> {
    let (a, b) = s.split_once(',').ok_or_else(|| usage(format!("window must be lo,hi; got {s:?}")))?;
    let lo = parse_half("window", a)?;
    let hi = parse_half("window", b)?;
    if lo > hi {
        return Err(usage("window: lo > hi"));
    }
    Ok((lo, hi))
}

pub fn cmd_dixmier(cfg: &RunConfig, window: (HalfInt, HalfInt)) -> Result<String, CliError> {
    let space = TruncatedSpace::new(cfg.n, cfg.n).expect("N >= 0");
    let t = triple_on(space, cfg.d1, cfg.d_offset)?;
    let est = dixmier_estimate(&t, window).map_err(|e| match e {
        Error::Regression(m) => usage(m),
        other => other.into(),
    })?;
    match cfg.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => Ok(to_json(&est)?),
        OutputFormat::Csv => Ok(format!(
            "slope,intercept,points,zeta_residue\n{},{},{},{}\n",
            crate::report::format_float(est.slope),
            crate::report::format_float(est.intercept),
            est.points,
            crate::report::format_float(est.zeta_residue)
        )),
    }
}

pub fn parse_pairs(s: Option<&str>) -> Result<Vec<(Generator, Generator)>, CliError> {
    let Some(s) = s else {
        return Ok(Generator::ALL.iter().flat_map(|&x| Generator::ALL.iter().map(move |&y| (x, y))).collect());
    };
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (x, y) = p.split_once(',').ok_or_else(|| usage(format!("pair must be x,y; got {p:?}")))?;
            let x = x.parse::<Generator>().map_err(|e| usage(e.to_string()))?;
            let y = y.parse::<Generator>().map_err(|e| usage(e.to_string()))?;
            Ok((x, y))
        })
        .collect()
}

pub fn cmd_residual(cfg: &RunConfig, pairs: &[(Generator, Generator)]) -> Result<String, CliError> {
    cfg.require_lmax_margin(4)?;
    let t = cfg.padded_triple()?;
    let top = cfg.reported_lmax();
    let mut reports = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        let mut r = order_one_residual(&t, x, y)?;
        r.per_sector.retain(|s| s.l <= top);
        r.lmax = top;
        r.max = r.per_sector.iter().map(|s| s.norm).fold(0.0, f64::max);
        reports.push((x, y, r));
    }
    match cfg.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => Ok(to_json(&reports.iter().map(|(_, _, r)| r).collect::<Vec<_>>())?),
        OutputFormat::Csv => {
            let mut out = String::from("x,y,l,norm\n");
            for (x, y, r) in &reports {
                for s in &r.per_sector {
                    out.push_str(&format!("{},{},{},{}\n", x.name(), y.name(), s.l, crate::report::format_float(s.norm)));
                }
            }
            Ok(out)
        }
    }
}

pub fn render_pairing(r: &PairingReport, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => Ok(to_json(r)?),
        OutputFormat::Csv => Ok(convergence_csv(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        let text: String = pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        Settings::parse_file(&text).unwrap()
    }

    #[test]
    fn flags_override_file() {
        let file = settings(&[("N", "3/2"), ("lmax", "30"), ("d1", "2")]);
        let cli = Settings { lmax: Some("20".into()), ..Default::default() };
        let cfg = RunConfig::from_settings(&cli.over(file)).unwrap();
        assert_eq!(cfg.n, HalfInt::from_twice(3));
        assert_eq!(cfg.lmax, HalfInt::from_int(20));
        assert_eq!(cfg.d1, 2.0);
    }

    #[test]
    fn validation_errors_are_usage_errors() {
        for bad in [
            settings(&[("N", "1/3")]),
            settings(&[("N", "-1")]),
            settings(&[("d1", "0")]),
            settings(&[("checks", "radius,bogus")]),
            settings(&[("N", "5"), ("lmax", "2")]),
        ] {
            assert!(matches!(RunConfig::from_settings(&bad), Err(CliError::Usage(_))));
        }
        assert!(matches!(Settings::parse_file("nonsense"), Err(CliError::Usage(_))));
        assert!(matches!(Settings::parse_file("color = red"), Err(CliError::Usage(_))));
        let cfg = RunConfig::from_settings(&settings(&[("N", "2"), ("lmax", "4")])).unwrap();
        assert!(matches!(cmd_verify(&cfg), Err(CliError::Usage(_))));
    }

    #[test]
    fn spectrum_csv_example() {
        let cfg = RunConfig::from_settings(&settings(&[("N", "1"), ("lmax", "3")])).unwrap();
        let csv = cmd_spectrum(&cfg).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[0], "eigenvalue,multiplicity,l,sign");
        assert!(rows[1].starts_with("-1.5000000000000000e0,3,1,-"));
        assert!(rows[2].starts_with("1.5000000000000000e0,3,1,+"));
        assert!(rows[6].starts_with("3.5000000000000000e0,7,3,+"));
    }
}

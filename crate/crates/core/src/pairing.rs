//! The Bott projector and the three routes to its index pairing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::band::{BlockBandOperator, SectorNorm, C64};
use crate::basis::{BasisVector, TruncatedSpace};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::rep::ResidualReport;
use crate::triple::{build_f, linear_fit, QuasiSpectralTriple};

/// Threshold for the Hochschild identity.
pub const HOCHSCHILD_TOL: f64 = 1e-8;

/// `e = ½ (1−A  B ; B*  1+A)` with entries represented by `π`.
#[derive(Clone, Debug)]
pub struct MatrixProjector {
    pub entries: [[BlockBandOperator; 2]; 2],
}

impl MatrixProjector {
    pub fn from_generators(a: &BlockBandOperator, b: &BlockBandOperator, bstar: &BlockBandOperator) -> Result<Self> {
        let id = BlockBandOperator::identity(*a.space());
        Ok(MatrixProjector {
            entries: [
                [id.minus(a)?.scale_real(0.5), b.scale_real(0.5)],
                [bstar.scale_real(0.5), id.plus(a)?.scale_real(0.5)],
            ],
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BlockBandOperator {
        &self.entries[i][j]
    }

    pub fn space(&self) -> &TruncatedSpace {
        self.entries[0][0].space()
    }
}

pub fn build_projector(t: &QuasiSpectralTriple) -> Result<MatrixProjector> {
    MatrixProjector::from_generators(&t.gens.pi_a, &t.gens.pi_b, &t.gens.pi_bstar)
}

type OpMatrix = [[BlockBandOperator; 2]; 2];

fn op_matrix_mul(a: &OpMatrix, b: &OpMatrix) -> Result<OpMatrix> {
    let cell = |i: usize, j: usize| -> Result<BlockBandOperator> {
        a[i][0].compose(&b[0][j])?.plus(&a[i][1].compose(&b[1][j])?)
    };
    Ok([[cell(0, 0)?, cell(0, 1)?], [cell(1, 0)?, cell(1, 1)?]])
}

/// Operator norm of the column strip over sector `l` of a 2×2 operator
/// matrix, for every sector valid in all four entries.
fn op_matrix_sector_norms(m: &OpMatrix) -> Result<Vec<SectorNorm>> {
    let space = *m[0][0].space();
    let valid = m.iter().flatten().map(|op| op.valid_lmax()).min().expect("four entries");
    let sectors: Vec<HalfInt> = space.sectors().filter(|&l| l <= valid).collect();
    if sectors.is_empty() {
        return Err(Error::Validity(format!("no valid sectors left (valid_lmax {valid})")));
    }
    sectors
        .into_iter()
        .map(|l| {
            let cols = space.enumerate_sector(l)?;
            let mut columns: Vec<BTreeMap<(usize, BasisVector), C64>> = Vec::with_capacity(2 * cols.len());
            for j in 0..2 {
                for c in &cols {
                    let mut col = BTreeMap::new();
                    for (i, row_ops) in m.iter().enumerate() {
                        for (r, v) in row_ops[j].column(c) {
                            *col.entry((i, r)).or_insert(C64::new(0.0, 0.0)) += v;
                        }
                    }
                    columns.push(col);
                }
            }
            let n = columns.len();
            let mut gram = DMatrix::<C64>::zeros(n, n);
            for a in 0..n {
                for b in a..n {
                    let acc: C64 = columns[a]
                        .iter()
                        .filter_map(|(k, va)| columns[b].get(k).map(|vb| va.conj() * vb))
                        .sum();
                    gram[(a, b)] = acc;
                    gram[(b, a)] = acc.conj();
                }
            }
            let top = gram.symmetric_eigenvalues().iter().copied().fold(0.0f64, f64::max);
            Ok(SectorNorm { l, norm: top.max(0.0).sqrt() })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectorResiduals {
    pub idempotency: ResidualReport,
    pub self_adjointness: ResidualReport,
}

/// Sector norms of `e² − e` and `e† − e`.
pub fn projector_residuals(e: &MatrixProjector) -> Result<ProjectorResiduals> {
    let sq = op_matrix_mul(&e.entries, &e.entries)?;
    let idem: OpMatrix = [
        [sq[0][0].minus(e.get(0, 0))?, sq[0][1].minus(e.get(0, 1))?],
        [sq[1][0].minus(e.get(1, 0))?, sq[1][1].minus(e.get(1, 1))?],
    ];
    let adj = |i: usize, j: usize| e.get(j, i).adjoint().minus(e.get(i, j));
    let sa: OpMatrix = [[adj(0, 0)?, adj(0, 1)?], [adj(1, 0)?, adj(1, 1)?]];
    let space = e.space();
    Ok(ProjectorResiduals {
        idempotency: ResidualReport::new("projector e^2 - e", space, op_matrix_sector_norms(&idem)?),
        self_adjointness: ResidualReport::new("projector e^* - e", space, op_matrix_sector_norms(&sa)?),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HochschildSector {
    pub l: HalfInt,
    pub residual: f64,
    pub eigenvalue_plus: f64,
    pub eigenvalue_minus: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HochschildReport {
    #[serde(rename = "N")]
    pub n: HalfInt,
    pub lmax: HalfInt,
    pub sectors: Vec<HochschildSector>,
    pub max_residual: f64,
    /// Mean over sectors of `(ω₊ − ω₋)/2`; `N d1²` when the identity holds.
    pub measured_eigenvalue: f64,
    #[serde(skip)]
    pub omega: BlockBandOperator,
}

impl HochschildReport {
    pub fn passes(&self) -> bool {
        self.max_residual <= HOCHSCHILD_TOL
    }
}

/// `Ω = Σ_{ijk} (e_ij − ½δ_ij)[D, e_jk][D, e_ki]`, compared against `N d1² γ`
/// (`Nγ` at the unit normalization `d1 = 1`).
pub fn hochschild_operator(t: &QuasiSpectralTriple, e: &MatrixProjector) -> Result<HochschildReport> {
    let id = BlockBandOperator::identity(t.space);
    let mut c: Vec<Vec<BlockBandOperator>> = Vec::with_capacity(2);
    for i in 0..2 {
        c.push((0..2).map(|j| t.dirac.commutator(e.get(i, j))).collect::<Result<_>>()?);
    }
    let mut omega: Option<BlockBandOperator> = None;
    for i in 0..2 {
        for j in 0..2 {
            let lead = if i == j { e.get(i, j).minus(&id.scale_real(0.5))? } else { e.get(i, j).clone() };
            for k in 0..2 {
                let term = lead.compose(&c[j][k].compose(&c[k][i])?)?;
                omega = Some(match omega {
                    None => term,
                    Some(acc) => acc.plus(&term)?,
                });
            }
        }
    }
    let omega = omega.expect("eight terms");
    let diff = omega.minus(&t.gamma.scale_real(t.n().to_f64() * t.d1 * t.d1))?;
    let norms = diff.sector_norms()?;
    let mut sectors = Vec::with_capacity(norms.len());
    for SectorNorm { l, norm } in norms {
        let mut sums = [0.0f64; 2];
        for v in t.space.enumerate_sector(l)? {
            sums[v.sign.offset()] += omega.entry(&v, &v).re;
        }
        let mult = f64::from(l.twice() + 1);
        sectors.push(HochschildSector {
            l,
            residual: norm,
            eigenvalue_plus: sums[0] / mult,
            eigenvalue_minus: sums[1] / mult,
        });
    }
    let max_residual = sectors.iter().map(|s| s.residual).fold(0.0, f64::max);
    let measured_eigenvalue =
        sectors.iter().map(|s| 0.5 * (s.eigenvalue_plus - s.eigenvalue_minus)).sum::<f64>() / sectors.len() as f64;
    Ok(HochschildReport { n: t.n(), lmax: t.space.lmax(), sectors, max_residual, measured_eigenvalue, omega })
}

/// `Σ_{ijk} γF[F,e_ij][F,e_jk][F,e_ki]`.
pub fn fredholm_operator(t: &QuasiSpectralTriple, e: &MatrixProjector) -> Result<BlockBandOperator> {
    let f = build_f(t)?;
    let gf = t.gamma.compose(&f)?;
    let mut c: Vec<Vec<BlockBandOperator>> = Vec::with_capacity(2);
    for i in 0..2 {
        c.push((0..2).map(|j| f.commutator(e.get(i, j))).collect::<Result<_>>()?);
    }
    let mut acc: Option<BlockBandOperator> = None;
    for i in 0..2 {
        for j in 0..2 {
            let left = gf.compose(&c[i][j])?;
            for k in 0..2 {
                let term = left.compose(&c[j][k].compose(&c[k][i])?)?;
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.plus(&term)?,
                });
            }
        }
    }
    Ok(acc.expect("eight terms"))
}

pub fn fredholm_sector_trace(t: &QuasiSpectralTriple, e: &MatrixProjector, l: HalfInt) -> Result<f64> {
    Ok(fredholm_operator(t, e)?.sector_trace(l)?.re)
}

/// `4N³(2l+1)/(l²(l+1)²)`, zero at `l = 0`.
pub fn fredholm_trace_closed_form(n: HalfInt, l: HalfInt) -> f64 {
    let (n, l) = (n.to_f64(), l.to_f64());
    if l == 0.0 {
        return 0.0;
    }
    4.0 * n.powi(3) * (2.0 * l + 1.0) / (l * l * (l + 1.0) * (l + 1.0))
}

/// `4N³(1/N² − 1/(L+1)²)`; the sum of the closed-form sector traces for
/// `l = N … L`. Any `L ≥ N` is accepted.
pub fn telescoping_partial_sum(n: HalfInt, big_l: HalfInt) -> Result<f64> {
    if n < 0 || big_l < n {
        return Err(Error::Domain(format!("need 0 ≤ N ≤ L, got N = {n}, L = {big_l}")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let (n, l) = (n.to_f64(), big_l.to_f64());
    Ok(4.0 * n.powi(3) * (1.0 / (n * n) - 1.0 / ((l + 1.0) * (l + 1.0))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingMethod {
    Fredholm,
    LocalIndex,
    ClosedForm,
}

impl fmt::Display for PairingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairingMethod::Fredholm => "fredholm",
            PairingMethod::LocalIndex => "local-index",
            PairingMethod::ClosedForm => "closed-form",
        })
    }
}

impl FromStr for PairingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fredholm" => Ok(PairingMethod::Fredholm),
            "local-index" | "local" | "cm" => Ok(PairingMethod::LocalIndex),
            "closed-form" | "closed" => Ok(PairingMethod::ClosedForm),
            other => Err(Error::Domain(format!("unknown pairing method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    #[serde(rename = "N")]
    pub n: HalfInt,
    pub method: PairingMethod,
    pub lmax: HalfInt,
    pub contributions: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub estimate: f64,
    pub target: f64,
    pub abs_error: f64,
    /// Sector label of each contribution.
    pub sectors: Vec<HalfInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi0: Option<f64>,
    /// `¼ Σ Tr(γF[F,e][F,e][F,e])`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hochschild_eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta_residue: Option<f64>,
}

impl PairingReport {
    fn from_contributions(
        n: HalfInt,
        method: PairingMethod,
        lmax: HalfInt,
        sectors: Vec<HalfInt>,
        contributions: Vec<f64>,
    ) -> Self {
        let partial_sums: Vec<f64> = contributions
            .iter()
            .scan(0.0, |acc, c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        let estimate = partial_sums.last().copied().unwrap_or(0.0);
        let target = 2.0 * n.to_f64();
        PairingReport {
            n,
            method,
            lmax,
            contributions,
            partial_sums,
            estimate,
            target,
            abs_error: (estimate - target).abs(),
            sectors,
            phi0: None,
            phi2: None,
            hochschild_eigenvalue: None,
            residue_slope: None,
            zeta_residue: None,
        }
    }

    fn set_estimate(&mut self, estimate: f64) {
        self.estimate = estimate;
        self.abs_error = (estimate - self.target).abs();
    }
}

/// Pairing estimate `½ Σ_{l ≤ lmax_sum} Tr_l(γF[F,e][F,e][F,e])`.
pub fn fredholm_pairing(t: &QuasiSpectralTriple, e: &MatrixProjector, lmax_sum: HalfInt) -> Result<PairingReport> {
    let op = fredholm_operator(t, e)?;
    if lmax_sum > op.valid_lmax() {
        return Err(Error::Validity(format!(
            "summation cutoff {lmax_sum} beyond the valid range {} of the Fredholm character",
            op.valid_lmax()
        )));
    }
    let sectors: Vec<HalfInt> = t.space.sectors().filter(|&l| l <= lmax_sum).collect();
    let traces: Vec<f64> = sectors.iter().map(|&l| op.sector_trace(l).map(|c| c.re)).collect::<Result<_>>()?;
    let contributions = traces.iter().map(|tr| 0.5 * tr).collect();
    let lmax = sectors.last().copied().unwrap_or(t.n());
    let mut report = PairingReport::from_contributions(t.n(), PairingMethod::Fredholm, lmax, sectors, contributions);
    report.phi2 = Some(0.25 * traces.iter().sum::<f64>());
    Ok(report)
}

/// Closed-form sector contributions `2N³(2l+1)/(l²(l+1)²)` for admissible
/// `l ≤ cutoff`; partial sums use the telescoped form.
pub fn closed_form_pairing(n: HalfInt, cutoff: HalfInt) -> Result<PairingReport> {
    let space = TruncatedSpace::with_cutoff(n, cutoff)?;
    let sectors: Vec<HalfInt> = space.sectors().collect();
    let contributions = sectors.iter().map(|&l| 0.5 * fredholm_trace_closed_form(n, l)).collect();
    let mut report =
        PairingReport::from_contributions(n, PairingMethod::ClosedForm, space.lmax(), sectors.clone(), contributions);
    report.partial_sums = sectors
        .iter()
        .map(|&l| telescoping_partial_sum(n, l).map(|s| 0.5 * s))
        .collect::<Result<_>>()?;
    let est = report.partial_sums.last().copied().unwrap_or(0.0);
    report.set_estimate(est);
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct DixmierEstimate {
    #[serde(rename = "N")]
    pub n: HalfInt,
    pub d1: f64,
    pub window: (HalfInt, HalfInt),
    pub points: usize,
    pub slope: f64,
    pub intercept: f64,
    /// `Res_{z=0} Tr|D|^{−2−2z}` from the Hurwitz-zeta form of the trace.
    pub zeta_residue: f64,
}

/// `Tr_l |D|⁻² = 2(2l+1)/d(l)²`.
fn sector_inverse_square(t: &QuasiSpectralTriple, l: HalfInt) -> Result<f64> {
    let d = t.d(l);
    if d == 0.0 {
        return Err(Error::Domain(format!("D has a zero mode in sector l = {l}")));
    }
    Ok(2.0 * f64::from(l.twice() + 1) / (d * d))
}

/// Regresses `S(L) = Σ_{l ≤ L} Tr_l |D|⁻²` against `ln dim(L)` for admissible
/// `L` in the window. Uses the analytic sector traces, so the window may
/// extend past the truncation of `t`.
pub fn dixmier_estimate(t: &QuasiSpectralTriple, window: (HalfInt, HalfInt)) -> Result<DixmierEstimate> {
    let (lo, hi) = window;
    let n = t.n();
    let mut acc = 0.0;
    let mut points = Vec::new();
    let mut l = n;
    while l <= hi {
        acc += sector_inverse_square(t, l)?;
        if l >= lo {
            let lf = l.to_f64() + 1.0;
            let dim = 2.0 * (lf * lf - n.to_f64().powi(2));
            points.push((dim.ln(), acc));
        }
        l = l + 1;
    }
    if points.len() < 3 {
        return Err(Error::Regression(format!("window [{lo}, {hi}] holds {} sectors; need at least 3", points.len())));
    }
    let (slope, intercept) = linear_fit(&points)?;
    Ok(DixmierEstimate {
        n,
        d1: t.d1,
        window,
        points: points.len(),
        slope,
        intercept,
        zeta_residue: zeta_residue_estimate(n, t.d1, t.d_offset)?,
    })
}

const BERNOULLI_2J: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];

/// Hurwitz zeta `Σ_{k≥0} (a+k)^{−s}` for real `s > 1`, `a > 0`, by
/// Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    const M: usize = 24;
    let mut sum: f64 = (0..M).map(|k| (a + k as f64).powf(-s)).sum();
    let x = a + M as f64;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    let mut rising = s; // s(s+1)…(s+2j−2)
    let mut fact = 2.0; // (2j)!
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let j = j + 1;
        sum += b / fact * rising * x.powf(-s - (2 * j - 1) as f64);
        let k = 2 * j as u32;
        rising *= (s + f64::from(k) - 1.0) * (s + f64::from(k));
        fact *= f64::from((k + 1) * (k + 2));
    }
    sum
}

/// `lim_{z→0} z·Tr|D|^{−2−2z}` by Richardson extrapolation of
/// `Tr|D|^{−2−2z} = |d1|^{−2−2z}(4ζ(1+2z, N+c) + 2(1−2c)ζ(2+2z, N+c))`.
pub fn zeta_residue_estimate(n: HalfInt, d1: f64, d_offset: f64) -> Result<f64> {
    let a = n.to_f64() + d_offset;
    if a <= 0.0 || d1 == 0.0 {
        return Err(Error::Domain("zeta residue needs d(l) > 0 on every sector".into()));
    }
    let f = |z: f64| {
        z * d1.abs().powf(-2.0 - 2.0 * z)
            * (4.0 * hurwitz_zeta(1.0 + 2.0 * z, a) + 2.0 * (1.0 - 2.0 * d_offset) * hurwitz_zeta(2.0 + 2.0 * z, a))
    };
    let h = 0.01;
    let g1 = 2.0 * f(h / 2.0) - f(h);
    let g2 = 2.0 * f(h / 4.0) - f(h / 2.0);
    Ok((4.0 * g2 - g1) / 3.0)
}

/// Dixmier window of the local index formula.
pub const CM_WINDOW: (HalfInt, HalfInt) = (HalfInt::from_int(200), HalfInt::from_int(2000));

/// Local index pairing `φ₀(e) − 2φ₂(e − ½, e, e)`.
///
/// `φ₀(e) = Tr γ` vanishes exactly. The `φ₂` part reduces to the
/// Hochschild eigenvalue times the residue of `Tr|D|^{−2−2z}`, estimated by
/// the Dixmier slope. Contributions are the sector traces
/// `Tr_l(γΩ|D|⁻²)`, whose logarithmic growth that slope measures.
pub fn cm_pairing(t: &QuasiSpectralTriple, e: &MatrixProjector) -> Result<PairingReport> {
    let hoch = hochschild_operator(t, e)?;
    if !hoch.passes() {
        return Err(Error::Structural(format!(
            "Hochschild identity fails: residual {:.3e} > {HOCHSCHILD_TOL:e}",
            hoch.max_residual
        )));
    }
    let phi0: f64 = t.space.sectors().map(|l| t.gamma.sector_trace(l).map(|c| c.re)).sum::<Result<f64>>()?;
    let dix = dixmier_estimate(t, CM_WINDOW)?;

    let sectors: Vec<HalfInt> = hoch.sectors.iter().map(|s| s.l).collect();
    // Tr_l(γΩ) = (2l+1)(ω₊ − ω₋)
    let contributions = hoch
        .sectors
        .iter()
        .map(|s| f64::from(s.l.twice() + 1) * (s.eigenvalue_plus - s.eigenvalue_minus) / t.d(s.l).powi(2))
        .collect();
    let lmax = sectors.last().copied().unwrap_or(t.n());
    let mut report = PairingReport::from_contributions(t.n(), PairingMethod::LocalIndex, lmax, sectors, contributions);
    report.set_estimate(phi0 + hoch.measured_eigenvalue * dix.slope);
    report.phi0 = Some(phi0);
    report.hochschild_eigenvalue = Some(hoch.measured_eigenvalue);
    report.residue_slope = Some(dix.slope);
    report.zeta_residue = Some(dix.zeta_residue);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triple::build_triple;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn triple(n2: i32, lmax2: i32) -> QuasiSpectralTriple {
        build_triple(h(n2), h(lmax2), 1.0, 0.5).unwrap()
    }

    #[test]
    fn projector_is_a_projection() {
        let t = triple(2, 40);
        let e = build_projector(&t).unwrap();
        let r = projector_residuals(&e).unwrap();
        assert!(r.idempotency.per_sector.iter().filter(|s| s.l <= h(32)).all(|s| s.norm <= 1e-10));
        assert!(r.idempotency.max <= 1e-10);
        assert!(r.self_adjointness.max <= 1e-10);
        let trace = e.get(0, 0).plus(e.get(1, 1)).unwrap();
        let id = BlockBandOperator::identity(t.space);
        assert!(trace.max_abs_diff_valid(&id).unwrap() < 1e-15);
    }

    #[test]
    fn doubled_b_breaks_idempotency() {
        let t = triple(2, 24);
        let b2 = t.gens.pi_b.scale_real(2.0);
        let e = MatrixProjector::from_generators(&t.gens.pi_a, &b2, &t.gens.pi_bstar).unwrap();
        assert!(projector_residuals(&e).unwrap().idempotency.max > 0.1);
    }

    #[test]
    fn hochschild_examples() {
        for n2 in [0, 1, 4] {
            let t = triple(n2, n2 + 20);
            let e = build_projector(&t).unwrap();
            let r = hochschild_operator(&t, &e).unwrap();
            assert!(r.max_residual <= HOCHSCHILD_TOL, "N={}: {}", t.n(), r.max_residual);
            assert!((r.measured_eigenvalue - t.n().to_f64()).abs() < 1e-10);
            if n2 == 4 {
                for v in t.space.enumerate_sector(h(10)).unwrap() {
                    let d = r.omega.entry(&v, &v).re;
                    assert!((d - 2.0 * v.sign.as_f64()).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn hochschild_scales_with_d1() {
        let t = build_triple(h(2), h(20), 2.0, 0.5).unwrap();
        let e = build_projector(&t).unwrap();
        let r = hochschild_operator(&t, &e).unwrap();
        assert!(r.passes());
        assert!((r.measured_eigenvalue - 4.0).abs() < 1e-10);
        let p = cm_pairing(&t, &e).unwrap();
        assert!(p.abs_error <= 0.05, "{}", p.estimate);
    }

    #[test]
    fn fredholm_sector_traces_match_closed_form() {
        let t = triple(2, 36);
        let e = build_projector(&t).unwrap();
        let op = fredholm_operator(&t, &e).unwrap();
        assert!((op.sector_trace(h(2)).unwrap().re - 3.0).abs() < 1e-9);
        assert!((op.sector_trace(h(4)).unwrap().re - 5.0 / 9.0).abs() < 1e-9);
        for l in op.valid_sectors() {
            let want = fredholm_trace_closed_form(t.n(), l);
            assert!((op.sector_trace(l).unwrap().re - want).abs() < 1e-9);
        }
        let zero = triple(0, 20);
        let e0 = build_projector(&zero).unwrap();
        let op0 = fredholm_operator(&zero, &e0).unwrap();
        assert!(op0.valid_sectors().all(|l| op0.sector_trace(l).unwrap().norm() < 1e-12));
    }

    #[test]
    fn telescoping_examples() {
        assert!((telescoping_partial_sum(h(2), h(2)).unwrap() - 3.0).abs() < 1e-15);
        assert!((telescoping_partial_sum(h(2), h(4)).unwrap() - 32.0 / 9.0).abs() < 1e-14);
        assert!((telescoping_partial_sum(h(2), h(2_000_000)).unwrap() - 4.0).abs() < 1e-11);
        assert_eq!(telescoping_partial_sum(h(0), h(10)).unwrap(), 0.0);
        assert!(telescoping_partial_sum(h(4), h(2)).is_err());
        // the formula accepts non-admissible L
        let v = telescoping_partial_sum(h(1), h(40)).unwrap() / 2.0;
        assert!((v - (1.0 - 0.25 / 441.0)).abs() < 1e-12);
    }

    #[test]
    fn fredholm_pairing_examples() {
        let t = triple(2, 60);
        let e = build_projector(&t).unwrap();
        let r = fredholm_pairing(&t, &e, h(40)).unwrap();
        assert!((r.estimate - (2.0 - 2.0 / 441.0)).abs() < 1e-9);
        for (l, s) in r.sectors.iter().zip(&r.partial_sums) {
            assert!((s - telescoping_partial_sum(t.n(), *l).unwrap() / 2.0).abs() < 1e-9);
        }
        assert!(r.partial_sums.windows(2).all(|w| w[1] > w[0]));
        assert!((r.phi2.unwrap() - r.estimate / 2.0).abs() < 1e-12);
        assert!(fredholm_pairing(&t, &e, h(46)).is_err());

        let z = triple(0, 24);
        let e = build_projector(&z).unwrap();
        let r = fredholm_pairing(&z, &e, h(8)).unwrap();
        assert!(r.partial_sums.iter().all(|s| s.abs() < 1e-12));
    }

    #[test]
    fn closed_form_examples() {
        let r = closed_form_pairing(h(2), h(2000)).unwrap();
        assert!((r.estimate - (2.0 - 2.0 / 1001.0f64.powi(2))).abs() < 1e-12);
        assert_eq!(r.contributions.len(), 1000);
        let summed: f64 = r.contributions.iter().sum();
        assert!((summed - r.estimate).abs() < 1e-12);
        let half = closed_form_pairing(h(1), h(40)).unwrap();
        assert_eq!(half.lmax, h(39));
        assert!((half.estimate - (1.0 - 0.25 / 420.25)).abs() < 1e-12);
        let zero = closed_form_pairing(h(0), h(20)).unwrap();
        assert_eq!(zero.estimate, 0.0);
    }

    #[test]
    fn dixmier_slope() {
        let t = triple(2, 12);
        let d = dixmier_estimate(&t, CM_WINDOW).unwrap();
        assert!((d.slope - 2.0).abs() < 0.02, "{}", d.slope);
        assert!((d.zeta_residue - 2.0).abs() < 1e-6, "{}", d.zeta_residue);
        let t2 = build_triple(h(2), h(12), 2.0, 0.5).unwrap();
        let d2 = dixmier_estimate(&t2, CM_WINDOW).unwrap();
        assert!((d2.slope - d.slope / 4.0).abs() < 1e-12);
        assert!((d2.zeta_residue - 0.5).abs() < 1e-6);
        assert!(matches!(dixmier_estimate(&t, (h(400), h(402))), Err(Error::Regression(_))));
    }

    #[test]
    fn hurwitz_reference_values() {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((hurwitz_zeta(2.0, 1.0) - pi2_6).abs() < 1e-13);
        // ζ(2, ½) = 3ζ(2)
        assert!((hurwitz_zeta(2.0, 0.5) - 3.0 * pi2_6).abs() < 1e-12);
        assert!((hurwitz_zeta(4.0, 1.0) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-13);
    }

    #[test]
    fn cm_pairing_examples() {
        for n2 in [1, 2, 3, 4] {
            let t = triple(n2, n2 + 20);
            let e = build_projector(&t).unwrap();
            let r = cm_pairing(&t, &e).unwrap();
            assert_eq!(r.phi0, Some(0.0));
            assert!(r.abs_error <= 0.05, "N={}: {}", t.n(), r.estimate);
        }
    }
}

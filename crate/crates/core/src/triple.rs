//! Grading, real structure and the quasi-Dirac operator on `H_N ⊕ H_{−N}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::band::{AntilinearMap, BlockBandOperator, JConjugation, OperatorBuilder, SectorNorm, C64};
use crate::basis::{BasisVector, Sign, TruncatedSpace};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::rep::{build_generators, Generator, GeneratorSet, ResidualReport, STRUCTURAL_TOL};

pub const DEFAULT_D_OFFSET: f64 = 0.5;

#[derive(Clone, Debug)]
pub struct QuasiSpectralTriple {
    pub space: TruncatedSpace,
    pub gens: GeneratorSet,
    pub gamma: BlockBandOperator,
    pub j: AntilinearMap,
    pub dirac: BlockBandOperator,
    pub d1: f64,
    pub d_offset: f64,
}

impl QuasiSpectralTriple {
    /// `d(l) = d1·(l + d_offset)`.
    #[inline]
    pub fn d(&self, l: HalfInt) -> f64 {
        self.d1 * (l.to_f64() + self.d_offset)
    }

    pub fn n(&self) -> HalfInt {
        self.space.n()
    }
}

pub fn build_triple(n: HalfInt, lmax: HalfInt, d1: f64, d_offset: f64) -> Result<QuasiSpectralTriple> {
    triple_on(TruncatedSpace::new(n, lmax)?, d1, d_offset)
}

pub fn triple_on(space: TruncatedSpace, d1: f64, d_offset: f64) -> Result<QuasiSpectralTriple> {
    if d1 == 0.0 || !d1.is_finite() {
        return Err(Error::Domain(format!("d1 must be finite and non-zero, got {d1}")));
    }
    if !d_offset.is_finite() {
        return Err(Error::Domain("d_offset must be finite".into()));
    }
    Ok(QuasiSpectralTriple {
        space,
        gens: build_generators(space),
        gamma: grading(space),
        j: real_structure(space),
        dirac: dirac_operator(space, d1, d_offset),
        d1,
        d_offset,
    })
}

pub fn grading(space: TruncatedSpace) -> BlockBandOperator {
    BlockBandOperator::sign_diagonal(space, 1.0, -1.0)
}

/// `J|l,m,±⟩ = i^{2m}|l,−m,∓⟩`.
pub fn real_structure(space: TruncatedSpace) -> AntilinearMap {
    let mut perm = Vec::with_capacity(space.dim());
    let mut phases = Vec::with_capacity(space.dim());
    for v in space.basis() {
        let target = BasisVector::new(v.l, -v.m, v.sign.flip());
        perm.push(space.index_unchecked(&target));
        phases.push(i_pow(v.m.twice()));
    }
    AntilinearMap::new(space, perm, phases).expect("J is a sector-preserving signed permutation")
}

fn i_pow(k: i32) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `D|l,m,±⟩ = d(l)|l,m,∓⟩`.
pub fn dirac_operator(space: TruncatedSpace, d1: f64, d_offset: f64) -> BlockBandOperator {
    swap_operator(space, |l| d1 * (l.to_f64() + d_offset))
}

fn swap_operator(space: TruncatedSpace, coeff: impl Fn(HalfInt) -> f64) -> BlockBandOperator {
    let mut b = OperatorBuilder::new(space, 0, space.lmax());
    for v in space.basis() {
        b.add_real(BasisVector::new(v.l, v.m, v.sign.flip()), v, coeff(v.l));
    }
    b.build()
}

/// `F = sign(D)`.
pub fn build_f(t: &QuasiSpectralTriple) -> Result<BlockBandOperator> {
    if let Some(l) = t.space.sectors().find(|&l| t.d(l) == 0.0) {
        return Err(Error::Domain(format!("D has a zero mode in sector l = {l}")));
    }
    Ok(swap_operator(t.space, |l| t.d(l).signum()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignTable {
    #[serde(rename = "J_squared")]
    pub j_squared: i8,
    #[serde(rename = "JD_commute")]
    pub jd_commute: bool,
    #[serde(rename = "Jgamma_anticommute")]
    pub jgamma_anticommute: bool,
    pub ko_dimension: u8,
}

/// KO-dimension from `(ε, ε', ε'')` with `J² = ε`, `JD = ε'DJ`, `Jγ = ε''γJ`.
pub fn ko_dimension(eps: i8, eps_d: i8, eps_gamma: i8) -> Option<u8> {
    match (eps, eps_d, eps_gamma) {
        (1, 1, 1) => Some(0),
        (-1, 1, -1) => Some(2),
        (-1, 1, 1) => Some(4),
        (1, 1, -1) => Some(6),
        _ => None,
    }
}

/// The sign `s` with `J A = s A J`, checked on every basis vector of the
/// valid sectors. `None` when `A` vanishes there.
pub fn j_relation(j: &AntilinearMap, a: &BlockBandOperator) -> Result<Option<f64>> {
    let space = *a.space();
    let mut sign: Option<f64> = None;
    let scale = a.entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max).max(1.0);
    for col in space.basis().filter(|v| a.is_valid_sector(v.l)) {
        let k = space.index_unchecked(&col);
        let mut lhs: BTreeMap<usize, C64> = BTreeMap::new();
        let image: Vec<(usize, C64)> =
            a.column(&col).into_iter().map(|(r, v)| (space.index_unchecked(&r), v)).collect();
        for (i, v) in j.apply_sparse(&image) {
            *lhs.entry(i).or_default() += v;
        }
        let (p, phase) = j.apply_basis(k);
        let mut rhs: BTreeMap<usize, C64> = BTreeMap::new();
        for (r, v) in a.column(&space.basis_vector(p)?) {
            *rhs.entry(space.index_unchecked(&r)).or_default() += phase * v;
        }
        let keys: std::collections::BTreeSet<usize> = lhs.keys().chain(rhs.keys()).copied().collect();
        for i in keys {
            let x = lhs.get(&i).copied().unwrap_or_default();
            let y = rhs.get(&i).copied().unwrap_or_default();
            if x.norm() <= 1e-14 * scale && y.norm() <= 1e-14 * scale {
                continue;
            }
            let s = match sign {
                Some(s) => s,
                None => {
                    let s = if (x - y).norm() <= (x + y).norm() { 1.0 } else { -1.0 };
                    sign = Some(s);
                    s
                }
            };
            if (x - y * s).norm() > 1e-14 * scale {
                return Err(Error::Structural(format!("J neither commutes nor anticommutes at {col}")));
            }
        }
    }
    Ok(sign)
}

pub fn sign_table(t: &QuasiSpectralTriple) -> Result<SignTable> {
    let eps = t.j.square_sign()? as i8;
    let rel_d = j_relation(&t.j, &t.dirac)?.ok_or_else(|| Error::Structural("D vanishes".into()))? as i8;
    let rel_g = j_relation(&t.j, &t.gamma)?.ok_or_else(|| Error::Structural("γ vanishes".into()))? as i8;
    let ko = ko_dimension(eps, rel_d, rel_g).ok_or_else(|| {
        Error::Structural(format!("signs ({eps}, {rel_d}, {rel_g}) match no even KO-dimension"))
    })?;
    Ok(SignTable { j_squared: eps, jd_commute: rel_d == 1, jgamma_anticommute: rel_g == -1, ko_dimension: ko })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayClass {
    Exact,
    Decaying,
    NonVanishing,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Regression("need at least two points".into()));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::Regression("log-log fit needs positive data".into()));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    Ok(linear_fit(&xy)?.0)
}

/// `(slope, intercept)` of an ordinary least-squares line.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(Error::Regression("need at least two points".into()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Regression("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Exact when below `tol`; decaying when the upper half of the sectors fits
/// `C/l^p` with `p ≥ 0.95`.
pub fn classify_decay(norms: &[SectorNorm], tol: f64) -> (DecayClass, Option<f64>) {
    let max = norms.iter().map(|s| s.norm).fold(0.0, f64::max);
    if max <= tol {
        return (DecayClass::Exact, None);
    }
    let top = norms.last().map(|s| s.l.to_f64()).unwrap_or(0.0);
    let pts: Vec<(f64, f64)> = norms
        .iter()
        .filter(|s| s.l.to_f64() >= (top / 2.0).max(1.0))
        .map(|s| (s.l.to_f64(), s.norm))
        .collect();
    if pts.len() < 3 {
        return (DecayClass::NonVanishing, None);
    }
    match loglog_slope(&pts) {
        Ok(p) if p <= -0.95 => (DecayClass::Decaying, Some(p)),
        Ok(p) => (DecayClass::NonVanishing, Some(p)),
        Err(_) => (DecayClass::NonVanishing, None),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorCommutant {
    pub generator: Generator,
    pub per_sector: Vec<SectorNorm>,
    pub max: f64,
    pub classification: DecayClass,
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConventionCommutant {
    pub convention: JConjugation,
    pub generators: Vec<GeneratorCommutant>,
    pub classification: DecayClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutantReport {
    #[serde(rename = "N")]
    pub n: HalfInt,
    pub lmax: HalfInt,
    pub conventions: Vec<ConventionCommutant>,
    /// At least one convention is exact or decaying for every generator.
    pub holds: bool,
}

/// `J π(x) J⁻¹ − π(x*)` and `J π(x) J − π(x*)` for each generator.
pub fn commutant_residual(t: &QuasiSpectralTriple) -> Result<CommutantReport> {
    let mut conventions = Vec::new();
    for mode in [JConjugation::Direct, JConjugation::Inverse] {
        let mut generators = Vec::new();
        for x in Generator::ALL {
            let op = t.j.conjugate(t.gens.pi(x), mode)?.minus(t.gens.pi(x.star()))?;
            let per_sector = op.sector_norms()?;
            let max = per_sector.iter().map(|s| s.norm).fold(0.0, f64::max);
            let (classification, slope) = classify_decay(&per_sector, STRUCTURAL_TOL);
            generators.push(GeneratorCommutant { generator: x, per_sector, max, classification, slope });
        }
        let classification = generators.iter().map(|g| g.classification).max().unwrap_or(DecayClass::Exact);
        conventions.push(ConventionCommutant { convention: mode, generators, classification });
    }
    let holds = conventions.iter().any(|c| c.classification != DecayClass::NonVanishing);
    Ok(CommutantReport { n: t.n(), lmax: t.space.lmax(), conventions, holds })
}

/// `[[D, π(x)], π(y)]`.
pub fn order_one_operator(t: &QuasiSpectralTriple, x: Generator, y: Generator) -> Result<BlockBandOperator> {
    t.dirac.commutator(t.gens.pi(x))?.commutator(t.gens.pi(y))
}

pub fn order_one_residual(t: &QuasiSpectralTriple, x: Generator, y: Generator) -> Result<ResidualReport> {
    let op = order_one_operator(t, x, y)?;
    Ok(ResidualReport::new(format!("order-one [[D,{}],{}]", x.name(), y.name()), &t.space, op.sector_norms()?))
}

/// Per-sector maximum over all nine generator pairs.
pub fn order_one_max(t: &QuasiSpectralTriple) -> Result<ResidualReport> {
    let mut ops = Vec::with_capacity(9);
    for x in Generator::ALL {
        for y in Generator::ALL {
            ops.push(order_one_operator(t, x, y)?);
        }
    }
    Ok(ResidualReport::new("order-one", &t.space, crate::rep::max_sector_norms(&ops)?))
}

/// `2|d1||4N² − 1|/l`.
pub fn order_one_bound(n: HalfInt, d1: f64, l: HalfInt) -> f64 {
    let n = n.to_f64();
    2.0 * d1.abs() * (4.0 * n * n - 1.0).abs() / l.to_f64()
}

/// Closed forms `(c_BB, c_AB)` at `d_offset = ½`:
///
/// * `c_BB = ⟨l,m,∓|[[D,π(B)],π(B*)]|l,m,±⟩`
/// * `c_AB = ⟨l,m+1,∓|[π(A),[D,π(B)]]|l,m,±⟩`
///
/// Both are linear in `d1`.
pub fn order_one_oracle(n: HalfInt, d1: f64, l: HalfInt, m: HalfInt) -> (f64, f64) {
    let (n, l, m) = (n.to_f64(), l.to_f64(), m.to_f64());
    let k = 4.0 * n * n - 1.0;
    if k == 0.0 {
        return (0.0, 0.0);
    }
    let c_bb = 4.0 * d1 * k * (2.0 * l * l + 2.0 * l - 1.0 - 2.0 * m * m)
        / ((2.0 * l - 1.0) * (2.0 * l + 1.0) * (2.0 * l + 3.0));
    let c_ab = -4.0 * d1 * (l - m).sqrt() * (l + m + 1.0).sqrt() * k * (2.0 * m + 1.0)
        / ((4.0 * l * l - 1.0) * (2.0 * l + 3.0));
    (c_bb, c_ab)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessRow {
    #[serde(rename = "N")]
    pub n: HalfInt,
    pub lmax: HalfInt,
    pub max_residual: f64,
    pub exact: bool,
}

/// Maximum order-one residual for each `N`, truncated at the largest
/// admissible `l ≤ cutoff`.
pub fn exactness_scan(cutoff: HalfInt, ns: &[HalfInt], d1: f64, d_offset: f64) -> Result<Vec<ExactnessRow>> {
    ns.iter()
        .map(|&n| {
            let t = triple_on(TruncatedSpace::with_cutoff(n, cutoff)?, d1, d_offset)?;
            let r = order_one_max(&t)?;
            Ok(ExactnessRow { n, lmax: t.space.lmax(), max_residual: r.max, exact: r.max <= STRUCTURAL_TOL })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumLine {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub l: HalfInt,
    pub sign: Sign,
}

/// Eigenvalues of `D` from the 2×2 chirality blocks at fixed `(l, m)`,
/// sorted ascending.
pub fn spectrum(t: &QuasiSpectralTriple) -> Result<Vec<SpectrumLine>> {
    let mut lines = Vec::new();
    for l in t.space.sectors() {
        let mut pair: Option<(f64, f64)> = None;
        for v in t.space.enumerate_sector(l)?.into_iter().filter(|v| v.sign == Sign::Plus) {
            let w = BasisVector::new(v.l, v.m, Sign::Minus);
            let a = t.dirac.entry(&v, &v).re;
            let d = t.dirac.entry(&w, &w).re;
            let b = t.dirac.entry(&w, &v);
            let mid = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            let (lo, hi) = (mid - rad, mid + rad);
            match pair {
                None => pair = Some((lo, hi)),
                Some((p, q)) => {
                    let scale = p.abs().max(q.abs()).max(1.0);
                    if (p - lo).abs() > 1e-12 * scale || (q - hi).abs() > 1e-12 * scale {
                        return Err(Error::Structural(format!("D is not constant on the multiplet l = {l}")));
                    }
                }
            }
        }
        let (lo, hi) = pair.expect("sectors are non-empty");
        let mult = l.twice() as usize + 1;
        for e in [lo, hi] {
            let sign = if e < 0.0 { Sign::Minus } else { Sign::Plus };
            lines.push(SpectrumLine { eigenvalue: e, multiplicity: mult, l, sign });
        }
    }
    lines.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue).then(a.l.cmp(&b.l)));
    Ok(lines)
}

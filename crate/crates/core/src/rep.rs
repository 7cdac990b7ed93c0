//! The equivariant representation `π_N ⊕ π_{−N}` of the sphere algebra and
//! the `su(2)` ladder representation `ρ` on the truncated space.
//!
//! The generators follow the standard monopole-harmonic matrix elements:
//!
//! ```text
//! π(B)  |l,m⟩ =  √((l+m+1)(l+m+2)) α₊(l)   |l+1,m+1⟩
//!              + √((l+m+1)(l−m))   α₀(l)   |l,  m+1⟩
//!              − √((l−m)(l−m−1))   α₊(l−1) |l−1,m+1⟩
//! π(A)  |l,m⟩ = −√((l−m+1)(l+m+1)) α₊(l)   |l+1,m⟩
//!              + m α₀(l) |l,m⟩
//!              − √((l−m)(l+m))     α₊(l−1) |l−1,m⟩
//! π(B*) = π(B)†
//! ```
//!
//! with `α₀(l) = N/(l(l+1))` and `α₊(l) = √(1 − N²/(l+1)²)/√((2l+1)(2l+3))`.
//! The `H_{−N}` component uses the same formulas with `N ↦ −N`.
//!
//! The minus sign on the `l−1` band of `π(B)` is forced: with a plus sign
//! there, no choice of the remaining signs satisfies the radius relation,
//! commutativity and equivariance at once. [`calibrate_conventions`] scans
//! the alternatives and reports which of them pass.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::band::{BlockBandOperator, OperatorBuilder, SectorNorm};
use crate::basis::{BasisVector, Sign, TruncatedSpace};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Default threshold for identities that hold exactly in exact arithmetic.
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Generators of the sphere algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    A,
    B,
    #[serde(rename = "B*")]
    BStar,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::A, Generator::B, Generator::BStar];

    pub fn star(self) -> Generator {
        match self {
            Generator::A => Generator::A,
            Generator::B => Generator::BStar,
            Generator::BStar => Generator::B,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::A => "A",
            Generator::B => "B",
            Generator::BStar => "B*",
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Generator::A),
            "B" | "b" => Ok(Generator::B),
            "B*" | "b*" | "Bstar" | "bstar" | "Bs" => Ok(Generator::BStar),
            other => Err(Error::Domain(format!("unknown generator {other:?}"))),
        }
    }
}

/// `su(2)` generators `L³, L⁺, L⁻`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LieGenerator {
    L3,
    LPlus,
    LMinus,
}

impl LieGenerator {
    pub const ALL: [LieGenerator; 3] = [LieGenerator::L3, LieGenerator::LPlus, LieGenerator::LMinus];

    /// `ℓ ▷ a` as a linear combination of generators.
    pub fn act(self, a: Generator) -> &'static [(f64, Generator)] {
        use Generator::*;
        use LieGenerator::*;
        match (self, a) {
            (LPlus, B) => &[],
            (LMinus, B) => &[(-2.0, A)],
            (L3, B) => &[(1.0, B)],
            (LPlus, BStar) => &[(2.0, A)],
            (LMinus, BStar) => &[],
            (L3, BStar) => &[(-1.0, BStar)],
            (LPlus, A) => &[(-1.0, B)],
            (LMinus, A) => &[(1.0, BStar)],
            (L3, A) => &[],
        }
    }
}

/// Returns `(α₀(l), α₊(l))` for parameter `N`.
///
/// `α₀(0)` is taken as 0 (only reachable for `N = 0`).
pub fn alpha_coefficients(n: HalfInt, l: HalfInt) -> Result<(f64, f64)> {
    if l < n.abs() || !l.same_parity(n) {
        return Err(Error::Domain(format!("l = {l} is not a sector label for N = {n}")));
    }
    Ok((alpha0(n.to_f64(), l.to_f64()), alpha_plus(n.to_f64(), l.to_f64())))
}

#[inline]
pub(crate) fn alpha0(n: f64, l: f64) -> f64 {
    if l == 0.0 {
        0.0
    } else {
        n / (l * (l + 1.0))
    }
}

#[inline]
pub(crate) fn alpha_plus(n: f64, l: f64) -> f64 {
    let r = n / (l + 1.0);
    (1.0 - r * r).max(0.0).sqrt() / ((2.0 * l + 1.0) * (2.0 * l + 3.0)).sqrt()
}

/// How `π(B*)` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BStarRule {
    Adjoint,
    /// Built term by term; `upper_band` multiplies the `l+1` coefficient.
    Explicit { upper_band: i8 },
}

/// Sign choices for the generator matrix elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub b_lower_band: i8,
    pub bstar: BStarRule,
    pub a_upper_band: i8,
    pub a_lower_band: i8,
    /// Sign of `N` used for `α₀` on the `−` component.
    pub minus_component_n: i8,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            b_lower_band: -1,
            bstar: BStarRule::Adjoint,
            a_upper_band: -1,
            a_lower_band: -1,
            minus_component_n: -1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub space: TruncatedSpace,
    pub conventions: Conventions,
    pub pi_a: BlockBandOperator,
    pub pi_b: BlockBandOperator,
    pub pi_bstar: BlockBandOperator,
    pub rho_l3: BlockBandOperator,
    pub rho_lplus: BlockBandOperator,
    pub rho_lminus: BlockBandOperator,
}

impl GeneratorSet {
    pub fn pi(&self, g: Generator) -> &BlockBandOperator {
        match g {
            Generator::A => &self.pi_a,
            Generator::B => &self.pi_b,
            Generator::BStar => &self.pi_bstar,
        }
    }

    pub fn rho(&self, l: LieGenerator) -> &BlockBandOperator {
        match l {
            LieGenerator::L3 => &self.rho_l3,
            LieGenerator::LPlus => &self.rho_lplus,
            LieGenerator::LMinus => &self.rho_lminus,
        }
    }
}

pub fn build_generators(space: TruncatedSpace) -> GeneratorSet {
    build_generators_with(space, Conventions::default())
}

pub fn build_generators_with(space: TruncatedSpace, conv: Conventions) -> GeneratorSet {
    let n = space.n().to_f64();
    let valid = space.lmax() - 1;
    let mut a = OperatorBuilder::new(space, 1, valid);
    let mut b = OperatorBuilder::new(space, 1, valid);
    let mut bs = OperatorBuilder::new(space, 1, valid);
    let mut lp = OperatorBuilder::new(space, 0, space.lmax());
    let mut l3 = OperatorBuilder::new(space, 0, space.lmax());

    let b_dn = f64::from(conv.b_lower_band);
    let a_up = f64::from(conv.a_upper_band);
    let a_dn = f64::from(conv.a_lower_band);

    for col in space.basis() {
        let BasisVector { l: lh, m: mh, sign } = col;
        let (l, m) = (lh.to_f64(), mh.to_f64());
        let n_s = match sign {
            Sign::Plus => n,
            Sign::Minus => f64::from(conv.minus_component_n) * n,
        };
        let a0 = alpha0(n_s, l);
        let ap = alpha_plus(n, l);
        let has_lower = lh - 1 >= space.n();
        let ap_lower = if has_lower { alpha_plus(n, l - 1.0) } else { 0.0 };
        let at = |dl: i32, dm: i32| BasisVector::new(lh + dl, mh + dm, sign);

        b.add_real(at(1, 1), col, ((l + m + 1.0) * (l + m + 2.0)).sqrt() * ap);
        if mh < lh {
            b.add_real(at(0, 1), col, ((l + m + 1.0) * (l - m)).sqrt() * a0);
        }
        if has_lower && mh + 1 < lh {
            b.add_real(at(-1, 1), col, b_dn * ((l - m) * (l - m - 1.0)).sqrt() * ap_lower);
        }

        a.add_real(at(1, 0), col, a_up * ((l - m + 1.0) * (l + m + 1.0)).sqrt() * ap);
        a.add_real(at(0, 0), col, m * a0);
        if has_lower && mh.abs() < lh {
            a.add_real(at(-1, 0), col, a_dn * ((l - m) * (l + m)).sqrt() * ap_lower);
        }

        if let BStarRule::Explicit { upper_band } = conv.bstar {
            bs.add_real(at(1, -1), col, f64::from(upper_band) * ((l - m + 2.0) * (l - m + 1.0)).sqrt() * ap);
            if mh > -lh {
                bs.add_real(at(0, -1), col, ((l + m) * (l - m + 1.0)).sqrt() * a0);
            }
            if has_lower && mh - 1 > -lh {
                bs.add_real(at(-1, -1), col, ((l + m) * (l + m - 1.0)).sqrt() * ap_lower);
            }
        }

        if mh < lh {
            lp.add_real(at(0, 1), col, ((l - m) * (l + m + 1.0)).sqrt());
        }
        l3.add_real(col, col, m);
    }

    let pi_b = b.build();
    let pi_bstar = match conv.bstar {
        BStarRule::Adjoint => pi_b.adjoint(),
        BStarRule::Explicit { .. } => bs.build(),
    };
    let rho_lplus = lp.build();
    let rho_lminus = rho_lplus.adjoint();
    GeneratorSet {
        space,
        conventions: conv,
        pi_a: a.build(),
        pi_b,
        pi_bstar,
        rho_l3: l3.build(),
        rho_lplus,
        rho_lminus,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub check: String,
    #[serde(rename = "N")]
    pub n: HalfInt,
    pub lmax: HalfInt,
    pub per_sector: Vec<SectorNorm>,
    pub max: f64,
}

impl ResidualReport {
    pub fn new(check: impl Into<String>, space: &TruncatedSpace, per_sector: Vec<SectorNorm>) -> Self {
        let max = per_sector.iter().map(|s| s.norm).fold(0.0, f64::max);
        ResidualReport { check: check.into(), n: space.n(), lmax: space.lmax(), per_sector, max }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max <= tol
    }

    pub fn first_exceeding(&self, tol: f64) -> Option<HalfInt> {
        self.per_sector.iter().find(|s| s.norm > tol).map(|s| s.l)
    }
}

/// Per-sector maximum of the column norms of several operators, over the
/// sectors valid for all of them.
pub fn max_sector_norms(ops: &[BlockBandOperator]) -> Result<Vec<SectorNorm>> {
    let mut acc: Option<Vec<SectorNorm>> = None;
    for op in ops {
        let norms = op.sector_norms()?;
        acc = Some(match acc {
            None => norms,
            Some(prev) => prev
                .into_iter()
                .zip(norms)
                .map(|(a, b)| SectorNorm { l: a.l, norm: a.norm.max(b.norm) })
                .collect(),
        });
    }
    acc.ok_or_else(|| Error::Domain("no operators given".into()))
}

/// `π(A)² + π(B)π(B*) − 1`.
pub fn radius_residual(g: &GeneratorSet) -> Result<ResidualReport> {
    let id = BlockBandOperator::identity(g.space);
    let op = g.pi_a.compose(&g.pi_a)?.plus(&g.pi_b.compose(&g.pi_bstar)?)?.minus(&id)?;
    Ok(ResidualReport::new("radius", &g.space, op.sector_norms()?))
}

pub fn commutativity_residual(g: &GeneratorSet) -> Result<ResidualReport> {
    let ops = [
        g.pi_a.commutator(&g.pi_b)?,
        g.pi_a.commutator(&g.pi_bstar)?,
        g.pi_b.commutator(&g.pi_bstar)?,
    ];
    Ok(ResidualReport::new("commutativity", &g.space, max_sector_norms(&ops)?))
}

/// `ρ(ℓ)π(a) − π(ℓ ▷ a) − π(a)ρ(ℓ)` for one pair.
pub fn equivariance_operator(g: &GeneratorSet, l: LieGenerator, a: Generator) -> Result<BlockBandOperator> {
    let mut op = g.rho(l).commutator(g.pi(a))?;
    for &(c, target) in l.act(a) {
        op = op.minus(&g.pi(target).scale_real(c))?;
    }
    Ok(op)
}

pub fn equivariance_residual(g: &GeneratorSet) -> Result<ResidualReport> {
    let mut ops = Vec::with_capacity(9);
    for l in LieGenerator::ALL {
        for a in Generator::ALL {
            ops.push(equivariance_operator(g, l, a)?);
        }
    }
    Ok(ResidualReport::new("equivariance", &g.space, max_sector_norms(&ops)?))
}

/// `π(B*) − π(B)†` and `π(A) − π(A)†`.
pub fn unitarity_residual(g: &GeneratorSet) -> Result<ResidualReport> {
    let ops = [
        g.pi_bstar.minus(&g.pi_b.adjoint())?,
        g.pi_a.minus(&g.pi_a.adjoint())?,
    ];
    Ok(ResidualReport::new("unitarity", &g.space, max_sector_norms(&ops)?))
}

/// Dimension of the space of `(l, m)`-diagonal operators on one chirality
/// that commute with `π(A), π(B), π(B*)` on the sectors `l ≤ window_top`.
///
/// An irreducible representation gives 1.
pub fn commutant_dimension(g: &GeneratorSet, sign: Sign, window_top: HalfInt) -> Result<usize> {
    let top = window_top.min(g.pi_a.valid_lmax()).min(g.pi_bstar.valid_lmax());
    if top < g.space.n() {
        return Err(Error::Validity(format!("window top {window_top} leaves no valid sector")));
    }
    let vars: Vec<BasisVector> = g.space.basis().filter(|v| v.sign == sign && v.l <= top).collect();
    let index = |v: &BasisVector| vars.binary_search(v).ok();
    // [X, π]_{rc} = (x_r − x_c) π_{rc}
    let mut rows: Vec<(usize, usize, f64)> = Vec::new();
    for gen in Generator::ALL {
        for (row, col, v) in g.pi(gen).entries() {
            if row == col || row.sign != sign || col.sign != sign {
                continue;
            }
            if let (Some(r), Some(c)) = (index(&row), index(&col)) {
                rows.push((r, c, v.norm()));
            }
        }
    }
    let mut m = DMatrix::<f64>::zeros(rows.len().max(1), vars.len());
    for (i, &(r, c, w)) in rows.iter().enumerate() {
        m[(i, r)] += w;
        m[(i, c)] -= w;
    }
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > 1e-10 * smax.max(1.0)).count();
    Ok(vars.len() - rank)
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationRow {
    pub conventions: Conventions,
    pub radius: f64,
    pub commutativity: f64,
    pub equivariance: f64,
    pub unitarity: f64,
    /// Informational: `J π(x) J⁻¹ − π(x*)`, not part of the pass criterion.
    pub commutant: f64,
    pub passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    #[serde(rename = "N")]
    pub n: HalfInt,
    pub lmax: HalfInt,
    pub tol: f64,
    pub require_unitarity: bool,
    pub rows: Vec<CalibrationRow>,
    pub passing: Vec<usize>,
    pub default_conventions: Conventions,
    pub default_passes: bool,
}

fn calibration_row(space: TruncatedSpace, conv: Conventions, tol: f64, require_unitarity: bool) -> Result<CalibrationRow> {
    let g = build_generators_with(space, conv);
    let radius = radius_residual(&g)?.max;
    let commutativity = commutativity_residual(&g)?.max;
    let equivariance = equivariance_residual(&g)?.max;
    let unitarity = unitarity_residual(&g)?.max;
    let j = crate::triple::real_structure(space);
    let mut commutant = 0.0f64;
    for x in Generator::ALL {
        let op = crate::band::conjugate_by(&j, g.pi(x))?.minus(g.pi(x.star()))?;
        commutant = commutant.max(op.sector_norms()?.iter().map(|s| s.norm).fold(0.0, f64::max));
    }
    let passes = radius <= tol
        && commutativity <= tol
        && equivariance <= tol
        && (!require_unitarity || unitarity <= tol);
    Ok(CalibrationRow { conventions: conv, radius, commutativity, equivariance, unitarity, commutant, passes })
}

/// Scans the discrete sign choices for the generator matrix elements and
/// reports which satisfy the defining identities.
pub fn calibrate_conventions(space: TruncatedSpace, tol: f64, require_unitarity: bool) -> Result<CalibrationReport> {
    let signs = [1i8, -1];
    let mut rows = Vec::new();
    for b_lower_band in signs {
        for upper_band in signs {
            for a_upper_band in signs {
                for a_lower_band in signs {
                    for minus_component_n in signs {
                        let conv = Conventions {
                            b_lower_band,
                            bstar: BStarRule::Explicit { upper_band },
                            a_upper_band,
                            a_lower_band,
                            minus_component_n,
                        };
                        rows.push(calibration_row(space, conv, tol, require_unitarity)?);
                    }
                }
            }
        }
    }
    let passing: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| r.passes).map(|(i, _)| i).collect();
    if passing.is_empty() {
        return Err(Error::Calibration("no sign convention satisfies the identities".into()));
    }
    let default_conventions = Conventions::default();
    let default_passes = calibration_row(space, default_conventions, tol, true)?.passes;
    if !default_passes {
        return Err(Error::Calibration("default conventions fail the identity checks".into()));
    }
    Ok(CalibrationReport {
        n: space.n(),
        lmax: space.lmax(),
        tol,
        require_unitarity,
        rows,
        passing,
        default_conventions,
        default_passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn space(n2: i32, lmax2: i32) -> TruncatedSpace {
        TruncatedSpace::new(h(n2), h(lmax2)).unwrap()
    }

    #[test]
    fn alpha_examples() {
        let (a0, ap) = alpha_coefficients(h(1), h(1)).unwrap();
        assert!((a0 - 2.0 / 3.0).abs() < 1e-15);
        assert!((ap - 1.0 / 3.0).abs() < 1e-15);
        let (a0, ap) = alpha_coefficients(h(2), h(2)).unwrap();
        assert!((a0 - 0.5).abs() < 1e-15);
        assert!((ap - 1.0 / (2.0 * 5f64.sqrt())).abs() < 1e-15);
        for n2 in 0..8 {
            let n = f64::from(n2) / 2.0;
            let (_, ap) = alpha_coefficients(h(n2), h(n2)).unwrap();
            let want = (1.0 - n * n / ((n + 1.0) * (n + 1.0))) / ((2.0 * n + 1.0) * (2.0 * n + 3.0));
            assert!(ap > 0.0 && (ap * ap - want).abs() < 1e-15);
        }
        assert!(alpha_coefficients(h(4), h(2)).is_err());
        assert!(alpha_coefficients(h(1), h(2)).is_err());
        assert_eq!(alpha_coefficients(h(0), h(0)).unwrap().0, 0.0);
    }

    #[test]
    fn alpha_recurrence_identity() {
        for n2 in 0..6 {
            let n = f64::from(n2) / 2.0;
            let mut l = n + 1.0;
            while l <= 1000.0 {
                let lhs = (2.0 * l + 3.0) * alpha_plus(n, l).powi(2) - (2.0 * l - 1.0) * alpha_plus(n, l - 1.0).powi(2);
                let rhs = alpha0(n, l).powi(2);
                assert!((lhs - rhs).abs() < 1e-14, "N={n} l={l}: {lhs} vs {rhs}");
                l += 1.0;
            }
        }
    }

    #[test]
    fn matrix_element_examples() {
        let s = space(2, 10);
        let g = build_generators(s);
        for col in s.basis().filter(|v| v.l <= h(8)) {
            let (l, m) = (col.l.to_f64(), col.m.to_f64());
            let (a0, ap) = alpha_coefficients(s.n(), col.l).unwrap();
            let up = BasisVector::new(col.l + 1, col.m + 1, col.sign);
            let want = ((l + m + 1.0) * (l + m + 2.0)).sqrt() * ap;
            assert!((g.pi_b.entry(&up, &col).re - want).abs() < 1e-15);
            let diag = g.pi_a.entry(&col, &col).re;
            let want = col.sign.as_f64() * m * a0;
            assert!((diag - want).abs() < 1e-15);
            assert_eq!(g.rho_l3.entry(&col, &col).re, m);
        }
    }

    #[test]
    fn identities_hold_for_default_conventions() {
        for n2 in [0, 1, 2, 3, 4, 5] {
            let s = space(n2, n2 + 16);
            let g = build_generators(s);
            assert!(radius_residual(&g).unwrap().max <= STRUCTURAL_TOL, "radius N={}", s.n());
            assert!(commutativity_residual(&g).unwrap().max <= STRUCTURAL_TOL, "comm N={}", s.n());
            assert!(equivariance_residual(&g).unwrap().max <= STRUCTURAL_TOL, "equiv N={}", s.n());
            assert!(unitarity_residual(&g).unwrap().max <= STRUCTURAL_TOL, "unit N={}", s.n());
        }
    }

    #[test]
    fn l3_equivariance_is_exact() {
        let g = build_generators(space(2, 12));
        let op = equivariance_operator(&g, LieGenerator::L3, Generator::A).unwrap();
        assert_eq!(op.entries().filter(|(_, _, v)| v.norm() > 0.0).count(), 0);
    }

    #[test]
    fn harness_detects_broken_generators() {
        let s = space(1, 21);
        let mut g = build_generators(s);
        g.pi_a = BlockBandOperator::zero(s);
        assert!(radius_residual(&g).unwrap().per_sector.iter().all(|x| x.norm > 0.1));

        let mut g = build_generators(s);
        let mut b = OperatorBuilder::new(s, 1, g.pi_a.valid_lmax());
        for (row, col, v) in g.pi_a.entries() {
            let scale = if row == col { 1.1 } else { 1.0 };
            b.add(row, col, v * scale);
        }
        g.pi_a = b.build();
        assert!(commutativity_residual(&g).unwrap().max > 1e-3);
    }

    #[test]
    fn printed_b_lower_sign_breaks_identities() {
        let s = space(2, 14);
        let conv = Conventions { b_lower_band: 1, ..Conventions::default() };
        let g = build_generators_with(s, conv);
        assert!(radius_residual(&g).unwrap().max > 1e-3);
    }

    #[test]
    fn bstar_adjoint_equals_printed_explicit_form() {
        let s = space(3, 15);
        let adj = build_generators(s);
        let explicit = build_generators_with(
            s,
            Conventions { bstar: BStarRule::Explicit { upper_band: -1 }, ..Conventions::default() },
        );
        assert!(adj.pi_bstar.max_abs_diff_valid(&explicit.pi_bstar).unwrap() < 1e-15);
    }

    #[test]
    fn irreducibility_witness() {
        for n2 in [0, 1, 2, 3] {
            let s = space(n2, n2 + 20);
            let g = build_generators(s);
            for sign in Sign::BOTH {
                assert_eq!(commutant_dimension(&g, sign, h(20)).unwrap(), 1, "N={} {sign}", s.n());
            }
        }
    }

    #[test]
    fn calibration_contains_default() {
        let s = space(1, 13);
        let report = calibrate_conventions(s, STRUCTURAL_TOL, true).unwrap();
        assert!(report.default_passes);
        assert_eq!(report.rows.len(), 32);
        let printed_default = Conventions {
            bstar: BStarRule::Explicit { upper_band: -1 },
            ..Conventions::default()
        };
        let row = report.rows.iter().find(|r| r.conventions == printed_default).unwrap();
        assert!(row.passes);
        assert!(row.commutant <= STRUCTURAL_TOL);

        let flip_a_up = Conventions { a_upper_band: 1, ..printed_default };
        let row = report.rows.iter().find(|r| r.conventions == flip_a_up).unwrap();
        assert!(!row.passes && row.radius > 1e-3);

        let plus_bstar = Conventions { bstar: BStarRule::Explicit { upper_band: 1 }, ..printed_default };
        let row = report.rows.iter().find(|r| r.conventions == plus_bstar).unwrap();
        assert!(!row.passes && row.unitarity > 1e-3);

        // N ↦ +N on the − component passes the algebra checks but not the commutant
        let same_n = Conventions { minus_component_n: 1, ..printed_default };
        let row = report.rows.iter().find(|r| r.conventions == same_n).unwrap();
        assert!(row.passes && row.commutant > 1e-3);
    }
}

//! Block-banded operators on a [`TruncatedSpace`].
//!
//! An operator is a collection of blocks `V_l → V_{l+Δl}` with `|Δl| ≤ band`,
//! one per chirality pair. Every operator built from the generators shifts
//! the magnetic number by a fixed amount per term, so a block is stored as
//! stripes: for each `Δm` a vector indexed by the column's `m + l`, holding
//! `⟨l+Δl, m+Δm, s_out| A |l, m, s_in⟩`. Dense blocks are available through
//! [`BlockBandOperator::dense_block`].
//!
//! Truncation is tracked by `valid_lmax`: columns in sectors `l ≤ valid_lmax`
//! coincide with the untruncated operator. Products use the conservative rule
//! `valid(AB) = min(valid(A), valid(B)) − band(A) − band(B)`.

use std::collections::BTreeMap;
use std::ops::Bound;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{BasisVector, Sign, TruncatedSpace};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Identifies one stripe of one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockKey {
    pub l_in: HalfInt,
    pub s_in: Sign,
    pub dl: i32,
    pub s_out: Sign,
    pub dm: i32,
}

impl BlockKey {
    fn lower(l_in: HalfInt, s_in: Sign) -> Self {
        BlockKey { l_in, s_in, dl: i32::MIN, s_out: Sign::Plus, dm: i32::MIN }
    }

    fn upper(l_in: HalfInt, s_in: Sign) -> Self {
        BlockKey { l_in, s_in, dl: i32::MAX, s_out: Sign::Minus, dm: i32::MAX }
    }

    #[inline]
    pub fn l_out(&self) -> HalfInt {
        self.l_in + self.dl
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SectorNorm {
    pub l: HalfInt,
    pub norm: f64,
}

#[derive(Clone, Debug)]
pub struct BlockBandOperator {
    space: TruncatedSpace,
    band: u32,
    valid_lmax: HalfInt,
    blocks: BTreeMap<BlockKey, Vec<C64>>,
}

/// Incremental construction from individual matrix elements.
#[derive(Debug)]
pub struct OperatorBuilder {
    space: TruncatedSpace,
    band: u32,
    valid_lmax: HalfInt,
    blocks: BTreeMap<BlockKey, Vec<C64>>,
}

impl OperatorBuilder {
    pub fn new(space: TruncatedSpace, band: u32, valid_lmax: HalfInt) -> Self {
        OperatorBuilder { space, band, valid_lmax, blocks: BTreeMap::new() }
    }

    /// Adds `value` to `⟨row|A|col⟩`. Rows falling outside the truncated
    /// space are dropped; that loss is what `valid_lmax` accounts for.
    pub fn add(&mut self, row: BasisVector, col: BasisVector, value: C64) {
        debug_assert!(self.space.check(&col).is_ok(), "column {col} outside space");
        if self.space.check(&row).is_err() {
            return;
        }
        let dl = row.l.int_diff(col.l).expect("l labels share parity");
        let dm = row.m.int_diff(col.m).expect("m labels share parity");
        debug_assert!(dl.unsigned_abs() <= self.band, "entry {row} <- {col} exceeds band");
        let key = BlockKey { l_in: col.l, s_in: col.sign, dl, s_out: row.sign, dm };
        let len = col.l.twice() as usize + 1;
        let stripe = self.blocks.entry(key).or_insert_with(|| vec![ZERO; len]);
        stripe[col.m_slot()] += value;
    }

    pub fn add_real(&mut self, row: BasisVector, col: BasisVector, value: f64) {
        self.add(row, col, C64::new(value, 0.0));
    }

    pub fn build(self) -> BlockBandOperator {
        BlockBandOperator {
            space: self.space,
            band: self.band,
            valid_lmax: self.valid_lmax,
            blocks: self.blocks,
        }
    }
}

impl BlockBandOperator {
    pub fn zero(space: TruncatedSpace) -> Self {
        OperatorBuilder::new(space, 0, space.lmax()).build()
    }

    pub fn identity(space: TruncatedSpace) -> Self {
        Self::sign_diagonal(space, 1.0, 1.0)
    }

    /// `diag(plus)` on `H_N`, `diag(minus)` on `H_{-N}`.
    pub fn sign_diagonal(space: TruncatedSpace, plus: f64, minus: f64) -> Self {
        let mut b = OperatorBuilder::new(space, 0, space.lmax());
        for v in space.basis() {
            let c = if v.sign == Sign::Plus { plus } else { minus };
            b.add_real(v, v, c);
        }
        b.build()
    }

    #[inline]
    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    #[inline]
    pub fn band(&self) -> u32 {
        self.band
    }

    #[inline]
    pub fn valid_lmax(&self) -> HalfInt {
        self.valid_lmax
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&BlockKey, &[C64])> {
        self.blocks.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// Overrides the tracked validity. Only ever lowers it.
    pub fn with_valid_lmax(mut self, valid_lmax: HalfInt) -> Self {
        self.valid_lmax = self.valid_lmax.min(valid_lmax);
        self
    }

    pub fn is_valid_sector(&self, l: HalfInt) -> bool {
        self.space.contains_sector(l) && l <= self.valid_lmax
    }

    pub fn valid_sectors(&self) -> impl Iterator<Item = HalfInt> + '_ {
        self.space.sectors().filter(move |&l| l <= self.valid_lmax)
    }

    fn ensure_valid(&self, l: HalfInt) -> Result<()> {
        if !self.space.contains_sector(l) {
            return Err(Error::Domain(format!("sector {l} not in space")));
        }
        if l > self.valid_lmax {
            return Err(Error::Validity(format!(
                "sector {l} beyond valid_lmax {}",
                self.valid_lmax
            )));
        }
        Ok(())
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// Every nonzero matrix element as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (BasisVector, BasisVector, C64)> + '_ {
        self.blocks.iter().flat_map(|(key, stripe)| {
            let key = *key;
            stripe.iter().enumerate().filter(|(_, v)| **v != ZERO).map(move |(k, &v)| {
                let m = HalfInt::from_twice(2 * k as i32 - key.l_in.twice());
                let col = BasisVector::new(key.l_in, m, key.s_in);
                let row = BasisVector::new(key.l_out(), m + key.dm, key.s_out);
                (row, col, v)
            })
        })
    }

    pub fn entry(&self, row: &BasisVector, col: &BasisVector) -> C64 {
        let (Some(dl), Some(dm)) = (row.l.int_diff(col.l), row.m.int_diff(col.m)) else {
            return ZERO;
        };
        let key = BlockKey { l_in: col.l, s_in: col.sign, dl, s_out: row.sign, dm };
        self.blocks
            .get(&key)
            .and_then(|s| s.get(col.m_slot()))
            .copied()
            .unwrap_or(ZERO)
    }

    /// `A |col⟩` as a sparse list.
    pub fn column(&self, col: &BasisVector) -> Vec<(BasisVector, C64)> {
        let slot = col.m_slot();
        self.blocks
            .range(BlockKey::lower(col.l, col.sign)..=BlockKey::upper(col.l, col.sign))
            .filter_map(|(key, stripe)| {
                let v = stripe[slot];
                (v != ZERO).then(|| (BasisVector::new(key.l_out(), col.m + key.dm, key.s_out), v))
            })
            .collect()
    }

    /// Applies the truncated matrix to a full coordinate vector.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.space.dim() {
            return Err(Error::Domain(format!(
                "vector length {} != dim {}",
                v.len(),
                self.space.dim()
            )));
        }
        let mut out = vec![ZERO; v.len()];
        for (row, col, a) in self.entries() {
            out[self.space.index_unchecked(&row)] += a * v[self.space.index_unchecked(&col)];
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.same_space(other)?;
        let mut blocks = self.blocks.clone();
        for (key, stripe) in &other.blocks {
            let dst = blocks.entry(*key).or_insert_with(|| vec![ZERO; stripe.len()]);
            for (d, s) in dst.iter_mut().zip(stripe) {
                *d = f(*d, *s);
            }
        }
        // keys only present in self still need f(a, 0)
        for (key, dst) in blocks.iter_mut() {
            if !other.blocks.contains_key(key) {
                for d in dst.iter_mut() {
                    *d = f(*d, ZERO);
                }
            }
        }
        Ok(BlockBandOperator {
            space: self.space,
            band: self.band.max(other.band),
            valid_lmax: self.valid_lmax.min(other.valid_lmax),
            blocks,
        })
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for stripe in out.blocks.values_mut() {
            for v in stripe.iter_mut() {
                *v *= c;
            }
        }
        out
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.same_space(rhs)?;
        let mut blocks: BTreeMap<BlockKey, Vec<C64>> = BTreeMap::new();
        for (kb, vb) in &rhs.blocks {
            let l_mid = kb.l_out();
            let range = (
                Bound::Included(BlockKey::lower(l_mid, kb.s_out)),
                Bound::Included(BlockKey::upper(l_mid, kb.s_out)),
            );
            for (ka, va) in self.blocks.range(range) {
                let key = BlockKey {
                    l_in: kb.l_in,
                    s_in: kb.s_in,
                    dl: kb.dl + ka.dl,
                    s_out: ka.s_out,
                    dm: kb.dm + ka.dm,
                };
                let dst = blocks.entry(key).or_insert_with(|| vec![ZERO; vb.len()]);
                let shift = kb.dm + kb.dl;
                for (k, &b) in vb.iter().enumerate() {
                    if b == ZERO {
                        continue;
                    }
                    let mid = k as i32 + shift;
                    if mid >= 0 && (mid as usize) < va.len() {
                        dst[k] += va[mid as usize] * b;
                    }
                }
            }
        }
        let band = self.band + rhs.band;
        Ok(BlockBandOperator {
            space: self.space,
            band,
            valid_lmax: self.valid_lmax.min(rhs.valid_lmax) - band as i32,
            blocks,
        })
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.compose(rhs)?.minus(&rhs.compose(self)?)
    }

    pub fn adjoint(&self) -> Self {
        let mut blocks: BTreeMap<BlockKey, Vec<C64>> = BTreeMap::new();
        for (key, stripe) in &self.blocks {
            let l_new = key.l_out();
            let new_key = BlockKey {
                l_in: l_new,
                s_in: key.s_out,
                dl: -key.dl,
                s_out: key.s_in,
                dm: -key.dm,
            };
            let len = l_new.twice() as usize + 1;
            let dst = blocks.entry(new_key).or_insert_with(|| vec![ZERO; len]);
            let shift = key.dm + key.dl;
            for (k, v) in stripe.iter().enumerate() {
                let slot = k as i32 + shift;
                if slot >= 0 && (slot as usize) < len {
                    dst[slot as usize] += v.conj();
                }
            }
        }
        BlockBandOperator {
            space: self.space,
            band: self.band,
            valid_lmax: self.valid_lmax - self.band as i32,
            blocks,
        }
    }

    /// `Δm` values carried by blocks with a nonzero entry in sector `l`.
    fn column_m_shifts(&self, l: HalfInt) -> Vec<i32> {
        let mut shifts: Vec<i32> = Sign::BOTH
            .iter()
            .flat_map(|&s| self.blocks.range(BlockKey::lower(l, s)..=BlockKey::upper(l, s)))
            .filter(|(_, v)| v.iter().any(|x| *x != ZERO))
            .map(|(k, _)| k.dm)
            .collect();
        shifts.sort_unstable();
        shifts.dedup();
        shifts
    }

    /// Operator norm of the column strip `A|_{V_l ⊗ {+,−}}`.
    pub fn sector_column_norm(&self, l: HalfInt) -> Result<f64> {
        self.ensure_valid(l)?;
        let shifts = self.column_m_shifts(l);
        if shifts.len() <= 1 {
            Ok(self.homogeneous_column_norm(l))
        } else {
            Ok(self.general_column_norm(l))
        }
    }

    /// Single `Δm`: the Gram matrix of the strip splits into 2×2 blocks, one per `m`.
    fn homogeneous_column_norm(&self, l: HalfInt) -> f64 {
        let len = l.twice() as usize + 1;
        let mut gram = vec![[0.0f64, 0.0, 0.0, 0.0]; len]; // [g++, g--, re g+-, im g+-]
        let mut rows: BTreeMap<(i32, Sign), [C64; 2]> = BTreeMap::new();
        for k in 0..len {
            rows.clear();
            for (si, s) in Sign::BOTH.iter().enumerate() {
                for (key, stripe) in self.blocks.range(BlockKey::lower(l, *s)..=BlockKey::upper(l, *s)) {
                    rows.entry((key.dl, key.s_out)).or_insert([ZERO; 2])[si] += stripe[k];
                }
            }
            let g = &mut gram[k];
            for [p, m] in rows.values() {
                g[0] += p.norm_sqr();
                g[1] += m.norm_sqr();
                let c = p.conj() * m;
                g[2] += c.re;
                g[3] += c.im;
            }
        }
        gram.iter()
            .map(|[a, d, re, im]| {
                let half_gap = 0.5 * (a - d);
                0.5 * (a + d) + (half_gap * half_gap + re * re + im * im).sqrt()
            })
            .fold(0.0f64, f64::max)
            .sqrt()
    }

    fn general_column_norm(&self, l: HalfInt) -> f64 {
        let cols = self.space.enumerate_sector(l).expect("checked sector");
        let n = cols.len();
        let columns: Vec<Vec<(BasisVector, C64)>> = cols.iter().map(|c| self.column(c)).collect();
        let mut gram = DMatrix::<C64>::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for (ri, vi) in &columns[i] {
                    for (rj, vj) in &columns[j] {
                        if ri == rj {
                            acc += vi.conj() * vj;
                        }
                    }
                }
                gram[(i, j)] = acc;
                gram[(j, i)] = acc.conj();
            }
        }
        let eig = gram.symmetric_eigenvalues();
        eig.iter().copied().fold(0.0f64, f64::max).max(0.0).sqrt()
    }

    /// Sector column norms over all valid sectors, in ascending `l`.
    pub fn sector_norms(&self) -> Result<Vec<SectorNorm>> {
        let sectors: Vec<HalfInt> = self.valid_sectors().collect();
        if sectors.is_empty() {
            return Err(Error::Validity(format!(
                "no valid sectors left (valid_lmax {} < N = {})",
                self.valid_lmax,
                self.space.n()
            )));
        }
        sectors
            .par_iter()
            .map(|&l| self.sector_column_norm(l).map(|norm| SectorNorm { l, norm }))
            .collect()
    }

    /// Sum of the diagonal entries belonging to sector `l`.
    pub fn sector_trace(&self, l: HalfInt) -> Result<C64> {
        self.ensure_valid(l)?;
        Ok(Sign::BOTH
            .iter()
            .map(|&s| {
                let key = BlockKey { l_in: l, s_in: s, dl: 0, s_out: s, dm: 0 };
                self.blocks.get(&key).map(|v| v.iter().sum()).unwrap_or(ZERO)
            })
            .sum())
    }

    /// Dense `(2(l+Δl)+1) × (2l+1)` block.
    pub fn dense_block(&self, l: HalfInt, dl: i32, s_in: Sign, s_out: Sign) -> DMatrix<C64> {
        let l_out = l + dl;
        let rows = (l_out.twice().max(-1) + 1) as usize;
        let cols = l.twice() as usize + 1;
        let mut out = DMatrix::zeros(rows, cols);
        let range = BlockKey::lower(l, s_in)..=BlockKey::upper(l, s_in);
        for (key, stripe) in self.blocks.range(range) {
            if key.dl != dl || key.s_out != s_out {
                continue;
            }
            for (k, v) in stripe.iter().enumerate() {
                let r = k as i32 + key.dm + dl;
                if r >= 0 && (r as usize) < rows {
                    out[(r as usize, k)] += *v;
                }
            }
        }
        out
    }

    /// Dense restriction to sectors `lmin ≤ l ≤ lmax_w`, in `index_of` order.
    pub fn dense_window(&self, lmin: HalfInt, lmax_w: HalfInt) -> Result<DMatrix<C64>> {
        if lmin > lmax_w || !self.space.contains_sector(lmin) || !self.space.contains_sector(lmax_w) {
            return Err(Error::Domain(format!("window [{lmin}, {lmax_w}] not inside the space")));
        }
        if lmax_w > self.valid_lmax {
            return Err(Error::Validity(format!(
                "window top {lmax_w} beyond valid_lmax {}",
                self.valid_lmax
            )));
        }
        let base = self.space.sector_offset(lmin);
        let n = self.space.sector_offset(lmax_w + 1) - base;
        let mut out = DMatrix::zeros(n, n);
        for (row, col, v) in self.entries() {
            if row.l < lmin || row.l > lmax_w || col.l < lmin || col.l > lmax_w {
                continue;
            }
            out[(self.space.index_unchecked(&row) - base, self.space.index_unchecked(&col) - base)] += v;
        }
        Ok(out)
    }

    /// The whole truncated matrix, validity ignored.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.space.dim();
        let mut out = DMatrix::zeros(n, n);
        for (row, col, v) in self.entries() {
            out[(self.space.index_unchecked(&row), self.space.index_unchecked(&col))] += v;
        }
        out
    }

    /// Largest entry-wise difference over columns valid in both operators.
    pub fn max_abs_diff_valid(&self, other: &Self) -> Result<f64> {
        let diff = self.minus(other)?;
        Ok(diff
            .entries()
            .filter(|(_, col, _)| col.l <= diff.valid_lmax)
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max))
    }
}

/// An antilinear map `v ↦ perm · (phases ⊙ conj(v))`: `J e_k = phases[k] e_{perm[k]}`.
#[derive(Clone, Debug)]
pub struct AntilinearMap {
    space: TruncatedSpace,
    basis: Vec<BasisVector>,
    perm: Vec<usize>,
    phases: Vec<C64>,
}

/// Which conjugation `conjugate_by` computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JConjugation {
    /// `J A J⁻¹`
    #[serde(rename = "J x J^-1")]
    Inverse,
    /// `J A J`
    #[serde(rename = "J x J")]
    Direct,
}

impl AntilinearMap {
    pub fn new(space: TruncatedSpace, perm: Vec<usize>, phases: Vec<C64>) -> Result<Self> {
        let n = space.dim();
        if perm.len() != n || phases.len() != n {
            return Err(Error::Domain("permutation/phase length differs from dim".into()));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Domain("not a permutation".into()));
            }
        }
        if phases.iter().any(|p| (p.norm() - 1.0).abs() > 1e-14) {
            return Err(Error::Domain("phases must have unit modulus".into()));
        }
        let basis: Vec<BasisVector> = space.basis().collect();
        for (k, &p) in perm.iter().enumerate() {
            if basis[k].l != basis[p].l {
                return Err(Error::Domain("map must preserve sectors".into()));
            }
        }
        Ok(AntilinearMap { space, basis, perm, phases })
    }

    pub fn space(&self) -> &TruncatedSpace {
        &self.space
    }

    /// `J e_k` as `(target index, coefficient)`.
    #[inline]
    pub fn apply_basis(&self, k: usize) -> (usize, C64) {
        (self.perm[k], self.phases[k])
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; v.len()];
        for (k, x) in v.iter().enumerate() {
            out[self.perm[k]] = self.phases[k] * x.conj();
        }
        out
    }

    /// Applies `J` to a sparse vector given as `(index, coefficient)` pairs.
    pub fn apply_sparse(&self, v: &[(usize, C64)]) -> Vec<(usize, C64)> {
        v.iter().map(|&(k, x)| (self.perm[k], self.phases[k] * x.conj())).collect()
    }

    /// `ε` with `J² = ε·1`, checked on every basis vector.
    pub fn square_sign(&self) -> Result<f64> {
        let mut eps: Option<f64> = None;
        for k in 0..self.perm.len() {
            let (p, c1) = self.apply_basis(k);
            let (q, c2) = self.apply_basis(p);
            let c = self.phases[p] * c1.conj();
            debug_assert_eq!(c, c2 * c1.conj());
            if q != k || c.im.abs() > 1e-12 || (c.re.abs() - 1.0).abs() > 1e-12 {
                return Err(Error::Structural(format!("J² is not ±1 on basis vector {k}")));
            }
            let s = c.re.signum();
            match eps {
                None => eps = Some(s),
                Some(e) if e != s => {
                    return Err(Error::Structural("J² sign differs across basis vectors".into()))
                }
                _ => {}
            }
        }
        eps.ok_or_else(|| Error::Structural("empty space".into()))
    }

    /// `J A J⁻¹` or `J A J`; both are linear.
    pub fn conjugate(&self, a: &BlockBandOperator, mode: JConjugation) -> Result<BlockBandOperator> {
        if a.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        let factor = match mode {
            JConjugation::Inverse => ONE,
            JConjugation::Direct => C64::new(self.square_sign()?, 0.0),
        };
        let mut b = OperatorBuilder::new(self.space, a.band, a.valid_lmax);
        for (row, col, v) in a.entries() {
            let r = self.space.index_unchecked(&row);
            let c = self.space.index_unchecked(&col);
            let value = factor * self.phases[r] * self.phases[c].conj() * v.conj();
            b.add(self.basis[self.perm[r]], self.basis[self.perm[c]], value);
        }
        Ok(b.build())
    }
}

/// `J ∘ A ∘ J⁻¹`.
pub fn conjugate_by(j: &AntilinearMap, a: &BlockBandOperator) -> Result<BlockBandOperator> {
    j.conjugate(a, JConjugation::Inverse)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn space(n: i32, lmax: i32) -> TruncatedSpace {
        TruncatedSpace::new(h(n), h(lmax)).unwrap()
    }

    /// A band-1 test operator: `|l,m,s⟩ ↦ c |l+1,m+1,s⟩ + c' |l,m,-s⟩`.
    fn shifter(s: TruncatedSpace) -> BlockBandOperator {
        let mut b = OperatorBuilder::new(s, 1, s.lmax() - 1);
        for v in s.basis() {
            let up = BasisVector::new(v.l + 1, v.m + 1, v.sign);
            b.add_real(up, v, 1.0 + v.l.to_f64() + 0.1 * v.m.to_f64());
            b.add(BasisVector::new(v.l, v.m, v.sign.flip()), v, C64::new(0.0, 0.5));
        }
        b.build()
    }

    #[test]
    fn identity_composition() {
        let s = space(2, 12);
        let a = shifter(s);
        let id = BlockBandOperator::identity(s);
        let ia = id.compose(&a).unwrap();
        assert_eq!(ia.max_abs_diff_valid(&a).unwrap(), 0.0);
        assert_eq!(ia.valid_lmax(), a.valid_lmax() - 1);
        assert_eq!(ia.band(), 1);
    }

    #[test]
    fn band_and_validity_rules() {
        let s = space(0, 100);
        let a = shifter(s).with_valid_lmax(h(80));
        let b = shifter(s).with_valid_lmax(h(80));
        assert_eq!(a.valid_lmax(), h(80));
        let c = a.compose(&b).unwrap();
        assert_eq!(c.band(), 2);
        assert_eq!(c.valid_lmax(), h(76));
        let sum = a.plus(&c).unwrap();
        assert_eq!((sum.band(), sum.valid_lmax()), (2, h(76)));
    }

    #[test]
    fn sector_norms_of_simple_operators() {
        let s = space(2, 8);
        let z = BlockBandOperator::zero(s);
        assert_eq!(z.sector_column_norm(h(4)).unwrap(), 0.0);
        let g = BlockBandOperator::sign_diagonal(s, 1.0, -1.0);
        for l in s.sectors() {
            assert!((g.sector_column_norm(l).unwrap() - 1.0).abs() < 1e-15);
        }
        assert_eq!(g.adjoint().max_abs_diff_valid(&g).unwrap(), 0.0);
    }

    #[test]
    fn validity_errors() {
        let s = space(2, 8);
        let a = shifter(s);
        assert!(matches!(a.sector_column_norm(h(8)), Err(Error::Validity(_))));
        assert!(matches!(a.dense_window(h(2), h(8)), Err(Error::Validity(_))));
        let other = shifter(space(2, 10));
        assert!(matches!(a.compose(&other), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn homogeneous_and_general_norms_agree() {
        let s = space(1, 11);
        let a = shifter(s);
        // a has two Δm values, so it takes the general path; its pieces take the fast path
        let l = h(5);
        let general = a.sector_column_norm(l).unwrap();
        let dense = {
            let cols = s.enumerate_sector(l).unwrap();
            let m = a.to_dense();
            let idx: Vec<usize> = cols.iter().map(|c| s.index_of(c).unwrap()).collect();
            let strip = DMatrix::from_fn(m.nrows(), idx.len(), |r, c| m[(r, idx[c])]);
            strip.singular_values().max()
        };
        assert!((general - dense).abs() < 1e-12, "{general} vs {dense}");

        let mut b = OperatorBuilder::new(s, 1, s.lmax() - 1);
        for v in s.basis() {
            b.add_real(BasisVector::new(v.l + 1, v.m + 1, v.sign), v, 1.0 + v.m.to_f64());
            b.add_real(BasisVector::new(v.l - 1, v.m + 1, v.sign.flip()), v, 0.3);
        }
        let homo = b.build();
        let fast = homo.sector_column_norm(l).unwrap();
        let slow = homo.general_column_norm(l);
        assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
    }

    #[test]
    fn dense_window_identity() {
        let s = space(1, 9);
        let id = BlockBandOperator::identity(s);
        let w = id.dense_window(h(3), h(5)).unwrap();
        let n = TruncatedSpace::sector_dim(h(3)) + TruncatedSpace::sector_dim(h(5));
        assert_eq!(w, DMatrix::identity(n, n));
    }

    #[test]
    fn sector_trace_counts_diagonal() {
        let s = space(2, 6);
        let g = BlockBandOperator::sign_diagonal(s, 1.0, -1.0);
        assert_eq!(g.sector_trace(h(4)).unwrap(), ZERO);
        let id = BlockBandOperator::identity(s);
        assert_eq!(id.sector_trace(h(4)).unwrap(), C64::new(10.0, 0.0));
    }

    #[test]
    fn antilinear_map_checks() {
        let s = space(1, 3);
        let n = s.dim();
        let ok = AntilinearMap::new(s, (0..n).collect(), vec![ONE; n]).unwrap();
        assert_eq!(ok.square_sign().unwrap(), 1.0);
        let id = BlockBandOperator::identity(s);
        assert_eq!(conjugate_by(&ok, &id).unwrap().max_abs_diff_valid(&id).unwrap(), 0.0);
        assert!(AntilinearMap::new(s, vec![0; n], vec![ONE; n]).is_err());
        // moving between sectors is rejected
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(0, n - 1);
        assert!(AntilinearMap::new(s, perm, vec![ONE; n]).is_err());
    }
}

//! Basis labels `|l, m, ±⟩` of the truncated space `⊕_{l=N}^{lmax} V_l ⊗ {+, −}`.
//!
//! Ordering is part of the on-disk contract: `l` ascending, then `m`
//! ascending, then `+` before `−`. Every serialized vector or matrix uses
//! [`TruncatedSpace::index_of`].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Chirality label. `Plus` spans `H_N`, `Minus` spans `H_{-N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    #[inline]
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    #[inline]
    pub(crate) fn offset(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisVector {
    pub l: HalfInt,
    pub m: HalfInt,
    pub sign: Sign,
}

impl BasisVector {
    pub fn new(l: HalfInt, m: HalfInt, sign: Sign) -> Self {
        BasisVector { l, m, sign }
    }

    /// Position of `m` inside its multiplet, `m + l`.
    #[inline]
    pub(crate) fn m_slot(&self) -> usize {
        ((self.m.twice() + self.l.twice()) / 2) as usize
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}>", self.l, self.m, self.sign)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TruncatedSpace {
    #[serde(rename = "N")]
    n: HalfInt,
    lmax: HalfInt,
    dim: usize,
}

impl TruncatedSpace {
    /// Strict constructor: `N ≥ 0`, `lmax ≥ N`, and `lmax − N` an integer.
    pub fn new(n: HalfInt, lmax: HalfInt) -> Result<Self> {
        if n < 0 {
            return Err(Error::Domain(format!("N must be non-negative, got {n}")));
        }
        if lmax < n {
            return Err(Error::Domain(format!("lmax {lmax} is below N = {n}")));
        }
        if !lmax.same_parity(n) {
            return Err(Error::Domain(format!(
                "lmax {lmax} is not reachable from N = {n} in integer steps"
            )));
        }
        let dim = Self::offset_raw(n, lmax + 1);
        Ok(TruncatedSpace { n, lmax, dim })
    }

    /// Truncates at the largest admissible `l ≤ cutoff`.
    pub fn with_cutoff(n: HalfInt, cutoff: HalfInt) -> Result<Self> {
        let lmax = if cutoff.same_parity(n) { cutoff } else { cutoff - HalfInt::HALF };
        Self::new(n, lmax)
    }

    #[inline]
    pub fn n(&self) -> HalfInt {
        self.n
    }

    #[inline]
    pub fn lmax(&self) -> HalfInt {
        self.lmax
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `2(l² − N²)`: number of basis vectors below sector `l`.
    fn offset_raw(n: HalfInt, l: HalfInt) -> usize {
        let (tl, tn) = (i64::from(l.twice()), i64::from(n.twice()));
        ((tl * tl - tn * tn) / 2) as usize
    }

    #[inline]
    pub fn sector_offset(&self, l: HalfInt) -> usize {
        Self::offset_raw(self.n, l)
    }

    /// `2(2l + 1)`, both chiralities.
    #[inline]
    pub fn sector_dim(l: HalfInt) -> usize {
        2 * (l.twice() as usize + 1)
    }

    pub fn contains_sector(&self, l: HalfInt) -> bool {
        l >= self.n && l <= self.lmax && l.same_parity(self.n)
    }

    pub fn sectors(&self) -> impl Iterator<Item = HalfInt> + Clone {
        let (lo, hi) = (self.n.twice(), self.lmax.twice());
        (lo..=hi).step_by(2).map(HalfInt::from_twice)
    }

    /// Sectors `l` with `lo ≤ l ≤ hi` that exist in this space.
    pub fn sectors_between(&self, lo: HalfInt, hi: HalfInt) -> impl Iterator<Item = HalfInt> + '_ {
        self.sectors().filter(move |&l| l >= lo && l <= hi)
    }

    pub fn check(&self, v: &BasisVector) -> Result<()> {
        if !self.contains_sector(v.l) {
            return Err(Error::Domain(format!("{v}: l outside [{}, {}]", self.n, self.lmax)));
        }
        if v.m.abs() > v.l || !v.m.same_parity(v.l) {
            return Err(Error::Domain(format!("{v}: m is not in -l..=l")));
        }
        Ok(())
    }

    pub fn index_of(&self, v: &BasisVector) -> Result<usize> {
        self.check(v)?;
        Ok(self.index_unchecked(v))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, v: &BasisVector) -> usize {
        self.sector_offset(v.l) + 2 * v.m_slot() + v.sign.offset()
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn basis_vector(&self, index: usize) -> Result<BasisVector> {
        if index >= self.dim {
            return Err(Error::Domain(format!("index {index} outside [0, {})", self.dim)));
        }
        // sector offsets grow quadratically; a linear scan over sectors is fine
        let l = self
            .sectors()
            .take_while(|&l| self.sector_offset(l) <= index)
            .last()
            .expect("index below dim lies in some sector");
        let within = index - self.sector_offset(l);
        let sign = if within % 2 == 0 { Sign::Plus } else { Sign::Minus };
        let m = HalfInt::from_twice(2 * (within / 2) as i32 - l.twice());
        Ok(BasisVector { l, m, sign })
    }

    pub fn enumerate_sector(&self, l: HalfInt) -> Result<Vec<BasisVector>> {
        if !self.contains_sector(l) {
            return Err(Error::Domain(format!(
                "sector l = {l} not in [{}, {}]",
                self.n, self.lmax
            )));
        }
        Ok(multiplet(l)
            .flat_map(|m| Sign::BOTH.into_iter().map(move |sign| BasisVector { l, m, sign }))
            .collect())
    }

    pub fn basis(&self) -> impl Iterator<Item = BasisVector> + '_ {
        self.sectors().flat_map(move |l| {
            multiplet(l).flat_map(move |m| Sign::BOTH.into_iter().map(move |sign| BasisVector { l, m, sign }))
        })
    }
}

/// `m = −l, −l+1, …, l`.
pub fn multiplet(l: HalfInt) -> impl Iterator<Item = HalfInt> + Clone {
    (-l.twice()..=l.twice()).step_by(2).map(HalfInt::from_twice)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn index_examples() {
        let s = TruncatedSpace::new(h(2), h(6)).unwrap();
        let first = BasisVector::new(h(2), h(-2), Sign::Plus);
        assert_eq!(s.index_of(&first).unwrap(), 0);
        let v = BasisVector::new(h(4), h(0), Sign::Minus);
        assert_eq!(s.index_of(&v).unwrap(), 11);

        let half = TruncatedSpace::new(h(1), h(3)).unwrap();
        assert_eq!(half.dim(), 12);
    }

    #[test]
    fn enumerate_examples() {
        let s = TruncatedSpace::new(h(1), h(5)).unwrap();
        let got = s.enumerate_sector(h(1)).unwrap();
        let want = vec![
            BasisVector::new(h(1), h(-1), Sign::Plus),
            BasisVector::new(h(1), h(-1), Sign::Minus),
            BasisVector::new(h(1), h(1), Sign::Plus),
            BasisVector::new(h(1), h(1), Sign::Minus),
        ];
        assert_eq!(got, want);

        let one = TruncatedSpace::new(h(2), h(6)).unwrap();
        assert_eq!(one.enumerate_sector(h(2)).unwrap().len(), 6);

        let two = TruncatedSpace::new(h(4), h(8)).unwrap();
        assert!(matches!(two.enumerate_sector(h(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn domain_errors() {
        let s = TruncatedSpace::new(h(2), h(6)).unwrap();
        assert!(s.index_of(&BasisVector::new(h(8), h(0), Sign::Plus)).is_err());
        assert!(s.index_of(&BasisVector::new(h(2), h(4), Sign::Plus)).is_err());
        assert!(s.index_of(&BasisVector::new(h(2), h(1), Sign::Plus)).is_err());
        assert!(s.index_of(&BasisVector::new(h(3), h(1), Sign::Plus)).is_err());
        assert!(s.basis_vector(s.dim()).is_err());
        assert!(TruncatedSpace::new(h(-2), h(4)).is_err());
        assert!(TruncatedSpace::new(h(1), h(4)).is_err());
        assert!(TruncatedSpace::new(h(4), h(2)).is_err());
    }

    #[test]
    fn cutoff_rounds_down() {
        let s = TruncatedSpace::with_cutoff(h(1), h(80)).unwrap();
        assert_eq!(s.lmax(), h(79));
        let s = TruncatedSpace::with_cutoff(h(2), h(80)).unwrap();
        assert_eq!(s.lmax(), h(80));
    }

    #[test]
    fn basis_iterator_matches_index_order() {
        let s = TruncatedSpace::new(h(3), h(9)).unwrap();
        for (i, v) in s.basis().enumerate() {
            assert_eq!(s.index_of(&v).unwrap(), i);
        }
        assert_eq!(s.basis().count(), s.dim());
    }

    #[test]
    fn n_zero_has_singlet_sector() {
        let s = TruncatedSpace::new(h(0), h(4)).unwrap();
        assert_eq!(s.enumerate_sector(h(0)).unwrap().len(), 2);
        assert_eq!(s.dim(), 2 * 9);
    }
}

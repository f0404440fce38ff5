//! Truncated Hermitian-symmetric spectral fields.

use crate::lattice::Mode;
use crate::util::pairwise_sum;
use num_complex::Complex64;
use std::io::{self, Write};

/// Dense complex coefficients over the square `|n1|, |n2| <= truncation`,
/// representing a real mean-zero field `sum_n c_n e^{i n.x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    truncation: i64,
    side: usize,
    data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(truncation: i64) -> Self {
        assert!(truncation >= 1, "truncation must be >= 1");
        let side = (2 * truncation + 1) as usize;
        SpectralField { truncation, side, data: vec![Complex64::new(0.0, 0.0); side * side] }
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    fn idx(&self, m: Mode) -> usize {
        debug_assert!(self.contains(m));
        ((m.n1 + self.truncation) as usize) * self.side + (m.n2 + self.truncation) as usize
    }

    pub fn contains(&self, m: Mode) -> bool {
        m.sup_norm() <= self.truncation
    }

    pub fn get(&self, m: Mode) -> Complex64 {
        if self.contains(m) {
            self.data[self.idx(m)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, m: Mode, v: Complex64) {
        assert!(self.contains(m), "mode {m:?} outside truncation {}", self.truncation);
        let i = self.idx(m);
        self.data[i] = v;
    }

    pub fn add_at(&mut self, m: Mode, v: Complex64) {
        let i = self.idx(m);
        self.data[i] += v;
    }

    /// All modes of the square, including zeros.
    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        let n = self.truncation;
        (-n..=n).flat_map(move |n1| (-n..=n).map(move |n2| Mode::new(n1, n2)))
    }

    pub fn nonzero(&self) -> Vec<(Mode, Complex64)> {
        self.modes()
            .filter_map(|m| {
                let c = self.data[self.idx(m)];
                (c != Complex64::new(0.0, 0.0)).then_some((m, c))
            })
            .collect()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|c| **c != Complex64::new(0.0, 0.0)).count()
    }

    /// `sum_{n != 0} <n>^{2s} |c_n|^2`.
    pub fn sobolev_norm_sq(&self, s: f64) -> f64 {
        let terms: Vec<f64> = self
            .modes()
            .filter(|m| !m.is_zero())
            .map(|m| {
                let c = self.data[self.idx(m)];
                (m.bracket_sq() as f64).powf(s) * c.norm_sqr()
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// Real `H^s` pairing `sum_n <n>^{2s} f_n conj(g_n)`; the imaginary part
    /// cancels for Hermitian fields and is dropped.
    pub fn inner_hs(&self, other: &SpectralField, s: f64) -> f64 {
        let terms: Vec<f64> = self
            .modes()
            .filter(|m| !m.is_zero())
            .map(|m| {
                let a = self.get(m);
                let b = other.get(m);
                (m.bracket_sq() as f64).powf(s) * (a * b.conj()).re
            })
            .collect();
        pairwise_sum(&terms)
    }

    /// `sum |c_n|^2` (squared `L^2` mass of vorticity).
    pub fn enstrophy(&self) -> f64 {
        self.sobolev_norm_sq(0.0)
    }

    /// `sum_{n != 0} |c_n|^2 / |n|^2` (squared `L^2` mass of velocity).
    pub fn energy(&self) -> f64 {
        let terms: Vec<f64> = self
            .modes()
            .filter(|m| !m.is_zero())
            .map(|m| {
                let c = self.data[self.idx(m)];
                c.norm_sqr() / m.norm_sq() as f64
            })
            .collect();
        pairwise_sum(&terms)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from the Hermitian symmetry `c_{-n} = conj(c_n)`,
    /// including any mass at `n = 0`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut defect = self.get(Mode::ZERO).norm();
        for m in self.modes() {
            defect = defect.max((self.get(m) - self.get(-m).conj()).norm());
        }
        defect
    }

    pub fn assert_invariants(&self) {
        let defect = self.hermitian_defect();
        let scale = self.max_abs().max(1.0);
        assert!(defect <= 1e-12 * scale, "Hermitian defect {defect} at scale {scale}");
    }

    /// Copy into a (possibly different) truncation; modes outside the new
    /// square are discarded.
    pub fn with_truncation(&self, truncation: i64) -> SpectralField {
        let mut out = SpectralField::zeros(truncation);
        for (m, c) in self.nonzero() {
            if out.contains(m) {
                out.set(m, c);
            }
        }
        out
    }

    pub fn scaled(&self, k: f64) -> SpectralField {
        let mut out = self.clone();
        for c in &mut out.data {
            *c *= k;
        }
        out
    }

    /// `self + k * other`; the result keeps the larger truncation.
    pub fn axpy(&self, k: f64, other: &SpectralField) -> SpectralField {
        let trunc = self.truncation.max(other.truncation);
        let mut out = self.with_truncation(trunc);
        for (m, c) in other.nonzero() {
            out.add_at(m, k * c);
        }
        out
    }

    /// Debug dump as CSV rows `n1,n2,re,im` (nonzero coefficients only).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "n1,n2,re,im")?;
        for (m, c) in self.nonzero() {
            writeln!(w, "{},{},{:.17e},{:.17e}", m.n1, m.n2, c.re, c.im)?;
        }
        Ok(())
    }
}

/// Build a field from explicit coefficients; no validation. For callers
/// that construct Hermitian data themselves.
pub fn field_from_pairs(truncation: i64, pairs: &[(Mode, Complex64)]) -> SpectralField {
    let mut f = SpectralField::zeros(truncation);
    for &(m, c) in pairs {
        f.set(m, c);
    }
    f
}

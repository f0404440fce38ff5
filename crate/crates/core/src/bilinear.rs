//! The Euler nonlinearity in Fourier space: Biot-Savart velocity, the
//! symmetric bilinear form `B`, and its iterated compositions.
//!
//! `B(a,b) = (U[a].grad b + U[b].grad a)/2` has the mode-space form
//! `B(a,b)_n = 1/2 sum_{k+m=n} (m.k_perp)(1/|k|^2 - 1/|m|^2) a_k b_m`,
//! evaluated either by direct convolution over the nonzero support or by
//! alias-free padded FFTs. The two paths agree to roundoff and cross-check
//! each other in the tests.

use crate::field::SpectralField;
use crate::lattice::Mode;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Velocity coefficients recovered from vorticity.
#[derive(Clone, Debug)]
pub struct VelocityField {
    pub u1: SpectralField,
    pub u2: SpectralField,
}

impl VelocityField {
    /// Largest violation of `n1 u1_n + n2 u2_n = 0` over the truncation.
    pub fn divergence_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in self.u1.modes() {
            let d = m.n1 as f64 * self.u1.get(m) + m.n2 as f64 * self.u2.get(m);
            worst = worst.max(d.norm());
        }
        worst
    }

    /// Largest violation of `i(n1 u2_n - n2 u1_n) = c_n`.
    pub fn curl_defect(&self, omega: &SpectralField) -> f64 {
        let mut worst = 0.0f64;
        for m in omega.modes() {
            let curl = Complex64::i() * (m.n1 as f64 * self.u2.get(m) - m.n2 as f64 * self.u1.get(m));
            worst = worst.max((curl - omega.get(m)).norm());
        }
        worst
    }
}

/// `u1_n = -n2/(i|n|^2) c_n`, `u2_n = n1/(i|n|^2) c_n`, zero at `n = 0`.
pub fn biot_savart(omega: &SpectralField) -> VelocityField {
    let mut u1 = SpectralField::zeros(omega.truncation());
    let mut u2 = SpectralField::zeros(omega.truncation());
    for (m, c) in omega.nonzero() {
        if m.is_zero() {
            continue;
        }
        let inv = 1.0 / m.norm_sq() as f64;
        // -1/i = i
        u1.set(m, Complex64::i() * (m.n2 as f64 * inv) * c);
        u2.set(m, -Complex64::i() * (m.n1 as f64 * inv) * c);
    }
    VelocityField { u1, u2 }
}

/// Evaluation strategy for the quadratic term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionPath {
    /// O(nnz(a) * nnz(b)) convolution over the nonzero supports. Exact zeros
    /// for degenerate supports (every summand carries an exactly-zero factor).
    Direct,
    /// Alias-free pseudo-spectral product on a zero-padded grid.
    Fft,
    /// Direct for sparse inputs, FFT otherwise.
    Auto,
}

/// Output truncation policy for the iterated forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationMode {
    /// Project every product back to the input truncation (the finite
    /// Galerkin system).
    Galerkin,
    /// Keep all generated modes; exact compositions for finite supports.
    Grow,
}

/// Canonical argument order so that `B(a,b)` and `B(b,a)` run the identical
/// float program and agree bitwise.
fn canonical_order<'a>(
    a: &'a SpectralField,
    b: &'a SpectralField,
) -> (&'a SpectralField, &'a SpectralField) {
    if a.truncation() != b.truncation() {
        return if a.truncation() < b.truncation() { (a, b) } else { (b, a) };
    }
    for m in a.modes() {
        let (ca, cb) = (a.get(m), b.get(m));
        let ka = (ca.re.to_bits(), ca.im.to_bits());
        let kb = (cb.re.to_bits(), cb.im.to_bits());
        if ka != kb {
            return if ka < kb { (a, b) } else { (b, a) };
        }
    }
    (a, b)
}

/// The symmetric bilinear form `B(a, b)` projected to `|n_i| <= out_truncation`.
pub fn bilinear_b(
    a: &SpectralField,
    b: &SpectralField,
    out_truncation: i64,
    path: ConvolutionPath,
) -> SpectralField {
    let (a, b) = canonical_order(a, b);
    match path {
        ConvolutionPath::Direct => bilinear_b_direct(a, b, out_truncation),
        ConvolutionPath::Fft => bilinear_b_fft(a, b, out_truncation),
        ConvolutionPath::Auto => {
            let direct_cost = a.nnz().saturating_mul(b.nnz());
            let n_in = a.truncation().max(b.truncation());
            let p = padded_size(n_in, out_truncation);
            let fft_cost = 2 * p * p * (usize::BITS - p.leading_zeros()) as usize;
            if direct_cost <= fft_cost {
                bilinear_b_direct(a, b, out_truncation)
            } else {
                bilinear_b_fft(a, b, out_truncation)
            }
        }
    }
}

fn bilinear_b_direct(a: &SpectralField, b: &SpectralField, out_truncation: i64) -> SpectralField {
    let mut out = SpectralField::zeros(out_truncation);
    let an = a.nonzero();
    let bn = b.nonzero();
    for &(k, ca) in &an {
        if k.is_zero() {
            continue;
        }
        let inv_k = 1.0 / k.norm_sq() as f64;
        for &(m, cb) in &bn {
            if m.is_zero() {
                continue;
            }
            let n = k + m;
            if n.sup_norm() > out_truncation {
                continue;
            }
            let pd = m.perp_dot(k);
            if pd == 0 {
                continue;
            }
            let w = 0.5 * pd as f64 * (inv_k - 1.0 / m.norm_sq() as f64);
            out.add_at(n, w * ca * cb);
        }
    }
    out.set(Mode::ZERO, Complex64::new(0.0, 0.0));
    out
}

/// Padded grid size per axis: alias images of the quadratic product must land
/// strictly outside the retained square, so `P >= 2 N_in + N_out + 1`. Rounded
/// up to a power of two for the FFT.
fn padded_size(n_in: i64, n_out: i64) -> usize {
    let min = (2 * n_in + n_out + 1) as usize;
    min.next_power_of_two()
}

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plan_pair(p: usize) -> PlanPair {
    static PLANS: OnceLock<Mutex<HashMap<usize, PlanPair>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(p)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_inverse(p), planner.plan_fft_forward(p))
        })
        .clone()
}

/// In-place 2D transform of a row-major `p x p` buffer.
fn fft2(buf: &mut [Complex64], p: usize, fft: &Arc<dyn Fft<f64>>) {
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for row in buf.chunks_exact_mut(p) {
        fft.process_with_scratch(row, &mut scratch);
    }
    // columns: transpose, transform rows, transpose back
    transpose(buf, p);
    for row in buf.chunks_exact_mut(p) {
        fft.process_with_scratch(row, &mut scratch);
    }
    transpose(buf, p);
}

fn transpose(buf: &mut [Complex64], p: usize) {
    for i in 0..p {
        for j in (i + 1)..p {
            buf.swap(i * p + j, j * p + i);
        }
    }
}

struct PaddedGrid {
    p: usize,
    inverse: Arc<dyn Fft<f64>>,
    forward: Arc<dyn Fft<f64>>,
}

impl PaddedGrid {
    fn new(p: usize) -> Self {
        let (inverse, forward) = plan_pair(p);
        PaddedGrid { p, inverse, forward }
    }

    fn wrap(&self, k: i64) -> usize {
        k.rem_euclid(self.p as i64) as usize
    }

    /// Physical samples of `sum_n weight(n) c_n e^{i n.x}` on the padded grid.
    fn to_physical(
        &self,
        f: &SpectralField,
        weight: impl Fn(Mode) -> Complex64,
    ) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.p * self.p];
        for (m, c) in f.nonzero() {
            buf[self.wrap(m.n1) * self.p + self.wrap(m.n2)] = weight(m) * c;
        }
        fft2(&mut buf, self.p, &self.inverse);
        buf
    }

    /// Coefficients of a physical-space product, restricted to the output square.
    fn to_spectral(&self, mut buf: Vec<Complex64>, out_truncation: i64) -> SpectralField {
        fft2(&mut buf, self.p, &self.forward);
        let scale = 1.0 / (self.p * self.p) as f64;
        let mut out = SpectralField::zeros(out_truncation);
        for n1 in -out_truncation..=out_truncation {
            for n2 in -out_truncation..=out_truncation {
                if n1 == 0 && n2 == 0 {
                    continue;
                }
                let v = buf[self.wrap(n1) * self.p + self.wrap(n2)];
                out.set(Mode::new(n1, n2), v * scale);
            }
        }
        out
    }
}

fn velocity_weight(component: usize) -> impl Fn(Mode) -> Complex64 {
    move |m: Mode| {
        if m.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let inv = 1.0 / m.norm_sq() as f64;
        match component {
            0 => Complex64::i() * (m.n2 as f64 * inv),
            _ => -Complex64::i() * (m.n1 as f64 * inv),
        }
    }
}

fn gradient_weight(component: usize) -> impl Fn(Mode) -> Complex64 {
    move |m: Mode| match component {
        0 => Complex64::i() * m.n1 as f64,
        _ => Complex64::i() * m.n2 as f64,
    }
}

fn bilinear_b_fft(a: &SpectralField, b: &SpectralField, out_truncation: i64) -> SpectralField {
    let n_in = a.truncation().max(b.truncation());
    let grid = PaddedGrid::new(padded_size(n_in, out_truncation));
    let same = std::ptr::eq(a, b) || a == b;

    let ua1 = grid.to_physical(a, velocity_weight(0));
    let ua2 = grid.to_physical(a, velocity_weight(1));
    let gb1 = grid.to_physical(b, gradient_weight(0));
    let gb2 = grid.to_physical(b, gradient_weight(1));

    let mut prod = vec![Complex64::new(0.0, 0.0); grid.p * grid.p];
    if same {
        // B(a,a) = U[a].grad a
        for i in 0..prod.len() {
            prod[i] = ua1[i] * gb1[i] + ua2[i] * gb2[i];
        }
    } else {
        let ub1 = grid.to_physical(b, velocity_weight(0));
        let ub2 = grid.to_physical(b, velocity_weight(1));
        let ga1 = grid.to_physical(a, gradient_weight(0));
        let ga2 = grid.to_physical(a, gradient_weight(1));
        for i in 0..prod.len() {
            prod[i] =
                0.5 * (ua1[i] * gb1[i] + ua2[i] * gb2[i] + ub1[i] * ga1[i] + ub2[i] * ga2[i]);
        }
    }
    grid.to_spectral(prod, out_truncation)
}

fn out_trunc(input: i64, generated: i64, mode: TruncationMode) -> i64 {
    match mode {
        TruncationMode::Galerkin => input,
        TruncationMode::Grow => generated,
    }
}

/// `B1 = B(w, w)`.
pub fn b1(omega: &SpectralField, mode: TruncationMode, path: ConvolutionPath) -> SpectralField {
    let n = omega.truncation();
    bilinear_b(omega, omega, out_trunc(n, 2 * n, mode), path)
}

/// `B2 = B(w, B1(w))`.
pub fn b2(omega: &SpectralField, mode: TruncationMode, path: ConvolutionPath) -> SpectralField {
    let n = omega.truncation();
    let b1w = b1(omega, mode, path);
    bilinear_b(omega, &b1w, out_trunc(n, 3 * n, mode), path)
}

/// `B3 = B(B1, B1) + 2 B(w, B2)`.
pub fn b3(omega: &SpectralField, mode: TruncationMode, path: ConvolutionPath) -> SpectralField {
    let n = omega.truncation();
    let b1w = b1(omega, mode, path);
    let b2w = b2(omega, mode, path);
    let t = out_trunc(n, 4 * n, mode);
    bilinear_b(&b1w, &b1w, t, path).axpy(2.0, &bilinear_b(omega, &b2w, t, path))
}

/// `B3' = B(B1, B2)`.
pub fn b3_prime(omega: &SpectralField, mode: TruncationMode, path: ConvolutionPath) -> SpectralField {
    let n = omega.truncation();
    let b1w = b1(omega, mode, path);
    let b2w = b2(omega, mode, path);
    bilinear_b(&b1w, &b2w, out_trunc(n, 5 * n, mode), path)
}

/// `B3~ = B(B2, B2)`.
pub fn b3_tilde(omega: &SpectralField, mode: TruncationMode, path: ConvolutionPath) -> SpectralField {
    let n = omega.truncation();
    let b2w = b2(omega, mode, path);
    bilinear_b(&b2w, &b2w, out_trunc(n, 6 * n, mode), path)
}

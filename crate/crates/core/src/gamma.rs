//! Closed-form evaluation of the gamma functional, its building blocks, and
//! the degeneracy classification of finite supports.
//!
//! All lattice quantities (`|n|^2`, `q.n_perp`, `<n>^2`) are exact integers;
//! floating point enters only through the weights `<n>^{2s}` and divisions.

use crate::lattice::Mode;
use crate::sequence::CoefficientSequence;
use crate::util::pairwise_sum;
use rayon::prelude::*;
use serde::Serialize;

fn two_pi_pow4() -> f64 {
    (2.0 * std::f64::consts::PI).powi(4)
}

/// `beta_{n,q} = <n>^{2s}(1/|q|^2 - 1/|q+n|^2) + <q>^{2s}(1/|q+n|^2 - 1/|n|^2)
///             + <n+q>^{2s}(1/|n|^2 - 1/|q|^2)`.
///
/// Evaluated in the grouped form `sum_m (1/|m'|^2)(W_a - W_b)` so that the
/// telescoping at `s = 0` is exact in floating point. Caller guarantees
/// `n, q, n+q != 0`.
pub fn beta(n: Mode, q: Mode, s: f64) -> f64 {
    let nq = n + q;
    debug_assert!(!n.is_zero() && !q.is_zero() && !nq.is_zero());
    let w = |m: Mode| (m.bracket_sq() as f64).powf(s);
    let inv = |m: Mode| 1.0 / m.norm_sq() as f64;
    let (wn, wq, wnq) = (w(n), w(q), w(nq));
    inv(q) * (wn - wnq) + inv(nq) * (wq - wn) + inv(n) * (wnq - wq)
}

/// The single `(n, q)` summand of the bare gamma sum:
/// `|a_n|^2 |a_q|^2 (q.n_perp)^2/2 (1/|n|^2 - 1/|q|^2) beta_{n,q}`.
///
/// Degenerate pairs and `n + q = 0` are short-circuited to exact zero before
/// any division.
pub fn gamma_term(a: &CoefficientSequence, n: Mode, q: Mode, s: f64) -> f64 {
    weighted_term(a.get(n), a.get(q), n, q, s)
}

fn weighted_term(an: f64, aq: f64, n: Mode, q: Mode, s: f64) -> f64 {
    if (n + q).is_zero() {
        return 0.0;
    }
    let pd = q.perp_dot(n);
    if pd == 0 || n.norm_sq() == q.norm_sq() {
        return 0.0;
    }
    let bracket = 1.0 / n.norm_sq() as f64 - 1.0 / q.norm_sq() as f64;
    an * an * aq * aq * (pd * pd) as f64 / 2.0 * bracket * beta(n, q, s)
}

/// Prefactor convention for reported gamma values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefactorMode {
    /// Includes the `1/(2 pi)^4` prefactor.
    PaperPrefactor,
    /// The raw double sum.
    Bare,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub s: f64,
    pub sequence_id: String,
    /// Bare-mode value; `gamma_paper` is exactly `gamma_bare / (2 pi)^4`.
    pub gamma_bare: f64,
    pub gamma_paper: f64,
    /// `None` means the finite support was summed exactly.
    pub partial_radius: Option<i64>,
    /// Number of non-degenerate ordered pairs accumulated.
    pub term_count: usize,
}

impl GammaReport {
    pub fn value(&self, mode: PrefactorMode) -> f64 {
        match mode {
            PrefactorMode::Bare => self.gamma_bare,
            PrefactorMode::PaperPrefactor => self.gamma_paper,
        }
    }
}

/// Bare gamma over ordered support pairs. With `summation_radius = None` the
/// whole stored support enters (exact for finite supports); otherwise only
/// modes with `|n|, |q| < summation_radius` are kept, matching the partial
/// sums `gamma_N`.
pub fn gamma(a: &CoefficientSequence, s: f64, summation_radius: Option<i64>) -> GammaReport {
    let modes: Vec<(Mode, f64)> = a
        .support()
        .filter(|(m, _)| match summation_radius {
            Some(r) => m.norm_sq() < r * r,
            None => true,
        })
        .collect();
    // Partition by n; deterministic pairwise reduction over the fixed order.
    let per_n: Vec<(f64, usize)> = modes
        .par_iter()
        .map(|&(n, an)| {
            let mut count = 0usize;
            let terms: Vec<f64> = modes
                .iter()
                .map(|&(q, aq)| {
                    let t = weighted_term(an, aq, n, q, s);
                    if t != 0.0 {
                        count += 1;
                    }
                    t
                })
                .collect();
            (pairwise_sum(&terms), count)
        })
        .collect();
    let sums: Vec<f64> = per_n.iter().map(|(v, _)| *v).collect();
    let gamma_bare = pairwise_sum(&sums);
    GammaReport {
        s,
        sequence_id: a.content_id(),
        gamma_bare,
        gamma_paper: gamma_bare / two_pi_pow4(),
        partial_radius: summation_radius,
        term_count: per_n.iter().map(|(_, c)| c).sum(),
    }
}

/// Bare closed form of `E ||B1||_{H^s}^2`:
/// `sum <n+q>^{2s} (q.n_perp)^2/2 (1/|q|^2 - 1/|n|^2)^2 |a_q|^2 |a_n|^2`.
pub fn expected_b1_normsq_closed(a: &CoefficientSequence, s: f64) -> f64 {
    let modes: Vec<(Mode, f64)> = a.support().collect();
    let per_n: Vec<f64> = modes
        .par_iter()
        .map(|&(n, an)| {
            let terms: Vec<f64> = modes
                .iter()
                .map(|&(q, aq)| {
                    if (n + q).is_zero() {
                        return 0.0;
                    }
                    let pd = q.perp_dot(n);
                    if pd == 0 {
                        return 0.0;
                    }
                    let diff = 1.0 / q.norm_sq() as f64 - 1.0 / n.norm_sq() as f64;
                    ((n + q).bracket_sq() as f64).powf(s)
                        * (pd * pd) as f64
                        / 2.0
                        * diff
                        * diff
                        * aq
                        * aq
                        * an
                        * an
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&per_n)
}

/// Bare closed form of `E <Omega, B2(Omega)>_{H^s}`:
/// `1/2 sum <n>^{2s} |a_n|^2 |a_q|^2 (q.n_perp)^2 (1/|n|^2 - 1/|q|^2)(1/|q|^2 - 1/|q+n|^2)`.
pub fn expected_omega_b2_closed(a: &CoefficientSequence, s: f64) -> f64 {
    let modes: Vec<(Mode, f64)> = a.support().collect();
    let per_n: Vec<f64> = modes
        .par_iter()
        .map(|&(n, an)| {
            let terms: Vec<f64> = modes
                .iter()
                .map(|&(q, aq)| {
                    if (n + q).is_zero() {
                        return 0.0;
                    }
                    let pd = q.perp_dot(n);
                    if pd == 0 {
                        return 0.0;
                    }
                    let inv_n = 1.0 / n.norm_sq() as f64;
                    let inv_q = 1.0 / q.norm_sq() as f64;
                    let inv_nq = 1.0 / (n + q).norm_sq() as f64;
                    0.5 * (n.bracket_sq() as f64).powf(s)
                        * an
                        * an
                        * aq
                        * aq
                        * (pd * pd) as f64
                        * (inv_n - inv_q)
                        * (inv_q - inv_nq)
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&per_n)
}

/// Both routes to gamma: the direct bare sum, and
/// `E||B1||^2 + 2 E<Omega, B2>`. They agree as an algebraic identity.
pub fn gamma_consistency(a: &CoefficientSequence, s: f64) -> (f64, f64) {
    let lhs = gamma(a, s, None).gamma_bare;
    let rhs = expected_b1_normsq_closed(a, s) + 2.0 * expected_omega_b2_closed(a, s);
    (lhs, rhs)
}

/// A pair is degenerate iff the modes are collinear or share `|n|^2`;
/// exact integer arithmetic.
pub fn degenerate_pair(n: Mode, q: Mode) -> bool {
    debug_assert!(!n.is_zero() && !q.is_zero());
    n.perp_dot(q) == 0 || n.norm_sq() == q.norm_sq()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum SupportClass {
    Line { direction: Mode },
    Circle { radius_sq: i64 },
    NonDegenerate,
    Empty,
}

/// Line if all support modes lie on one line through the origin, else Circle
/// if they share `|n|^2`, else NonDegenerate.
pub fn classify_support(a: &CoefficientSequence) -> SupportClass {
    let modes = a.support_modes();
    let Some(&first) = modes.first() else {
        return SupportClass::Empty;
    };
    let dir = first.primitive_direction().expect("support modes are nonzero");
    if modes.iter().all(|m| m.perp_dot(dir) == 0) {
        return SupportClass::Line { direction: dir };
    }
    let r = first.norm_sq();
    if modes.iter().all(|m| m.norm_sq() == r) {
        return SupportClass::Circle { radius_sq: r };
    }
    SupportClass::NonDegenerate
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub points: Vec<(f64, f64)>,
    /// First `s` in the grid with `|gamma_bare| > threshold`.
    pub first_flagged: Option<(f64, f64)>,
}

/// Gamma across an `s` grid with a detection threshold on the bare value.
pub fn scan_s(a: &CoefficientSequence, s_grid: &[f64], threshold: f64) -> ScanResult {
    assert!(!s_grid.is_empty(), "s grid must be nonempty");
    let points: Vec<(f64, f64)> =
        s_grid.iter().map(|&s| (s, gamma(a, s, None).gamma_bare)).collect();
    let first_flagged = points.iter().copied().find(|&(_, g)| g.abs() > threshold);
    ScanResult { points, first_flagged }
}

/// Default detection threshold for [`scan_s`].
pub const SCAN_THRESHOLD: f64 = 1e-12;

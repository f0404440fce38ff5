//! Small numeric helpers shared across modules.

/// Pairwise (tree) summation. Deterministic for a fixed input order and much
/// better conditioned than sequential accumulation on long sums.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Least-squares fit of `y ~ c2 t^2 + c3 t^3`.
pub fn fit_quadratic_cubic(t: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(t.len(), y.len());
    let (mut s4, mut s5, mut s6, mut b2, mut b3) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&ti, &yi) in t.iter().zip(y) {
        let t2 = ti * ti;
        let t3 = t2 * ti;
        s4 += t2 * t2;
        s5 += t2 * t3;
        s6 += t3 * t3;
        b2 += yi * t2;
        b3 += yi * t3;
    }
    let det = s4 * s6 - s5 * s5;
    ((s6 * b2 - s5 * b3) / det, (s4 * b3 - s5 * b2) / det)
}

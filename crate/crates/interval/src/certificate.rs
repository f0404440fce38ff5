//! Rigorous enclosure of the partial gamma sum and the analytic tail bound,
//! assembled into a machine-checkable positivity certificate.

use crate::{pairwise_interval_sum, Interval, IntervalError};
use serde::Serialize;
use std::collections::HashMap;
use std::time::Instant;

/// Profiles with a certified evaluation path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertProfile {
    /// `a_n = 1/(<n>^5 log(3 + <n>^2))`.
    PowerLog,
    /// `a_n = 0`; degenerate baseline.
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    PositiveCertified,
    NegativeCertified,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub profile_id: String,
    pub s: f64,
    pub n: i64,
    pub half_gamma_n: [f64; 2],
    pub epsilon: [f64; 2],
    pub verdict: Verdict,
    pub cpu_info: String,
    pub runtime_ms: u64,
}

/// Weight `(1 + |m|^2)^{2s}` as used by the published certificate run (the
/// squared bracket enters with exponent `2s`, so the certified `s = 1/2`
/// needs only exact integer arithmetic). Requires `4s` integer.
fn paper_weight(bracket_sq: i64, s: f64) -> Result<Interval, IntervalError> {
    let four_s = 4.0 * s;
    if four_s < 0.0 || four_s.fract() != 0.0 || four_s > 64.0 {
        return Err(IntervalError::UnsupportedS(s));
    }
    let half_exp = four_s as u32; // exponent of sqrt(bracket_sq)
    let base = Interval::from_int(bracket_sq);
    if half_exp.is_multiple_of(2) {
        Ok(base.integer_pow(half_exp / 2))
    } else {
        Ok(base.sqrt()?.integer_pow(half_exp))
    }
}

/// `a_n^2` enclosure for the certified profiles, by squared bracket.
fn weight_sq(profile: CertProfile, bracket_sq: i64) -> Result<Interval, IntervalError> {
    match profile {
        CertProfile::Zero => Ok(Interval::ZERO),
        CertProfile::PowerLog => {
            let b = Interval::from_int(bracket_sq);
            let ln_term = Interval::from_int(3 + bracket_sq - 1).add(Interval::ONE).ln()?;
            let denom = b.integer_pow(5).mul(ln_term.mul(ln_term));
            Interval::ONE.div(denom)
        }
    }
}

struct WeightTable {
    inv_norm: HashMap<i64, Interval>,
    weight: HashMap<i64, Interval>,
    wsq: HashMap<i64, Interval>,
}

impl WeightTable {
    fn build(profile: CertProfile, n: i64, s: f64) -> Result<WeightTable, IntervalError> {
        let mut inv_norm = HashMap::new();
        let mut weight = HashMap::new();
        let mut wsq = HashMap::new();
        // |n + q|^2 reaches at most 4 N^2 over the summation square.
        for l2 in 1..=(4 * n * n) {
            inv_norm.insert(l2, Interval::ONE.div(Interval::from_int(l2))?);
            weight.insert(l2, paper_weight(1 + l2, s)?);
            if l2 < n * n {
                wsq.insert(l2, weight_sq(profile, 1 + l2)?);
            }
        }
        Ok(WeightTable { inv_norm, weight, wsq })
    }
}

/// Enclosure of `1/2 gamma_N`: the bare half-sum
/// `sum_{0<|n|,|q|<N} a_n^2 a_q^2 (q.n_perp)^2/2 (1/|n|^2 - 1/|q|^2) beta_{n,q}`
/// with the published-run weights of [`paper_weight`]. This is exactly the
/// quantity enclosed by the published certificate at `s = 1/2`.
pub fn gamma_partial_interval(
    profile: CertProfile,
    s: f64,
    n_radius: i64,
) -> Result<Interval, IntervalError> {
    let table = WeightTable::build(profile, n_radius, s)?;
    let lim = n_radius * n_radius - 1;
    let mut modes = Vec::new();
    for n1 in -n_radius..=n_radius {
        for n2 in -n_radius..=n_radius {
            let l2 = n1 * n1 + n2 * n2;
            if l2 > 0 && l2 <= lim {
                modes.push((n1, n2, l2));
            }
        }
    }
    let mut per_n = Vec::with_capacity(modes.len());
    for &(n1, n2, nl2) in &modes {
        let wsq_n = table.wsq[&nl2];
        let w_n = table.weight[&nl2];
        let inv_n = table.inv_norm[&nl2];
        let mut inner = Interval::ZERO;
        for &(q1, q2, ql2) in &modes {
            if n1 + q1 == 0 && n2 + q2 == 0 {
                continue;
            }
            // q . n_perp, exact integer
            let pd = -q1 * n2 + q2 * n1;
            if pd == 0 || nl2 == ql2 {
                continue; // exactly-zero summand
            }
            let sl2 = (n1 + q1) * (n1 + q1) + (n2 + q2) * (n2 + q2);
            let inv_q = table.inv_norm[&ql2];
            let inv_s = table.inv_norm[&sl2];
            let w_q = table.weight[&ql2];
            let w_s = table.weight[&sl2];
            // grouped beta: 1/|q|^2 (Wn - Wnq) + 1/|n+q|^2 (Wq - Wn) + 1/|n|^2 (Wnq - Wq)
            let beta = inv_q
                .mul(w_n.sub(w_s))
                .add(inv_s.mul(w_q.sub(w_n)))
                .add(inv_n.mul(w_s.sub(w_q)));
            let bracket = inv_n.sub(inv_q);
            let half_pd_sq = Interval::exact((pd * pd) as f64 / 2.0);
            let term = wsq_n.mul(table.wsq[&ql2]).mul(half_pd_sq).mul(bracket).mul(beta);
            inner = inner.add(term);
        }
        per_n.push(inner);
    }
    Ok(pairwise_interval_sum(&per_n))
}

/// Upper enclosure of the analytic tail `epsilon = (1536/N^5)(10/6 + 3/N^8)`,
/// valid for the power-log profile at `s = 1/2`.
pub fn tail_bound(n_radius: i64) -> Result<Interval, IntervalError> {
    if n_radius < 2 {
        return Err(IntervalError::TailRadius(n_radius));
    }
    let n = Interval::from_int(n_radius);
    let lead = Interval::from_int(1536).div(n.integer_pow(5))?;
    let inner = Interval::from_int(10)
        .div(Interval::from_int(6))?
        .add(Interval::from_int(3).div(n.integer_pow(8))?);
    Ok(lead.mul(inner))
}

fn cpu_info() -> String {
    std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| {
            s.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|v| v.trim().to_string())
        })
        .unwrap_or_else(|| "unknown".to_string())
}

/// Assemble the certificate: the tail is only certified for the power-log
/// profile at `s = 1/2` (and trivially for the zero profile).
pub fn certify(profile: CertProfile, s: f64, n_radius: i64) -> Result<Certificate, IntervalError> {
    if s != 0.5 {
        return Err(IntervalError::UnsupportedTail);
    }
    let start = Instant::now();
    let half_gamma = gamma_partial_interval(profile, s, n_radius)?;
    let eps = tail_bound(n_radius)?;
    let verdict = if half_gamma.lo() - eps.hi() > 0.0 {
        Verdict::PositiveCertified
    } else if half_gamma.hi() + eps.hi() < 0.0 {
        Verdict::NegativeCertified
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        profile_id: match profile {
            CertProfile::PowerLog => "powerlog".into(),
            CertProfile::Zero => "zero".into(),
        },
        s,
        n: n_radius,
        half_gamma_n: [half_gamma.lo(), half_gamma.hi()],
        epsilon: [eps.lo(), eps.hi()],
        verdict,
        cpu_info: cpu_info(),
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

//! Real symmetric coefficient sequences `(a_n)` defining Gaussian measures.

use crate::lattice::Mode;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileTag {
    ExplicitList,
    PowerLog,
    Custom,
}

#[derive(Debug, Error, PartialEq)]
pub enum SequenceError {
    #[error("a_0 must be zero (mean-zero vorticity), got {0}")]
    NonzeroMean(f64),
    #[error("symmetry violation at {mode:?}: a_n = {value}, a_-n = {mirror}")]
    AsymmetricPair { mode: Mode, value: f64, mirror: f64 },
    #[error("mode {mode:?} missing its mirror -n")]
    MissingMirror { mode: Mode },
    #[error("radius must be >= 1, got {0}")]
    BadRadius(i64),
    #[error("entry {mode:?} lies outside the declared radius {radius}")]
    OutsideRadius { mode: Mode, radius: i64 },
    #[error("invalid sequence JSON: {0}")]
    Json(String),
}

/// A finitely supported sequence `(a_n)`: real values, `a_0 = 0`,
/// `a_{-n} = a_n`. Zero values are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSequence {
    entries: BTreeMap<Mode, f64>,
    radius: i64,
    profile_tag: ProfileTag,
}

impl CoefficientSequence {
    pub fn empty() -> Self {
        CoefficientSequence { entries: BTreeMap::new(), radius: 1, profile_tag: ProfileTag::Custom }
    }

    /// Strict constructor: the given list must already satisfy the symmetry
    /// invariants (both `n` and `-n` present with equal values, no `a_0`).
    pub fn explicit(pairs: &[(Mode, f64)]) -> Result<Self, SequenceError> {
        let mut entries = BTreeMap::new();
        for &(m, v) in pairs {
            if m.is_zero() {
                if v != 0.0 {
                    return Err(SequenceError::NonzeroMean(v));
                }
                continue;
            }
            if v != 0.0 {
                entries.insert(m, v);
            }
        }
        for (&m, &v) in &entries {
            match entries.get(&-m) {
                None => return Err(SequenceError::MissingMirror { mode: m }),
                Some(&w) if w != v => {
                    return Err(SequenceError::AsymmetricPair { mode: m, value: v, mirror: w })
                }
                _ => {}
            }
        }
        let radius = support_radius(&entries).max(1);
        Ok(CoefficientSequence { entries, radius, profile_tag: ProfileTag::ExplicitList })
    }

    /// Symmetrizing constructor: mirror modes are derived when absent.
    pub fn explicit_symmetrized(pairs: &[(Mode, f64)]) -> Result<Self, SequenceError> {
        let mut entries: BTreeMap<Mode, f64> = BTreeMap::new();
        for &(m, v) in pairs {
            if m.is_zero() {
                if v != 0.0 {
                    return Err(SequenceError::NonzeroMean(v));
                }
                continue;
            }
            for key in [m, -m] {
                match entries.get(&key) {
                    Some(&w) if w != v => {
                        return Err(SequenceError::AsymmetricPair { mode: m, value: v, mirror: w })
                    }
                    _ => {
                        if v != 0.0 {
                            entries.insert(key, v);
                        }
                    }
                }
            }
        }
        let radius = support_radius(&entries).max(1);
        Ok(CoefficientSequence { entries, radius, profile_tag: ProfileTag::ExplicitList })
    }

    /// `a_n = 1/(<n>^5 log(3 + <n>^2))` on `0 < |n| <= radius`.
    pub fn power_log(radius: i64) -> Result<Self, SequenceError> {
        Self::radial_profile(radius, ProfileTag::PowerLog, |bracket_sq| {
            1.0 / (bracket_sq.powf(2.5) * (3.0 + bracket_sq).ln())
        })
    }

    /// `a_n = <n>^{-2}` on `0 < |n| <= radius`; exploratory only.
    pub fn gibbs_like(radius: i64) -> Result<Self, SequenceError> {
        Self::radial_profile(radius, ProfileTag::Custom, |bracket_sq| 1.0 / bracket_sq)
    }

    fn radial_profile(
        radius: i64,
        tag: ProfileTag,
        value: impl Fn(f64) -> f64,
    ) -> Result<Self, SequenceError> {
        if radius < 1 {
            return Err(SequenceError::BadRadius(radius));
        }
        let mut entries = BTreeMap::new();
        let r_sq = radius * radius;
        for n1 in -radius..=radius {
            for n2 in -radius..=radius {
                let m = Mode::new(n1, n2);
                let l2 = m.norm_sq();
                if l2 > 0 && l2 <= r_sq {
                    entries.insert(m, value(m.bracket_sq() as f64));
                }
            }
        }
        Ok(CoefficientSequence { entries, radius, profile_tag: tag })
    }

    pub fn get(&self, m: Mode) -> f64 {
        self.entries.get(&m).copied().unwrap_or(0.0)
    }

    /// Nonzero entries in lexicographic mode order.
    pub fn support(&self) -> impl Iterator<Item = (Mode, f64)> + '_ {
        self.entries.iter().map(|(&m, &v)| (m, v))
    }

    pub fn support_modes(&self) -> Vec<Mode> {
        self.entries.keys().copied().collect()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    /// Smallest `R` with all support inside `|n| <= R`.
    pub fn support_radius(&self) -> i64 {
        support_radius(&self.entries)
    }

    pub fn profile_tag(&self) -> ProfileTag {
        self.profile_tag
    }

    /// `a_m = a_n` whenever `|m| = |n|`, with absent modes counting as zero:
    /// every lattice point on an occupied circle must carry the same value.
    pub fn is_radial(&self) -> bool {
        let mut by_norm: BTreeMap<i64, f64> = BTreeMap::new();
        for (m, v) in self.support() {
            match by_norm.get(&m.norm_sq()) {
                Some(&w) if w != v => return false,
                _ => {
                    by_norm.insert(m.norm_sq(), v);
                }
            }
        }
        for (&l2, &v) in &by_norm {
            let r = (l2 as f64).sqrt() as i64 + 1;
            for n1 in -r..=r {
                for n2 in -r..=r {
                    let m = Mode::new(n1, n2);
                    if m.norm_sq() == l2 && self.get(m) != v {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `sum <n>^{2 sigma} |a_n|^2` over the stored support.
    pub fn h_sigma_norm_sq(&self, sigma: f64) -> f64 {
        let terms: Vec<f64> = self
            .support()
            .map(|(m, v)| (m.bracket_sq() as f64).powf(sigma) * v * v)
            .collect();
        crate::util::pairwise_sum(&terms)
    }

    /// Stable identifier derived from the support content, for run manifests.
    pub fn content_id(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x100000001b3);
        };
        for (m, v) in self.support() {
            eat(m.n1 as u64);
            eat(m.n2 as u64);
            eat(v.to_bits());
        }
        format!("{h:016x}")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let profile = match self.profile_tag {
            ProfileTag::PowerLog => "power_log",
            ProfileTag::ExplicitList => "explicit",
            ProfileTag::Custom => "custom",
        };
        let mut out = serde_json::json!({ "profile": profile, "radius": self.radius });
        if self.profile_tag != ProfileTag::PowerLog {
            let entries: Vec<serde_json::Value> = self
                .support()
                .map(|(m, v)| serde_json::json!([m.n1, m.n2, v]))
                .collect();
            out["entries"] = serde_json::Value::Array(entries);
        }
        out
    }

    /// Load from the JSON object form. Mirror modes are re-derived and the
    /// symmetry invariants validated.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, SequenceError> {
        let profile = v
            .get("profile")
            .and_then(|p| p.as_str())
            .ok_or_else(|| SequenceError::Json("missing 'profile'".into()))?;
        let radius = v
            .get("radius")
            .and_then(|r| r.as_i64())
            .ok_or_else(|| SequenceError::Json("missing integer 'radius'".into()))?;
        match profile {
            "power_log" => Self::power_log(radius),
            "explicit" | "custom" => {
                let entries = v
                    .get("entries")
                    .and_then(|e| e.as_array())
                    .ok_or_else(|| SequenceError::Json("missing 'entries' array".into()))?;
                let mut pairs = Vec::with_capacity(entries.len());
                for e in entries {
                    let row = e
                        .as_array()
                        .filter(|r| r.len() == 3)
                        .ok_or_else(|| SequenceError::Json("entry must be [n1,n2,value]".into()))?;
                    let n1 = row[0]
                        .as_i64()
                        .ok_or_else(|| SequenceError::Json("n1 must be an integer".into()))?;
                    let n2 = row[1]
                        .as_i64()
                        .ok_or_else(|| SequenceError::Json("n2 must be an integer".into()))?;
                    let val = row[2]
                        .as_f64()
                        .ok_or_else(|| SequenceError::Json("value must be a number".into()))?;
                    pairs.push((Mode::new(n1, n2), val));
                }
                let mut seq = Self::explicit_symmetrized(&pairs)?;
                if seq.support_radius() > radius {
                    return Err(SequenceError::OutsideRadius {
                        mode: seq.support_modes().into_iter().max_by_key(|m| m.norm_sq()).unwrap(),
                        radius,
                    });
                }
                seq.radius = radius.max(1);
                if profile == "custom" {
                    seq.profile_tag = ProfileTag::Custom;
                }
                Ok(seq)
            }
            other => Err(SequenceError::Json(format!("unknown profile '{other}'"))),
        }
    }
}

fn support_radius(entries: &BTreeMap<Mode, f64>) -> i64 {
    entries.keys().map(|m| (m.norm_sq() as f64).sqrt().ceil() as i64).max().unwrap_or(0)
}

/// Named sequences used across tests, the CLI and the verification corpus.
pub mod profiles {
    use super::*;

    /// `a_n = 1` on `{(1,0), (-1,0), (0,2), (0,-2)}`.
    pub fn lemma61() -> CoefficientSequence {
        CoefficientSequence::explicit(&[
            (Mode::new(1, 0), 1.0),
            (Mode::new(-1, 0), 1.0),
            (Mode::new(0, 2), 1.0),
            (Mode::new(0, -2), 1.0),
        ])
        .expect("static support is symmetric")
    }

    /// Unit coefficients on `{(k,0): 1 <= |k| <= 2}`.
    pub fn line() -> CoefficientSequence {
        CoefficientSequence::explicit(&[
            (Mode::new(1, 0), 1.0),
            (Mode::new(-1, 0), 1.0),
            (Mode::new(2, 0), 1.0),
            (Mode::new(-2, 0), 1.0),
        ])
        .expect("static support is symmetric")
    }

    /// Unit coefficients on the full lattice circle `|n|^2 = 25` (12 modes).
    pub fn circle25() -> CoefficientSequence {
        let mut pairs = Vec::new();
        for n1 in -5..=5i64 {
            for n2 in -5..=5i64 {
                if n1 * n1 + n2 * n2 == 25 {
                    pairs.push((Mode::new(n1, n2), 1.0));
                }
            }
        }
        CoefficientSequence::explicit(&pairs).expect("circle support is symmetric")
    }

    /// Seeded random symmetric support: `free_pairs` modes drawn in
    /// `0 < sup_norm <= max_coord` from the positive half-lattice, mirrored,
    /// all values 1.
    pub fn random_symmetric(free_pairs: usize, max_coord: i64, seed: u64) -> CoefficientSequence {
        let mut pairs = Vec::new();
        let mut draw = 0u64;
        while pairs.len() < 2 * free_pairs {
            let bits = crate::rng::keyed_u64(seed, &[0x5eed, draw]);
            draw += 1;
            let span = (2 * max_coord + 1) as u64;
            let n1 = (bits % span) as i64 - max_coord;
            let n2 = ((bits >> 32) % span) as i64 - max_coord;
            let m = Mode::new(n1, n2);
            if m.is_zero() || !m.in_positive_half() || pairs.iter().any(|&(p, _)| p == m) {
                continue;
            }
            pairs.push((m, 1.0));
            pairs.push((-m, 1.0));
        }
        CoefficientSequence::explicit(&pairs).expect("mirrored by construction")
    }
}

//! Gaussian vorticity samples `c_n = a_n g_n` with `g_n = r_n + i s_n` on the
//! positive half-lattice, `g_{-n} = conj(g_n)`, all real parts iid N(0,1).

use crate::field::SpectralField;
use crate::lattice::Mode;
use crate::rng::gaussian_draw;
use crate::sequence::CoefficientSequence;

#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub sequence: CoefficientSequence,
    pub truncation: i64,
    pub seed: u64,
    pub sample_count: usize,
}

impl SamplerConfig {
    pub fn new(sequence: CoefficientSequence, truncation: i64, seed: u64, sample_count: usize) -> Self {
        assert!(
            truncation >= sequence.support_radius(),
            "truncation {truncation} smaller than support radius {}",
            sequence.support_radius()
        );
        SamplerConfig { sequence, truncation, seed, sample_count }
    }

    /// Support representatives in `Z^2_+`, in a fixed order; the rank of a
    /// mode in this list keys its RNG stream.
    pub fn positive_reps(&self) -> Vec<Mode> {
        self.sequence
            .support_modes()
            .into_iter()
            .filter(|m| m.in_positive_half())
            .collect()
    }
}

/// Draw sample `index`. Deterministic in `(seed, index)` and independent of
/// evaluation order; Hermitian by construction.
pub fn sample(cfg: &SamplerConfig, index: usize) -> SpectralField {
    assert!(index < cfg.sample_count, "index {index} >= sample_count {}", cfg.sample_count);
    let mut field = SpectralField::zeros(cfg.truncation);
    for (rank, m) in cfg.positive_reps().into_iter().enumerate() {
        let a = cfg.sequence.get(m);
        let re = gaussian_draw(cfg.seed, index as u64, rank as u64, 0);
        let im = gaussian_draw(cfg.seed, index as u64, rank as u64, 1);
        let g = num_complex::Complex64::new(re, im);
        field.set(m, a * g);
        field.set(-m, a * g.conj());
    }
    field
}

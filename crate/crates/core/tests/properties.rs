//! Property tests for the spectral core: Hermitian structure, bilinear-form
//! identities, dual-path equivalence, and sampler reproducibility.

use euler_gauss_core::bilinear::{b1, bilinear_b, ConvolutionPath, TruncationMode};
use euler_gauss_core::field::SpectralField;
use euler_gauss_core::lattice::Mode;
use euler_gauss_core::sampler::{sample, SamplerConfig};
use euler_gauss_core::sequence::{profiles, CoefficientSequence};
use num_complex::Complex64;
use proptest::prelude::*;

/// Hermitian field on `|n_i| <= trunc` from free coefficients on the
/// positive half-lattice.
fn hermitian_field(trunc: i64, coeffs: &[(i64, i64, f64, f64)]) -> SpectralField {
    let mut f = SpectralField::zeros(trunc);
    for &(n1, n2, re, im) in coeffs {
        let m = Mode::new(n1.rem_euclid(trunc + 1), n2.rem_euclid(2 * trunc + 1) - trunc);
        if m.is_zero() || !m.in_positive_half() || m.sup_norm() > trunc {
            continue;
        }
        let c = Complex64::new(re, im);
        f.set(m, c);
        f.set(-m, c.conj());
    }
    f
}

fn coeff_strategy(n: usize) -> impl Strategy<Value = Vec<(i64, i64, f64, f64)>> {
    proptest::collection::vec(
        (0..6i64, 0..13i64, -1.0f64..1.0, -1.0f64..1.0),
        1..n,
    )
}

/// Independent evaluation of `<U[b].grad a, a>` in the coefficient pairing,
/// straight from the transport convolution (not via `bilinear_b`).
fn transport_pairing(b: &SpectralField, a: &SpectralField) -> f64 {
    let big = 2 * a.truncation().max(b.truncation());
    let mut transport = SpectralField::zeros(big);
    for (k, cb) in b.nonzero() {
        if k.is_zero() {
            continue;
        }
        for (m, ca) in a.nonzero() {
            if m.is_zero() {
                continue;
            }
            let w = m.perp_dot(k) as f64 / k.norm_sq() as f64;
            transport.add_at(k + m, w * cb * ca);
        }
    }
    transport.inner_hs(&a.with_truncation(big), 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outputs_stay_hermitian_and_mean_zero(coeffs in coeff_strategy(8)) {
        let f = hermitian_field(4, &coeffs);
        prop_assert_eq!(f.hermitian_defect(), 0.0);
        let bf = bilinear_b(&f, &f, 8, ConvolutionPath::Direct);
        let scale = bf.max_abs().max(1.0);
        prop_assert!(bf.hermitian_defect() <= 1e-12 * scale);
        prop_assert_eq!(bf.get(Mode::ZERO), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn bilinear_form_is_symmetric(ca in coeff_strategy(6), cb in coeff_strategy(6)) {
        let a = hermitian_field(4, &ca);
        let b = hermitian_field(4, &cb);
        let ab = bilinear_b(&a, &b, 8, ConvolutionPath::Direct);
        let ba = bilinear_b(&b, &a, 8, ConvolutionPath::Direct);
        for m in ab.modes() {
            prop_assert_eq!(ab.get(m), ba.get(m));
        }
    }

    #[test]
    fn transport_term_is_l2_orthogonal(ca in coeff_strategy(6), cb in coeff_strategy(6)) {
        let a = hermitian_field(4, &ca);
        let b = hermitian_field(4, &cb);
        let scale = (a.enstrophy() * (1.0 + b.enstrophy())).max(1.0);
        // <U[b].grad a, a> = 0, so in particular <B1(a), a> = 0
        prop_assert!(transport_pairing(&b, &a).abs() <= 1e-12 * scale);
        prop_assert!(transport_pairing(&a, &a).abs() <= 1e-12 * scale);
        let b1a = b1(&a, TruncationMode::Grow, ConvolutionPath::Direct);
        let pairing = a.with_truncation(b1a.truncation()).inner_hs(&b1a, 0.0);
        prop_assert!(pairing.abs() <= 1e-12 * scale);
    }

    #[test]
    fn direct_and_fft_paths_agree(ca in coeff_strategy(8), cb in coeff_strategy(8)) {
        let a = hermitian_field(4, &ca);
        let b = hermitian_field(4, &cb);
        let d = bilinear_b(&a, &b, 6, ConvolutionPath::Direct);
        let x = bilinear_b(&a, &b, 6, ConvolutionPath::Fft);
        // relative to the output when it is nonzero, else to the input size
        // (degenerate supports make the direct result exactly zero)
        let scale = d.max_abs().max(a.max_abs() * b.max_abs()).max(f64::MIN_POSITIVE);
        for m in d.modes() {
            prop_assert!((d.get(m) - x.get(m)).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn grow_never_changes_retained_coefficients(ca in coeff_strategy(8)) {
        let a = hermitian_field(3, &ca);
        let small = bilinear_b(&a, &a, 3, ConvolutionPath::Direct);
        let grown = bilinear_b(&a, &a, 6, ConvolutionPath::Direct);
        for m in small.modes() {
            prop_assert_eq!(small.get(m), grown.get(m));
        }
    }

    #[test]
    fn sobolev_monotone_in_s(ca in coeff_strategy(8), s1 in 0.0f64..2.0, ds in 0.0f64..2.0) {
        let a = hermitian_field(4, &ca);
        prop_assert!(a.sobolev_norm_sq(s1) <= a.sobolev_norm_sq(s1 + ds) + 1e-12);
    }
}

/// Spec-scale dual-path check: a dense pseudo-random field at N = 16.
#[test]
fn dual_path_equivalence_at_n16() {
    let seq = CoefficientSequence::gibbs_like(16).unwrap();
    let cfg = SamplerConfig::new(seq, 16, melody(), 4);
    let f = sample(&cfg, 2);
    let d = bilinear_b(&f, &f, 16, ConvolutionPath::Direct);
    let x = bilinear_b(&f, &f, 16, ConvolutionPath::Fft);
    let scale = d.max_abs();
    let mut worst = 0.0f64;
    for m in d.modes() {
        worst = worst.max((d.get(m) - x.get(m)).norm());
    }
    assert!(worst <= 1e-10 * scale, "worst {worst} at scale {scale}");
}

fn melody() -> u64 {
    0x5eed_cafe
}

/// Identical (seed, index) must give bit-identical estimates regardless of
/// the thread count used for the ensemble.
#[test]
fn ensemble_is_bit_reproducible_across_thread_counts() {
    use euler_gauss_core::mc::mc_estimate;
    use euler_gauss_core::wick::Functional;

    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let cfg = SamplerConfig::new(profiles::lemma61(), 2, 42, 2048);
            mc_estimate(&cfg, Functional::B1NormSq(0.5), 2048)
        })
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
}

#[test]
fn trajectory_csv_exports() {
    use euler_gauss_core::flow::evolve;

    let cfg = SamplerConfig::new(profiles::lemma61(), 4, 7, 1);
    let f = sample(&cfg, 0);
    let traj = evolve(&f, &[0.0, 0.01], 1e-3, ConvolutionPath::Auto).unwrap();
    let mut states_csv = Vec::new();
    traj.write_states_csv(&mut states_csv).unwrap();
    let text = String::from_utf8(states_csv).unwrap();
    assert!(text.starts_with("t,n1,n2,re,im\n"));
    assert!(text.lines().count() > 4);
    let mut summary_csv = Vec::new();
    traj.write_summary_csv(&mut summary_csv, 0.5).unwrap();
    let text = String::from_utf8(summary_csv).unwrap();
    assert!(text.starts_with("t,enstrophy,energy,hs_norm,w_norm\n"));
    assert_eq!(text.lines().count(), 3);
}

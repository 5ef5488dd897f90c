//! Property tests: invariants that must hold on randomly drawn instances,
//! not just on the frozen fixtures.

use proptest::prelude::*;

use matrixhear_core::banded::banded_step;
use matrixhear_core::cauchy::{consistency_residual, eigvec_last_entry_sq, xi_squared};
use matrixhear_core::eig::{eig_sym, Gauge};
use matrixhear_core::io::{
    parse_matrix, parse_spectral, write_matrix_string, write_spectral_string,
};
use matrixhear_core::mat::SymmetricMatrix;
use matrixhear_core::oracle::{gen_random_banded, gen_random_symmetric, InstanceSpec};
use matrixhear_core::spectral::{
    check_interlacing, extract_sign_indicators, extract_spectral_data, SignIndicators,
    StepScalars,
};
use matrixhear_core::telescopic::{reconstruct_full, telescopic_step};

fn dense(n: usize, seed: u64) -> Option<SymmetricMatrix> {
    gen_random_symmetric(n, seed).ok()
}

fn penta(n: usize, seed: u64) -> Option<SymmetricMatrix> {
    gen_random_banded(&InstanceSpec::new(n, 2, seed)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Extract followed by reconstruct is the identity on regular matrices.
    #[test]
    fn round_trip_is_identity(n in 2usize..7, seed in 0u64..1_000_000) {
        let m = dense(n, seed);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        let sd = extract_spectral_data(&m).unwrap();
        let signs = extract_sign_indicators(&m, Gauge::LastEntryPositive).unwrap();
        let back = reconstruct_full(&sd, &signs).unwrap();
        prop_assert!(m.max_abs_diff(&back) <= 1e-8);
    }

    /// Spectra of nested minors interlace.
    #[test]
    fn extracted_spectra_interlace(n in 2usize..8, seed in 0u64..1_000_000) {
        let m = dense(n, seed);
        prop_assume!(m.is_some());
        let sd = extract_spectral_data(&m.unwrap()).unwrap();
        for k in 1..n {
            prop_assert!(check_interlacing(sd.minor(k), sd.minor(k + 1), 1e-9).is_ok());
        }
    }

    /// The squared projections onto minor eigenvectors resolve the whole
    /// column norm: sum_r xi_r^2 = R2.
    #[test]
    fn xi_squared_resolves_column_norm(n in 2usize..8, seed in 0u64..1_000_000) {
        let m = dense(n, seed);
        prop_assume!(m.is_some());
        let sd = extract_spectral_data(&m.unwrap()).unwrap();
        let (sn, snp1) = (sd.minor(n - 1), sd.minor(n));
        let sc = StepScalars::new(sn, snp1).unwrap();
        let total: f64 = xi_squared(sn, snp1).unwrap().iter().sum();
        let scale = sc.r2().abs().max(1.0);
        prop_assert!((total - sc.r2()).abs() <= 1e-8 * scale);
    }

    /// Squared last entries of the grown eigenvectors sum to one.
    #[test]
    fn last_entries_sum_to_one(n in 2usize..8, seed in 0u64..1_000_000) {
        let m = dense(n, seed);
        prop_assume!(m.is_some());
        let sd = extract_spectral_data(&m.unwrap()).unwrap();
        let b = eigvec_last_entry_sq(sd.minor(n - 1), sd.minor(n)).unwrap();
        let total: f64 = b.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        prop_assert!(b.iter().all(|v| *v >= 0.0));
    }

    /// The trace-derived diagonal entry satisfies the consistency identity.
    #[test]
    fn consistency_identity_holds(n in 2usize..8, seed in 0u64..1_000_000) {
        let m = dense(n, seed);
        prop_assume!(m.is_some());
        let sd = extract_spectral_data(&m.unwrap()).unwrap();
        let (sn, snp1) = (sd.minor(n - 1), sd.minor(n));
        let h = snp1.power_sum(1) - sn.power_sum(1);
        prop_assert!(consistency_residual(sn, snp1, h).unwrap() <= 1e-8);
    }

    /// Per-step trace increments telescope to the full trace.
    #[test]
    fn step_traces_telescope(n in 2usize..8, seed in 0u64..1_000_000) {
        let m = dense(n, seed);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        let sd = extract_spectral_data(&m).unwrap();
        let mut total = sd.minor(1).get(0);
        for k in 1..n {
            total += StepScalars::new(sd.minor(k), sd.minor(k + 1)).unwrap().h();
        }
        prop_assert!((total - m.trace()).abs() <= 1e-9 * m.trace().abs().max(1.0));
    }

    /// Every sign vector yields a valid completion: the grown matrix from
    /// arbitrary signs still carries the prescribed next spectrum.
    #[test]
    fn any_sign_vector_matches_both_spectra(
        n in 2usize..6,
        seed in 0u64..1_000_000,
        mask in 0usize..32,
    ) {
        let m = dense(n + 1, seed);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        let sd = extract_spectral_data(&m).unwrap();
        let eig = eig_sym(&m.leading_minor(n), Gauge::LastEntryPositive).unwrap();
        let signs: Vec<i8> = (0..n).map(|r| if mask >> r & 1 == 1 { -1 } else { 1 }).collect();
        let step = telescopic_step(&eig, sd.minor(n + 1), &signs).unwrap();
        let grown = step.eig_next.assemble();
        let got = eig_sym(&grown, Gauge::Custom).unwrap();
        let scale = sd.minor(n + 1).diameter().max(1.0);
        for (a, b) in got.values().iter().zip(sd.minor(n + 1).values()) {
            prop_assert!((a - b).abs() <= 1e-8 * scale);
        }
        let minor_diff = grown.leading_minor(n).max_abs_diff(&m.leading_minor(n));
        prop_assert!(minor_diff <= 1e-9);
    }

    /// Flipping any single sign indicator changes the reconstruction.
    #[test]
    fn sign_flip_changes_the_matrix(n in 3usize..7, seed in 0u64..1_000_000, pick in 0usize..100) {
        let m = dense(n, seed);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        let sd = extract_spectral_data(&m).unwrap();
        let signs = extract_sign_indicators(&m, Gauge::LastEntryPositive).unwrap();
        let mut flipped = signs.per_step().to_vec();
        let step = pick % flipped.len();
        let idx = pick % flipped[step].len();
        flipped[step][idx] = -flipped[step][idx];
        let other = reconstruct_full(&sd, &SignIndicators::new(flipped).unwrap()).unwrap();
        prop_assert!(m.max_abs_diff(&other) > 1e-9);
    }

    /// Pentadiagonal step candidates arrive as exact antipodal pairs.
    #[test]
    fn penta_candidates_are_antipodal(n in 5usize..9, seed in 0u64..1_000_000) {
        let m = penta(n, seed);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        let k = n - 1;
        let eig = eig_sym(&m.leading_minor(k), Gauge::LastEntryPositive).unwrap();
        let snp1 = eig_sym(&m.leading_minor(n), Gauge::Custom).unwrap().spectrum();
        let set = banded_step(&eig, &snp1, 2, None).unwrap();
        prop_assert!(set.antipodal());
        prop_assert_eq!(set.len(), 2);
    }

    /// Writing then parsing a matrix or spectral file is the identity, and
    /// the written form is a fixpoint of the formatter.
    #[test]
    fn file_formats_are_canonical(n in 2usize..7, seed in 0u64..1_000_000) {
        let m = dense(n, seed);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        let text = write_matrix_string(&m);
        let back = parse_matrix(&text).unwrap();
        prop_assert_eq!(m.max_abs_diff(&back), 0.0);
        prop_assert_eq!(write_matrix_string(&back), text);

        let sd = extract_spectral_data(&m).unwrap();
        let stext = write_spectral_string(&sd);
        let sback = parse_spectral(&stext).unwrap();
        prop_assert_eq!(write_spectral_string(&sback), stext);
    }
}

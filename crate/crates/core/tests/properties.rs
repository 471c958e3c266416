use std::f64::consts::PI;

use dstc_relay::channel::{ChannelRealization, FadingModel};
use dstc_relay::constellation::{difference_set, SignalSet};
use dstc_relay::dstc::{coding_gain, DstcDesign, Mat2};
use dstc_relay::protocol::{check_exclusive_law, run_frame_dnf_xor, run_frame_dstc, NetworkMap};
use dstc_relay::relay_decoder::{build_h_eq, DecoderKind};
use dstc_relay::sim::{run_sweep, wilson, Scheme, SimConfig, Z_95};
use dstc_relay::stc_analysis::{dedup_subspaces, named_design, rank_spectrum, AnalysisOptions};
use dstc_relay::Complex64;
use nalgebra::Matrix4;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn signal_set() -> impl Strategy<Value = SignalSet> {
    prop_oneof![
        (1u32..=4).prop_map(|b| SignalSet::psk(b).unwrap()),
        prop::sample::select(vec![2u32, 4, 6]).prop_map(|b| SignalSet::square_qam(b).unwrap()),
        (2u32..=3, 0.0..PI).prop_map(|(b, t)| SignalSet::psk(b).unwrap().rotated(t).unwrap()),
    ]
}

fn complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| Complex64::new(a, b))
}

fn trace2_matrix() -> impl Strategy<Value = Mat2> {
    prop::array::uniform4(complex(1.0)).prop_filter_map("nonzero", |v| {
        let m = Mat2::new(v[0], v[1], v[2], v[3]);
        let tr: f64 = m.iter().map(|z| z.norm_sqr()).sum();
        (tr > 1e-6).then(|| m * Complex64::new((2.0 / tr).sqrt(), 0.0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_energy_and_label_round_trip(s in signal_set()) {
        prop_assert!((s.average_energy() - 1.0).abs() < 1e-12);
        for l in 0..(1u32 << s.bits_per_symbol()) {
            let p = s.symbol_for_bits(l);
            prop_assert_eq!(s.label(s.nearest(p)), l);
        }
    }

    #[test]
    fn difference_set_contains_zero_and_negation(s in signal_set()) {
        let ds = difference_set(&s);
        prop_assert!(ds.contains(Complex64::new(0.0, 0.0)));
        for &d in ds.deltas() {
            prop_assert!(ds.contains(-d));
        }
    }

    #[test]
    fn subspace_dimension_matches_rank(name in prop::sample::select(vec!["spatial_mux2", "alamouti", "ciod2"]),
                                       s in signal_set().prop_filter("small", |s| s.len() <= 8)) {
        let d = named_design(name).unwrap();
        let sp = rank_spectrum(&d, &s, &AnalysisOptions::default()).unwrap();
        prop_assert_eq!(sp.counts.values().sum::<u64>(), sp.total);
        for (sub, w) in sp.subspaces.iter().zip(&sp.witnesses) {
            prop_assert_eq!(sub.dim(), d.n_t() - w.rank);
        }
        let again = dedup_subspaces(&sp.subspaces, 1e-6);
        prop_assert_eq!(again.len(), sp.subspaces.len());
    }

    #[test]
    fn lemma_bound_holds(ma in trace2_matrix(), mb in trace2_matrix(), qam in any::<bool>()) {
        let s = if qam { SignalSet::square_qam(4).unwrap() } else { SignalSet::psk(2).unwrap() };
        let d = DstcDesign::new("random", ma, mb).unwrap();
        prop_assert!(coding_gain(&d, &s) <= s.min_distance() + 1e-9);
    }

    #[test]
    fn qr_factors_are_consistent(ha in complex(3.0), hb in complex(3.0), which in 0usize..3) {
        let d = match which {
            0 => DstcDesign::construction_1(),
            1 => DstcDesign::construction_2(PI / 4.0).unwrap(),
            _ => DstcDesign::from_name("transcendental:1,1,-1,1").unwrap(),
        };
        prop_assume!(ha.norm() + hb.norm() > 1e-6);
        let ec = build_h_eq(&d, ha, hb);
        prop_assert!((ec.q().transpose() * ec.q() - Matrix4::identity()).norm() < 1e-10);
        prop_assert!((ec.q() * ec.r() - ec.h_eq()).norm() < 1e-10);
        for i in 0..4 {
            prop_assert!(ec.r()[(i, i)] >= 0.0);
        }
    }

    #[test]
    fn frame_counts_are_bounded(seed in any::<u64>(), snr_db in -10.0f64..40.0, dstc in any::<bool>()) {
        let s = SignalSet::psk(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = ChannelRealization::draw(&FadingModel::rician(5.0), &mut rng);
        let es = 10f64.powf(snr_db / 10.0);
        let r = if dstc {
            run_frame_dstc(&DstcDesign::construction_1(), &s, es, &ch, &mut rng, DecoderKind::Conditional).unwrap()
        } else {
            run_frame_dnf_xor(&s, es, &ch, &mut rng).unwrap()
        };
        prop_assert!(r.bit_errors_a_to_b <= r.bits_per_direction);
        prop_assert!(r.bit_errors_b_to_a <= r.bits_per_direction);
    }

    #[test]
    fn latin_squares_satisfy_exclusive_law(n in 1usize..10, shift in 0usize..10, perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        let mut rows: Vec<usize> = (0..n).collect();
        rows.shuffle(&mut rng);
        let table = rows.iter().map(|&r| (0..n).map(|c| (r + c + shift) % n).collect()).collect();
        prop_assert!(NetworkMap::from_table(table, n).unwrap().satisfies_exclusive_law());
    }

    #[test]
    fn wilson_interval_brackets(k in 0u64..1000, extra in 0u64..100_000) {
        let n = k + extra + 1;
        let (lo, hi) = wilson(k, n, Z_95);
        let p = k as f64 / n as f64;
        prop_assert!(lo <= p && p <= hi);
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
    }
}

#[test]
fn xor_map_exclusive_for_all_label_sizes() {
    for b in 1..=6 {
        let s = SignalSet::psk(b).unwrap();
        assert!(check_exclusive_law(&NetworkMap::xor(&s), &s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn records_are_consistent(seed in any::<u64>(), workers in 1usize..4) {
        let cfg = SimConfig {
            scheme: Scheme::Dstc { design: "construction2".into() },
            snr_db: vec![0.0, 6.0, 12.0],
            max_frames: 600,
            min_bit_errors: 40,
            chunk_frames: 100,
            master_seed: seed,
            workers,
            ..SimConfig::default()
        };
        for r in run_sweep(&cfg).unwrap() {
            prop_assert!(r.bit_errors <= r.bits);
            prop_assert!((r.ber - r.bit_errors as f64 / r.bits as f64).abs() < 1e-15);
            prop_assert!(r.ci_low <= r.ber && r.ber <= r.ci_high);
        }
    }
}

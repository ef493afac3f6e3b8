//! Property tests for the library-wide invariants.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use proptest::prelude::*;
use qframe_core::frames::{
    canonical_dual, frame_bounds, frame_of_linear_map, is_dual_pair, leonhardt_frame, closed_form_dual, random_frame,
    random_frame_with, renormalize, represent, wootters_frame, Convention, FrameKind, RepFunction,
};
use qframe_core::nogo::{affine_dual_sweep, choi_of_families, choi_of_pair, identity_choi, min_eig_pt};
use qframe_core::operator_space::{
    born_rule, generators, hs_inner, random_hermitian, random_povm_with, random_pure_state_with, random_state_with,
    seeded_rng, DensityOp, HermBasis, HermitianOp, Povm,
};
use qframe_core::quasiprob::{
    classicality_check, convert_effect_rep, deformed_prob, rep_effects, rep_state, total_prob, DualPair,
    ViolationKind, Via,
};
use qframe_core::star_algebra::{represent_complex, StarAlgebra, StarProduct};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// Built-in and random dual pairs, indexed for strategies.
fn pair(index: usize, seed: u64) -> DualPair {
    let (f, e) = match index % 4 {
        0 => {
            let f = renormalize(&wootters_frame(3).unwrap(), Convention::Standard).unwrap();
            let e = canonical_dual(&f).unwrap();
            (f, e)
        }
        1 => {
            let f = leonhardt_frame(2).unwrap();
            let e = closed_form_dual(FrameKind::Leonhardt, 2).unwrap().dual;
            (f, e)
        }
        2 => {
            let f = random_frame(2, 4 + (seed % 3) as usize, seed, false).unwrap();
            let e = canonical_dual(&f).unwrap();
            (f, e)
        }
        _ => {
            let f = random_frame(3, 9 + (seed % 3) as usize, seed, true).unwrap();
            let e = canonical_dual(&f).unwrap();
            (f, e)
        }
    };
    DualPair::new(f, e).unwrap()
}

fn wootters_algebra() -> StarAlgebra {
    let f = renormalize(&wootters_frame(3).unwrap(), Convention::Standard).unwrap();
    let e = canonical_dual(&f).unwrap();
    StarAlgebra::new(f, e).unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn hs_inner_is_symmetric_bilinear_and_positive(seed in any::<u64>(), d in 2usize..6, s in -2.0f64..2.0) {
        let mut rng = seeded_rng(seed);
        let a = random_hermitian(d, &mut rng);
        let b = random_hermitian(d, &mut rng);
        let c = random_hermitian(d, &mut rng);
        let ab = hs_inner(&a, &b).unwrap();
        prop_assert!((ab - hs_inner(&b, &a).unwrap()).abs() <= 1e-12);
        let mut combo = a.scale(s);
        combo.axpy(1.0, &b);
        let lhs = hs_inner(&combo, &c).unwrap();
        let rhs = s * hs_inner(&a, &c).unwrap() + hs_inner(&b, &c).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        prop_assert!(hs_inner(&a, &a).unwrap() > 0.0);
    }

    #[test]
    fn generator_orders(d in 2usize..17) {
        let g = generators(d).unwrap();
        let id = qframe_core::operator_space::ComplexMatrix::identity(d);
        prop_assert!(g.x.pow(d).max_abs_diff(&id) <= 1e-14);
        prop_assert!(g.z.pow(d).max_abs_diff(&id) <= 1e-14);
        prop_assert!(g.p.pow(2).max_abs_diff(&id) <= 1e-14);
    }

    #[test]
    fn herm_basis_reconstructs(seed in any::<u64>(), d in 2usize..6) {
        let basis = HermBasis::new(d).unwrap();
        let a = random_hermitian(d, &mut seeded_rng(seed));
        let back = basis.synthesize(&basis.coords(&a).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&a) <= 1e-12);
    }

    #[test]
    fn born_probabilities_sum_to_one(seed in any::<u64>(), d in 2usize..5, m in 1usize..6) {
        let mut rng = seeded_rng(seed);
        let rho = random_state_with(d, &mut rng);
        let povm = random_povm_with(d, m, &mut rng).unwrap();
        let total: f64 = (0..povm.len()).map(|k| born_rule(&rho, &povm, k).unwrap()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn duality_is_symmetric(seed in any::<u64>(), d in 2usize..4, extra in 0usize..4) {
        let f = random_frame(d, d * d + extra, seed, false).unwrap();
        let e = canonical_dual(&f).unwrap();
        prop_assert!(is_dual_pair(&f, &e).unwrap().is_dual);
        prop_assert!(is_dual_pair(&e, &f).unwrap().is_dual);
    }

    #[test]
    fn frame_bounds_sandwich(seed in any::<u64>(), d in 2usize..4, extra in 0usize..4, positive in any::<bool>()) {
        let f = random_frame(d, d * d + extra, seed, positive).unwrap();
        let (lo, hi) = frame_bounds(&f).unwrap();
        let a = random_hermitian(d, &mut seeded_rng(seed ^ 0xa5a5));
        let rep = represent(&f, &a).unwrap();
        let energy: f64 = rep.values.iter().zip(f.weights()).map(|(v, w)| w * v * v).sum();
        let norm2 = hs_inner(&a, &a).unwrap();
        prop_assert!(energy - lo * norm2 >= -1e-10 * norm2.max(1.0));
        prop_assert!(hi * norm2 - energy >= -1e-10 * norm2.max(1.0));
    }

    #[test]
    fn extracted_frame_reproduces_linear_map(seed in any::<u64>(), d in 2usize..4) {
        let dd = d * d;
        let mut rng = seeded_rng(seed);
        // well-conditioned random map: identity plus a small Gaussian part
        let noise = DMatrix::from_fn(dd, dd, |_, _| rng.random_range(-0.5..0.5) / dd as f64);
        let map = DMatrix::<f64>::identity(dd, dd) + noise;
        let frame = frame_of_linear_map(d, &map, None).unwrap();
        let basis = HermBasis::new(d).unwrap();
        let a = random_hermitian(d, &mut rng);
        let expected = &map * basis.coords(&a).unwrap();
        let rep = represent(&frame, &a).unwrap();
        for (x, y) in rep.values.iter().zip(expected.iter()) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn three_born_routes_agree(index in 0usize..4, seed in any::<u64>(), m in 2usize..5) {
        let pair = pair(index, seed);
        let d = pair.frame().dim();
        let mut rng = seeded_rng(seed.wrapping_add(1));
        let rho = random_state_with(d, &mut rng);
        let povm = random_povm_with(d, m, &mut rng).unwrap();
        let r = rep_state(pair.frame(), &rho).unwrap();
        let via_f = rep_effects(pair.frame(), &povm, Via::FrameF).unwrap();
        let via_e = rep_effects(pair.dual(), &povm, Via::DualE).unwrap();
        for k in 0..povm.len() {
            let born = born_rule(&rho, &povm, k).unwrap();
            prop_assert!((deformed_prob(&pair, &r, &via_f, k).unwrap().value - born).abs() <= 1e-10);
            prop_assert!((total_prob(&pair, &r, &via_e, k).unwrap().value - born).abs() <= 1e-10);
        }
    }

    #[test]
    fn state_reps_are_affine(index in 0usize..4, seed in any::<u64>(), p in 0.0f64..1.0) {
        let pair = pair(index, seed);
        let d = pair.frame().dim();
        let mut rng = seeded_rng(seed);
        let a = random_state_with(d, &mut rng);
        let b = random_state_with(d, &mut rng);
        let mix = rep_state(pair.frame(), &a.mix(&b, p).unwrap()).unwrap().rep;
        let ra = rep_state(pair.frame(), &a).unwrap().rep;
        let rb = rep_state(pair.frame(), &b).unwrap().rep;
        for i in 0..mix.len() {
            prop_assert!((mix.values[i] - (p * ra.values[i] + (1.0 - p) * rb.values[i])).abs() <= 1e-14);
        }
    }

    #[test]
    fn standard_normalization(seed in any::<u64>(), d in prop::sample::select(vec![3usize, 5]), m in 1usize..5) {
        let f = renormalize(&wootters_frame(d).unwrap(), Convention::Standard).unwrap();
        let e = canonical_dual(&f).unwrap();
        let mut rng = seeded_rng(seed);
        let rho = random_state_with(d, &mut rng);
        let povm = random_povm_with(d, m, &mut rng).unwrap();
        let r = rep_state(&f, &rho).unwrap().rep;
        prop_assert!((r.weighted_sum(f.weights()) - 1.0).abs() <= 1e-10);
        for s in rep_effects(&e, &povm, Via::DualE).unwrap().pointwise_sum() {
            prop_assert!((s - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn effect_conversion_matches_dual_representation(index in 0usize..4, seed in any::<u64>()) {
        let pair = pair(index, seed);
        let d = pair.frame().dim();
        let povm = random_povm_with(d, 3, &mut seeded_rng(seed)).unwrap();
        let via_f = rep_effects(pair.frame(), &povm, Via::FrameF).unwrap();
        let converted = convert_effect_rep(&via_f, pair.theta(), pair.weights()).unwrap();
        let direct = rep_effects(pair.dual(), &povm, Via::DualE).unwrap();
        for (c, e) in converted.reps.iter().zip(&direct.reps) {
            prop_assert!(c.sup_distance(e) <= 1e-10);
        }
    }

    #[test]
    fn choi_of_dual_pair_is_identity_choi(seed in any::<u64>(), d in 2usize..4, extra in 0usize..3) {
        let f = random_frame(d, d * d + extra, seed, seed % 2 == 0).unwrap();
        let e = canonical_dual(&f).unwrap();
        prop_assert!(choi_of_pair(&f, &e).unwrap().max_abs_diff(&identity_choi(d)) <= 1e-10);
    }

    #[test]
    fn positive_families_give_ppt_choi(seed in any::<u64>(), d in 2usize..4, n in 1usize..6) {
        let mut rng = seeded_rng(seed);
        let f: Vec<HermitianOp> = (0..n).map(|_| random_state_with(d, &mut rng).op().clone()).collect();
        let e: Vec<HermitianOp> = (0..n).map(|_| random_state_with(d, &mut rng).op().clone()).collect();
        let j = choi_of_families(&f, &e, &vec![1.0; n]).unwrap();
        prop_assert!(min_eig_pt(&j) >= -1e-10);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn star_isometry_homomorphism_associativity(seed in any::<u64>()) {
        let alg = wootters_algebra();
        let mut rng = seeded_rng(seed);
        let ops: Vec<HermitianOp> = (0..3).map(|_| random_hermitian(3, &mut rng)).collect();
        let reps: Vec<_> = ops.iter().map(|o| alg.represent(o).unwrap()).collect();
        let ip = alg.frame_ip(&reps[0], &reps[1]).unwrap();
        prop_assert!((ip - hs_inner(&ops[0], &ops[1]).unwrap()).abs() <= 1e-10);

        let ab = alg.product(&reps[0], &reps[1]).unwrap();
        let expected = represent_complex(alg.frame(), &ops[0].matrix().mul(ops[1].matrix())).unwrap();
        prop_assert!(ab.sup_distance(&expected.re, &expected.im) <= 1e-10);

        // (A⋆B)⋆C = A⋆(B⋆C), extending ⋆ complex-linearly
        let (a, b, c) = (&reps[0], &reps[1], &reps[2]);
        let split = |p: &StarProduct| (p.real_part(), RepFunction::new(p.frame_id.clone(), p.im.clone()).unwrap());
        let (ab_re, ab_im) = split(&alg.product(a, b).unwrap());
        let (bc_re, bc_im) = split(&alg.product(b, c).unwrap());
        let left = combine(&alg.product(&ab_re, c).unwrap(), &alg.product(&ab_im, c).unwrap());
        let right = combine(&alg.product(a, &bc_re).unwrap(), &alg.product(a, &bc_im).unwrap());
        let dist = left.iter().zip(&right).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(dist <= 1e-9);
    }

    #[test]
    fn purity_classification_matches_operator_rank(seed in any::<u64>(), pure in any::<bool>()) {
        let alg = wootters_algebra();
        let mut rng = seeded_rng(seed);
        let rho = if pure { random_pure_state_with(3, &mut rng) } else { random_state_with(3, &mut rng) };
        let purity = hs_inner(rho.op(), rho.op()).unwrap();
        let operator_pure = (purity - 1.0).abs() <= 1e-9;
        let rep = alg.represent(rho.op()).unwrap();
        prop_assert_eq!(alg.is_pure_state_rep(&rep).unwrap(), operator_pure);
    }

    #[test]
    fn affine_duals_of_positive_frames_are_never_positive(seed in any::<u64>(), d in 2usize..4) {
        let mut rng = seeded_rng(seed);
        let f = random_frame_with(d, d * d + 2, true, &mut rng).unwrap();
        let sweep = affine_dual_sweep(&f, 5, seed).unwrap();
        prop_assert!(sweep.max_residual <= 1e-10);
        prop_assert!(sweep.all_non_positive());
    }

    #[test]
    fn positive_frames_are_never_classical(seed in any::<u64>(), d in 2usize..4) {
        let f = random_frame(d, d * d + 1, seed, true).unwrap();
        let e = canonical_dual(&f).unwrap();
        let pair = DualPair::new(f, e).unwrap();
        let (states, povms) = witness_probes(&pair, seed);
        let report = classicality_check(&pair, &states, &povms).unwrap();
        prop_assert!(report.violations.iter().any(|v| v.kind == ViolationKind::EffectRange));
    }
}

/// `a + i b` for two ⋆ products.
fn combine(a: &StarProduct, b: &StarProduct) -> Vec<Complex64> {
    (0..a.len())
        .map(|i| Complex64::new(a.re[i], a.im[i]) + Complex64::i() * Complex64::new(b.re[i], b.im[i]))
        .collect()
}

/// A spanning set of `d²` pure states, a rank-one informationally complete
/// POVM, and the eigenbasis measurement of the most negative dual element.
/// An effect of the last one pairs with the negative eigenvector, so the
/// effect-side range condition must fail there.
fn witness_probes(pair: &DualPair, seed: u64) -> (Vec<DensityOp>, Vec<Povm>) {
    let d = pair.frame().dim();
    let mut rng = seeded_rng(seed ^ 0x5eed);
    let states = (0..d * d).map(|_| random_pure_state_with(d, &mut rng)).collect();
    let ic = random_povm_with(d, d * d, &mut rng).unwrap();
    let worst = pair
        .dual()
        .elements()
        .iter()
        .min_by(|a, b| a.min_eigenvalue().total_cmp(&b.min_eigenvalue()))
        .unwrap();
    let (_, vectors) = worst.eigen();
    (states, vec![ic, Povm::from_basis(&vectors).unwrap()])
}

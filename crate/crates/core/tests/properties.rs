use num_complex::Complex64;
use proptest::prelude::*;

use urfield_core::fock::{make_ladder, LadderKind};
use urfield_core::linalg;
use urfield_core::poincare::{poincare_transform, TransformOptions, TransformParameters};
use urfield_core::position_rep::{hermite_function, synthesize, GridSpec, HermiteEvaluator, SpacetimePoint};
use urfield_core::second_quant::{
    apply_field_operator, create_particle, field_vacuum, propagator_direct, FieldSpace, ModeSet,
};
use urfield_core::spinor_basis::{from_xyzt, to_xyzt, SpinorAmplitude};
use urfield_core::tensor4::{deindex, index, lift, state_from_json, state_to_json};
use urfield_core::{build_generators, Cutoff, ModeBasis, ModeId, ModeOccupation, StateVector};

type C = Complex64;

fn cutoff(n: u32) -> Cutoff {
    Cutoff::new(n).unwrap()
}

fn complex() -> impl Strategy<Value = C> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C::new(re, im))
}

fn state(n_max: u32) -> impl Strategy<Value = StateVector> {
    let dim = cutoff(n_max).space_dim();
    prop::collection::vec((0..dim, complex()), 1..8).prop_map(move |terms| {
        let c = cutoff(n_max);
        let mut coeffs = vec![C::new(0.0, 0.0); dim];
        for (i, v) in terms {
            coeffs[i] = v;
        }
        StateVector::from_coeffs(c, ModeBasis::Spacetime, coeffs).unwrap()
    })
}

fn point() -> impl Strategy<Value = SpacetimePoint> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(SpacetimePoint::from_array)
}

fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_round_trip(n_max in 1u32..6, raw in prop::array::uniform4(0u32..6)) {
        let c = cutoff(n_max);
        let counts = raw.map(|v| v % (n_max + 1));
        let occ = ModeOccupation::spacetime(counts);
        let i = index(&occ, c).unwrap();
        prop_assert!(i < c.space_dim());
        prop_assert_eq!(deindex(i, c, ModeBasis::Spacetime).unwrap(), occ);
    }

    #[test]
    fn out_of_cutoff_occupation_rejected(n_max in 1u32..5, slot in 0usize..4) {
        let mut counts = [0; 4];
        counts[slot] = n_max + 1;
        prop_assert!(index(&ModeOccupation::spacetime(counts), cutoff(n_max)).is_err());
    }

    #[test]
    fn factored_action_matches_materialized(s in state(2), slot in 0usize..4, kind in 0usize..3) {
        let c = cutoff(2);
        let k = [LadderKind::Annihilate, LadderKind::Create, LadderKind::Number][kind];
        let mode = ModeBasis::Spacetime.modes()[slot];
        let op = lift(&make_ladder(k, c), mode, c).unwrap();
        let product = &op * &lift(&make_ladder(LadderKind::Create, c), ModeId::T, c).unwrap();
        let fast = product.apply(&s).unwrap();
        let slow = linalg::matvec(&product.materialize(), s.coeffs());
        prop_assert!(max_diff(fast.coeffs(), &slow) < 1e-13);
    }

    #[test]
    fn operators_on_disjoint_modes_commute_exactly(n_max in 1u32..4, a in 0usize..4, b in 0usize..4) {
        prop_assume!(a != b);
        let c = cutoff(n_max);
        let modes = ModeBasis::Spacetime.modes();
        let x = lift(&make_ladder(LadderKind::Annihilate, c), modes[a], c).unwrap();
        let y = lift(&make_ladder(LadderKind::Create, c), modes[b], c).unwrap();
        prop_assert_eq!(linalg::max_abs(&x.commutator(&y).materialize()), 0.0);
    }

    #[test]
    fn state_json_round_trip(s in state(2)) {
        let text = state_to_json(&s);
        prop_assert_eq!(state_from_json(&text, cutoff(2), ModeBasis::Spacetime).unwrap(), s);
    }

    #[test]
    fn synthesis_is_linear(s1 in state(2), s2 in state(2), alpha in complex(), beta in complex()) {
        let grid = GridSpec::x_line(-2.0, 2.0, 7).unwrap();
        let combo = s1.scaled(alpha).add(&s2.scaled(beta)).unwrap();
        let w = synthesize(&combo, &grid).unwrap();
        let w1 = synthesize(&s1, &grid).unwrap();
        let w2 = synthesize(&s2, &grid).unwrap();
        for k in 0..grid.len() {
            let want = alpha * w1.samples[k] + beta * w2.samples[k];
            prop_assert!((w.samples[k] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn phi_product_factorizes(counts in prop::array::uniform4(0u32..5), p in point()) {
        let e = HermiteEvaluator::new(4);
        let whole = e.phi_product(&ModeOccupation::spacetime(counts), &p).unwrap();
        let parts: f64 = (0..4).map(|a| hermite_function(counts[a], p.as_array()[a])).product();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn hermite_values_bounded(n in 0u32..=64, x in -20.0..20.0f64) {
        let v = hermite_function(n, x);
        prop_assert!(v.is_finite() && v.abs() <= 1.0);
    }

    #[test]
    fn spinor_round_trip(v in prop::array::uniform4(-1.0..1.0f64)) {
        let s = SpinorAmplitude::new(v[0], v[1], v[2], v[3]);
        let back = from_xyzt(to_xyzt(&s));
        for k in 0..4 {
            prop_assert!((back.as_array()[k] - v[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn creation_on_distinct_modes_commutes(a in prop::array::uniform4(0u32..2), b in prop::array::uniform4(0u32..2)) {
        prop_assume!(a != b);
        let v = field_vacuum(FieldSpace::new(ModeSet::new(1), 3));
        let seed = create_particle(a, &v).unwrap();
        let ab = create_particle(b, &create_particle(a, &seed).unwrap()).unwrap();
        let ba = create_particle(a, &create_particle(b, &seed).unwrap()).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn one_particle_norm_is_equal_time_propagator(p in point(), max in 0u32..3) {
        let v = field_vacuum(FieldSpace::new(ModeSet::new(max), 1));
        let one = apply_field_operator(&p, &v, true).unwrap();
        let d = propagator_direct(&p, &p, ModeSet::new(max)).delta;
        prop_assert!((one.norm_sqr() - d.re).abs() < 1e-13 * d.re.max(1.0));
        prop_assert!(d.re > 0.0);
    }

    #[test]
    fn propagator_is_symmetric(p in point(), q in point(), max in 0u32..3) {
        let pq = propagator_direct(&p, &q, ModeSet::new(max)).delta;
        let qp = propagator_direct(&q, &p, ModeSet::new(max)).delta;
        prop_assert_eq!(pq, qp.conj());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn small_transforms_preserve_norm(
        a in prop::array::uniform4(-0.2..0.2f64),
        w in prop::array::uniform3(-0.3..0.3f64),
        s in state(2),
    ) {
        // keep the seed state well inside so the leak stays small
        let c = cutoff(8);
        let mut coeffs = vec![C::new(0.0, 0.0); c.space_dim()];
        for (n, v) in s.nonzero() {
            coeffs[index(&ModeOccupation::spacetime(n), c).unwrap()] = v;
        }
        let seed = StateVector::from_coeffs(c, ModeBasis::Spacetime, coeffs).unwrap();
        let g = build_generators(c).unwrap();
        let mut params = TransformParameters::zero();
        params.translation = a;
        for (k, (mu, nu)) in [(1, 2), (1, 3), (2, 3)].into_iter().enumerate() {
            params.omega[mu][nu] = w[k];
            params.omega[nu][mu] = -w[k];
        }
        let out = poincare_transform(&seed, &params, &g, &TransformOptions::default()).unwrap();
        prop_assert!(out.norm_change.abs() < 1e-8 * seed.norm_sqr().max(1.0));
    }
}

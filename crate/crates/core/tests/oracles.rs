//! Cross-checks against routes that share no code with the library paths.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use urfield_core::expm::{expm_apply, expm_dense};
use urfield_core::poincare::{audit_algebra, RelationKind, TransformOptions, TransformParameters};
use urfield_core::position_rep::{hermite_function, synthesize, AxisSpec, GridSpec, QuadratureRule};
use urfield_core::second_quant::{
    annihilate_particle, create_particle, field_inner_product, field_vacuum, propagator_direct, FieldSpace,
    FieldState, ModeSet, OccupationMap,
};
use urfield_core::tensor4::{build_basis_state, inner_product};
use urfield_core::{build_generators, Cutoff, MetricSignature, ModeOccupation, StateVector};

type C = Complex64;
const I: C = C::new(0.0, 1.0);

fn cutoff(n: u32) -> Cutoff {
    Cutoff::new(n).unwrap()
}

/// Explicit-sum Hermite polynomial, fine for small orders.
fn hermite_poly(n: u32, x: f64) -> f64 {
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    (0..=n / 2)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact(n) / (fact(m) * fact(n - 2 * m)) * (2.0 * x).powi((n - 2 * m) as i32)
        })
        .sum()
}

fn hermite_closed_form(n: u32, x: f64) -> f64 {
    let fact: f64 = (1..=n).map(f64::from).product();
    hermite_poly(n, x) * (-x * x / 2.0).exp() / (2f64.powi(n as i32) * fact * PI.sqrt()).sqrt()
}

#[test]
fn recurrence_matches_explicit_polynomials() {
    for n in 0..=12 {
        for &x in &[-3.7, -1.25, -0.5, 0.0, 0.3, 1.0, 2.2, 4.5] {
            let want = hermite_closed_form(n, x);
            let got = hermite_function(n, x);
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "n={n} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn quadrature_orthonormality_up_to_twelve() {
    let q = QuadratureRule::new(13).unwrap();
    for m in 0..=12 {
        for n in 0..=12 {
            let v = q.integrate_plain(|x| hermite_function(m, x) * hermite_function(n, x));
            let want = if m == n { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-10, "<{m}|{n}> = {v}");
        }
    }
}

#[test]
fn vacuum_renders_as_gaussian() {
    let c = cutoff(3);
    let grid = GridSpec::new([
        AxisSpec::range(-2.0, 2.0, 9),
        AxisSpec::range(-1.0, 1.5, 6),
        AxisSpec::fixed(0.7),
        AxisSpec::range(-3.0, 3.0, 5),
    ])
    .unwrap();
    let w = synthesize(&StateVector::vacuum(c, urfield_core::ModeBasis::Spacetime), &grid).unwrap();
    for (p, v) in grid.points().iter().zip(&w.samples) {
        let r2: f64 = p.as_array().iter().map(|a| a * a).sum();
        let want = (-r2 / 2.0).exp() / PI;
        assert!((v.re - want).abs() < 1e-12 && v.im == 0.0);
    }
}

#[test]
fn first_excited_state_profile() {
    let c = cutoff(2);
    let s = build_basis_state(&ModeOccupation::spacetime([1, 0, 0, 0]), c).unwrap();
    let grid = GridSpec::x_line(-4.0, 4.0, 81).unwrap();
    let w = synthesize(&s, &grid).unwrap();
    for (p, v) in grid.points().iter().zip(&w.samples) {
        let want = 2f64.sqrt() * p.x * (-p.x * p.x / 2.0).exp() / PI;
        assert!((v.re - want).abs() < 1e-12);
    }
}

/// Dense four-mode position and momentum matrices built without the library.
///
/// `q` is real and `p = −i·r` with `r` real, so every product below stays
/// real: `M = −i·m` and `[M, P] = −[m, r]`.
struct DenseModes {
    d: usize,
    q: [DMatrix<f64>; 4],
    r: [DMatrix<f64>; 4],
}

fn kron4(factors: [&DMatrix<f64>; 4]) -> DMatrix<f64> {
    factors[0].kronecker(&factors[1].kronecker(&factors[2].kronecker(factors[3])))
}

impl DenseModes {
    fn new(n_max: usize) -> Self {
        let d = n_max + 1;
        let mut a = DMatrix::<f64>::zeros(d, d);
        for n in 1..d {
            a[(n - 1, n)] = (n as f64).sqrt();
        }
        let ad = a.transpose();
        let q1 = (&a + &ad) * FRAC_1_SQRT_2;
        let r1 = (&a - &ad) * FRAC_1_SQRT_2;
        let id = DMatrix::<f64>::identity(d, d);
        let lift = |m: &DMatrix<f64>, slot: usize| {
            let mut f = [&id, &id, &id, &id];
            f[slot] = m;
            kron4(f)
        };
        DenseModes {
            d,
            q: [0, 1, 2, 3].map(|s| lift(&q1, s)),
            r: [0, 1, 2, 3].map(|s| lift(&r1, s)),
        }
    }

    /// μ = 0 is t (slot 3); μ = 1..3 are x, y, z.
    fn slot(mu: usize) -> usize {
        [3, 0, 1, 2][mu]
    }

    fn pos(&self, mu: usize) -> &DMatrix<f64> {
        &self.q[Self::slot(mu)]
    }

    fn mom(&self, mu: usize) -> &DMatrix<f64> {
        &self.r[Self::slot(mu)]
    }

    /// `m` with `M_μν = −i·m`.
    fn lorentz(&self, mu: usize, nu: usize) -> DMatrix<f64> {
        if mu == 0 {
            self.pos(0) * self.mom(nu) + self.pos(nu) * self.mom(0)
        } else {
            match (mu, nu) {
                (1, 2) => self.pos(1) * self.mom(2) - self.pos(2) * self.mom(1),
                (1, 3) => self.pos(3) * self.mom(1) - self.pos(1) * self.mom(3),
                (2, 3) => self.pos(2) * self.mom(3) - self.pos(3) * self.mom(2),
                _ => unreachable!(),
            }
        }
    }

    fn interior_norm(&self, m: &DMatrix<f64>, top: usize) -> f64 {
        let inside = |i: usize| {
            let mut k = i;
            (0..4).all(|_| {
                let ok = k % self.d <= top;
                k /= self.d;
                ok
            })
        };
        let mut s = 0.0;
        for r in (0..m.nrows()).filter(|&r| inside(r)) {
            for c in (0..m.ncols()).filter(|&c| inside(c)) {
                s += m[(r, c)] * m[(r, c)];
            }
        }
        s.sqrt()
    }
}

#[test]
fn lorentz_translation_entries_match_dense_evaluation() {
    let n_max = 4usize;
    let margin = 2u32;
    let top = n_max - margin as usize;
    let dm = DenseModes::new(n_max);
    let g = build_generators(cutoff(n_max as u32)).unwrap();
    let reports = MetricSignature::ALL.map(|sig| audit_algebra(&g, sig, margin).unwrap());
    let mut seen = 0;
    for (mu, nu) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
        let m = dm.lorentz(mu, nu);
        for rho in 0..4 {
            // [M, P] = −[m, r]; the right side iη P_ν − iη P_μ is η r_ν − η r_μ
            let lhs = dm.mom(rho) * &m - &m * dm.mom(rho);
            for (sig, report) in MetricSignature::ALL.iter().zip(&reports) {
                let eta = sig.diagonal();
                let mut rhs = DMatrix::<f64>::zeros(lhs.nrows(), lhs.ncols());
                if mu == rho {
                    rhs += dm.mom(nu) * eta[mu];
                }
                if nu == rho {
                    rhs -= dm.mom(mu) * eta[nu];
                }
                let plus = dm.interior_norm(&(&lhs - &rhs), top);
                let minus = dm.interior_norm(&(&lhs + &rhs), top);
                let (sign, residual) = if (plus - minus).abs() <= 1e-12 || plus <= minus {
                    (1, plus)
                } else {
                    (-1, minus)
                };
                let entry = report.find(&format!("[M_{mu}{nu}, P_{rho}]")).unwrap();
                assert_eq!(entry.relation, RelationKind::LorentzTranslation);
                assert_eq!(entry.best_sign, sign, "{} under {sig}", entry.lhs);
                assert!((entry.residual - residual).abs() < 1e-12, "{}: {} vs {residual}", entry.lhs, entry.residual);
                seen += 1;
            }
        }
    }
    assert_eq!(seen, 48);
}

#[test]
fn rotations_close_as_so3() {
    // J = (M_23, M_13, M_12) = −i·(j_1, j_2, j_3); [J_a, J_b] = iJ_c becomes −[j_a, j_b] = j_c
    let n_max = 4usize;
    let dm = DenseModes::new(n_max);
    let j = [dm.lorentz(2, 3), dm.lorentz(1, 3), dm.lorentz(1, 2)];
    let g = build_generators(cutoff(n_max as u32)).unwrap();
    for k in 0..3 {
        let (a, b, c) = (k, (k + 1) % 3, (k + 2) % 3);
        let lhs = &j[b] * &j[a] - &j[a] * &j[b];
        assert!(dm.interior_norm(&(&lhs - &j[c]), n_max - 2) < 1e-12);
    }
    for sig in MetricSignature::ALL {
        let report = audit_algebra(&g, sig, 2).unwrap();
        let closure: Vec<_> = report.of_kind(RelationKind::RotationClosure).collect();
        assert_eq!(closure.len(), 3);
        assert!(closure.iter().all(|e| e.best_sign == 1 && e.residual < 1e-10));
        assert!(report.passed(), "{:?}", report.gate());
    }
}

#[test]
fn rotation_about_z_follows_two_level_closed_form() {
    // one-quantum block of the xp-form M_12 is σ_y in the (x, y) basis
    let c = cutoff(2);
    let g = build_generators(c).unwrap();
    let start = build_basis_state(&ModeOccupation::spacetime([1, 0, 0, 0]), c).unwrap();
    let ex = build_basis_state(&ModeOccupation::spacetime([1, 0, 0, 0]), c).unwrap();
    let ey = build_basis_state(&ModeOccupation::spacetime([0, 1, 0, 0]), c).unwrap();
    for theta in [0.1, 0.7, 1.3, PI / 2.0, 2.9] {
        let out = urfield_core::poincare::poincare_transform(
            &start,
            &TransformParameters::rotation(1, 2, theta),
            &g,
            &TransformOptions::default(),
        )
        .unwrap();
        let on_x = inner_product(&ex, &out.state).unwrap();
        let on_y = inner_product(&ey, &out.state).unwrap();
        assert!((on_x - theta.cos()).norm() < 1e-13);
        assert!((on_y + theta.sin()).norm() < 1e-13);
    }
}

#[test]
fn boost_action_matches_dense_pade() {
    let c = cutoff(3);
    let g = build_generators(c).unwrap();
    let params = {
        let mut p = TransformParameters::zero();
        p.omega[0][2] = 0.15;
        p.omega[2][0] = -0.15;
        p.translation = [0.1, -0.2, 0.05, 0.3];
        p
    };
    let gen = params.generator(&g, MetricSignature::MostlyPlus);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let v: Vec<C> = (0..c.space_dim())
        .map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let fast = expm_apply(&gen, I, &v);
    let dense = expm_dense(&(gen.to_dense() * I)) * nalgebra::DVector::from_vec(v);
    let err = fast.iter().zip(dense.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-11, "{err}");
}

#[test]
fn propagator_factorizes_per_axis() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for max in 0..=3u32 {
        for _ in 0..5 {
            let mut pt = || urfield_core::position_rep::SpacetimePoint::from_array([(); 4].map(|_| rng.random_range(-2.0..2.0)));
            let (x, y) = (pt(), pt());
            let want: f64 = (0..4)
                .map(|a| {
                    (0..=max)
                        .map(|n| hermite_closed_form(n, x.as_array()[a]) * hermite_closed_form(n, y.as_array()[a]))
                        .sum::<f64>()
                })
                .product();
            let got = propagator_direct(&x, &y, ModeSet::new(max)).delta;
            assert!((got.re - want).abs() < 1e-13 && got.im == 0.0);
        }
    }
}

#[test]
fn field_basis_from_creators_is_orthonormal() {
    // build every capped basis state by repeated creation from the vacuum and
    // divide by √(Π 𝒩!) by hand
    let space = FieldSpace::new(ModeSet::new(1), 2);
    let vacuum = field_vacuum(space);
    let labels: Vec<_> = ModeSet::new(1).labels().collect();
    let mut states: Vec<(OccupationMap, FieldState)> = vec![(OccupationMap::empty(), vacuum.clone())];
    for (i, a) in labels.iter().enumerate() {
        let one = create_particle(*a, &vacuum).unwrap();
        states.push((OccupationMap::from_counts([(*a, 1)]), one.clone()));
        for b in &labels[i..] {
            let two = create_particle(*b, &one).unwrap();
            let norm = if a == b { 2f64.sqrt() } else { 1.0 };
            states.push((
                OccupationMap::from_counts([(*a, 1), (*b, 1)]),
                two.scaled(C::new(1.0 / norm, 0.0)),
            ));
        }
    }
    assert_eq!(states.len(), 153);
    assert_eq!(states.len(), space.basis().len());
    for (ka, sa) in &states {
        assert_eq!(sa, &FieldState::basis(space, ka.clone()).unwrap());
        for (kb, sb) in &states {
            let want = if ka == kb { 1.0 } else { 0.0 };
            assert!((field_inner_product(sa, sb) - want).norm() < 1e-15);
        }
    }
}

#[test]
fn field_commutator_on_single_mode_block() {
    // [ĉ, ĉ†] acts as the identity on states below the cap
    let space = FieldSpace::new(ModeSet::new(0), 4);
    let label = [0; 4];
    let mut state = field_vacuum(space);
    for n in 0..4 {
        let ca = annihilate_particle(label, &create_particle(label, &state).unwrap()).unwrap();
        let ac = create_particle(label, &annihilate_particle(label, &state).unwrap()).unwrap();
        let comm = ca.add(&ac.scaled(C::new(-1.0, 0.0))).unwrap();
        let expected = FieldState::basis(space, OccupationMap::from_counts([(label, n)])).unwrap();
        let diff = comm.add(&expected.scaled(C::new(-1.0, 0.0))).unwrap();
        assert!(diff.norm_sqr() < 1e-28, "n={n}");
        state = create_particle(label, &state).unwrap().scaled(C::new(1.0 / ((n + 1) as f64).sqrt(), 0.0));
    }
}

#[test]
fn audit_report_serialization_is_reproducible() {
    let g = build_generators(cutoff(4)).unwrap();
    let a = serde_json::to_string(&audit_algebra(&g, MetricSignature::MostlyMinus, 2).unwrap()).unwrap();
    let b = serde_json::to_string(&audit_algebra(&g, MetricSignature::MostlyMinus, 2).unwrap()).unwrap();
    assert_eq!(a, b);
    let g2 = build_generators(cutoff(4)).unwrap();
    let c = serde_json::to_string(&audit_algebra(&g2, MetricSignature::MostlyMinus, 2).unwrap()).unwrap();
    assert_eq!(a, c);
}

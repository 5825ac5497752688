//! A bosonic field over tensor-space modes.
//!
//! Each mode label `N = (N_x, N_y, N_z, N_t)` gets its own ladder pair
//! `ĉ(N), ĉ†(N)` with `[ĉ(N), ĉ†(N′)] = δ_{NN′}`. Basis states `|𝒩⟩` are
//! normalized products of number states, one per occupied label, so
//! `⟨𝒩′|𝒩⟩ = δ_{𝒩′𝒩}`. The field operator is `Ψ̂(X) = Σ_N φ_N(X) ĉ(N)`.
//!
//! Two truncations apply and are independent: the mode set bounds each label
//! component, and the particle cap bounds the total number of field quanta.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ZERO;
use crate::position_rep::{hermite_functions, SpacetimePoint, CSV_FORMAT_VERSION};

/// A field-mode label.
pub type ModeLabel = [u32; 4];

/// All labels whose components are at most `max_per_mode`.
///
/// Unlike [`crate::fock::Cutoff`], a bound of zero is allowed: it leaves the
/// single label `(0, 0, 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeSet {
    pub max_per_mode: u32,
}

impl ModeSet {
    pub fn new(max_per_mode: u32) -> Self {
        ModeSet { max_per_mode }
    }

    pub fn len(&self) -> usize {
        (self.max_per_mode as usize + 1).pow(4)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, label: &ModeLabel) -> bool {
        label.iter().all(|&n| n <= self.max_per_mode)
    }

    pub fn check(&self, label: &ModeLabel) -> Result<()> {
        if !self.contains(label) {
            return Err(Error::OccupationOutOfRange {
                counts: *label,
                n_max: self.max_per_mode,
            });
        }
        Ok(())
    }

    /// Labels in row-major order, `N_x` slowest.
    pub fn labels(&self) -> impl Iterator<Item = ModeLabel> + '_ {
        let d = self.max_per_mode + 1;
        (0..d.pow(4)).map(move |k| [k / (d * d * d), (k / (d * d)) % d, (k / d) % d, k % d])
    }
}

/// Particle counts `𝒩(N)`; labels with zero count are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationMap(BTreeMap<ModeLabel, u32>);

impl OccupationMap {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (ModeLabel, u32)>) -> Self {
        let mut m = Self::empty();
        for (label, n) in counts {
            if n > 0 {
                *m.0.entry(label).or_insert(0) += n;
            }
        }
        m
    }

    pub fn count(&self, label: &ModeLabel) -> u32 {
        self.0.get(label).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModeLabel, &u32)> {
        self.0.iter()
    }

    fn with_count(&self, label: ModeLabel, n: u32) -> Self {
        let mut m = self.clone();
        if n == 0 {
            m.0.remove(&label);
        } else {
            m.0.insert(label, n);
        }
        m
    }
}

/// Mode set plus particle cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpace {
    pub modes: ModeSet,
    pub cap: u32,
}

impl FieldSpace {
    pub fn new(modes: ModeSet, cap: u32) -> Self {
        FieldSpace { modes, cap }
    }

    pub fn check(&self, occ: &OccupationMap) -> Result<()> {
        for (label, _) in occ.iter() {
            self.modes.check(label)?;
        }
        if occ.total() > self.cap {
            return Err(Error::ParticleCapExceeded { cap: self.cap });
        }
        Ok(())
    }

    /// Every occupation map with at most `cap` particles, by increasing total.
    pub fn basis(&self) -> Vec<OccupationMap> {
        let labels: Vec<ModeLabel> = self.modes.labels().collect();
        let mut out = vec![OccupationMap::empty()];
        // extend maps using labels at or after the last one touched, so each
        // multiset is produced once
        let mut frontier: Vec<(OccupationMap, usize)> = vec![(OccupationMap::empty(), 0)];
        for _ in 0..self.cap {
            let mut next = Vec::new();
            for (occ, start) in &frontier {
                for (k, label) in labels.iter().enumerate().skip(*start) {
                    let grown = occ.with_count(*label, occ.count(label) + 1);
                    out.push(grown.clone());
                    next.push((grown, k));
                }
            }
            frontier = next;
        }
        out
    }
}

/// `|Φ⟩ = Σ 𝒞(𝒩)|𝒩⟩`; exact zeros are dropped so equality is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    space: FieldSpace,
    terms: BTreeMap<OccupationMap, Complex64>,
}

impl FieldState {
    pub fn zero(space: FieldSpace) -> Self {
        FieldState {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum(space: FieldSpace) -> Self {
        Self::basis(space, OccupationMap::empty()).expect("vacuum fits any cap")
    }

    pub fn basis(space: FieldSpace, occ: OccupationMap) -> Result<Self> {
        Self::from_terms(space, [(occ, Complex64::new(1.0, 0.0))])
    }

    pub fn from_terms(space: FieldSpace, terms: impl IntoIterator<Item = (OccupationMap, Complex64)>) -> Result<Self> {
        let mut s = Self::zero(space);
        for (occ, c) in terms {
            space.check(&occ)?;
            s.accumulate(occ, c);
        }
        Ok(s)
    }

    fn accumulate(&mut self, occ: OccupationMap, c: Complex64) {
        let v = self.terms.get(&occ).copied().unwrap_or(ZERO) + c;
        if v == ZERO {
            self.terms.remove(&occ);
        } else {
            self.terms.insert(occ, v);
        }
    }

    pub fn space(&self) -> FieldSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationMap, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, occ: &OccupationMap) -> Complex64 {
        self.terms.get(occ).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc + c.norm_sqr())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.space);
        for (k, v) in &self.terms {
            out.accumulate(k.clone(), v * factor);
        }
        out
    }

    pub fn add(&self, other: &FieldState) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::InvalidParameters("field states live in different spaces".into()));
        }
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.accumulate(k.clone(), *v);
        }
        Ok(out)
    }
}

/// `⟨lhs|rhs⟩`.
pub fn field_inner_product(lhs: &FieldState, rhs: &FieldState) -> Complex64 {
    lhs.terms
        .iter()
        .filter_map(|(k, v)| rhs.terms.get(k).map(|w| v.conj() * w))
        .sum()
}

pub fn field_vacuum(space: FieldSpace) -> FieldState {
    FieldState::vacuum(space)
}

/// `ĉ†(N)|Φ⟩`.
pub fn create_particle(label: ModeLabel, state: &FieldState) -> Result<FieldState> {
    let space = state.space;
    space.modes.check(&label)?;
    let mut out = FieldState::zero(space);
    for (occ, c) in &state.terms {
        if occ.total() >= space.cap {
            return Err(Error::ParticleCapExceeded { cap: space.cap });
        }
        let n = occ.count(&label);
        out.accumulate(occ.with_count(label, n + 1), c * ((n + 1) as f64).sqrt());
    }
    Ok(out)
}

/// `ĉ(N)|Φ⟩`.
pub fn annihilate_particle(label: ModeLabel, state: &FieldState) -> Result<FieldState> {
    let space = state.space;
    space.modes.check(&label)?;
    let mut out = FieldState::zero(space);
    for (occ, c) in &state.terms {
        let n = occ.count(&label);
        if n > 0 {
            out.accumulate(occ.with_count(label, n - 1), c * (n as f64).sqrt());
        }
    }
    Ok(out)
}

/// `φ_N(X)` for every label of the set, in label order.
fn mode_functions(modes: ModeSet, point: &SpacetimePoint) -> Vec<(ModeLabel, f64)> {
    let tables = point.as_array().map(|v| hermite_functions(modes.max_per_mode, v));
    modes
        .labels()
        .map(|n| {
            let phi = (0..4).map(|a| tables[a][n[a] as usize]).product();
            (n, phi)
        })
        .collect()
}

/// `Ψ̂(X)|Φ⟩`, or `Ψ̂†(X)|Φ⟩` when `daggered`.
pub fn apply_field_operator(point: &SpacetimePoint, state: &FieldState, daggered: bool) -> Result<FieldState> {
    let mut out = FieldState::zero(state.space);
    for (label, phi) in mode_functions(state.space.modes, point) {
        // φ is real, so φ* = φ
        let coeff = Complex64::new(phi, 0.0);
        let term = if daggered {
            create_particle(label, state)?.scaled(coeff.conj())
        } else {
            annihilate_particle(label, state)?.scaled(coeff)
        };
        out = out.add(&term)?;
    }
    Ok(out)
}

/// `Δ(X, X′)` together with its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorValue {
    pub x: SpacetimePoint,
    pub x2: SpacetimePoint,
    pub max_per_mode: u32,
    pub delta: Complex64,
}

/// `Σ_N φ_N(X) φ*_N(X′)` over the mode set.
pub fn propagator_direct(x: &SpacetimePoint, x2: &SpacetimePoint, modes: ModeSet) -> PropagatorValue {
    let left = mode_functions(modes, x);
    let right = mode_functions(modes, x2);
    let delta: f64 = left.iter().zip(&right).map(|((_, a), (_, b))| a * b).sum();
    PropagatorValue {
        x: *x,
        x2: *x2,
        max_per_mode: modes.max_per_mode,
        delta: Complex64::new(delta, 0.0),
    }
}

/// `⟨0|Ψ̂(X)Ψ̂†(X′)|0⟩`, evaluated as the inner product of the one-particle
/// states `Ψ̂†(X)|0⟩` and `Ψ̂†(X′)|0⟩`.
pub fn propagator_vev(x: &SpacetimePoint, x2: &SpacetimePoint, modes: ModeSet, cap: u32) -> Result<PropagatorValue> {
    if cap < 1 {
        return Err(Error::InvalidParticleCap { cap, required: 1 });
    }
    let vacuum = field_vacuum(FieldSpace::new(modes, cap));
    let bra = apply_field_operator(x, &vacuum, true)?;
    let ket = apply_field_operator(x2, &vacuum, true)?;
    Ok(PropagatorValue {
        x: *x,
        x2: *x2,
        max_per_mode: modes.max_per_mode,
        delta: field_inner_product(&bra, &ket),
    })
}

/// `x,y,z,t,x2,y2,z2,t2,delta` rows preceded by a format-version comment.
/// `Δ` is real for these mode functions, so only its real part is written.
pub fn propagator_csv(values: &[PropagatorValue]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# format_version: {CSV_FORMAT_VERSION}");
    out.push_str("x,y,z,t,x2,y2,z2,t2,delta\n");
    for v in values {
        let [a, b, c, d] = v.x.as_array();
        let [e, f, g, h] = v.x2.as_array();
        let _ = writeln!(out, "{a},{b},{c},{d},{e},{f},{g},{h},{}", v.delta.re);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OccupationRecord {
    modes: ModeLabel,
    count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldTermRecord {
    occupations: Vec<OccupationRecord>,
    re: f64,
    im: f64,
}

/// One record per basis state: `{occupations: [{modes, count}], re, im}`.
pub fn field_state_to_json(state: &FieldState) -> String {
    let records: Vec<FieldTermRecord> = state
        .terms
        .iter()
        .map(|(occ, c)| FieldTermRecord {
            occupations: occ.iter().map(|(m, n)| OccupationRecord { modes: *m, count: *n }).collect(),
            re: c.re,
            im: c.im,
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("plain records serialize")
}

pub fn field_state_from_json(text: &str, space: FieldSpace) -> Result<FieldState> {
    let records: Vec<FieldTermRecord> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        if !(r.re.is_finite() && r.im.is_finite()) {
            return Err(Error::InvalidParameters("non-finite field coefficient".into()));
        }
        let occ = OccupationMap::from_counts(r.occupations.iter().map(|o| (o.modes, o.count)));
        terms.push((occ, Complex64::new(r.re, r.im)));
    }
    FieldState::from_terms(space, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn space(max: u32, cap: u32) -> FieldSpace {
        FieldSpace::new(ModeSet::new(max), cap)
    }

    #[test]
    fn mode_set_enumeration() {
        assert_eq!(ModeSet::new(0).labels().collect::<Vec<_>>(), vec![[0; 4]]);
        let labels: Vec<_> = ModeSet::new(1).labels().collect();
        assert_eq!(labels.len(), 16);
        assert_eq!(labels[1], [0, 0, 0, 1]);
        assert_eq!(labels[8], [1, 0, 0, 0]);
        assert!(ModeSet::new(1).check(&[2, 0, 0, 0]).is_err());
    }

    #[test]
    fn basis_counts() {
        // 1 + 16 + C(17, 2)
        assert_eq!(space(1, 2).basis().len(), 1 + 16 + 136);
        assert_eq!(space(0, 3).basis().len(), 4);
        assert_eq!(space(1, 0).basis(), vec![OccupationMap::empty()]);
    }

    #[test]
    fn annihilating_the_vacuum() {
        let v = field_vacuum(space(1, 2));
        for label in ModeSet::new(1).labels() {
            assert!(annihilate_particle(label, &v).unwrap().is_zero());
        }
    }

    #[test]
    fn create_then_annihilate_returns_vacuum() {
        let v = field_vacuum(space(1, 2));
        let label = [1, 0, 1, 0];
        let back = annihilate_particle(label, &create_particle(label, &v).unwrap()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn double_occupation_amplitude() {
        let v = field_vacuum(space(0, 2));
        let two = create_particle([0; 4], &create_particle([0; 4], &v).unwrap()).unwrap();
        let occ = OccupationMap::from_counts([([0; 4], 2)]);
        assert!((two.coefficient(&occ) - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cap_is_enforced() {
        let v = field_vacuum(space(1, 1));
        let one = create_particle([0; 4], &v).unwrap();
        assert_eq!(
            create_particle([0, 0, 0, 1], &one),
            Err(Error::ParticleCapExceeded { cap: 1 })
        );
        assert!(propagator_vev(&SpacetimePoint::ORIGIN, &SpacetimePoint::ORIGIN, ModeSet::new(0), 0).is_err());
    }

    #[test]
    fn field_operator_on_vacuum() {
        let v = field_vacuum(space(1, 1));
        let p = SpacetimePoint::new(0.3, -0.2, 1.1, 0.5);
        assert!(apply_field_operator(&p, &v, false).unwrap().is_zero());
        let one = apply_field_operator(&p, &v, true).unwrap();
        for (occ, c) in one.terms() {
            let (label, n) = occ.iter().next().unwrap();
            assert_eq!(*n, 1);
            let expected: f64 = (0..4).map(|a| crate::position_rep::hermite_function(label[a], p.as_array()[a])).product();
            assert!((c.re - expected).abs() < 1e-15 && c.im == 0.0);
        }
    }

    #[test]
    fn origin_propagator_single_mode() {
        let o = SpacetimePoint::ORIGIN;
        let d = propagator_direct(&o, &o, ModeSet::new(0));
        assert!((d.delta.re - PI.powi(-2)).abs() < 1e-15);
        let v = propagator_vev(&o, &o, ModeSet::new(0), 1).unwrap();
        assert!((v.delta - d.delta).norm() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let s = space(1, 2);
        let st = FieldState::from_terms(
            s,
            [
                (OccupationMap::from_counts([([0, 1, 0, 0], 2)]), Complex64::new(0.5, -0.25)),
                (OccupationMap::empty(), Complex64::new(0.0, 1.0)),
            ],
        )
        .unwrap();
        let text = field_state_to_json(&st);
        assert_eq!(field_state_from_json(&text, s).unwrap(), st);
        assert!(field_state_from_json("[{\"occupations\": [], \"re\": 1}]", s).is_err());
    }

    #[test]
    fn csv_layout() {
        let o = SpacetimePoint::ORIGIN;
        let csv = propagator_csv(&[propagator_direct(&o, &o, ModeSet::new(0))]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "x,y,z,t,x2,y2,z2,t2,delta");
        assert!(lines[2].starts_with("0,0,0,0,0,0,0,0,0.101321"));
    }
}

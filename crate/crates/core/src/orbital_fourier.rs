//! The alternating sum `A_{H0}(H) = Σ_σ sgn(σ) e^{i<σH, H0>}`, the quotient
//! `μ̂_{H0}(H) = A_{H0}(H) / Π_{α>0} <α, H>` and the integrand
//! `|A|^{2k} / |Π <α, H>|^{2k-2}` whose integral over the chamber decides
//! square-integrability of `μ̂^k`.
//!
//! Everything is evaluated in an orthonormal basis of span Φ, so the
//! per-point cost is `O(|W| n)` regardless of the ambient dimension.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{combine, coordinates, dot, norm, Neumaier};
use crate::rational::{to_f64, Rat};
use crate::root_systems::RootSystem;
use crate::weyl_groups::WeylGroup;

/// Default relative wall guard: points with `min |<α, H>| <= 1e-9 ‖H‖` are
/// treated as lying on a wall.
pub const DEFAULT_WALL_GUARD: f64 = 1e-9;

/// Relative distance by which [`IntegrandSpec::mu_hat`] moves a guarded point
/// into the open chamber.
const MU_HAT_NUDGE: f64 = 1e-7;

/// A point `H0` with `<α, H0> > 0` for every positive root, in ambient
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularPoint {
    h0: Vec<f64>,
}

impl RegularPoint {
    pub fn new(rs: &RootSystem, h0: Vec<f64>) -> Result<Self> {
        if h0.len() != rs.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: rs.ambient_dim(),
                got: h0.len(),
            });
        }
        if h0.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotRegular("coordinates must be finite".into()));
        }
        let basis = rs.orthonormal_basis();
        let inside = combine(&basis, &coordinates(&basis, &h0));
        let off: Vec<f64> = h0.iter().zip(&inside).map(|(a, b)| a - b).collect();
        if norm(&off) > 1e-10 * norm(&h0).max(1.0) {
            return Err(Error::NotRegular("H0 is not in the span of the roots".into()));
        }
        for (alpha, root) in rs.positive_f64().iter().zip(rs.positive_roots()) {
            let p = dot(alpha, &h0);
            if p <= 0.0 {
                return Err(Error::NotRegular(format!(
                    "<α, H0> = {p} for the positive root with coefficients {:?}",
                    root.coeffs
                )));
            }
        }
        Ok(RegularPoint { h0 })
    }

    /// `H0 = Σ c_i ω_i`, so that `<H0, β_i> = c_i`.
    pub fn from_pairings(rs: &RootSystem, pairings: &[f64]) -> Result<Self> {
        Self::new(rs, rs.from_pairings(pairings)?)
    }

    /// `ρ∨` scaled to unit length.
    pub fn canonical(rs: &RootSystem) -> Self {
        let rho = rs.rho_coweight().to_f64();
        let n = norm(&rho);
        RegularPoint {
            h0: rho.into_iter().map(|x| x / n).collect(),
        }
    }

    pub fn vector(&self) -> &[f64] {
        &self.h0
    }

    /// `<H0, β_i>` for each simple root.
    pub fn pairings(&self, rs: &RootSystem) -> Vec<f64> {
        rs.simple_f64().iter().map(|b| dot(b, &self.h0)).collect()
    }
}

/// `Σ_σ sgn(σ) e^{i<σH, h0>}`, summed in the enumeration order of `w` with
/// compensated summation.
pub fn numerator_a(w: &WeylGroup, h0: &[f64], h: &[f64]) -> Result<Complex64> {
    let d = w.ambient_dim();
    for v in [h0, h] {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.len(),
            });
        }
    }
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for (sign, image) in w.signed_orbit(h0)? {
        let (s, c) = dot(h, &image).sin_cos();
        re.add(sign * c);
        im.add(sign * s);
    }
    Ok(Complex64::new(re.total(), im.total()))
}

/// Everything needed to evaluate the integrand: the signed orbit of `H0` and
/// the positive roots, both in intrinsic coordinates.
#[derive(Clone, Debug)]
pub struct IntegrandSpec {
    system: RootSystem,
    k_exact: Option<Rat>,
    basis: Vec<Vec<f64>>,
    h0: RegularPoint,
    signs: Vec<f64>,
    orbit: Vec<f64>,
    positive: Vec<f64>,
    rho_dir: Vec<f64>,
    rank: usize,
    root_count: usize,
    k: f64,
    wall_guard: f64,
}

impl IntegrandSpec {
    pub fn new(rs: &RootSystem, w: &WeylGroup, h0: RegularPoint, k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 1.0) {
            return Err(Error::InvalidArgument(format!("k = {k} must be a finite number >= 1")));
        }
        if w.ambient_dim() != rs.ambient_dim() || w.generators().len() != rs.rank() {
            return Err(Error::InvalidArgument(
                "the Weyl group was not generated for this root system".into(),
            ));
        }
        if h0.h0.len() != rs.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: rs.ambient_dim(),
                got: h0.h0.len(),
            });
        }
        let basis = rs.orthonormal_basis();
        let mut signs = Vec::with_capacity(w.order());
        let mut orbit = Vec::with_capacity(w.order() * rs.rank());
        for (sign, image) in w.signed_orbit(&h0.h0)? {
            signs.push(sign);
            orbit.extend(coordinates(&basis, &image));
        }
        let positive = rs
            .positive_f64()
            .iter()
            .flat_map(|a| coordinates(&basis, a))
            .collect();
        let rho_dir = coordinates(&basis, RegularPoint::canonical(rs).vector());
        Ok(IntegrandSpec {
            system: rs.clone(),
            k_exact: None,
            basis,
            h0,
            signs,
            orbit,
            positive,
            rho_dir,
            rank: rs.rank(),
            root_count: rs.root_count(),
            k,
            wall_guard: DEFAULT_WALL_GUARD,
        })
    }

    pub fn with_wall_guard(mut self, wall_guard: f64) -> Result<Self> {
        if !(wall_guard > 0.0 && wall_guard.is_finite()) {
            return Err(Error::InvalidArgument(format!("wall guard {wall_guard} must be positive")));
        }
        self.wall_guard = wall_guard;
        Ok(self)
    }

    pub fn with_k(mut self, k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 1.0) {
            return Err(Error::InvalidArgument(format!("k = {k} must be a finite number >= 1")));
        }
        self.k = k;
        self.k_exact = None;
        Ok(self)
    }

    /// Sets `k` from an exact rational, which threshold comparisons then use.
    pub fn with_k_exact(self, k: Rat) -> Result<Self> {
        let mut spec = self.with_k(to_f64(&k))?;
        spec.k_exact = Some(k);
        Ok(spec)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.system
    }

    pub fn label(&self) -> String {
        self.system.label()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn k_exact(&self) -> Option<Rat> {
        self.k_exact
    }

    pub fn wall_guard(&self) -> f64 {
        self.wall_guard
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn root_count(&self) -> usize {
        self.root_count
    }

    pub fn weyl_order(&self) -> usize {
        self.signs.len()
    }

    pub fn h0(&self) -> &RegularPoint {
        &self.h0
    }

    /// Orthonormal basis of span Φ; intrinsic coordinates refer to it.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Positive roots in intrinsic coordinates.
    pub fn positive_roots(&self) -> impl Iterator<Item = &[f64]> {
        self.positive.chunks_exact(self.rank)
    }

    pub fn to_local(&self, h: &[f64]) -> Result<Vec<f64>> {
        let d = self.basis[0].len();
        if h.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: h.len(),
            });
        }
        Ok(coordinates(&self.basis, h))
    }

    pub fn numerator(&self, h: &[f64]) -> Result<Complex64> {
        Ok(self.numerator_local(&self.to_local(h)?))
    }

    pub fn mu_hat(&self, h: &[f64]) -> Result<Complex64> {
        Ok(self.mu_hat_local(&self.to_local(h)?))
    }

    pub fn integrand(&self, h: &[f64]) -> Result<f64> {
        Ok(self.integrand_local(&self.to_local(h)?))
    }

    /// `Π <α, x>` over positive roots together with `min |<α, x>|`.
    fn product_local(&self, x: &[f64]) -> (f64, f64) {
        self.positive_roots().fold((1.0, f64::INFINITY), |(p, m), a| {
            let v = dot(a, x);
            (p * v, m.min(v.abs()))
        })
    }

    fn guarded(&self, min_pairing: f64, x: &[f64]) -> bool {
        min_pairing <= self.wall_guard * norm(x)
    }

    pub fn numerator_local(&self, x: &[f64]) -> Complex64 {
        let mut re = Neumaier::default();
        let mut im = Neumaier::default();
        for (sign, v) in self.signs.iter().zip(self.orbit.chunks_exact(self.rank)) {
            let (s, c) = dot(x, v).sin_cos();
            re.add(sign * c);
            im.add(sign * s);
        }
        Complex64::new(re.total(), im.total())
    }

    /// `A / Π <α, x>`. Within the wall guard the quotient is taken at a
    /// point moved `1e-7 ‖x‖` along `ρ∨` into the open chamber; at the
    /// origin it is 0.
    pub fn mu_hat_local(&self, x: &[f64]) -> Complex64 {
        let (prod, min) = self.product_local(x);
        if !self.guarded(min, x) {
            return self.numerator_local(x) / prod;
        }
        let r = norm(x);
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let moved: Vec<f64> = x
            .iter()
            .zip(&self.rho_dir)
            .map(|(a, b)| a + MU_HAT_NUDGE * r * b)
            .collect();
        let (prod, _) = self.product_local(&moved);
        self.numerator_local(&moved) / prod
    }

    /// `|A|^{2k} / |Π <α, x>|^{2k-2}`; 0 inside the wall guard when `k > 1`.
    pub fn integrand_local(&self, x: &[f64]) -> f64 {
        let a2 = self.numerator_local(x).norm_sqr();
        if self.k == 1.0 {
            return a2;
        }
        let (prod, min) = self.product_local(x);
        if self.guarded(min, x) || a2 == 0.0 {
            return 0.0;
        }
        (self.k * a2.ln() - (self.k - 1.0) * (prod * prod).ln()).exp()
    }

    /// The polar factor `f(r) = |A(rθ)|^{2k} / |Π <α, θ>|^{2k-2}` for a unit
    /// direction `θ` in intrinsic coordinates, so that the integrand equals
    /// `f(r) r^{-|Φ|(k-1)}`.
    pub fn polar_factor(&self, theta: &[f64], r: f64) -> f64 {
        let x: Vec<f64> = theta.iter().map(|t| t * r).collect();
        let a2 = self.numerator_local(&x).norm_sqr();
        if self.k == 1.0 {
            return a2;
        }
        let (prod, min) = self.product_local(theta);
        if self.guarded(min, theta) || a2 == 0.0 {
            return 0.0;
        }
        (self.k * a2.ln() - (self.k - 1.0) * (prod * prod).ln()).exp()
    }

    /// Whether the intrinsic point lies in the closed chamber.
    pub fn in_closed_chamber(&self, x: &[f64]) -> bool {
        self.positive_roots().all(|a| dot(a, x) >= 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::{build_root_system, Family};
    use crate::weyl_groups::{generate, DEFAULT_GROUP_CAP};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn setup(f: Family, n: usize) -> (RootSystem, WeylGroup) {
        let rs = build_root_system(f, n).unwrap();
        let w = generate(&rs, DEFAULT_GROUP_CAP).unwrap();
        (rs, w)
    }

    fn unit_root_direction(rs: &RootSystem) -> Vec<f64> {
        let a = rs.simple_f64().remove(0);
        let n = norm(&a);
        a.into_iter().map(|x| x / n).collect()
    }

    fn random_point(rs: &RootSystem, rng: &mut ChaCha8Rng, scale: f64) -> Vec<f64> {
        let c: Vec<f64> = (0..rs.rank()).map(|_| rng.random_range(-scale..scale)).collect();
        combine(&rs.orthonormal_basis(), &c)
    }

    #[test]
    fn a1_numerator_is_twice_i_sine() {
        let (rs, w) = setup(Family::A, 1);
        let u = unit_root_direction(&rs);
        let h0 = RegularPoint::new(&rs, u.clone()).unwrap();
        for t in [0.3, 1.0, PI / 2.0, 7.5] {
            let h: Vec<f64> = u.iter().map(|x| x * t).collect();
            let a = numerator_a(&w, h0.vector(), &h).unwrap();
            assert!(a.re.abs() < 1e-14);
            assert!((a.im - 2.0 * t.sin()).abs() < 1e-14);
        }
        let h: Vec<f64> = u.iter().map(|x| x * PI / 2.0).collect();
        assert!((numerator_a(&w, h0.vector(), &h).unwrap().norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn numerator_vanishes_at_origin() {
        for (f, n) in [(Family::A, 2), (Family::B, 3), (Family::G, 2)] {
            let (rs, w) = setup(f, n);
            let h0 = RegularPoint::canonical(&rs);
            let a = numerator_a(&w, h0.vector(), &vec![0.0; rs.ambient_dim()]).unwrap();
            assert_eq!(a.norm(), 0.0);
        }
    }

    #[test]
    fn a2_matches_reversed_direct_sum() {
        let (rs, w) = setup(Family::A, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h0 = RegularPoint::from_pairings(&rs, &[1.0, 0.7]).unwrap();
        let spec = IntegrandSpec::new(&rs, &w, h0.clone(), 1.5).unwrap();
        for _ in 0..20 {
            let h = random_point(&rs, &mut rng, 5.0);
            let mut direct = Complex64::new(0.0, 0.0);
            for e in w.elements().iter().rev() {
                let sh = e.act(&h).unwrap();
                direct += Complex64::from_polar(1.0, dot(&sh, h0.vector())) * e.sign() as f64;
            }
            let a = spec.numerator(&h).unwrap();
            assert!((a - direct).norm() < 1e-12, "{a} vs {direct}");
        }
    }

    #[test]
    fn skew_symmetry_over_whole_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (f, n) in [(Family::A, 2), (Family::B, 2), (Family::G, 2), (Family::A, 3), (Family::B, 3)] {
            let (rs, w) = setup(f, n);
            let spec = IntegrandSpec::new(&rs, &w, RegularPoint::canonical(&rs), 1.5).unwrap();
            let h = random_point(&rs, &mut rng, 4.0);
            let a = spec.numerator(&h).unwrap();
            assert!(a.norm() <= w.order() as f64 + 1e-9);
            for e in w.elements() {
                let b = spec.numerator(&e.act(&h).unwrap()).unwrap();
                assert!((b - a * e.sign() as f64).norm() < 1e-10, "{f:?}{n}");
            }
            let neg: Vec<f64> = h.iter().map(|x| -x).collect();
            assert!((spec.numerator(&neg).unwrap().norm() - a.norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn moving_h0_by_the_group() {
        let (rs, w) = setup(Family::A, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h0 = RegularPoint::from_pairings(&rs, &[1.0, 0.7]).unwrap();
        let h = random_point(&rs, &mut rng, 3.0);
        for e in w.elements() {
            let moved = e.act(h0.vector()).unwrap();
            let lhs = numerator_a(&w, &moved, &h).unwrap().norm();
            let back = e.inverse().act(&h).unwrap();
            let rhs = numerator_a(&w, h0.vector(), &back).unwrap().norm();
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn k_one_skips_the_denominator() {
        let (rs, w) = setup(Family::B, 2);
        let spec = IntegrandSpec::new(&rs, &w, RegularPoint::canonical(&rs), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let h = random_point(&rs, &mut rng, 10.0);
            let a = spec.numerator(&h).unwrap();
            assert!((spec.integrand(&h).unwrap() - a.norm_sqr()).abs() < 1e-12);
        }
        let wall = rs.from_pairings(&[0.0, 2.0]).unwrap();
        assert_eq!(spec.integrand(&wall).unwrap(), spec.numerator(&wall).unwrap().norm_sqr());
    }

    #[test]
    fn a1_three_halves_at_the_first_peak() {
        // root length √2 turns the reference value 8/t into 8/(√2 t)
        let (rs, w) = setup(Family::A, 1);
        let u = unit_root_direction(&rs);
        for h0 in [1.0, 0.5, 2.5] {
            let point = RegularPoint::new(&rs, u.iter().map(|x| x * h0).collect()).unwrap();
            let spec = IntegrandSpec::new(&rs, &w, point, 1.5).unwrap();
            let t = PI / (2.0 * h0);
            let h: Vec<f64> = u.iter().map(|x| x * t).collect();
            let want = 8.0 / (2f64.sqrt() * t);
            assert!((spec.integrand(&h).unwrap() - want).abs() < 1e-12 * want);
            let mu = spec.mu_hat(&h).unwrap();
            assert!((mu.im - 2.0 / (2f64.sqrt() * t)).abs() < 1e-12);
        }
    }

    #[test]
    fn integrand_bounded_away_from_walls() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (f, n) in [(Family::A, 2), (Family::G, 2), (Family::A, 3)] {
            let (rs, w) = setup(f, n);
            let spec = IntegrandSpec::new(&rs, &w, RegularPoint::canonical(&rs), 1.7).unwrap();
            let order = w.order() as f64;
            for _ in 0..200 {
                let h = random_point(&rs, &mut rng, 20.0);
                let prod: f64 = rs.positive_f64().iter().map(|a| dot(a, &h).abs()).product();
                if prod < 1e-3 {
                    continue;
                }
                let bound = order.powf(2.0 * 1.7) / prod.powf(2.0 * 0.7);
                let v = spec.integrand(&h).unwrap();
                assert!(v >= 0.0 && v.is_finite() && v <= bound * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn integrand_tends_to_zero_along_paths_into_a_wall() {
        let (rs, w) = setup(Family::A, 2);
        let spec = IntegrandSpec::new(&rs, &w, RegularPoint::from_pairings(&rs, &[1.0, 0.7]).unwrap(), 1.5)
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let wall = rs.from_pairings(&[0.0, rng.random_range(1.0..8.0)]).unwrap();
            let dir = rs
                .from_pairings(&[rng.random_range(0.5..2.0), rng.random_range(-0.5..0.5)])
                .unwrap();
            let values: Vec<f64> = (0..40)
                .map(|j| {
                    let s = 2f64.powi(-j);
                    let h: Vec<f64> = wall.iter().zip(&dir).map(|(a, b)| a + s * b).collect();
                    spec.integrand(&h).unwrap()
                })
                .collect();
            let tail = &values[35..];
            assert!(tail.windows(2).all(|p| p[1] <= p[0]), "{tail:?}");
            assert!(tail[4] < 1e-18);
            assert_eq!(spec.integrand(&wall).unwrap(), 0.0);
        }
    }

    #[test]
    fn mu_hat_is_continuous_across_the_guard() {
        let (rs, w) = setup(Family::A, 2);
        let spec = IntegrandSpec::new(&rs, &w, RegularPoint::canonical(&rs), 1.5).unwrap();
        let wall = rs.from_pairings(&[0.0, 1.3]).unwrap();
        let dir = rs.from_pairings(&[1.0, 0.0]).unwrap();
        let at = |s: f64| {
            let h: Vec<f64> = wall.iter().zip(&dir).map(|(a, b)| a + s * b).collect();
            spec.mu_hat(&h).unwrap()
        };
        let inside = at(1e-6);
        let guarded = at(1e-12);
        assert!((inside - guarded).norm() < 1e-6 * inside.norm().max(1.0));
        assert_eq!(spec.mu_hat(&[0.0, 0.0, 0.0]).unwrap().norm(), 0.0);
    }

    #[test]
    fn mu_hat_modulus_is_invariant_under_odd_elements() {
        let (rs, w) = setup(Family::B, 2);
        let spec = IntegrandSpec::new(&rs, &w, RegularPoint::canonical(&rs), 1.5).unwrap();
        let h = rs.from_pairings(&[0.8, 1.9]).unwrap();
        let base = spec.mu_hat(&h).unwrap().norm();
        for e in w.elements().iter().filter(|e| e.sign() < 0) {
            let v = spec.mu_hat(&e.act(&h).unwrap()).unwrap().norm();
            assert!((v - base).abs() < 1e-12 * base.max(1.0));
        }
    }

    #[test]
    fn regular_point_validation() {
        let rs = build_root_system(Family::A, 2).unwrap();
        assert!(RegularPoint::from_pairings(&rs, &[1.0, 0.0]).is_err());
        assert!(RegularPoint::from_pairings(&rs, &[1.0, -0.2]).is_err());
        assert!(RegularPoint::from_pairings(&rs, &[1.0]).is_err());
        assert!(RegularPoint::new(&rs, vec![1.0, 1.0, 1.0]).is_err());
        let p = RegularPoint::from_pairings(&rs, &[1.0, 0.7]).unwrap();
        let back = p.pairings(&rs);
        assert!((back[0] - 1.0).abs() < 1e-14 && (back[1] - 0.7).abs() < 1e-14);
        let c = RegularPoint::canonical(&rs);
        assert!((norm(c.vector()) - 1.0).abs() < 1e-14);
        assert!(RegularPoint::new(&rs, c.vector().to_vec()).is_ok());
    }

    #[test]
    fn spec_rejects_bad_parameters() {
        let (rs, w) = setup(Family::A, 2);
        let h0 = RegularPoint::canonical(&rs);
        assert!(IntegrandSpec::new(&rs, &w, h0.clone(), 0.9).is_err());
        assert!(IntegrandSpec::new(&rs, &w, h0.clone(), f64::NAN).is_err());
        let spec = IntegrandSpec::new(&rs, &w, h0, 1.2).unwrap();
        assert!(spec.clone().with_wall_guard(0.0).is_err());
        assert!(spec.integrand(&[1.0, 2.0]).is_err());
        let (rs3, _) = setup(Family::A, 3);
        assert!(IntegrandSpec::new(&rs3, &w, RegularPoint::canonical(&rs3), 1.2).is_err());
    }
}

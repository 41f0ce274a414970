//! Weyl chambers, the regions `R_i`, the averaging projection `P` over the
//! Weyl group of `Ψ₁`, and certified values of the constants `a`, `b`, `C`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{gram, int, to_f64, RatMatrix, RatVec};
use crate::root_systems::{orthonormalize, RootSystem};
use crate::subroot_systems::SimpleSubrootSystem;
use crate::weyl_groups::{generate_parabolic, DEFAULT_GROUP_CAP};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// An open cone `{H : <H, γ> > 0 for every normal γ}`.
#[derive(Clone, Debug)]
pub struct Chamber {
    normals: Vec<Vec<f64>>,
    dim: usize,
}

impl Chamber {
    /// The fundamental chamber 𝔱⁺ of a root system.
    pub fn fundamental(rs: &RootSystem) -> Self {
        Chamber {
            normals: rs.simple_f64(),
            dim: rs.ambient_dim(),
        }
    }

    /// The chamber 𝔰⁺ of a simple subsystem (𝔠⁺ when applied to Ψ₁).
    pub fn of_subsystem(psi: &SimpleSubrootSystem<'_>) -> Self {
        Chamber {
            normals: psi.gammas().iter().map(|g| g.vector.to_f64()).collect(),
            dim: psi.parent().ambient_dim(),
        }
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    fn check_dim(&self, h: &[f64]) -> Result<()> {
        if h.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: h.len(),
            });
        }
        Ok(())
    }

    pub fn in_chamber(&self, h: &[f64]) -> Result<bool> {
        self.check_dim(h)?;
        Ok(self.normals.iter().all(|g| dot(g, h) > 0.0))
    }

    /// Membership in the closure, allowing `-tol·‖H‖` slack.
    pub fn in_closure(&self, h: &[f64], tol: f64) -> Result<bool> {
        self.check_dim(h)?;
        let slack = tol * norm(h).max(1.0);
        Ok(self.normals.iter().all(|g| dot(g, h) >= -slack))
    }
}

/// The 1-based index `i` of the region `R_i` containing `H`, ties going to the
/// smallest index; `None` inside the unit ball.
pub fn region_index(psi: &SimpleSubrootSystem<'_>, h: &[f64]) -> Result<Option<usize>> {
    let chamber = Chamber::of_subsystem(psi);
    if !chamber.in_closure(h, 1e-12)? {
        return Err(Error::OutsideChamber(format!("{h:?}")));
    }
    if norm(h) < 1.0 {
        return Ok(None);
    }
    let pairings: Vec<f64> = chamber.normals().iter().map(|g| dot(g, h)).collect();
    let mut best = 0;
    for (i, &p) in pairings.iter().enumerate() {
        if p > pairings[best] {
            best = i;
        }
    }
    Ok(Some(best + 1))
}

/// `P = |V₁|⁻¹ Σ_{σ∈V₁} σ` restricted to span Ψ, stored as an ambient matrix
/// that vanishes on the orthogonal complement of span Ψ.
#[derive(Clone, Debug)]
pub struct ChamberProjection {
    exact: RatMatrix,
    average: RatMatrix,
    span_projector: RatMatrix,
    matrix: Vec<f64>,
    dim: usize,
    psi_base: Vec<usize>,
    psi_one_base: Vec<usize>,
    v1_order: usize,
}

/// Orthogonal projector onto the span of `vs` (exact).
fn span_projector(vs: &[RatVec], dim: usize) -> RatMatrix {
    let mut out = RatMatrix::zeros(dim);
    if vs.is_empty() {
        return out;
    }
    let ginv = gram(vs).inverse().expect("independent vectors");
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let c = ginv[(i, j)];
            if c.is_zero() {
                continue;
            }
            for r in 0..dim {
                for s in 0..dim {
                    out[(r, s)] += c * a.0[r] * b.0[s];
                }
            }
        }
    }
    out
}

pub fn averaging_projection(
    psi: &SimpleSubrootSystem<'_>,
    psi_one: &SimpleSubrootSystem<'_>,
) -> Result<ChamberProjection> {
    if !std::ptr::eq(psi.parent(), psi_one.parent()) || !psi.contains(psi_one) {
        return Err(Error::InvalidArgument("Ψ₁ is not a subsystem of Ψ".into()));
    }
    let rs = psi.parent();
    let dim = rs.ambient_dim();
    let v1 = generate_parabolic(rs, psi_one.base(), DEFAULT_GROUP_CAP)?;
    let mut average = RatMatrix::zeros(dim);
    for w in v1.elements() {
        for i in 0..dim {
            for j in 0..dim {
                average[(i, j)] += w.matrix()[(i, j)];
            }
        }
    }
    let order = int(v1.order() as i64);
    for i in 0..dim {
        for j in 0..dim {
            average[(i, j)] /= order;
        }
    }
    let gammas: Vec<RatVec> = psi.gammas().iter().map(|g| g.vector.clone()).collect();
    let span_projector = span_projector(&gammas, dim);
    let exact = average.mul(&span_projector);
    Ok(ChamberProjection {
        matrix: exact.to_f64(),
        exact,
        average,
        span_projector,
        dim,
        psi_base: psi.base().to_vec(),
        psi_one_base: psi_one.base().to_vec(),
        v1_order: v1.order(),
    })
}

impl ChamberProjection {
    pub fn exact(&self) -> &RatMatrix {
        &self.exact
    }

    /// The raw Weyl average on the whole ambient space.
    pub fn weyl_average(&self) -> &RatMatrix {
        &self.average
    }

    pub fn span_projector(&self) -> &RatMatrix {
        &self.span_projector
    }

    pub fn v1_order(&self) -> usize {
        self.v1_order
    }

    pub fn apply(&self, h: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.matrix[i * d + j] * h[j]).sum())
            .collect()
    }

    /// `(I - P) H` for `H ∈ span Ψ`.
    pub fn complement(&self, h: &[f64]) -> Vec<f64> {
        let p = self.apply(h);
        h.iter().zip(&p).map(|(x, y)| x - y).collect()
    }

    pub fn is_idempotent(&self) -> bool {
        self.exact.mul(&self.exact) == self.exact
    }

    pub fn is_symmetric(&self) -> bool {
        self.exact.transpose() == self.exact
    }

    /// Largest entry of `|P² - P|` and `|P - Pᵀ|` in floating point.
    pub fn residuals(&self) -> (f64, f64) {
        let d = self.dim;
        let m = &self.matrix;
        let mut idem: f64 = 0.0;
        let mut sym: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let sq: f64 = (0..d).map(|l| m[i * d + l] * m[l * d + j]).sum();
                idem = idem.max((sq - m[i * d + j]).abs());
                sym = sym.max((m[i * d + j] - m[j * d + i]).abs());
            }
        }
        (idem, sym)
    }

    /// Rank of P on span Ψ; one whenever Ψ₁ drops a single simple root.
    pub fn rank_on_span(&self) -> usize {
        self.exact.rank()
    }

    pub fn psi_base(&self) -> &[usize] {
        &self.psi_base
    }

    pub fn psi_one_base(&self) -> &[usize] {
        &self.psi_one_base
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaConstants {
    /// Certified lower bound for `min ‖P H‖/‖H‖` over `cl(R₁)`.
    pub a: f64,
    /// `1/a + 1`.
    pub b: f64,
    /// Certified lower bound for `min <H, α>/‖H‖`, α ∈ Ψ⁺∖Ψ₁⁺.
    #[serde(rename = "C")]
    pub c: f64,
    pub a_estimate: f64,
    pub c_estimate: f64,
    pub grid: f64,
    pub grid_points: usize,
    pub lipschitz_a: f64,
    pub lipschitz_c: f64,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
}

impl LemmaConstants {
    pub fn require_certified(self) -> Result<Self> {
        if self.certified {
            Ok(self)
        } else {
            Err(Error::Certification(
                self.hint.unwrap_or_else(|| "padded minimum is not positive".into()),
            ))
        }
    }
}

/// Maximum grid size accepted by [`certify_constants`].
pub const MAX_GRID_POINTS: usize = 20_000_000;

/// Parametrizes directions of `cl(R₁)` by the cube `c ∈ [0,1]^{m-1}` through
/// `H(c) = ω₁ + Σ_{j≥2} c_j ω_j` (so `<H, γ₁> = 1 ≥ <H, γ_j> = c_j ≥ 0`),
/// minimizes on a grid, refines locally, and subtracts a Lipschitz bound times
/// the covering radius to obtain certified lower bounds.
pub fn certify_constants(
    psi: &SimpleSubrootSystem<'_>,
    projection: &ChamberProjection,
    grid: f64,
) -> Result<LemmaConstants> {
    if !(grid > 0.0 && grid <= 1.0) {
        return Err(Error::InvalidArgument(format!("grid spacing {grid} not in (0, 1]")));
    }
    let gammas: Vec<RatVec> = psi.gammas().iter().map(|g| g.vector.clone()).collect();
    let m = gammas.len();
    let ginv = gram(&gammas).inverse().expect("independent simple roots");
    let dual: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .fold(RatVec::zeros(gammas[0].dim()), |acc, j| &acc + &gammas[j].scale(ginv[(i, j)]))
                .to_f64()
        })
        .collect();
    let outside: Vec<Vec<f64>> = psi
        .positive_outside_psi_one()
        .iter()
        .map(|r| r.vector.to_f64())
        .collect();
    let point = |c: &[f64]| -> Vec<f64> {
        let mut h = dual[0].clone();
        for (cj, w) in c.iter().zip(&dual[1..]) {
            for (x, y) in h.iter_mut().zip(w) {
                *x += cj * y;
            }
        }
        h
    };
    let eval = |c: &[f64]| -> (f64, f64) {
        let h = point(c);
        let n = norm(&h);
        let fa = norm(&projection.apply(&h)) / n;
        let fc = outside
            .iter()
            .map(|a| dot(&h, a) / n)
            .fold(f64::INFINITY, f64::min);
        (fa, fc)
    };

    let axes = m - 1;
    let per_axis = (1.0 / grid).ceil() as usize + 1;
    let total = per_axis
        .checked_pow(axes as u32)
        .filter(|&t| t <= MAX_GRID_POINTS)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "grid {grid} needs {per_axis}^{axes} points, above the limit of {MAX_GRID_POINTS}"
            ))
        })?;
    let spacing = if per_axis > 1 { 1.0 / (per_axis - 1) as f64 } else { 0.0 };

    let (mut min_a, mut min_c) = (f64::INFINITY, f64::INFINITY);
    let (mut arg_a, mut arg_c) = (vec![0.0; axes], vec![0.0; axes]);
    let mut c = vec![0.0; axes];
    for idx in 0..total {
        let mut rem = idx;
        for x in c.iter_mut() {
            *x = (rem % per_axis) as f64 * spacing;
            rem /= per_axis;
        }
        let (fa, fc) = eval(&c);
        if fa < min_a {
            min_a = fa;
            arg_a.clone_from(&c);
        }
        if fc < min_c {
            min_c = fc;
            arg_c.clone_from(&c);
        }
    }

    let omega_frob = dual[1..].iter().map(|w| dot(w, w)).sum::<f64>().sqrt();
    let gamma1 = to_f64(&gammas[0].norm_sq()).sqrt();
    let lip_u = 2.0 * omega_frob * gamma1;
    let max_alpha = outside.iter().map(|a| norm(a)).fold(0.0, f64::max);
    let (lip_a, lip_c) = (lip_u, lip_u * max_alpha);
    let radius = spacing * (axes as f64).sqrt() / 2.0;

    let refine = |start: &[f64], pick: &dyn Fn(&[f64]) -> f64| -> f64 {
        let mut best = start.to_vec();
        let mut best_val = pick(&best);
        let mut step = spacing;
        for _ in 0..6 {
            if axes == 0 || step == 0.0 {
                break;
            }
            step /= 4.0;
            let center = best.clone();
            let offsets = [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0];
            let count = offsets.len().pow(axes as u32);
            let mut trial = vec![0.0; axes];
            for idx in 0..count {
                let mut rem = idx;
                for (t, c0) in trial.iter_mut().zip(&center) {
                    *t = (c0 + offsets[rem % offsets.len()] * step).clamp(0.0, 1.0);
                    rem /= offsets.len();
                }
                let v = pick(&trial);
                if v < best_val {
                    best_val = v;
                    best.clone_from(&trial);
                }
            }
        }
        best_val
    };
    let a_estimate = refine(&arg_a, &|c| eval(c).0);
    let c_estimate = refine(&arg_c, &|c| eval(c).1);

    let a = min_a - lip_a * radius;
    let c_lower = min_c - lip_c * radius;
    let certified = a > 0.0 && c_lower > 0.0;
    let hint = (!certified).then(|| {
        let need = |min: f64, lip: f64| 2.0 * min / (lip * (axes as f64).sqrt().max(1.0));
        format!(
            "padded minimum not positive (a >= {a:.3e}, C >= {c_lower:.3e}); retry with grid below {:.1e}",
            need(min_a, lip_a).min(need(min_c, lip_c))
        )
    });
    Ok(LemmaConstants {
        a,
        b: 1.0 / a + 1.0,
        c: c_lower,
        a_estimate,
        c_estimate,
        grid,
        grid_points: total,
        lipschitz_a: lip_a,
        lipschitz_c: lip_c,
        certified,
        hint,
    })
}

/// Rejection sampler for `R₁` (or all of 𝔰⁺): uniform directions in span Ψ,
/// radius uniform in `[1, 10]`.
pub struct RegionSampler {
    basis: Vec<Vec<f64>>,
    gammas: Vec<Vec<f64>>,
    region_one_only: bool,
}

impl RegionSampler {
    pub fn region_one(psi: &SimpleSubrootSystem<'_>) -> Self {
        Self::new(psi, true)
    }

    pub fn chamber(psi: &SimpleSubrootSystem<'_>) -> Self {
        Self::new(psi, false)
    }

    fn new(psi: &SimpleSubrootSystem<'_>, region_one_only: bool) -> Self {
        let gammas: Vec<Vec<f64>> = psi.gammas().iter().map(|g| g.vector.to_f64()).collect();
        RegionSampler {
            basis: orthonormalize(gammas.iter().cloned()),
            gammas,
            region_one_only,
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let dim = self.gammas[0].len();
        loop {
            let mut dir = vec![0.0; dim];
            for b in &self.basis {
                let g: f64 = rng.sample(StandardNormal);
                for (x, y) in dir.iter_mut().zip(b) {
                    *x += g * y;
                }
            }
            let n = norm(&dir);
            if n == 0.0 {
                continue;
            }
            let pairings: Vec<f64> = self.gammas.iter().map(|g| dot(g, &dir)).collect();
            if pairings.iter().any(|&p| p < 0.0) {
                continue;
            }
            if self.region_one_only && pairings.iter().any(|&p| p > pairings[0]) {
                continue;
            }
            let r = rng.random_range(1.0..=10.0) / n;
            return dir.into_iter().map(|x| x * r).collect();
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma1Report {
    pub system: String,
    pub drop_index: usize,
    pub exact_idempotent: bool,
    pub exact_symmetric: bool,
    pub idempotent_residual: f64,
    pub symmetric_residual: f64,
    pub rank_on_span: usize,
    pub fixed_by_v1: bool,
    pub constants: LemmaConstants,
    pub samples: usize,
    pub lower_violations: usize,
    pub upper_violations: usize,
    pub chamber_samples: usize,
    pub min_complement_pairing: f64,
    pub complement_violations: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma2Report {
    pub system: String,
    pub drop_index: usize,
    #[serde(rename = "C")]
    pub c: f64,
    pub samples: usize,
    pub min_ratio: f64,
    pub violations: usize,
    pub passed: bool,
}

/// Projection identities, the `a`/`b` inequalities on sampled points of `R₁`,
/// and `(I - P) 𝔰⁺ ⊂ cl(𝔠⁺)` on sampled points of 𝔰⁺.
pub fn verify_lemma1(
    psi: &SimpleSubrootSystem<'_>,
    grid: f64,
    samples: usize,
    seed: u64,
) -> Result<Lemma1Report> {
    let psi_one = psi.psi_one();
    let proj = averaging_projection(psi, &psi_one)?;
    let constants = certify_constants(psi, &proj, grid)?;
    let (idem, sym) = proj.residuals();
    let v1 = generate_parabolic(psi.parent(), psi_one.base(), DEFAULT_GROUP_CAP)?;
    let fixed = v1
        .elements()
        .iter()
        .all(|w| w.matrix().mul(proj.exact()) == *proj.exact());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = RegionSampler::region_one(psi);
    let (mut lower, mut upper) = (0, 0);
    for _ in 0..samples {
        let h = sampler.sample(&mut rng);
        let ph = norm(&proj.apply(&h));
        let qh = norm(&proj.complement(&h));
        if ph < constants.a * norm(&h) {
            lower += 1;
        }
        if qh > constants.b * ph {
            upper += 1;
        }
    }
    let chamber = RegionSampler::chamber(psi);
    let gammas: Vec<Vec<f64>> = psi.gammas().iter().map(|g| g.vector.to_f64()).collect();
    let mut min_pair = f64::INFINITY;
    let mut bad = 0;
    for _ in 0..samples {
        let h = chamber.sample(&mut rng);
        let q = proj.complement(&h);
        for g in &gammas[1..] {
            let p = dot(g, &q);
            min_pair = min_pair.min(p);
            if p < -1e-12 {
                bad += 1;
            }
        }
    }
    let rank = proj.rank_on_span();
    let passed = proj.is_idempotent()
        && proj.is_symmetric()
        && idem <= 1e-12
        && sym <= 1e-12
        && rank == 1
        && fixed
        && constants.certified
        && lower == 0
        && upper == 0
        && bad == 0;
    Ok(Lemma1Report {
        system: psi.label(),
        drop_index: psi.base()[0] + 1,
        exact_idempotent: proj.is_idempotent(),
        exact_symmetric: proj.is_symmetric(),
        idempotent_residual: idem,
        symmetric_residual: sym,
        rank_on_span: rank,
        fixed_by_v1: fixed,
        constants,
        samples,
        lower_violations: lower,
        upper_violations: upper,
        chamber_samples: samples,
        min_complement_pairing: if min_pair.is_finite() { min_pair } else { 0.0 },
        complement_violations: bad,
        passed,
    })
}

/// `<H, α> >= C ‖H‖` on sampled pairs `(H, α)`, `H ∈ R₁`, `α ∈ Ψ⁺∖Ψ₁⁺`.
pub fn verify_lemma2(
    psi: &SimpleSubrootSystem<'_>,
    grid: f64,
    samples: usize,
    seed: u64,
) -> Result<Lemma2Report> {
    let psi_one = psi.psi_one();
    let proj = averaging_projection(psi, &psi_one)?;
    let constants = certify_constants(psi, &proj, grid)?;
    let outside: Vec<Vec<f64>> = psi
        .positive_outside_psi_one()
        .iter()
        .map(|r| r.vector.to_f64())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = RegionSampler::region_one(psi);
    let mut violations = 0;
    let mut min_ratio = f64::INFINITY;
    for _ in 0..samples {
        let h = sampler.sample(&mut rng);
        let alpha = &outside[rng.random_range(0..outside.len())];
        let ratio = dot(&h, alpha) / norm(&h);
        min_ratio = min_ratio.min(ratio);
        if ratio < constants.c {
            violations += 1;
        }
    }
    Ok(Lemma2Report {
        system: psi.label(),
        drop_index: psi.base()[0] + 1,
        c: constants.c,
        samples,
        min_ratio,
        violations,
        passed: constants.certified && violations == 0,
    })
}

/// Exact check that `P` agrees with the orthogonal projection onto
/// `(span Ψ₁)^⊥ ∩ span Ψ`, computed independently of the Weyl average.
pub fn matches_orthogonal_projection(
    psi: &SimpleSubrootSystem<'_>,
    projection: &ChamberProjection,
) -> bool {
    let dim = psi.parent().ambient_dim();
    let psi_span: Vec<RatVec> = psi.gammas().iter().map(|g| g.vector.clone()).collect();
    let psi_one = psi.psi_one();
    let one_span: Vec<RatVec> = psi_one.gammas().iter().map(|g| g.vector.clone()).collect();
    let full = span_projector(&psi_span, dim);
    let sub = span_projector(&one_span, dim);
    let mut diff = full.clone();
    for i in 0..dim {
        for j in 0..dim {
            diff[(i, j)] = full[(i, j)] - sub[(i, j)];
        }
    }
    diff == *projection.exact()
}

/// `Rat` helper used by callers that want `P` entries as strings.
pub fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.dim()).map(|i| m.row(i).to_strings()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::{build_root_system, Family};
    use crate::subroot_systems::simple_subsystem;

    #[test]
    fn chamber_membership() {
        let a2 = build_root_system(Family::A, 2).unwrap();
        let ch = Chamber::fundamental(&a2);
        let b = a2.simple_f64();
        let sum: Vec<f64> = b[0].iter().zip(&b[1]).map(|(x, y)| x + y).collect();
        assert!(ch.in_chamber(&sum).unwrap());
        assert!(!ch.in_chamber(&[0.0; 3]).unwrap());
        let neg: Vec<f64> = sum.iter().map(|x| -x).collect();
        assert!(!ch.in_chamber(&neg).unwrap());
        assert!(ch.in_chamber(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn region_index_cases() {
        let a2 = build_root_system(Family::A, 2).unwrap();
        let psi = SimpleSubrootSystem::whole(&a2, 0).unwrap();
        let rho = a2.rho_coweight().to_f64();
        let n = norm(&rho);
        let unit: Vec<f64> = rho.iter().map(|x| 2.0 * x / n).collect();
        assert_eq!(region_index(&psi, &unit).unwrap(), Some(1));
        let small: Vec<f64> = rho.iter().map(|x| 0.5 * x / n).collect();
        assert_eq!(region_index(&psi, &small).unwrap(), None);
        // H = 2γ₁ + γ₂: <H,γ₁> = 3, <H,γ₂> = 0
        let b = a2.simple_f64();
        let h: Vec<f64> = b[0].iter().zip(&b[1]).map(|(x, y)| 2.0 * x + y).collect();
        assert_eq!(region_index(&psi, &h).unwrap(), Some(1));
        let h: Vec<f64> = b[0].iter().zip(&b[1]).map(|(x, y)| x + 2.0 * y).collect();
        assert_eq!(region_index(&psi, &h).unwrap(), Some(2));
        let neg: Vec<f64> = h.iter().map(|x| -x).collect();
        assert!(region_index(&psi, &neg).is_err());
    }

    #[test]
    fn a2_projection_is_the_average_of_identity_and_reflection() {
        let a2 = build_root_system(Family::A, 2).unwrap();
        let psi = SimpleSubrootSystem::whole(&a2, 0).unwrap();
        let p1 = psi.psi_one();
        let proj = averaging_projection(&psi, &p1).unwrap();
        assert_eq!(proj.v1_order(), 2);
        let g2 = &a2.simple_roots()[1].vector;
        let manual = {
            let s = RatMatrix::reflection(g2);
            let mut m = RatMatrix::identity(3);
            for i in 0..3 {
                for j in 0..3 {
                    m[(i, j)] = (m[(i, j)] + s[(i, j)]) / int(2);
                }
            }
            m
        };
        assert_eq!(proj.weyl_average(), &manual);
        assert!(proj.exact().apply(g2).is_zero());
        assert!(proj.is_idempotent() && proj.is_symmetric());
        assert_eq!(proj.rank_on_span(), 1);
        assert!(matches_orthogonal_projection(&psi, &proj));
    }

    #[test]
    fn projection_rejects_foreign_subsystem() {
        let a3 = build_root_system(Family::A, 3).unwrap();
        let psi = simple_subsystem(&a3, &[0, 1]).unwrap();
        let other = simple_subsystem(&a3, &[2]).unwrap();
        assert!(averaging_projection(&psi, &other).is_err());
    }

    #[test]
    fn a2_constant_a_matches_dense_arc_search() {
        // oracle: walk the arc cl(R₁) ∩ S¹ directly in angle
        let a2 = build_root_system(Family::A, 2).unwrap();
        let psi = SimpleSubrootSystem::whole(&a2, 0).unwrap();
        let proj = averaging_projection(&psi, &psi.psi_one()).unwrap();
        let basis = a2.orthonormal_basis();
        let g = a2.simple_f64();
        let mut oracle = f64::INFINITY;
        let steps = 200_000;
        for s in 0..steps {
            let t = std::f64::consts::TAU * s as f64 / steps as f64;
            let h: Vec<f64> = (0..3).map(|i| t.cos() * basis[0][i] + t.sin() * basis[1][i]).collect();
            let (p1, p2) = (dot(&g[0], &h), dot(&g[1], &h));
            if p1 >= 0.0 && p2 >= 0.0 && p1 >= p2 {
                oracle = oracle.min(norm(&proj.apply(&h)));
            }
        }
        let k = certify_constants(&psi, &proj, 1e-3).unwrap();
        assert!(k.certified);
        assert!(k.a <= oracle + 1e-9, "{} > {}", k.a, oracle);
        assert!((k.a_estimate - oracle).abs() < 1e-5, "{} vs {}", k.a_estimate, oracle);
        assert!((k.b - (1.0 / k.a + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn rank_one_subsystem_has_exact_constants() {
        let a1 = build_root_system(Family::A, 1).unwrap();
        let psi = SimpleSubrootSystem::whole(&a1, 0).unwrap();
        let proj = averaging_projection(&psi, &psi.psi_one()).unwrap();
        let k = certify_constants(&psi, &proj, 0.1).unwrap();
        assert!((k.a - 1.0).abs() < 1e-12);
        assert!((k.c - 2f64.sqrt()).abs() < 1e-12);
        assert!(k.certified);
    }

    #[test]
    fn too_fine_grid_is_rejected() {
        let a4 = build_root_system(Family::A, 4).unwrap();
        let psi = SimpleSubrootSystem::whole(&a4, 0).unwrap();
        let proj = averaging_projection(&psi, &psi.psi_one()).unwrap();
        assert!(certify_constants(&psi, &proj, 1e-3).is_err());
        assert!(certify_constants(&psi, &proj, 0.0).is_err());
    }

    #[test]
    fn coarse_grid_fails_certification_with_hint() {
        let b3 = build_root_system(Family::B, 3).unwrap();
        let psi = SimpleSubrootSystem::whole(&b3, 0).unwrap();
        let proj = averaging_projection(&psi, &psi.psi_one()).unwrap();
        let k = certify_constants(&psi, &proj, 1.0).unwrap();
        assert!(!k.certified);
        assert!(k.hint.as_deref().unwrap().contains("retry"));
        assert!(k.require_certified().is_err());
    }

    #[test]
    fn constants_are_scale_invariant() {
        let b2 = build_root_system(Family::B, 2).unwrap();
        let psi = SimpleSubrootSystem::whole(&b2, 0).unwrap();
        let proj = averaging_projection(&psi, &psi.psi_one()).unwrap();
        let k = certify_constants(&psi, &proj, 1e-3).unwrap();
        let sampler = RegionSampler::region_one(&psi);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let h = sampler.sample(&mut rng);
            for lambda in [1.0, 2.0, 10.0] {
                let hl: Vec<f64> = h.iter().map(|x| lambda * x).collect();
                assert_eq!(region_index(&psi, &hl).unwrap(), Some(1));
                assert!(norm(&proj.apply(&hl)) >= k.a * norm(&hl));
            }
        }
    }
}

//! Irreducible root systems in their standard Euclidean models, and finite
//! orthogonal products of them.
//!
//! Coordinates are exact rationals. `A_n` lives in the sum-zero hyperplane of
//! `R^{n+1}`, `B_n`, `C_n`, `D_n` and `F_4` in `R^n`, `G_2` in the sum-zero
//! hyperplane of `R^3`, and `E_6`, `E_7`, `E_8` inside `R^8` using the labelling
//! where `E_6 ⊂ E_7 ⊂ E_8` share their first simple roots.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{gram, int, to_f64, Rat, RatMatrix, RatVec};

/// Largest rank accepted for the classical families unless overridden.
pub const DEFAULT_CLASSICAL_RANK_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                Family::from_letter(c).ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
            }
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// A Cartan-Killing type such as `E8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Self {
        CartanType { family, rank }
    }

    /// Checks the `(family, rank)` pair names an irreducible root system.
    pub fn validate(self, classical_limit: usize) -> Result<()> {
        let fail = |reason: &str| {
            Err(Error::InvalidType {
                family: self.family.letter(),
                rank: self.rank,
                reason: reason.to_string(),
            })
        };
        let n = self.rank;
        match self.family {
            Family::A if n < 1 => fail("A requires rank >= 1"),
            Family::B | Family::C if n < 2 => fail("B and C require rank >= 2"),
            Family::D if n < 3 => fail("D requires rank >= 3"),
            Family::A | Family::B | Family::C | Family::D if n > classical_limit => {
                fail(&format!("classical rank limited to {classical_limit}"))
            }
            Family::E if !(6..=8).contains(&n) => fail("E requires rank 6, 7 or 8"),
            Family::F if n != 4 => fail("F requires rank 4"),
            Family::G if n != 2 => fail("G requires rank 2"),
            _ => Ok(()),
        }
    }

    /// The irreducible types with rank in `1..=max_rank`, one per isomorphism
    /// class (`B_n` from 2, `C_n` from 3, `D_n` from 4).
    pub fn classification(max_rank: usize) -> Vec<CartanType> {
        let mut out = Vec::new();
        for n in 1..=max_rank {
            out.push(CartanType::new(Family::A, n));
        }
        for n in 2..=max_rank {
            out.push(CartanType::new(Family::B, n));
        }
        for n in 3..=max_rank {
            out.push(CartanType::new(Family::C, n));
        }
        for n in 4..=max_rank {
            out.push(CartanType::new(Family::D, n));
        }
        for n in 6..=max_rank.min(8) {
            out.push(CartanType::new(Family::E, n));
        }
        if max_rank >= 4 {
            out.push(CartanType::new(Family::F, 4));
        }
        if max_rank >= 2 {
            out.push(CartanType::new(Family::G, 2));
        }
        out
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<CartanType> {
        let s = s.trim();
        let family = s
            .chars()
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::Parse(format!("bad Cartan type {s:?}")))?;
        let rank = s[1..]
            .parse()
            .map_err(|_| Error::Parse(format!("bad Cartan type {s:?}")))?;
        Ok(CartanType::new(family, rank))
    }
}

/// A root together with its expansion in the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub vector: RatVec,
    pub coeffs: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemKind {
    Irreducible(CartanType),
    Product(Vec<CartanType>),
}

/// A validated (possibly reducible) crystallographic root system.
#[derive(Clone, Debug)]
pub struct RootSystem {
    kind: SystemKind,
    ambient_dim: usize,
    simple: Vec<Root>,
    roots: Vec<Root>,
    positive: Vec<Root>,
    cartan: Vec<Vec<i64>>,
    gram_inverse: RatMatrix,
    index: HashMap<RatVec, usize>,
}

pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    build_root_system_with_limit(family, rank, DEFAULT_CLASSICAL_RANK_LIMIT)
}

pub fn build_root_system_with_limit(
    family: Family,
    rank: usize,
    classical_limit: usize,
) -> Result<RootSystem> {
    let ty = CartanType::new(family, rank);
    ty.validate(classical_limit)?;
    let (dim, simple) = simple_roots(ty);
    RootSystem::from_simple_roots(SystemKind::Irreducible(ty), dim, simple)
}

fn simple_roots(ty: CartanType) -> (usize, Vec<RatVec>) {
    let n = ty.rank;
    let e = |dim: usize, i: usize| RatVec::unit(dim, i);
    let chain = |dim: usize, count: usize| -> Vec<RatVec> {
        (0..count).map(|i| &e(dim, i) - &e(dim, i + 1)).collect()
    };
    match ty.family {
        Family::A => (n + 1, chain(n + 1, n)),
        Family::B => {
            let mut s = chain(n, n - 1);
            s.push(e(n, n - 1));
            (n, s)
        }
        Family::C => {
            let mut s = chain(n, n - 1);
            s.push(e(n, n - 1).scale(int(2)));
            (n, s)
        }
        Family::D => {
            let mut s = chain(n, n - 1);
            s.push(&e(n, n - 2) + &e(n, n - 1));
            (n, s)
        }
        Family::G => (
            3,
            vec![RatVec::from_ints(&[1, -1, 0]), RatVec::from_ints(&[-2, 1, 1])],
        ),
        Family::F => (
            4,
            vec![
                RatVec::from_ints(&[0, 1, -1, 0]),
                RatVec::from_ints(&[0, 0, 1, -1]),
                RatVec::from_ints(&[0, 0, 0, 1]),
                RatVec::from_scaled(&[1, -1, -1, -1], 2),
            ],
        ),
        Family::E => {
            let mut s = vec![
                RatVec::from_scaled(&[1, -1, -1, -1, -1, -1, -1, 1], 2),
                RatVec::from_ints(&[1, 1, 0, 0, 0, 0, 0, 0]),
            ];
            for i in 0..6 {
                s.push(&e(8, i + 1) - &e(8, i));
            }
            s.truncate(n);
            (8, s)
        }
    }
}

impl RootSystem {
    /// Builds Φ as the Weyl orbit of the simple roots and validates every
    /// root-system axiom exactly.
    pub fn from_simple_roots(kind: SystemKind, ambient_dim: usize, simple: Vec<RatVec>) -> Result<Self> {
        if simple.is_empty() {
            return Err(Error::Empty("simple root list"));
        }
        for s in &simple {
            if s.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: s.dim(),
                });
            }
        }
        let gram_inverse = gram(&simple)
            .inverse()
            .ok_or_else(|| Error::Invalid("simple roots are linearly dependent".into()))?;

        let mut seen: HashSet<RatVec> = simple.iter().cloned().collect();
        let mut queue: VecDeque<RatVec> = simple.iter().cloned().collect();
        while let Some(v) = queue.pop_front() {
            for s in &simple {
                let w = v.reflect(s);
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }

        let n = simple.len();
        let mut roots = Vec::with_capacity(seen.len());
        for v in seen {
            let coeffs = coefficients(&gram_inverse, &simple, &v)?;
            roots.push(Root { vector: v, coeffs });
        }
        roots.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));

        let simple: Vec<Root> = simple
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let mut coeffs = vec![0; n];
                coeffs[i] = 1;
                Root { vector: v, coeffs }
            })
            .collect();
        let positive: Vec<Root> = roots.iter().filter(|r| r.is_positive()).cloned().collect();

        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = int(2) * simple[i].vector.dot(&simple[j].vector) / simple[j].vector.norm_sq();
                if !c.is_integer() {
                    return Err(Error::Invalid(format!("non-integral Cartan entry at ({i},{j})")));
                }
                cartan[i][j] = c.to_integer();
            }
        }

        let index = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.vector.clone(), i))
            .collect();
        let rs = RootSystem {
            kind,
            ambient_dim,
            simple,
            roots,
            positive,
            cartan,
            gram_inverse,
            index,
        };
        rs.validate()?;
        Ok(rs)
    }

    fn validate(&self) -> Result<()> {
        if self.roots.len() != 2 * self.positive.len() {
            return Err(Error::Invalid("|Φ| != 2|Φ+|".into()));
        }
        for p in &self.positive {
            if !self.index.contains_key(&(-&p.vector)) {
                return Err(Error::Invalid(format!("-{:?} missing", p.vector)));
            }
        }
        for a in &self.roots {
            if a.vector.is_zero() {
                return Err(Error::Invalid("zero vector among roots".into()));
            }
            for b in &self.roots {
                let pairing = int(2) * a.vector.dot(&b.vector) / b.vector.norm_sq();
                if !pairing.is_integer() {
                    return Err(Error::Invalid(format!(
                        "2<a,b>/<b,b> not integral for {:?}, {:?}",
                        a.vector, b.vector
                    )));
                }
                if !self.index.contains_key(&a.vector.reflect(&b.vector)) {
                    return Err(Error::Invalid("not closed under reflections".into()));
                }
            }
        }
        let n = self.rank();
        for i in 0..n {
            if self.cartan[i][i] != 2 {
                return Err(Error::Invalid("Cartan diagonal must be 2".into()));
            }
            for j in 0..n {
                if i != j && self.cartan[i][j] > 0 {
                    return Err(Error::Invalid("positive off-diagonal Cartan entry".into()));
                }
            }
        }
        if self.is_irreducible() {
            let inv = self
                .cartan_inverse()
                .ok_or_else(|| Error::Invalid("Cartan matrix is singular".into()))?;
            if inv.entries().iter().any(|x| !x.is_positive()) {
                return Err(Error::Invalid(
                    "inverse Cartan matrix has a non-positive entry".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self.kind, SystemKind::Irreducible(_))
    }

    pub fn cartan_type(&self) -> Option<CartanType> {
        match self.kind {
            SystemKind::Irreducible(t) => Some(t),
            SystemKind::Product(_) => None,
        }
    }

    /// Components, in order; a single entry for an irreducible system.
    pub fn components(&self) -> Vec<CartanType> {
        match &self.kind {
            SystemKind::Irreducible(t) => vec![*t],
            SystemKind::Product(ts) => ts.clone(),
        }
    }

    /// `A2`, or `B3xA1xA1` for a product.
    pub fn label(&self) -> String {
        self.components()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.simple
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// `|Φ|`, counting positive and negative roots.
    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    /// `n / |Φ|`.
    pub fn ratio(&self) -> Rat {
        Rat::new(self.rank() as i64, self.root_count() as i64)
    }

    /// `dim g = n + |Φ|`.
    pub fn lie_algebra_dim(&self) -> usize {
        self.rank() + self.root_count()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn cartan_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(
            &self
                .cartan
                .iter()
                .map(|row| RatVec::from_ints(row))
                .collect::<Vec<_>>(),
        )
    }

    pub fn cartan_inverse(&self) -> Option<RatMatrix> {
        self.cartan_matrix().inverse()
    }

    pub fn contains(&self, v: &RatVec) -> bool {
        self.index.contains_key(v)
    }

    /// Coefficients of a root in the simple roots.
    pub fn expand_in_base(&self, v: &RatVec) -> Result<Vec<i64>> {
        self.index
            .get(v)
            .map(|&i| self.roots[i].coeffs.clone())
            .ok_or_else(|| Error::NotARoot(format!("{v:?}")))
    }

    pub fn highest_root(&self) -> &Root {
        self.positive
            .iter()
            .max_by_key(|r| r.height())
            .expect("non-empty root system")
    }

    /// The dual basis `ω_i` of span Φ with `<ω_i, β_j> = δ_ij`.
    pub fn dual_basis(&self) -> Vec<RatVec> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                (0..n).fold(RatVec::zeros(self.ambient_dim), |acc, j| {
                    &acc + &self.simple[j].vector.scale(self.gram_inverse[(i, j)])
                })
            })
            .collect()
    }

    /// `ρ∨ = Σ ω∨_i` with `<ω∨_i, β_j> = δ_ij <β_j, β_j>/2`. Exactly regular.
    pub fn rho_coweight(&self) -> RatVec {
        self.dual_basis()
            .iter()
            .zip(&self.simple)
            .fold(RatVec::zeros(self.ambient_dim), |acc, (w, b)| {
                &acc + &w.scale(b.vector.norm_sq() / int(2))
            })
    }

    /// The vector `Σ c_i ω_i`, i.e. the point `H` of span Φ with
    /// `<H, β_i> = c_i`.
    pub fn from_pairings(&self, pairings: &[f64]) -> Result<Vec<f64>> {
        if pairings.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: pairings.len(),
            });
        }
        let mut h = vec![0.0; self.ambient_dim];
        for (w, &c) in self.dual_basis().iter().zip(pairings) {
            for (x, y) in h.iter_mut().zip(w.to_f64()) {
                *x += c * y;
            }
        }
        Ok(h)
    }

    /// Orthonormal basis of span Φ (Gram-Schmidt on the simple roots).
    pub fn orthonormal_basis(&self) -> Vec<Vec<f64>> {
        orthonormalize(self.simple.iter().map(|r| r.vector.to_f64()))
    }

    pub fn simple_f64(&self) -> Vec<Vec<f64>> {
        self.simple.iter().map(|r| r.vector.to_f64()).collect()
    }

    pub fn positive_f64(&self) -> Vec<Vec<f64>> {
        self.positive.iter().map(|r| r.vector.to_f64()).collect()
    }

    pub fn max_root_norm(&self) -> f64 {
        self.roots
            .iter()
            .map(|r| to_f64(&r.vector.norm_sq()).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn to_document(&self) -> RootSystemDocument {
        let family = match &self.kind {
            SystemKind::Irreducible(t) => t.family.to_string(),
            SystemKind::Product(_) => self.label(),
        };
        RootSystemDocument {
            family,
            rank: self.rank(),
            ambient_dim: self.ambient_dim,
            simple_roots: self.simple.iter().map(|r| r.vector.to_strings()).collect(),
            positive_roots: self.positive.iter().map(|r| r.vector.to_strings()).collect(),
            cartan: self.cartan.clone(),
        }
    }
}

fn coefficients(gram_inverse: &RatMatrix, simple: &[RatVec], v: &RatVec) -> Result<Vec<i64>> {
    let n = simple.len();
    let pairings: Vec<Rat> = simple.iter().map(|s| v.dot(s)).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = (0..n).fold(Rat::zero(), |acc, j| acc + gram_inverse[(i, j)] * pairings[j]);
        if !c.is_integer() {
            return Err(Error::Invalid(format!("non-integral coefficient for {v:?}")));
        }
        out.push(c.to_integer().to_i64().unwrap_or(i64::MAX));
    }
    let (pos, neg) = (out.iter().any(|&c| c > 0), out.iter().any(|&c| c < 0));
    if pos && neg {
        return Err(Error::Invalid(format!("mixed-sign coefficients for {v:?}")));
    }
    Ok(out)
}

pub(crate) fn orthonormalize(vs: impl Iterator<Item = Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut v in vs {
        // two passes keep the basis orthogonal to machine precision
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= d * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

/// Canonical JSON shape of a root system; rationals are `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemDocument {
    pub family: String,
    pub rank: usize,
    pub ambient_dim: usize,
    pub simple_roots: Vec<Vec<String>>,
    pub positive_roots: Vec<Vec<String>>,
    pub cartan: Vec<Vec<i64>>,
}

/// An orthogonal direct sum of irreducible root systems.
#[derive(Clone, Debug)]
pub struct ProductRootSystem {
    factors: Vec<RootSystem>,
    combined: RootSystem,
}

pub fn product(factors: Vec<RootSystem>) -> Result<ProductRootSystem> {
    if factors.is_empty() {
        return Err(Error::Empty("factor list"));
    }
    let dim: usize = factors.iter().map(RootSystem::ambient_dim).sum();
    let mut types = Vec::new();
    let mut simple = Vec::new();
    let mut offset = 0;
    for f in &factors {
        types.extend(f.components());
        simple.extend(f.simple.iter().map(|r| r.vector.embed(dim, offset)));
        offset += f.ambient_dim;
    }
    let combined = RootSystem::from_simple_roots(SystemKind::Product(types), dim, simple)?;
    let prs = ProductRootSystem { factors, combined };
    if !prs.spans_orthogonal() {
        return Err(Error::Invalid("factor spans are not orthogonal".into()));
    }
    Ok(prs)
}

impl ProductRootSystem {
    pub fn factors(&self) -> &[RootSystem] {
        &self.factors
    }

    pub fn as_root_system(&self) -> &RootSystem {
        &self.combined
    }

    pub fn total_roots(&self) -> usize {
        self.combined.root_count()
    }

    fn spans_orthogonal(&self) -> bool {
        let dim = self.combined.ambient_dim;
        let mut offset = 0;
        let mut embedded: Vec<Vec<RatVec>> = Vec::new();
        for f in &self.factors {
            embedded.push(f.simple.iter().map(|r| r.vector.embed(dim, offset)).collect());
            offset += f.ambient_dim;
        }
        for (i, a) in embedded.iter().enumerate() {
            for b in embedded.iter().skip(i + 1) {
                if a.iter().any(|x| b.iter().any(|y| !x.dot(y).is_zero())) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn rs(f: Family, n: usize) -> RootSystem {
        build_root_system(f, n).unwrap()
    }

    #[test]
    fn root_counts_for_small_systems() {
        assert_eq!(rs(Family::A, 1).root_count(), 2);
        assert_eq!(rs(Family::A, 1).positive_roots().len(), 1);
        assert_eq!(rs(Family::A, 2).root_count(), 6);
        assert_eq!(rs(Family::A, 2).ratio(), rat(1, 3));
        assert_eq!(rs(Family::B, 3).root_count(), 18);
        assert_eq!(rs(Family::G, 2).root_count(), 12);
    }

    #[test]
    fn root_counts_match_closed_forms() {
        for n in 1..=8 {
            assert_eq!(rs(Family::A, n).root_count(), n * (n + 1));
        }
        for n in 2..=8 {
            assert_eq!(rs(Family::B, n).root_count(), 2 * n * n);
            assert_eq!(rs(Family::C, n).root_count(), 2 * n * n);
        }
        for n in 3..=8 {
            assert_eq!(rs(Family::D, n).root_count(), 2 * n * (n - 1));
        }
        assert_eq!(rs(Family::E, 6).root_count(), 72);
        assert_eq!(rs(Family::E, 7).root_count(), 126);
        assert_eq!(rs(Family::E, 8).root_count(), 240);
        assert_eq!(rs(Family::F, 4).root_count(), 48);
    }

    #[test]
    fn invalid_types_name_the_constraint() {
        let err = build_root_system(Family::D, 2).unwrap_err().to_string();
        assert!(err.contains("rank >= 3"), "{err}");
        let err = build_root_system(Family::E, 5).unwrap_err().to_string();
        assert!(err.contains("6, 7 or 8"), "{err}");
        assert!(build_root_system(Family::A, 0).is_err());
        assert!(build_root_system(Family::G, 3).is_err());
        assert!(build_root_system(Family::F, 5).is_err());
        assert!(build_root_system(Family::A, 13).is_err());
        assert!(build_root_system_with_limit(Family::A, 13, 13).is_ok());
    }

    #[test]
    fn cartan_matrices() {
        assert_eq!(rs(Family::A, 2).cartan(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(rs(Family::A, 1).cartan(), &[vec![2]]);
        assert_eq!(rs(Family::G, 2).cartan(), &[vec![2, -1], vec![-3, 2]]);
        assert_eq!(rs(Family::B, 2).cartan(), &[vec![2, -2], vec![-1, 2]]);
        let inv = rs(Family::A, 2).cartan_inverse().unwrap();
        assert_eq!(inv.entries(), &[rat(2, 3), rat(1, 3), rat(1, 3), rat(2, 3)]);
    }

    #[test]
    fn inverse_cartan_is_positive_for_every_irreducible_type() {
        for ty in CartanType::classification(8) {
            let r = rs(ty.family, ty.rank);
            let inv = r.cartan_inverse().unwrap();
            assert!(inv.entries().iter().all(|x| x.is_positive()), "{ty}");
        }
    }

    #[test]
    fn expansion_in_base() {
        let a2 = rs(Family::A, 2);
        assert_eq!(a2.highest_root().coeffs, vec![1, 1]);
        let b1 = &a2.simple_roots()[0].vector;
        assert_eq!(a2.expand_in_base(b1).unwrap(), vec![1, 0]);
        assert_eq!(a2.expand_in_base(&-b1).unwrap(), vec![-1, 0]);
        assert!(a2.expand_in_base(&RatVec::from_ints(&[1, 1, -2])).is_err());
        let e8 = rs(Family::E, 8);
        assert_eq!(e8.highest_root().coeffs, vec![2, 3, 4, 6, 5, 4, 3, 2]);
    }

    #[test]
    fn positive_roots_are_the_non_negative_expansions() {
        for ty in [CartanType::new(Family::F, 4), CartanType::new(Family::D, 5)] {
            let r = rs(ty.family, ty.rank);
            let positive: HashSet<_> = r.positive_roots().iter().map(|x| x.vector.clone()).collect();
            for root in r.roots() {
                assert_eq!(positive.contains(&root.vector), root.coeffs.iter().all(|&c| c >= 0));
            }
        }
    }

    #[test]
    fn roots_are_sorted_by_coefficients() {
        let r = rs(Family::B, 3);
        assert!(r.roots().windows(2).all(|w| w[0].coeffs < w[1].coeffs));
    }

    #[test]
    fn dual_basis_pairs_to_identity() {
        let r = rs(Family::G, 2);
        for (i, w) in r.dual_basis().iter().enumerate() {
            for (j, b) in r.simple_roots().iter().enumerate() {
                assert_eq!(w.dot(&b.vector), int((i == j) as i64));
            }
        }
        let rho = r.rho_coweight();
        assert!(r.positive_roots().iter().all(|a| a.vector.dot(&rho).is_positive()));
    }

    #[test]
    fn products_pad_and_count() {
        let p = product(vec![rs(Family::B, 3), rs(Family::A, 1)]).unwrap();
        assert_eq!(p.total_roots(), 20);
        assert_eq!(p.as_root_system().label(), "B3xA1");
        assert_eq!(p.as_root_system().rank(), 4);
        let single = product(vec![rs(Family::A, 1)]).unwrap();
        assert_eq!(single.as_root_system().ratio(), rs(Family::A, 1).ratio());
        assert!(product(vec![]).is_err());
        let counter = product(vec![
            rs(Family::B, 3),
            rs(Family::A, 1),
            rs(Family::A, 1),
            rs(Family::A, 1),
        ])
        .unwrap();
        assert_eq!(counter.as_root_system().ratio(), rat(1, 4));
    }

    #[test]
    fn document_uses_rational_strings() {
        let doc = rs(Family::F, 4).to_document();
        assert_eq!(doc.family, "F");
        assert_eq!(doc.ambient_dim, 4);
        assert_eq!(doc.simple_roots[3], vec!["1/2", "-1/2", "-1/2", "-1/2"]);
        assert_eq!(doc.positive_roots.len(), 24);
    }

    #[test]
    fn parse_types() {
        assert_eq!("E8".parse::<CartanType>().unwrap(), CartanType::new(Family::E, 8));
        assert_eq!("b".parse::<Family>().unwrap(), Family::B);
        assert!("X2".parse::<CartanType>().is_err());
    }
}

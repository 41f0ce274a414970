//! Weyl groups as explicit orthogonal matrices with exact rational entries.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::rational::{RatMatrix, RatVec};
use crate::root_systems::RootSystem;

/// Default cap on generated group orders.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    matrix: RatMatrix,
    sign: i8,
    word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(dim: usize) -> Self {
        WeylElement {
            matrix: RatMatrix::identity(dim),
            sign: 1,
            word: Vec::new(),
        }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    /// Determinant, `(-1)^length`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// A reduced word in 0-based simple reflection indices.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement {
            matrix: self.matrix.mul(&other.matrix),
            sign: self.sign * other.sign,
            word,
        }
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            matrix: self.matrix.transpose(),
            sign: self.sign,
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn act_exact(&self, v: &RatVec) -> RatVec {
        self.matrix.apply(v)
    }

    pub fn act(&self, h: &[f64]) -> Result<Vec<f64>> {
        let d = self.matrix.dim();
        if h.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: h.len(),
            });
        }
        let m = self.matrix.to_f64();
        Ok((0..d)
            .map(|i| (0..d).map(|j| m[i * d + j] * h[j]).sum())
            .collect())
    }
}

/// The reflection in the `i`-th simple root, `i` counted from 1.
pub fn simple_reflection(rs: &RootSystem, i: usize) -> Result<WeylElement> {
    if i == 0 || i > rs.rank() {
        return Err(Error::IndexOutOfRange {
            index: i,
            rank: rs.rank(),
        });
    }
    Ok(WeylElement {
        matrix: RatMatrix::reflection(&rs.simple_roots()[i - 1].vector),
        sign: -1,
        word: vec![i - 1],
    })
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    generators: Vec<usize>,
    probe: RatVec,
    index: HashMap<RatVec, usize>,
}

/// Breadth-first closure of all simple reflections.
pub fn generate(rs: &RootSystem, cap: usize) -> Result<WeylGroup> {
    let all: Vec<usize> = (0..rs.rank()).collect();
    generate_parabolic(rs, &all, cap)
}

/// The subgroup generated by the reflections in `{β_i : i ∈ subset}`
/// (0-based), built directly from those generators.
pub fn generate_parabolic(rs: &RootSystem, subset: &[usize], cap: usize) -> Result<WeylGroup> {
    for &i in subset {
        if i >= rs.rank() {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                rank: rs.rank(),
            });
        }
    }
    let dim = rs.ambient_dim();
    // distinct elements of W move the regular point ρ∨ to distinct points,
    // so its image is an exact dedup key
    let probe = rs.rho_coweight();
    let identity = WeylElement::identity(dim);
    let mut index = HashMap::new();
    index.insert(probe.clone(), 0);
    let mut elements = vec![identity];
    let mut queue = VecDeque::from([0usize]);
    while let Some(at) = queue.pop_front() {
        for &g in subset {
            let root = &rs.simple_roots()[g].vector;
            let matrix = elements[at].matrix.mul_reflection(root);
            let key = matrix.apply(&probe);
            if index.contains_key(&key) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::GroupTooLarge { cap });
            }
            let mut word = elements[at].word.clone();
            word.push(g);
            index.insert(key, elements.len());
            queue.push_back(elements.len());
            elements.push(WeylElement {
                matrix,
                sign: -elements[at].sign,
                word,
            });
        }
    }
    Ok(WeylGroup {
        elements,
        generators: subset.to_vec(),
        probe,
        index,
    })
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn identity(&self) -> &WeylElement {
        &self.elements[0]
    }

    pub fn ambient_dim(&self) -> usize {
        self.probe.dim()
    }

    /// Index of the element with this matrix, if it belongs to the group.
    pub fn position(&self, matrix: &RatMatrix) -> Option<usize> {
        if matrix.dim() != self.ambient_dim() {
            return None;
        }
        let i = *self.index.get(&matrix.apply(&self.probe))?;
        (self.elements[i].matrix == *matrix).then_some(i)
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.position(&w.matrix).is_some()
    }

    /// The longest element, i.e. the one with the longest reduced word.
    pub fn longest_element(&self) -> &WeylElement {
        self.elements.last().expect("groups contain the identity")
    }

    /// Pairs `(sgn σ, σ⁻¹ h0)` so that `<σ H, h0> = <H, σ⁻¹ h0>`.
    pub fn signed_orbit(&self, h0: &[f64]) -> Result<Vec<(f64, Vec<f64>)>> {
        self.elements
            .iter()
            .map(|w| Ok((w.sign as f64, w.inverse().act(h0)?)))
            .collect()
    }
}

/// One representative `σ_j` per left coset `σ_j V1` of `V1` in `V`, in the
/// enumeration order of `V` (so the identity comes first).
pub fn coset_representatives(v: &WeylGroup, v1: &WeylGroup) -> Result<Vec<WeylElement>> {
    if v.ambient_dim() != v1.ambient_dim() {
        return Err(Error::NotSubgroup("ambient dimensions differ".into()));
    }
    if v.order() % v1.order() != 0 {
        return Err(Error::NotSubgroup(format!(
            "order {} does not divide {}",
            v1.order(),
            v.order()
        )));
    }
    for w in v1.elements() {
        if !v.contains(w) {
            return Err(Error::NotSubgroup(format!(
                "element with word {:?} is missing",
                w.word()
            )));
        }
    }
    let mut covered = vec![false; v.order()];
    let mut reps = Vec::with_capacity(v.order() / v1.order());
    for (i, sigma) in v.elements().iter().enumerate() {
        if covered[i] {
            continue;
        }
        for tau in v1.elements() {
            let j = v
                .position(&sigma.matrix.mul(&tau.matrix))
                .ok_or_else(|| Error::NotSubgroup("coset leaves the group".into()))?;
            covered[j] = true;
        }
        reps.push(sigma.clone());
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::root_systems::{build_root_system, Family};

    fn group(f: Family, n: usize) -> (RootSystem, WeylGroup) {
        let rs = build_root_system(f, n).unwrap();
        let w = generate(&rs, DEFAULT_GROUP_CAP).unwrap();
        (rs, w)
    }

    #[test]
    fn small_orders() {
        assert_eq!(group(Family::A, 1).1.order(), 2);
        assert_eq!(group(Family::A, 2).1.order(), 6);
        assert_eq!(group(Family::B, 2).1.order(), 8);
        assert_eq!(group(Family::G, 2).1.order(), 12);
        assert_eq!(group(Family::A, 3).1.order(), 24);
        assert_eq!(group(Family::B, 3).1.order(), 48);
    }

    #[test]
    fn a1_reflection_negates_the_root_line() {
        let rs = build_root_system(Family::A, 1).unwrap();
        let s = simple_reflection(&rs, 1).unwrap();
        let h = rs.simple_roots()[0].vector.scale(int(3));
        assert_eq!(s.act_exact(&h), -&h);
        assert_eq!(s.sign(), -1);
        assert!(s.compose(&s).matrix().is_identity());
    }

    #[test]
    fn a2_reflection_of_second_simple_root() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let s1 = simple_reflection(&rs, 1).unwrap();
        let b = rs.simple_roots();
        assert_eq!(s1.act_exact(&b[1].vector), &b[0].vector + &b[1].vector);
        assert!(simple_reflection(&rs, 0).is_err());
        assert!(simple_reflection(&rs, 3).is_err());
    }

    #[test]
    fn act_checks_dimension() {
        let (_, w) = group(Family::A, 2);
        assert!(w.identity().act(&[1.0, 2.0]).is_err());
        assert_eq!(w.identity().act(&[1.0, 2.0, -3.0]).unwrap(), vec![1.0, 2.0, -3.0]);
    }

    #[test]
    fn cap_is_enforced() {
        let rs = build_root_system(Family::B, 3).unwrap();
        let err = generate(&rs, 47).unwrap_err();
        assert!(err.to_string().contains("47"), "{err}");
        assert_eq!(generate(&rs, 48).unwrap().order(), 48);
    }

    #[test]
    fn cosets_of_a2() {
        let (rs, v) = group(Family::A, 2);
        let v1 = generate_parabolic(&rs, &[1], DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(v1.order(), 2);
        assert_eq!(coset_representatives(&v, &v1).unwrap().len(), 3);
        let reps = coset_representatives(&v, &v).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(reps[0].matrix().is_identity());
        let trivial = generate_parabolic(&rs, &[], DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(coset_representatives(&v, &trivial).unwrap().len(), 6);
    }

    #[test]
    fn foreign_subgroup_is_rejected() {
        let (_, v) = group(Family::A, 2);
        let (_, other) = group(Family::B, 3);
        assert!(coset_representatives(&v, &other).is_err());
    }

    #[test]
    fn longest_element_of_a2_negates_the_chamber() {
        let (rs, w) = group(Family::A, 2);
        let w0 = w.longest_element();
        assert_eq!(w0.word().len(), 3);
        let rho = rs.rho_coweight();
        let image = w0.act_exact(&rho);
        assert!(rs
            .simple_roots()
            .iter()
            .all(|b| b.vector.dot(&image) < int(0)));
    }
}

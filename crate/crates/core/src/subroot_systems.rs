//! Simple subroot systems (those cut out by a subset of the base), the strict
//! ratio inequality `n/|Φ| < m/|Ψ|`, the gap constant ε₀ and the ratio table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, int, rat, serialize_opt_rat, serialize_rat, Rat, RatVec};
use crate::root_systems::{build_root_system, CartanType, Family, Root, RootSystem};

/// `Ψ = span_Z{β_i : i ∈ S} ∩ Φ`.
#[derive(Clone, Debug)]
pub struct SimpleSubrootSystem<'a> {
    parent: &'a RootSystem,
    base: Vec<usize>,
    roots: Vec<Root>,
    positive: Vec<Root>,
}

/// Builds the simple subsystem on the 0-based index set `subset`. The first
/// listed index is the designated `γ₁`.
pub fn simple_subsystem<'a>(rs: &'a RootSystem, subset: &[usize]) -> Result<SimpleSubrootSystem<'a>> {
    if subset.is_empty() {
        return Err(Error::Empty("simple root subset"));
    }
    SimpleSubrootSystem::new(rs, subset)
}

impl<'a> SimpleSubrootSystem<'a> {
    fn new(rs: &'a RootSystem, subset: &[usize]) -> Result<Self> {
        let mut seen = vec![false; rs.rank()];
        for &i in subset {
            if i >= rs.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i + 1,
                    rank: rs.rank(),
                });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!("index {} repeated", i + 1)));
            }
        }
        let roots: Vec<Root> = rs
            .roots()
            .iter()
            .filter(|r| r.coeffs.iter().enumerate().all(|(i, &c)| c == 0 || seen[i]))
            .cloned()
            .collect();
        let positive = roots.iter().filter(|r| r.is_positive()).cloned().collect();
        Ok(SimpleSubrootSystem {
            parent: rs,
            base: subset.to_vec(),
            roots,
            positive,
        })
    }

    /// The whole system viewed as its own simple subsystem, with `γ₁ = β_first`.
    pub fn whole(rs: &'a RootSystem, first: usize) -> Result<Self> {
        let mut base = vec![first];
        base.extend((0..rs.rank()).filter(|&i| i != first));
        simple_subsystem(rs, &base)
    }

    pub fn parent(&self) -> &'a RootSystem {
        self.parent
    }

    /// Parent indices of `γ_1, …, γ_m`.
    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn gammas(&self) -> Vec<&'a Root> {
        self.base
            .iter()
            .map(|&i| &self.parent.simple_roots()[i])
            .collect()
    }

    pub fn m(&self) -> usize {
        self.base.len()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn size(&self) -> usize {
        self.roots.len()
    }

    /// `m/|Ψ|`; `None` for the empty system.
    pub fn ratio(&self) -> Option<Rat> {
        (self.size() > 0).then(|| rat(self.m() as i64, self.size() as i64))
    }

    pub fn is_proper(&self) -> bool {
        self.m() < self.parent.rank()
    }

    /// `Ψ₁`: the simple subsystem on `γ₂, …, γ_m` (empty when `m = 1`).
    pub fn psi_one(&self) -> SimpleSubrootSystem<'a> {
        SimpleSubrootSystem::new(self.parent, &self.base[1..]).expect("subset of a valid base")
    }

    /// Positive roots of Ψ that are not roots of Ψ₁.
    pub fn positive_outside_psi_one(&self) -> Vec<&Root> {
        let first = self.base.first().copied();
        self.positive
            .iter()
            .filter(|r| first.is_some_and(|f| r.coeffs[f] != 0))
            .collect()
    }

    pub fn contains(&self, other: &SimpleSubrootSystem<'_>) -> bool {
        other.base.iter().all(|i| self.base.contains(i))
    }

    /// Whether Ψ is closed under the reflections in its own roots.
    pub fn is_closed(&self) -> bool {
        let set: std::collections::HashSet<&RatVec> = self.roots.iter().map(|r| &r.vector).collect();
        self.roots
            .iter()
            .all(|a| self.roots.iter().all(|b| set.contains(&a.vector.reflect(&b.vector))))
    }

    pub fn components(&self) -> Vec<CartanType> {
        classify(self.parent, &self.base)
    }

    pub fn label(&self) -> String {
        label_of(&self.components())
    }
}

pub fn label_of(types: &[CartanType]) -> String {
    if types.is_empty() {
        return "0".to_string();
    }
    types.iter().map(ToString::to_string).collect::<Vec<_>>().join("x")
}

/// Cartan type of the Dynkin subdiagram on `subset`, one entry per connected
/// component, largest rank first.
pub fn classify(rs: &RootSystem, subset: &[usize]) -> Vec<CartanType> {
    let cartan = rs.cartan();
    let bond = |i: usize, j: usize| cartan[i][j] * cartan[j][i];
    let mut nodes: Vec<usize> = subset.to_vec();
    nodes.sort_unstable();
    let mut visited = vec![false; rs.rank()];
    let mut out = Vec::new();
    for &start in &nodes {
        if visited[start] {
            continue;
        }
        let mut comp = vec![start];
        visited[start] = true;
        let mut at = 0;
        while at < comp.len() {
            let u = comp[at];
            for &v in &nodes {
                if !visited[v] && bond(u, v) > 0 {
                    visited[v] = true;
                    comp.push(v);
                }
            }
            at += 1;
        }
        out.push(classify_connected(rs, &comp));
    }
    out.sort_by(|a, b| b.rank.cmp(&a.rank).then(a.family.cmp(&b.family)));
    out
}

fn classify_connected(rs: &RootSystem, comp: &[usize]) -> CartanType {
    let cartan = rs.cartan();
    let m = comp.len();
    let bond = |i: usize, j: usize| cartan[i][j] * cartan[j][i];
    let degree = |u: usize| comp.iter().filter(|&&v| v != u && bond(u, v) > 0).count();
    let norm = |u: usize| rs.simple_roots()[u].vector.norm_sq();
    let mut multi = None;
    for (a, &u) in comp.iter().enumerate() {
        for &v in &comp[a + 1..] {
            if bond(u, v) > 1 {
                multi = Some((u, v, bond(u, v)));
            }
        }
    }
    match multi {
        Some((_, _, 3)) => CartanType::new(Family::G, 2),
        Some(_) if m == 2 => CartanType::new(Family::B, 2),
        Some((u, v, _)) => {
            if degree(u) == 2 && degree(v) == 2 {
                return CartanType::new(Family::F, 4);
            }
            let (end, other) = if degree(u) == 1 { (u, v) } else { (v, u) };
            if norm(end) < norm(other) {
                CartanType::new(Family::B, m)
            } else {
                CartanType::new(Family::C, m)
            }
        }
        None => {
            let Some(&branch) = comp.iter().find(|&&u| degree(u) == 3) else {
                return CartanType::new(Family::A, m);
            };
            let mut arms: Vec<usize> = comp
                .iter()
                .filter(|&&v| v != branch && bond(branch, v) > 0)
                .map(|&first| {
                    let (mut prev, mut cur, mut len) = (branch, first, 1);
                    loop {
                        let next = comp
                            .iter()
                            .copied()
                            .find(|&w| w != prev && w != cur && bond(cur, w) > 0);
                        match next {
                            Some(w) => {
                                prev = cur;
                                cur = w;
                                len += 1;
                            }
                            None => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => CartanType::new(Family::D, m),
                [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => CartanType::new(Family::E, m),
                _ => panic!("not a finite-type Dynkin diagram: arms {arms:?}"),
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma3Entry {
    /// 1-based simple root indices.
    pub subset: Vec<usize>,
    pub subsystem: String,
    pub m: usize,
    pub psi_size: usize,
    #[serde(serialize_with = "serialize_rat")]
    pub ratio: Rat,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma3Report {
    pub system: String,
    pub rank: usize,
    pub root_count: usize,
    #[serde(serialize_with = "serialize_rat")]
    pub ratio: Rat,
    pub entries: Vec<Lemma3Entry>,
    /// `min (m/|Ψ| - n/|Φ|)` over proper subsystems.
    #[serde(serialize_with = "serialize_opt_rat")]
    pub min_gap: Option<Rat>,
    pub holds: bool,
}

/// Compares `n/|Φ|` against `m/|Ψ|` for every proper non-empty subset of Δ.
/// A violated inequality is reported, not raised.
pub fn lemma3_check(rs: &RootSystem) -> Lemma3Report {
    let n = rs.rank();
    let ratio = rs.ratio();
    let mut entries = Vec::new();
    for mask in 1u32..(1u32 << n) - 1 {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let psi = simple_subsystem(rs, &subset).expect("non-empty subset");
        let r = psi.ratio().expect("non-empty subsystem");
        entries.push(Lemma3Entry {
            subset: subset.iter().map(|i| i + 1).collect(),
            subsystem: psi.label(),
            m: psi.m(),
            psi_size: psi.size(),
            ratio: r,
            holds: ratio < r,
        });
    }
    let min_gap = entries.iter().map(|e| e.ratio - ratio).min();
    let holds = entries.iter().all(|e| e.holds);
    Lemma3Report {
        system: rs.label(),
        rank: n,
        root_count: rs.root_count(),
        ratio,
        entries,
        min_gap,
        holds,
    }
}

/// Half the smallest gap `m/|Ψ| - n/|Φ|`; `1/2` for rank one, which has no
/// proper simple subsystem.
pub fn epsilon0(rs: &RootSystem) -> Result<Rat> {
    match lemma3_check(rs).min_gap {
        None => Ok(rat(1, 2)),
        Some(gap) if gap.is_positive() => Ok(gap / int(2)),
        Some(gap) => Err(Error::InvalidArgument(format!(
            "{}: smallest ratio gap {} is not positive",
            rs.label(),
            fmt_rat(&gap)
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioRecord {
    pub family: String,
    pub rank: usize,
    pub subsystem: String,
    pub m: usize,
    pub psi_size: usize,
    #[serde(serialize_with = "serialize_rat")]
    pub ratio: Rat,
    /// `|Ψ|` is the largest among all simple subsystems with `m` simple roots.
    pub maximal: bool,
}

/// For every irreducible type of rank `<= max_rank` and every `m <= n`, one
/// row per irreducible simple subsystem type with `m` simple roots, largest
/// `|Ψ|` first. The `m = n` row is Φ itself.
pub fn appendix_a_table(max_rank: usize) -> Result<Vec<RatioRecord>> {
    let mut rows = Vec::new();
    for ty in CartanType::classification(max_rank) {
        let rs = build_root_system(ty.family, ty.rank)?;
        rows.extend(ratio_rows(&rs));
    }
    Ok(rows)
}

fn ratio_rows(rs: &RootSystem) -> Vec<RatioRecord> {
    let n = rs.rank();
    let ty = rs.cartan_type().expect("irreducible");
    let mut largest = vec![0usize; n + 1];
    let mut connected: Vec<BTreeMap<String, usize>> = vec![BTreeMap::new(); n + 1];
    for mask in 1u32..(1u32 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let psi = simple_subsystem(rs, &subset).expect("non-empty subset");
        let m = subset.len();
        largest[m] = largest[m].max(psi.size());
        let comps = psi.components();
        if comps.len() == 1 {
            connected[m].insert(comps[0].to_string(), psi.size());
        }
    }
    let mut rows = Vec::new();
    for m in 1..=n {
        let mut found: Vec<(String, usize)> = connected[m].iter().map(|(l, &s)| (l.clone(), s)).collect();
        found.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for (label, size) in found {
            rows.push(RatioRecord {
                family: ty.family.to_string(),
                rank: n,
                subsystem: label,
                m,
                psi_size: size,
                ratio: rat(m as i64, size as i64),
                maximal: size == largest[m],
            });
        }
    }
    rows
}

pub fn table_to_csv(rows: &[RatioRecord]) -> String {
    let mut out = String::from("family,rank,subsystem,m,psi_size,ratio\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.family,
            r.rank,
            r.subsystem,
            r.m,
            r.psi_size,
            fmt_rat(&r.ratio)
        );
    }
    out
}

/// One closed-form row `Φ | n/|Φ| | Ψ | m/|Ψ|` of the ratio table.
#[derive(Clone, Copy, Debug)]
pub struct ClosedFormRow {
    pub ambient: Family,
    /// Fixed ambient rank for the exceptional families.
    pub ambient_rank: Option<usize>,
    pub subsystem: Family,
    /// Fixed subsystem rank (the `E_6 ⊂ E_7` style rows).
    pub subsystem_rank: Option<usize>,
    pub ambient_ratio: fn(usize) -> Rat,
    pub subsystem_ratio: fn(usize) -> Rat,
    /// Smallest `m` for which the parameterized subsystem is a genuine type.
    pub min_m: usize,
}

fn one_over_n_plus_one(n: usize) -> Rat {
    rat(1, n as i64 + 1)
}
fn one_over_2n(n: usize) -> Rat {
    rat(1, 2 * n as i64)
}
fn one_over_2n_minus_2(n: usize) -> Rat {
    rat(1, 2 * (n as i64 - 1))
}

impl ClosedFormRow {
    pub fn describe(&self) -> String {
        let amb = match self.ambient_rank {
            Some(r) => format!("{}{}", self.ambient, r),
            None => format!("{}_n", self.ambient),
        };
        let sub = match self.subsystem_rank {
            Some(r) => format!("{}{}", self.subsystem, r),
            None => format!("{}_m, m<n", self.subsystem),
        };
        format!("{amb} / {sub}")
    }

    /// Instances `(n, m)` covered by this row for ranks `<= max_rank`.
    fn instances(&self, max_rank: usize) -> Vec<(usize, usize)> {
        let ambient_ranks: Vec<usize> = match self.ambient_rank {
            Some(r) => vec![r],
            None => CartanType::classification(max_rank)
                .into_iter()
                .filter(|t| t.family == self.ambient)
                .map(|t| t.rank)
                .collect(),
        };
        let mut out = Vec::new();
        for n in ambient_ranks.into_iter().filter(|&n| n <= max_rank) {
            match self.subsystem_rank {
                Some(m) => out.push((n, m)),
                None => out.extend((self.min_m..n).map(|m| (n, m))),
            }
        }
        out
    }
}

/// Name of `X_m` under the usual low-rank coincidences.
pub fn canonical_label(family: Family, m: usize) -> String {
    match (family, m) {
        (Family::B | Family::C | Family::D, 1) => "A1".into(),
        (Family::C, 2) => "B2".into(),
        (Family::D, 3) => "A3".into(),
        _ => format!("{family}{m}"),
    }
}

pub fn closed_form_rows() -> Vec<ClosedFormRow> {
    use Family::*;
    let row = |ambient, ambient_rank, subsystem, subsystem_rank, ar: fn(usize) -> Rat, sr: fn(usize) -> Rat, min_m| {
        ClosedFormRow {
            ambient,
            ambient_rank,
            subsystem,
            subsystem_rank,
            ambient_ratio: ar,
            subsystem_ratio: sr,
            min_m,
        }
    };
    let twelfth: fn(usize) -> Rat = |_| rat(1, 12);
    let eighteenth: fn(usize) -> Rat = |_| rat(1, 18);
    let thirtieth: fn(usize) -> Rat = |_| rat(1, 30);
    let sixth: fn(usize) -> Rat = |_| rat(1, 6);
    let half: fn(usize) -> Rat = |_| rat(1, 2);
    vec![
        row(A, None, A, None, one_over_n_plus_one, one_over_n_plus_one, 1),
        row(B, None, B, None, one_over_2n, one_over_2n, 1),
        row(C, None, C, None, one_over_2n, one_over_2n, 1),
        row(D, None, D, None, one_over_2n_minus_2, one_over_2n_minus_2, 3),
        row(E, Some(6), D, None, twelfth, one_over_2n_minus_2, 3),
        row(E, Some(7), D, None, eighteenth, one_over_2n_minus_2, 3),
        row(E, Some(7), E, Some(6), eighteenth, twelfth, 6),
        row(E, Some(8), D, None, thirtieth, one_over_2n_minus_2, 3),
        row(E, Some(8), E, Some(6), thirtieth, twelfth, 6),
        row(E, Some(8), E, Some(7), thirtieth, eighteenth, 7),
        row(F, Some(4), B, None, twelfth, one_over_2n, 1),
        row(G, Some(2), A, Some(1), sixth, half, 1),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormCheck {
    pub row: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

/// Matches every instance of every closed-form row against `table`, with
/// exact rational equality.
pub fn check_closed_forms(table: &[RatioRecord], max_rank: usize) -> Vec<ClosedFormCheck> {
    let find = |family: Family, n: usize, label: &str, m: usize| {
        table.iter().find(|r| {
            r.family == family.to_string() && r.rank == n && r.subsystem == label && r.m == m
        })
    };
    closed_form_rows()
        .iter()
        .map(|row| {
            let mut failures = Vec::new();
            let instances = row.instances(max_rank);
            for &(n, m) in &instances {
                let self_label = format!("{}{}", row.ambient, n);
                match find(row.ambient, n, &self_label, n) {
                    Some(r) if r.ratio == (row.ambient_ratio)(n) => {}
                    Some(r) => failures.push(format!("{self_label}: ratio {} != {}", r.ratio, (row.ambient_ratio)(n))),
                    None => failures.push(format!("{self_label}: no row")),
                }
                let label = canonical_label(row.subsystem, m);
                match find(row.ambient, n, &label, m) {
                    Some(r) if r.ratio == (row.subsystem_ratio)(m) => {}
                    Some(r) => failures.push(format!(
                        "{self_label} ⊃ {label}: ratio {} != {}",
                        r.ratio,
                        (row.subsystem_ratio)(m)
                    )),
                    None => failures.push(format!("{self_label} ⊃ {label}: no row")),
                }
            }
            if instances.is_empty() {
                failures.push("no instance within the rank bound".into());
            }
            ClosedFormCheck {
                row: row.describe(),
                instances: instances.len(),
                failures,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::product;

    fn rs(f: Family, n: usize) -> RootSystem {
        build_root_system(f, n).unwrap()
    }

    #[test]
    fn a3_outer_nodes_give_a1_times_a1() {
        let a3 = rs(Family::A, 3);
        let psi = simple_subsystem(&a3, &[0, 2]).unwrap();
        assert_eq!(psi.size(), 4);
        assert_eq!(psi.m(), 2);
        assert_eq!(psi.label(), "A1xA1");
        assert!(psi.is_closed());
    }

    #[test]
    fn full_and_rank_one_subsets() {
        let a2 = rs(Family::A, 2);
        assert_eq!(simple_subsystem(&a2, &[0, 1]).unwrap().size(), 6);
        let psi = simple_subsystem(&a2, &[1]).unwrap();
        assert_eq!(psi.size(), 2);
        assert!(psi.roots().iter().all(|r| r.coeffs[0] == 0));
        assert!(simple_subsystem(&a2, &[]).is_err());
        assert!(simple_subsystem(&a2, &[2]).is_err());
        assert!(simple_subsystem(&a2, &[1, 1]).is_err());
    }

    #[test]
    fn psi_one_drops_the_first_gamma() {
        let a2 = rs(Family::A, 2);
        let psi = SimpleSubrootSystem::whole(&a2, 0).unwrap();
        let p1 = psi.psi_one();
        assert_eq!(p1.size(), 2);
        assert_eq!(p1.base(), &[1]);

        let a1 = rs(Family::A, 1);
        let p1 = SimpleSubrootSystem::whole(&a1, 0).unwrap().psi_one();
        assert_eq!(p1.size(), 0);
        assert_eq!(p1.ratio(), None);

        // long simple root of B2 is β1; dropping it leaves the short A1
        let b2 = rs(Family::B, 2);
        let p1 = SimpleSubrootSystem::whole(&b2, 0).unwrap().psi_one();
        assert_eq!(p1.label(), "A1");
        assert_eq!(p1.roots()[0].vector.norm_sq(), int(1));
    }

    #[test]
    fn dynkin_classification() {
        let cases = [
            (Family::F, 4, vec![0, 1, 2], "B3"),
            (Family::F, 4, vec![1, 2, 3], "C3"),
            (Family::F, 4, vec![1, 2], "B2"),
            (Family::E, 8, vec![0, 1, 2, 3, 4, 5, 6], "E7"),
            (Family::E, 8, vec![1, 2, 3, 4, 5, 6, 7], "D7"),
            (Family::E, 8, vec![0, 2, 3, 4, 5, 6, 7], "A7"),
            (Family::D, 5, vec![2, 3, 4], "A3"),
            (Family::D, 5, vec![3, 4], "A1xA1"),
            (Family::C, 4, vec![1, 2, 3], "C3"),
            (Family::B, 4, vec![1, 2, 3], "B3"),
            (Family::G, 2, vec![0, 1], "G2"),
        ];
        for (f, n, subset, label) in cases {
            let r = rs(f, n);
            assert_eq!(label_of(&classify(&r, &subset)), label, "{f}{n} {subset:?}");
        }
        for ty in CartanType::classification(8) {
            let r = rs(ty.family, ty.rank);
            let all: Vec<usize> = (0..ty.rank).collect();
            assert_eq!(classify(&r, &all), vec![ty]);
        }
    }

    #[test]
    fn lemma3_small_cases() {
        let a3 = lemma3_check(&rs(Family::A, 3));
        assert!(a3.holds);
        assert_eq!(a3.ratio, rat(1, 4));
        assert!(a3.entries.iter().any(|e| e.subsystem == "A2" && e.ratio == rat(1, 3)));
        let g2 = lemma3_check(&rs(Family::G, 2));
        assert!(g2.holds);
        assert_eq!(g2.ratio, rat(1, 6));
        assert!(g2.entries.iter().all(|e| e.ratio == rat(1, 2)));
    }

    #[test]
    fn reducible_counterexample_fails_the_inequality() {
        let p = product(vec![
            rs(Family::B, 3),
            rs(Family::A, 1),
            rs(Family::A, 1),
            rs(Family::A, 1),
        ])
        .unwrap();
        let report = lemma3_check(p.as_root_system());
        assert!(!report.holds);
        assert_eq!(report.ratio, rat(1, 4));
        let b3 = report.entries.iter().find(|e| e.subset == vec![1, 2, 3]).unwrap();
        assert_eq!(b3.ratio, rat(1, 6));
        assert!(!b3.holds);
        assert!(epsilon0(p.as_root_system()).is_err());
    }

    #[test]
    fn epsilon0_values() {
        // A2: only proper subsystems are A1 with ratio 1/2
        let gap = rat(1, 2) - rat(1, 3);
        assert_eq!(epsilon0(&rs(Family::A, 2)).unwrap(), gap / int(2));
        assert_eq!(epsilon0(&rs(Family::A, 2)).unwrap(), rat(1, 12));
        assert_eq!(epsilon0(&rs(Family::A, 1)).unwrap(), rat(1, 2));
        assert_eq!(epsilon0(&rs(Family::B, 2)).unwrap(), rat(1, 8));
    }

    #[test]
    fn table_rows_for_exceptional_types() {
        let rows = appendix_a_table(8).unwrap();
        let get = |f: &str, n: usize, sub: &str| {
            rows.iter()
                .find(|r| r.family == f && r.rank == n && r.subsystem == sub)
                .unwrap_or_else(|| panic!("{f}{n} {sub}"))
        };
        assert_eq!(get("E", 8, "E8").ratio, rat(1, 30));
        assert_eq!(get("E", 8, "E7").ratio, rat(1, 18));
        assert!(get("E", 8, "E7").maximal);
        assert_eq!(get("F", 4, "F4").ratio, rat(1, 12));
        assert_eq!(get("F", 4, "B3").ratio, rat(1, 6));
        assert_eq!(get("D", 5, "D5").ratio, rat(1, 8));
        assert!(!get("E", 7, "D6").maximal);
        assert!(get("E", 7, "E6").maximal);
    }

    #[test]
    fn closed_forms_all_match() {
        let rows = appendix_a_table(8).unwrap();
        let checks = check_closed_forms(&rows, 8);
        assert_eq!(checks.len(), 12);
        for c in &checks {
            assert!(c.failures.is_empty(), "{}: {:?}", c.row, c.failures);
            assert!(c.instances > 0);
        }
    }

    #[test]
    fn csv_header_and_row_shape() {
        let rows = appendix_a_table(2).unwrap();
        let csv = table_to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("family,rank,subsystem,m,psi_size,ratio"));
        assert!(csv.contains("G,2,A1,1,2,1/2\n"));
        assert!(csv.contains("G,2,G2,2,12,1/6\n"));
    }
}

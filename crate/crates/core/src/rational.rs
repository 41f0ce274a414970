//! Exact rational vectors and square matrices.
//!
//! Root coordinates in every model used here are integers, half-integers or
//! (for the ambient `G2` model) thirds, so 64-bit rationals never come close to
//! overflowing.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = Rational64;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

/// Parses `p/q`, `p` or a terminating decimal such as `1.45`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
    };
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("not a rational: {s:?}")));
        }
        let negative = whole.trim_start().starts_with('-');
        let whole = match whole.trim() {
            "" | "-" | "+" => 0,
            w => parse(w)?,
        };
        let scale = 10i64.pow(frac.len() as u32);
        let tail = Rat::new(parse(frac)?, scale);
        let magnitude = int(whole.abs()) + tail;
        return Ok(if negative { -magnitude } else { magnitude });
    }
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse(q)?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse(p)?, q))
        }
        None => Ok(int(parse(s)?)),
    }
}

/// Serializes a rational as the string `p/q`.
pub fn serialize_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(r))
}

pub fn serialize_opt_rat<S: serde::Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_rat(r)),
        None => s.serialize_none(),
    }
}

/// Exact comparison of a float with a rational.
pub fn cmp_f64_rat(x: f64, r: &Rat) -> Ordering {
    if x.is_nan() {
        return Ordering::Less;
    }
    if x.is_infinite() {
        return if x > 0.0 { Ordering::Greater } else { Ordering::Less };
    }
    let (p, q) = (*r.numer() as i128, *r.denom() as i128);
    if x == 0.0 {
        return 0i128.cmp(&p);
    }
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i128;
    let (mant, exp) = if exp == 0 { (frac, -1074) } else { (frac | (1i128 << 52), exp - 1075) };
    let mant = if negative { -mant } else { mant };
    // x = mant 2^exp; compare mant q 2^exp with p
    if (0..10).contains(&exp) {
        return (mant * q << exp).cmp(&p);
    }
    if (-60..0).contains(&exp) {
        return (mant * q).cmp(&(p << -exp));
    }
    x.partial_cmp(&to_f64(r)).unwrap_or(Ordering::Less)
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A vector with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec(pub Vec<Rat>);

impl RatVec {
    pub fn zeros(dim: usize) -> Self {
        RatVec(vec![Rat::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rat::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RatVec(xs.iter().map(|&x| int(x)).collect())
    }

    /// Coordinates given as multiples of `1/den`.
    pub fn from_scaled(xs: &[i64], den: i64) -> Self {
        RatVec(xs.iter().map(|&x| Rat::new(x, den)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> Rat {
        self.dot(self)
    }

    pub fn scale(&self, c: Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Reflection through the hyperplane orthogonal to `root`.
    pub fn reflect(&self, root: &RatVec) -> RatVec {
        let c = int(2) * self.dot(root) / root.norm_sq();
        self - &root.scale(c)
    }

    /// Zero-pads into a larger ambient space starting at `offset`.
    pub fn embed(&self, dim: usize, offset: usize) -> RatVec {
        let mut v = RatVec::zeros(dim);
        v.0[offset..offset + self.dim()].clone_from_slice(&self.0);
        v
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_rat).collect()
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|a| -a).collect())
    }
}

/// Row-major square matrix with rational entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> Self {
        RatMatrix {
            n,
            data: vec![Rat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: &[RatVec]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.dim(), n, "matrix must be square");
            m.data[i * n..(i + 1) * n].clone_from_slice(&r.0);
        }
        m
    }

    /// Reflection matrix `I - 2 a a^T / <a, a>`.
    pub fn reflection(root: &RatVec) -> Self {
        let n = root.dim();
        let c = int(2) / root.norm_sq();
        let mut m = Self::identity(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= c * root.0[i] * root.0[j];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn row(&self, i: usize) -> RatVec {
        RatVec(self.data[i * self.n..(i + 1) * self.n].to_vec())
    }

    pub fn apply(&self, v: &RatVec) -> RatVec {
        assert_eq!(v.dim(), self.n);
        RatVec(
            (0..self.n)
                .map(|i| {
                    (0..self.n).fold(Rat::zero(), |acc, j| acc + self[(i, j)] * v.0[j])
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        out
    }

    /// Right-multiplies by the reflection in `root` as a rank-one update,
    /// `M (I - c r r^T) = M - c (M r) r^T`.
    pub fn mul_reflection(&self, root: &RatVec) -> RatMatrix {
        let n = self.n;
        let c = int(2) / root.norm_sq();
        let mr = self.apply(root);
        let mut out = self.clone();
        for i in 0..n {
            if mr.0[i].is_zero() {
                continue;
            }
            let s = c * mr.0[i];
            for j in 0..n {
                if !root.0[j].is_zero() {
                    out[(i, j)] -= s * root.0[j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RatMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)];
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * ac;
                    inv[(r, j)] -= f * ic;
                }
            }
        }
        Some(inv)
    }

    /// Exact determinant by fraction-preserving elimination.
    pub fn determinant(&self) -> Rat {
        let n = self.n;
        let mut a = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Rat::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for r in col + 1..n {
                let f = a[(r, col)] / p;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[(col, j)];
                    a[(r, j)] -= f * v;
                }
            }
        }
        det
    }

    /// Rank via exact row reduction.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            for j in 0..n {
                a.data.swap(pivot * n + j, rank * n + j);
            }
            let p = a[(rank, col)];
            for r in rank + 1..n {
                let f = a[(r, col)] / p;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[(rank, j)];
                    a[(r, j)] -= f * v;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(to_f64).collect()
    }

    pub fn max_abs(&self) -> Rat {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<RatVec> = (0..self.n).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows.iter()).finish()
    }
}

/// Gram matrix `<v_i, v_j>` of a list of vectors.
pub fn gram(vs: &[RatVec]) -> RatMatrix {
    let n = vs.len();
    let mut g = RatMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = vs[i].dot(&vs[j]);
        }
    }
    g
}

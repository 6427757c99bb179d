//! Exact integer and rational linear algebra.
//!
//! Everything in the exact pipeline goes through this module. There is no
//! floating point here: integers are arbitrary precision and rationals are
//! kept in lowest terms with a positive denominator.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar, always normalized.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("cannot parse a rational number from {0:?}")]
    Parse(String),
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_int(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// Parses `p/q`, a plain integer, or a finite decimal such as `-0.375`
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, LinalgError> {
    let s = text.trim();
    let err = || LinalgError::Parse(text.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() && digits.is_empty() {
            return Err(err());
        }
        if !frac.chars().all(|c| c.is_ascii_digit()) || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let combined = format!("{}{}", if digits.is_empty() { "0" } else { digits }, frac);
        let num: BigInt = combined.parse().map_err(|_| err())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(num, den);
        return Ok(if negative { -value } else { value });
    }
    let p: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(p))
}

/// Point or direction with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RatVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[BigInt]) -> Self {
        RatVector(coords.iter().map(rat_from_int).collect())
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RatVector(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Pairing `<self, b>` against an integer vector.
    pub fn pair(&self, b: &[BigInt]) -> Rational {
        debug_assert_eq!(self.dim(), b.len());
        self.0
            .iter()
            .zip(b)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, t: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|c| c * t).collect())
    }

    /// Least common multiple of the coordinate denominators: the smallest
    /// positive `m` with `m * self` integral.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.0.iter().map(|c| c.numer().clone()).collect())
    }

    /// Positive multiple of `self` with coprime integer coordinates.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let scale = self.denominator_lcm();
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * rat_from_int(&scale)).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if content.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &content).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl Neg for &RatVector {
    type Output = RatVector;
    fn neg(self) -> RatVector {
        RatVector(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for RatVector {
    type Output = RatVector;
    fn neg(self) -> RatVector {
        -&self
    }
}

impl Add for &RatVector {
    type Output = RatVector;
    fn add(self, rhs: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVector {
    type Output = RatVector;
    fn sub(self, rhs: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, entries })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[&[BigInt]]) -> Result<Self, LinalgError> {
        let rows = columns.first().map_or(0, |c| c.len());
        let cols = columns.len();
        let mut entries = vec![BigInt::zero(); rows * cols];
        for (j, column) in columns.iter().enumerate() {
            if column.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    found: column.len(),
                });
            }
            for (i, value) in column.iter().enumerate() {
                entries[i * cols + j] = value.clone();
            }
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j { e.is_one() } else { e.is_zero() }
                })
            })
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible matrix shapes");
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                entries.push(acc);
            }
        }
        IntMatrix { rows: self.rows, cols: rhs.cols, entries }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "incompatible vector length");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply_rat(&self, v: &RatVector) -> RatVector {
        assert_eq!(self.cols, v.dim(), "incompatible vector length");
        RatVector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.coords())
                        .fold(Rational::zero(), |acc, (a, b)| acc + b * rat_from_int(a))
                })
                .collect(),
        )
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(rat_from_int).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        negate = !negate;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let value = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = value;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Integer inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, LinalgError> {
        if !self.det()?.abs().is_one() {
            return Err(LinalgError::NotUnimodular);
        }
        let inv = self.to_rational().inverse()?;
        let entries = inv
            .entries
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .ok_or(LinalgError::NotUnimodular)?;
        Ok(IntMatrix { rows: self.rows, cols: self.cols, entries })
    }
}

/// True iff `generators` (n vectors of length n) form a basis of `Z^n`,
/// i.e. the matrix they span has determinant ±1.
pub fn is_unimodular_basis(generators: &[Vec<BigInt>]) -> Result<bool, LinalgError> {
    let n = generators.len();
    if let Some(bad) = generators.iter().find(|g| g.len() != n) {
        return Err(LinalgError::DimensionMismatch { expected: n, found: bad.len() });
    }
    let m = IntMatrix::from_rows(generators)?;
    Ok(m.det()?.abs().is_one())
}

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[RatVector]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, RatVector::dim);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.dim() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: row.dim() });
            }
            entries.extend(row.coords().iter().cloned());
        }
        Ok(RatMatrix { rows: rows.len(), cols, entries })
    }

    /// Empty matrix with a fixed column count; rows can be appended.
    pub fn with_cols(cols: usize) -> Self {
        RatMatrix { rows: 0, cols, entries: Vec::new() }
    }

    pub fn push_row(&mut self, row: &[Rational]) -> Result<(), LinalgError> {
        if row.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: row.len() });
        }
        self.entries.extend(row.iter().cloned());
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &RatVector) -> RatVector {
        assert_eq!(self.cols, v.dim(), "incompatible vector length");
        RatVector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.coords())
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        )
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    fn rref(&self) -> (Vec<Vec<Rational>>, Vec<usize>) {
        let mut a: Vec<Vec<Rational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            let lead = a[r][c].clone();
            for x in a[r].iter_mut() {
                *x = &*x / &lead;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let factor = a[i][c].clone();
                    for j in c..self.cols {
                        let delta = &factor * &a[r][j];
                        a[i][j] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space. Vectors are primitive integer
    /// vectors, one per free column in increasing column order.
    pub fn kernel_basis(&self) -> Vec<RatVector> {
        let (reduced, pivots) = self.rref();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut x = vec![Rational::zero(); self.cols];
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -reduced[r][f].clone();
            }
            RatVector::from_ints(&RatVector(x).primitive_integer())
        })
        .collect()
    }

    /// Unique solution of `self * x = rhs` for a nonsingular square matrix.
    pub fn solve_square(&self, rhs: &RatVector) -> Result<RatVector, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if rhs.dim() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, found: rhs.dim() });
        }
        let n = self.rows;
        let mut augmented = RatMatrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                augmented.entries[i * (n + 1) + j] = self.get(i, j).clone();
            }
            augmented.entries[i * (n + 1) + n] = rhs.coords()[i].clone();
        }
        let (reduced, pivots) = augmented.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return Err(LinalgError::Singular);
        }
        Ok(RatVector((0..n).map(|i| reduced[i][n].clone()).collect()))
    }

    pub fn inverse(&self) -> Result<RatMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut augmented = RatMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                augmented.entries[i * 2 * n + j] = self.get(i, j).clone();
            }
            augmented.entries[i * 2 * n + n + i] = Rational::one();
        }
        let (reduced, pivots) = augmented.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in reduced.iter().take(n) {
            entries.extend(row[n..].iter().cloned());
        }
        Ok(RatMatrix { rows: n, cols: n, entries })
    }

    pub fn det(&self) -> Result<Rational, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = Rational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det *= &a[k][k];
            for i in k + 1..n {
                let factor = &a[i][k] / &a[k][k];
                for j in k..n {
                    let delta = &factor * &a[k][j];
                    a[i][j] -= delta;
                }
            }
        }
        Ok(det)
    }
}

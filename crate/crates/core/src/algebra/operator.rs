use num_complex::Complex64;

use super::AlgebraError;

/// Dense matrices beyond this dimension are refused.
pub const MAX_DIMENSION: usize = 4096;

const NORM_REL_TOL: f64 = 1e-10;
const NORM_MAX_ITER: usize = 10_000;
/// Trace-power upper bound is only computed up to this dimension.
const TRACE_BOUND_LIMIT: usize = 256;

/// Dense operator between ball bases, row-major. An antilinear operator acts
/// as `ξ ↦ M·conj(ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    antilinear: bool,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl Operator {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, AlgebraError> {
        if rows > MAX_DIMENSION || cols > MAX_DIMENSION {
            return Err(AlgebraError::DimensionTooLarge(rows.max(cols)));
        }
        Ok(Operator {
            rows,
            cols,
            data: vec![zero(); rows * cols],
            antilinear: false,
        })
    }

    pub fn identity(n: usize) -> Result<Self, AlgebraError> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self, AlgebraError> {
        let mut m = Self::zeros(values.len(), values.len())?;
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(*v, 0.0));
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::ShapeMismatch("ragged rows".into()));
        }
        let mut m = Self::zeros(r, c)?;
        m.data = rows.into_iter().flatten().collect();
        Ok(m)
    }

    /// Marks the operator antilinear (same matrix, conjugating action).
    pub fn into_antilinear(mut self) -> Self {
        self.antilinear = true;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_antilinear(&self) -> bool {
        self.antilinear
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Nonzero entries of column `j` as `(row, value)`.
    pub fn column_support(&self, j: usize) -> Vec<(usize, Complex64)> {
        (0..self.rows)
            .filter_map(|i| {
                let v = self.get(i, j);
                (v != zero()).then_some((i, v))
            })
            .collect()
    }

    /// `self ∘ other`, tracking antilinearity.
    pub fn compose(&self, other: &Operator) -> Result<Operator, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{}×{} after {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Operator::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                if self.antilinear {
                    for (d, b) in dst.iter_mut().zip(row) {
                        *d += a * b.conj();
                    }
                } else {
                    for (d, b) in dst.iter_mut().zip(row) {
                        *d += a * b;
                    }
                }
            }
        }
        out.antilinear = self.antilinear ^ other.antilinear;
        Ok(out)
    }

    fn same_shape(&self, other: &Operator) -> Result<(), AlgebraError> {
        if self.rows != other.rows || self.cols != other.cols || self.antilinear != other.antilinear {
            return Err(AlgebraError::ShapeMismatch("operators of different shape or linearity".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Operator) -> Result<Operator, AlgebraError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator, AlgebraError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    /// `s·A` (scalar applied after the operator).
    pub fn scale(&self, s: Complex64) -> Operator {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator, AlgebraError> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Operator) -> Result<Operator, AlgebraError> {
        self.compose(other)?.add(&other.compose(self)?)
    }

    /// Conjugate transpose of a linear operator.
    pub fn adjoint(&self) -> Result<Operator, AlgebraError> {
        if self.antilinear {
            return Err(AlgebraError::AntilinearUnsupported);
        }
        let mut out = Operator::zeros(self.cols, self.rows)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| if self.antilinear { a * x.conj() } else { a * x })
                    .sum()
            })
            .collect()
    }

    /// Entrywise modulus (linear result).
    pub fn abs_entries(&self) -> Operator {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = Complex64::new(a.norm(), 0.0);
        }
        out.antilinear = false;
        out
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Largest entry difference restricted to the given columns.
    pub fn max_abs_diff_on_columns(&self, other: &Operator, columns: &[usize]) -> Result<f64, AlgebraError> {
        self.same_shape(other)?;
        let mut m: f64 = 0.0;
        for &j in columns {
            for i in 0..self.rows {
                m = m.max((self.get(i, j) - other.get(i, j)).norm());
            }
        }
        Ok(m)
    }

    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64, AlgebraError> {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.max_abs_diff_on_columns(other, &cols)
    }

    /// Copy with only the listed columns kept (others zeroed).
    pub fn restrict_columns(&self, columns: &[usize]) -> Operator {
        let mut out = Operator {
            rows: self.rows,
            cols: self.cols,
            data: vec![zero(); self.data.len()],
            antilinear: self.antilinear,
        };
        for &j in columns {
            for i in 0..self.rows {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// `A ⊕ B`.
    pub fn block_diagonal(a: &Operator, b: &Operator) -> Result<Operator, AlgebraError> {
        if a.antilinear != b.antilinear {
            return Err(AlgebraError::ShapeMismatch("mixed linearity in a direct sum".into()));
        }
        let mut out = Operator::zeros(a.rows + b.rows, a.cols + b.cols)?;
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j));
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.set(a.rows + i, a.cols + j, b.get(i, j));
            }
        }
        out.antilinear = a.antilinear;
        Ok(out)
    }

    /// At most one nonzero entry in every row and every column.
    #[allow(clippy::needless_range_loop)]
    pub fn is_weighted_partial_permutation(&self) -> bool {
        let mut col_seen = vec![false; self.cols];
        for i in 0..self.rows {
            let mut row_seen = false;
            for j in 0..self.cols {
                if self.get(i, j) != zero() {
                    if row_seen || col_seen[j] {
                        return false;
                    }
                    row_seen = true;
                    col_seen[j] = true;
                }
            }
        }
        true
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn one_inf_bound(&self) -> f64 {
        let max_col = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let max_row = (0..self.rows)
            .map(|i| self.row(i).iter().map(|a| a.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        (max_col * max_row).sqrt()
    }
}

/// Two-sided certificate for the largest singular value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBounds {
    pub estimate: f64,
    /// `‖Av‖` for the final unit iterate.
    pub lower: f64,
    /// Minimum of the Frobenius, `√(‖A‖₁‖A‖∞)` and trace-power bounds.
    pub upper: f64,
    /// Zero for the exact partial-permutation path.
    pub iterations: usize,
}

/// Largest singular value. Weighted partial permutations take the exact
/// max-|entry| path; everything else uses power iteration on `AᴴA` from a
/// fixed start vector with nonzero overlap on every coordinate.
pub fn operator_norm_bounds(op: &Operator) -> Result<NormBounds, AlgebraError> {
    if op.antilinear {
        return Err(AlgebraError::AntilinearUnsupported);
    }
    if op.rows == 0 || op.cols == 0 {
        return Ok(NormBounds {
            estimate: 0.0,
            lower: 0.0,
            upper: 0.0,
            iterations: 0,
        });
    }
    if op.is_weighted_partial_permutation() {
        let m = op.max_abs_entry();
        return Ok(NormBounds {
            estimate: m,
            lower: m,
            upper: m,
            iterations: 0,
        });
    }
    let adj = op.adjoint()?;
    let mut v: Vec<Complex64> = (0..op.cols)
        .map(|j| Complex64::from_polar(1.0 / (1.0 + j as f64), j as f64))
        .collect();
    normalize(&mut v);
    let mut estimate = 0.0;
    let mut iterations = 0;
    for it in 1..=NORM_MAX_ITER {
        iterations = it;
        let w = adj.apply(&op.apply(&v));
        // Rayleigh quotient vᴴ AᴴA v = ‖Av‖²
        let rq: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        let next = rq.max(0.0).sqrt();
        let mut w = w;
        let wn = norm(&w);
        if wn == 0.0 {
            estimate = 0.0;
            break;
        }
        for x in w.iter_mut() {
            *x /= wn;
        }
        let change = (next - estimate).abs();
        estimate = next;
        v = w;
        if change <= NORM_REL_TOL * 1e-3 * next.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let lower = norm(&op.apply(&v));
    let mut upper = op.frobenius().min(op.one_inf_bound());
    if op.rows.min(op.cols) <= TRACE_BOUND_LIMIT {
        upper = upper.min(trace_power_bound(op, &adj)?);
    }
    let estimate = estimate.max(lower).min(upper);
    Ok(NormBounds {
        estimate,
        lower,
        upper,
        iterations,
    })
}

pub fn operator_norm(op: &Operator) -> Result<f64, AlgebraError> {
    Ok(operator_norm_bounds(op)?.estimate)
}

/// `(tr M^8)^{1/16}` with `M = AᴴA` (or `AAᴴ`, whichever is smaller).
fn trace_power_bound(op: &Operator, adj: &Operator) -> Result<f64, AlgebraError> {
    let m = if op.cols <= op.rows { adj.compose(op)? } else { op.compose(adj)? };
    let scale = m.max_abs_entry();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let m = m.scale(Complex64::new(1.0 / scale, 0.0));
    let m2 = m.compose(&m)?;
    let m4 = m2.compose(&m2)?;
    let m8 = m4.compose(&m4)?;
    let trace: f64 = (0..m8.rows).map(|i| m8.get(i, i).re).sum();
    Ok(scale.sqrt() * trace.max(0.0).powf(1.0 / 16.0))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm(v);
    for x in v.iter_mut() {
        *x /= n;
    }
}

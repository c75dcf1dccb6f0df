//! Uniform grids, grid functions, the finite-difference stencils used by the
//! discrete functional, and cubic-spline interpolation.
//!
//! Node indices are zero-based: `node(k) = start + k * step` for
//! `k = 0..count`. The first node therefore carries index 0 where the
//! mathematical write-up counts from 1.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid1D {
    start: f64,
    step: f64,
    count: usize,
}

impl UniformGrid1D {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() {
            return Err(Error::Config(format!(
                "grid step must be positive and finite, got {step}"
            )));
        }
        if count < 2 {
            return Err(Error::Config(format!("grid needs at least 2 nodes, got {count}")));
        }
        Ok(Self { start, step, count })
    }

    /// Grid with `count` nodes spanning `[start, end]` inclusive.
    pub fn spanning(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Config(format!("grid needs at least 2 nodes, got {count}")));
        }
        Self::new(start, (end - start) / (count - 1) as f64, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end(&self) -> f64 {
        self.node(self.count - 1)
    }

    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.node(k))
    }

    /// Index of the node equal to `x` within `tol * step`, if any.
    pub fn index_of(&self, x: f64, tol: f64) -> Option<usize> {
        let k = ((x - self.start) / self.step).round();
        if k < 0.0 || k >= self.count as f64 {
            return None;
        }
        let k = k as usize;
        ((self.node(k) - x).abs() <= tol * self.step).then_some(k)
    }

    pub fn contains_range(&self, other: &UniformGrid1D) -> bool {
        let slack = 1e-9 * self.step;
        other.start >= self.start - slack && other.end() <= self.end() + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid2D {
    pub x: UniformGrid1D,
    pub t: UniformGrid1D,
}

impl UniformGrid2D {
    pub fn new(x: UniformGrid1D, t: UniformGrid1D) -> Self {
        Self { x, t }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x.count(), self.t.count())
    }

    pub fn hx(&self) -> f64 {
        self.x.step()
    }

    pub fn ht(&self) -> f64 {
        self.t.step()
    }

    pub fn cell(&self) -> f64 {
        self.hx() * self.ht()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFn1D {
    pub grid: UniformGrid1D,
    pub values: Vec<f64>,
}

impl GridFn1D {
    pub fn new(grid: UniformGrid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::Config(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.count()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value at node {k}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: UniformGrid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFn2D {
    pub grid: UniformGrid2D,
    pub values: Array2<f64>,
}

impl GridFn2D {
    pub fn new(grid: UniformGrid2D, values: Array2<f64>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::Config(format!(
                "values have shape {:?}, grid expects {:?}",
                values.dim(),
                grid.shape()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("grid function has non-finite entries".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: UniformGrid2D) -> Self {
        Self {
            grid,
            values: Array2::zeros(grid.shape()),
        }
    }

    pub fn from_fn(grid: UniformGrid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = Array2::from_shape_fn(grid.shape(), |(i, j)| f(grid.x.node(i), grid.t.node(j)));
        Self { grid, values }
    }

    fn check(&self, stencil: &'static str, i: usize, j: usize, ok: bool) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Bounds {
                stencil,
                index: (i, j),
                shape: self.grid.shape(),
            })
        }
    }

    /// `(f[i+1,j] - f[i,j]) / h_x`.
    pub fn dx_forward(&self, i: usize, j: usize) -> Result<f64> {
        let (nx, nt) = self.grid.shape();
        self.check("dx_forward", i, j, i + 1 < nx && j < nt)?;
        let f = &self.values;
        Ok((f[[i + 1, j]] - f[[i, j]]) / self.grid.hx())
    }

    pub fn dxx_central(&self, i: usize, j: usize) -> Result<f64> {
        let (nx, nt) = self.grid.shape();
        self.check("dxx_central", i, j, i >= 1 && i + 1 < nx && j < nt)?;
        let f = &self.values;
        let h = self.grid.hx();
        Ok((f[[i - 1, j]] - 2.0 * f[[i, j]] + f[[i + 1, j]]) / (h * h))
    }

    pub fn dtt_central(&self, i: usize, j: usize) -> Result<f64> {
        let (nx, nt) = self.grid.shape();
        self.check("dtt_central", i, j, i < nx && j >= 1 && j + 1 < nt)?;
        let f = &self.values;
        let h = self.grid.ht();
        Ok((f[[i, j - 1]] - 2.0 * f[[i, j]] + f[[i, j + 1]]) / (h * h))
    }

    /// Four-point forward mixed difference
    /// `((f[i+1,j+1] - f[i+1,j]) - (f[i,j+1] - f[i,j])) / (h_x h_t)`.
    pub fn dxt_forward(&self, i: usize, j: usize) -> Result<f64> {
        let (nx, nt) = self.grid.shape();
        self.check("dxt_forward", i, j, i + 1 < nx && j + 1 < nt)?;
        let f = &self.values;
        Ok(((f[[i + 1, j + 1]] - f[[i + 1, j]]) - (f[[i, j + 1]] - f[[i, j]])) / self.grid.cell())
    }

    /// `sum f^2 h_x h_t` over every node.
    pub fn discrete_l2(&self) -> f64 {
        pairwise_sum(self.values.iter().map(|v| v * v).collect::<Vec<_>>().as_slice()) * self.grid.cell()
    }

    pub fn discrete_h2_seminorms(&self) -> H2Parts {
        h2_parts(&self.values, self.grid.hx(), self.grid.ht())
    }
}

/// The pieces of the discrete H^2 penalty, each already multiplied by the
/// cell weight `h_x h_t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct H2Parts {
    pub l2: f64,
    pub first_x: f64,
    pub first_t: f64,
    pub second_x: f64,
    pub second_t: f64,
}

impl H2Parts {
    pub fn seminorms(&self) -> f64 {
        self.first_x + self.first_t + self.second_x + self.second_t
    }

    pub fn total(&self) -> f64 {
        self.l2 + self.seminorms()
    }
}

/// First differences run over `i < nx-1, j < nt-1`; second differences over
/// `1 <= i <= nx-2, 1 <= j <= nt-2` (both axes share each index range).
pub(crate) fn h2_parts(q: &Array2<f64>, hx: f64, ht: f64) -> H2Parts {
    let (nx, nt) = q.dim();
    let cell = hx * ht;
    let mut l2 = Vec::with_capacity(nx);
    let mut fx = Vec::with_capacity(nx);
    let mut ft = Vec::with_capacity(nx);
    let mut sx = Vec::with_capacity(nx);
    let mut st = Vec::with_capacity(nx);
    for i in 0..nx {
        let mut a = 0.0;
        let (mut b, mut c, mut d, mut e) = (0.0, 0.0, 0.0, 0.0);
        for j in 0..nt {
            let v = q[[i, j]];
            a += v * v;
            if i + 1 < nx && j + 1 < nt {
                let dx = (q[[i + 1, j]] - v) / hx;
                let dt = (q[[i, j + 1]] - v) / ht;
                b += dx * dx;
                c += dt * dt;
            }
            if i >= 1 && i + 1 < nx && j >= 1 && j + 1 < nt {
                let dxx = (q[[i - 1, j]] - 2.0 * v + q[[i + 1, j]]) / (hx * hx);
                let dtt = (q[[i, j - 1]] - 2.0 * v + q[[i, j + 1]]) / (ht * ht);
                d += dxx * dxx;
                e += dtt * dtt;
            }
        }
        l2.push(a);
        fx.push(b);
        ft.push(c);
        sx.push(d);
        st.push(e);
    }
    H2Parts {
        l2: pairwise_sum(&l2) * cell,
        first_x: pairwise_sum(&fx) * cell,
        first_t: pairwise_sum(&ft) * cell,
        second_x: pairwise_sum(&sx) * cell,
        second_t: pairwise_sum(&st) * cell,
    }
}

/// Deterministic pairwise (cascade) summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        v.iter().sum()
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}

/// Natural cubic spline (zero second derivative at both ends) through
/// strictly increasing nodes.
#[derive(Debug, Clone)]
pub struct NaturalCubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m: Vec<f64>,
}

impl NaturalCubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() || n < 2 {
            return Err(Error::Argument(format!(
                "spline needs matching node/value arrays of length >= 2 (got {} and {})",
                n,
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Argument("spline nodes must be strictly increasing".into()));
        }
        let mut m = vec![0.0; n];
        if n > 2 {
            // Tridiagonal system for the interior second derivatives (Thomas algorithm).
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            let mut upper = vec![0.0; k];
            for r in 0..k {
                let i = r + 1;
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                diag[r] = 2.0 * (h0 + h1);
                upper[r] = h1;
                rhs[r] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            for r in 1..k {
                let lower = xs[r + 1] - xs[r];
                let w = lower / diag[r - 1];
                diag[r] -= w * upper[r - 1];
                rhs[r] -= w * rhs[r - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for r in (0..k - 1).rev() {
                m[r + 1] = (rhs[r] - upper[r] * m[r + 2]) / diag[r];
            }
        }
        Ok(Self { xs, ys, m })
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            + ((1.0 - 3.0 * a * a) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }
}

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch–Carlson
/// slopes). Monotone data give a monotone interpolant.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() || n < 2 {
            return Err(Error::Argument("monotone cubic needs >= 2 matching nodes".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Argument(
                "monotone cubic nodes must be strictly increasing".into(),
            ));
        }
        let secant: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secant[0];
        slopes[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            let (d0, d1) = (secant[i - 1], secant[i]);
            if d0 * d1 <= 0.0 {
                slopes[i] = 0.0;
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w0 = 2.0 * h1 + h0;
                let w1 = h1 + 2.0 * h0;
                slopes[i] = (w0 + w1) / (w0 / d0 + w1 / d1);
            }
        }
        Ok(Self { xs, ys, slopes })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

/// Resample `f` onto `target` through the natural cubic spline of its nodes.
pub fn cubic_spline_resample(f: &GridFn1D, target: &UniformGrid1D) -> Result<GridFn1D> {
    if !f.grid.contains_range(target) {
        return Err(Error::Domain(format!(
            "target [{}, {}] leaves the source range [{}, {}]",
            target.start(),
            target.end(),
            f.grid.start(),
            f.grid.end()
        )));
    }
    let spline = NaturalCubicSpline::new(f.grid.nodes().collect(), f.values.clone())?;
    let values = target
        .nodes()
        .map(|x| match f.grid.index_of(x, 1e-12) {
            Some(k) => f.values[k],
            None => spline.eval(x),
        })
        .collect();
    GridFn1D::new(*target, values)
}

/// Composite Simpson rule for `f` on `[a, b]` with `n` (rounded up to even)
/// panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn grid2(nx: usize, nt: usize, hx: f64, ht: f64) -> UniformGrid2D {
        UniformGrid2D::new(
            UniformGrid1D::new(0.0, hx, nx).unwrap(),
            UniformGrid1D::new(0.0, ht, nt).unwrap(),
        )
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(UniformGrid1D::new(0.0, 0.0, 5).is_err());
        assert!(UniformGrid1D::new(0.0, -1.0, 5).is_err());
        assert!(UniformGrid1D::new(0.0, 0.1, 1).is_err());
        let g = UniformGrid1D::new(1.0, 0.5, 4).unwrap();
        assert_eq!(g.nodes().collect::<Vec<_>>(), vec![1.0, 1.5, 2.0, 2.5]);
    }

    #[test]
    fn forward_difference_examples() {
        let g = grid2(101, 11, 0.01, 0.1);
        let konst = GridFn2D::from_fn(g, |_, _| 3.0);
        assert_eq!(konst.dx_forward(10, 3).unwrap(), 0.0);
        let lin = GridFn2D::from_fn(g, |x, _| x);
        assert_relative_eq!(lin.dx_forward(40, 2).unwrap(), 1.0, epsilon = 1e-12);
        let sq = GridFn2D::from_fn(g, |x, _| x * x);
        // node 50 is x = 0.5
        assert_relative_eq!(sq.dx_forward(50, 0).unwrap(), 1.01, epsilon = 1e-10);
    }

    #[test]
    fn second_and_mixed_differences() {
        let g = grid2(21, 21, 0.05, 0.1);
        let sq = GridFn2D::from_fn(g, |x, _| x * x);
        assert_relative_eq!(sq.dxx_central(7, 4).unwrap(), 2.0, epsilon = 1e-9);
        let tsq = GridFn2D::from_fn(g, |_, t| t * t);
        assert_relative_eq!(tsq.dtt_central(3, 9).unwrap(), 2.0, epsilon = 1e-9);
        let bil = GridFn2D::from_fn(g, |x, t| x * t);
        assert_relative_eq!(bil.dxt_forward(5, 5).unwrap(), 1.0, epsilon = 1e-10);
        let k = GridFn2D::from_fn(g, |_, _| -2.5);
        assert_eq!(k.dxx_central(1, 1).unwrap(), 0.0);
        assert_eq!(k.dtt_central(1, 1).unwrap(), 0.0);
        assert_eq!(k.dxt_forward(1, 1).unwrap(), 0.0);
    }

    #[test]
    fn stencils_report_bounds() {
        let f = GridFn2D::zeros(grid2(5, 5, 0.1, 0.1));
        assert!(matches!(f.dx_forward(4, 0), Err(Error::Bounds { .. })));
        assert!(matches!(f.dxx_central(0, 0), Err(Error::Bounds { .. })));
        assert!(matches!(f.dtt_central(2, 4), Err(Error::Bounds { .. })));
        assert!(matches!(f.dxt_forward(2, 4), Err(Error::Bounds { .. })));
    }

    #[test]
    fn discrete_norm_examples() {
        let g = grid2(101, 101, 0.01, 0.02);
        assert_eq!(GridFn2D::zeros(g).discrete_l2(), 0.0);
        let one = GridFn2D::from_fn(g, |_, _| 1.0);
        assert_relative_eq!(one.discrete_l2(), 2.0402, epsilon = 1e-10);
        let lin = GridFn2D::from_fn(g, |x, _| x);
        let parts = lin.discrete_h2_seminorms();
        assert_relative_eq!(parts.first_x, 2.0, epsilon = 1e-9);
        assert_relative_eq!(parts.first_t, 0.0, epsilon = 1e-12);
        assert!(parts.second_x.abs() < 1e-12);
    }

    #[test]
    fn spline_examples() {
        let src = UniformGrid1D::spanning(0.0, 1.0, 101).unwrap();
        let f = GridFn1D::from_fn(src, |x| (std::f64::consts::PI * x).sin());
        let same = cubic_spline_resample(&f, &src).unwrap();
        assert_eq!(same.values, f.values);

        let target = UniformGrid1D::spanning(0.0, 1.0, 450).unwrap();
        let fine = cubic_spline_resample(&f, &target).unwrap();
        let err = target
            .nodes()
            .zip(&fine.values)
            .map(|(x, v)| (v - (std::f64::consts::PI * x).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "max error {err}");

        let lin = GridFn1D::from_fn(src, |x| 3.0 * x - 1.0);
        let lin_fine = cubic_spline_resample(&lin, &target).unwrap();
        for (x, v) in target.nodes().zip(&lin_fine.values) {
            assert_relative_eq!(*v, 3.0 * x - 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spline_rejects_extrapolation() {
        let src = UniformGrid1D::spanning(0.0, 1.0, 11).unwrap();
        let f = GridFn1D::from_fn(src, |x| x);
        let target = UniformGrid1D::spanning(0.0, 1.2, 7).unwrap();
        assert!(matches!(cubic_spline_resample(&f, &target), Err(Error::Domain(_))));
    }

    #[test]
    fn monotone_cubic_preserves_monotonicity() {
        let xs: Vec<f64> = (0..20).map(|k| k as f64 * 0.1).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| if *x < 1.0 { *x } else { 1.0 + 5.0 * (x - 1.0) })
            .collect();
        let m = MonotoneCubic::new(xs, ys).unwrap();
        let mut last = f64::NEG_INFINITY;
        for k in 0..1000 {
            let v = m.eval(k as f64 * 1.9 / 999.0);
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        assert_relative_eq!(simpson(|x| x * x * x - x, 0.0, 2.0, 4), 2.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn l2_is_nonnegative_and_zero_only_for_zero(vals in prop::collection::vec(-5.0f64..5.0, 16)) {
            let g = grid2(4, 4, 0.3, 0.7);
            let f = GridFn2D::new(g, Array2::from_shape_vec((4, 4), vals.clone()).unwrap()).unwrap();
            let l2 = f.discrete_l2();
            prop_assert!(l2 >= 0.0);
            prop_assert_eq!(l2 == 0.0, vals.iter().all(|v| *v == 0.0));
        }

        #[test]
        fn stencils_exact_on_low_order_polynomials(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0) {
            let g = grid2(9, 9, 0.125, 0.25);
            let f = GridFn2D::from_fn(g, |x, t| a * x * x + b * x + c * t * t + a * x * t);
            prop_assert!((f.dxx_central(4, 4).unwrap() - 2.0 * a).abs() < 1e-9);
            prop_assert!((f.dtt_central(4, 4).unwrap() - 2.0 * c).abs() < 1e-9);
            prop_assert!((f.dxt_forward(4, 4).unwrap() - a).abs() < 1e-9);
            let lin = GridFn2D::from_fn(g, |x, t| b * x + c * t);
            prop_assert!((lin.dx_forward(3, 3).unwrap() - b).abs() < 1e-9);
        }

        #[test]
        fn spline_resample_is_idempotent(vals in prop::collection::vec(-1.0f64..1.0, 12)) {
            let g = UniformGrid1D::spanning(0.0, 1.0, 12).unwrap();
            let f = GridFn1D::new(g, vals).unwrap();
            let again = cubic_spline_resample(&f, &g).unwrap();
            prop_assert_eq!(again.values, f.values);
        }
    }
}

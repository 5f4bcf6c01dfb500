//! Continuous piecewise-linear functions with compact support.
//!
//! The function interpolates (xᵢ, yᵢ) between consecutive breakpoints and is
//! identically zero outside [x₀, x_last]. Integrals against polynomials are
//! evaluated cell by cell from antiderivatives, so moments come out exact to
//! rounding rather than through a quadrature rule.

/// A piecewise-linear function given by breakpoints and node values.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    /// Breakpoints must be strictly increasing and as numerous as the
    /// values; those are programmer errors, not data errors, so they panic.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len(), "breakpoint/value length mismatch");
        assert!(xs.len() >= 2, "need at least one cell");
        assert!(
            xs.windows(2).all(|w| w[0] < w[1]),
            "breakpoints must be strictly increasing"
        );
        PiecewiseLinear { xs, ys }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    /// Support interval [first breakpoint, last breakpoint].
    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.xs[0] || x > *self.xs.last().unwrap() {
            return 0.0;
        }
        // partition_point gives the first breakpoint > x, so cell i-1 holds x.
        let i = self.xs.partition_point(|&p| p <= x);
        if i == self.xs.len() {
            return *self.ys.last().unwrap();
        }
        if i == 0 {
            return self.ys[0];
        }
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// ∫ f, summed as exact trapezoids.
    pub fn integral(&self) -> f64 {
        self.cells()
            .map(|(x0, x1, y0, y1)| (x1 - x0) * (y0 + y1) / 2.0)
            .sum()
    }

    /// ∫ xᵏ f(x) dx, exact per cell: with f(x) = α + βx on [x₀, x₁],
    /// the cell contributes α(x₁^{k+1}-x₀^{k+1})/(k+1) + β(x₁^{k+2}-x₀^{k+2})/(k+2).
    pub fn moment(&self, k: usize) -> f64 {
        self.cells()
            .map(|(x0, x1, y0, y1)| {
                let slope = (y1 - y0) / (x1 - x0);
                let alpha = y0 - slope * x0;
                let p = k as i32;
                alpha * (x1.powi(p + 1) - x0.powi(p + 1)) / (p + 1) as f64
                    + slope * (x1.powi(p + 2) - x0.powi(p + 2)) / (p + 2) as f64
            })
            .sum()
    }

    /// ∫ |f|, exact. A cell where the sign flips splits at the zero of the
    /// chord; both triangles together give (h/2)(y₀² + y₁²)/(|y₀| + |y₁|).
    pub fn abs_integral(&self) -> f64 {
        self.cells()
            .map(|(x0, x1, y0, y1)| {
                let h = x1 - x0;
                if y0 * y1 >= 0.0 {
                    h * (y0.abs() + y1.abs()) / 2.0
                } else {
                    h / 2.0 * (y0 * y0 + y1 * y1) / (y0.abs() + y1.abs())
                }
            })
            .sum()
    }

    /// ∫_{-∞}^{x} f, exact (the integrand vanishes left of the support).
    pub fn cumulative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (x0, x1, y0, y1) in self.cells() {
            if x <= x0 {
                break;
            }
            if x >= x1 {
                acc += (x1 - x0) * (y0 + y1) / 2.0;
            } else {
                let t = x - x0;
                let slope = (y1 - y0) / (x1 - x0);
                acc += y0 * t + slope * t * t / 2.0;
                break;
            }
        }
        acc
    }

    /// The function x ↦ y_scale · f(x / x_scale); with y_scale = 1/ε and
    /// x_scale = ε this is the delta-sequence scaling.
    pub fn scaled(&self, x_scale: f64, y_scale: f64) -> Self {
        assert!(x_scale > 0.0, "x scale must be positive");
        PiecewiseLinear {
            xs: self.xs.iter().map(|x| x * x_scale).collect(),
            ys: self.ys.iter().map(|y| y * y_scale).collect(),
        }
    }

    /// The function x ↦ f(x - dx).
    pub fn translated(&self, dx: f64) -> Self {
        PiecewiseLinear {
            xs: self.xs.iter().map(|x| x + dx).collect(),
            ys: self.ys.clone(),
        }
    }

    fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.xs.len() - 1)
            .map(|i| (self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]))
    }
}

//! Disc model of hyperbolic space: metric factors, geodesic-polar coordinates,
//! hyperbolic translations τ_b, and the vector fields V_i whose derivative
//! paths generate the kernel of the linearized operator.

use crate::error::{Error, Result};

/// Points with Euclidean norm above this are rejected rather than clamped;
/// the conformal factor overflows and the polar grid covers the far field.
pub const MAX_NORM: f64 = 0.999999;

/// A point of the open unit ball B^N.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    coords: Vec<f64>,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let r2: f64 = coords.iter().map(|c| c * c).sum();
        if !r2.is_finite() || r2.sqrt() > MAX_NORM {
            return Err(Error::Domain(format!(
                "|x| = {} is not inside the unit ball (limit {MAX_NORM})",
                r2.sqrt()
            )));
        }
        Ok(Self { coords })
    }

    pub fn origin(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn negated(&self) -> Self {
        Self { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

/// Geodesic-polar coordinates (t, ω) with |x| = tanh(t/2).
#[derive(Debug, Clone)]
pub struct PolarPoint {
    pub t: f64,
    pub omega: Vec<f64>,
}

impl PolarPoint {
    pub fn new(t: f64, omega: Vec<f64>) -> Result<Self> {
        if t < 0.0 {
            return Err(Error::Domain("geodesic radius must be >= 0".into()));
        }
        let n: f64 = omega.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("|omega| = {n} is not 1 to within 1e-12")));
        }
        Ok(Self { t, omega })
    }
}

/// Geodesic distance from the origin: t = log((1+|x|)/(1−|x|)) = 2 artanh |x|.
pub fn geodesic_radius(x: &BallPoint) -> f64 {
    let r = x.norm();
    ((1.0 + r) / (1.0 - r)).ln()
}

/// Euclidean radius with geodesic distance t from the origin: |x| = tanh(t/2).
pub fn euclidean_radius(t: f64) -> f64 {
    (t / 2.0).tanh()
}

pub fn to_polar(x: &BallPoint) -> PolarPoint {
    let r = x.norm();
    let t = geodesic_radius(x);
    let omega = if r == 0.0 {
        let mut e = vec![0.0; x.dim()];
        e[0] = 1.0;
        e
    } else {
        x.coords().iter().map(|c| c / r).collect()
    };
    PolarPoint { t, omega }
}

pub fn from_polar(p: &PolarPoint) -> Result<BallPoint> {
    let r = euclidean_radius(p.t);
    BallPoint::new(p.omega.iter().map(|c| c * r).collect())
}

/// The scalar 2/(1−|x|²) multiplying each dx_i in the metric.
pub fn conformal_factor(x: &BallPoint) -> f64 {
    2.0 / (1.0 - x.norm().powi(2))
}

/// Hyperbolic translation τ_b(x) = [(1−|b|²)x + (|x|² + 2x·b + 1)b] / (|b|²|x|² + 2x·b + 1);
/// the Möbius self-map of the disc carrying 0 to b.
pub fn translate(b: &BallPoint, x: &BallPoint) -> Result<BallPoint> {
    let b2: f64 = b.coords().iter().map(|c| c * c).sum();
    let x2: f64 = x.coords().iter().map(|c| c * c).sum();
    let xb: f64 = x.coords().iter().zip(b.coords()).map(|(xi, bi)| xi * bi).sum();
    let den = b2 * x2 + 2.0 * xb + 1.0;
    if den.abs() < 1e-14 {
        return Err(Error::Domain("degenerate translation denominator".into()));
    }
    let cx = 1.0 - b2;
    let cb = x2 + 2.0 * xb + 1.0;
    let coords = x
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(xi, bi)| (cx * xi + cb * bi) / den)
        .collect();
    BallPoint::new(coords)
}

/// Inverse of τ_b, which is τ_{−b}.
pub fn translate_inverse(b: &BallPoint, y: &BallPoint) -> Result<BallPoint> {
    translate(&b.negated(), y)
}

/// Coefficient vector of the kernel vector field
/// V_i(x) = (1+|x|²) ∂_i − 2 x_i Σ_j x_j ∂_j at x (`axis` is 0-based).
pub fn vector_field_v(axis: usize, x: &BallPoint) -> Result<Vec<f64>> {
    if axis >= x.dim() {
        return Err(Error::Domain(format!("axis {axis} out of range for dimension {}", x.dim())));
    }
    let x2: f64 = x.coords().iter().map(|c| c * c).sum();
    let xi = x.coords()[axis];
    let mut v: Vec<f64> = x.coords().iter().map(|xj| -2.0 * xi * xj).collect();
    v[axis] += 1.0 + x2;
    Ok(v)
}

/// Hyperbolic distance in the disc model,
/// d(x, y) = arccosh(1 + 2|x−y|²/((1−|x|²)(1−|y|²))).
pub fn distance(x: &BallPoint, y: &BallPoint) -> f64 {
    let d2: f64 = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let den = (1.0 - x.norm().powi(2)) * (1.0 - y.norm().powi(2));
    (1.0 + 2.0 * d2 / den).acosh()
}

//! Metric jets, their Hodge stars, the coordinate Laplacian, and a
//! floating-point probe of how fast the Laplacian residual decays at the origin.

use std::io::Write;

use crate::error::{domain, Result};
use crate::jetflow::{Jet, StarJet};
use crate::poly::{GradedPoly, Var};
use crate::rational::int;

/// Inverse metric entries `g¹¹ = g(dx,dx)`, `g¹² = g(dx,dy)`, `g²² = g(dy,dy)`
/// as jets at the origin, with the identity as degree-0 part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricJet {
    pub g11: GradedPoly,
    pub g12: GradedPoly,
    pub g22: GradedPoly,
}

impl MetricJet {
    pub fn new(g11: GradedPoly, g12: GradedPoly, g22: GradedPoly) -> Result<Self> {
        let one = GradedPoly::constant(int(1)).component(0);
        if g11.component(0) != one || g22.component(0) != one || !g12.component(0).is_zero() {
            return Err(domain("metric jet must equal the identity at the origin"));
        }
        Ok(MetricJet { g11, g12, g22 })
    }

    pub fn identity() -> Self {
        MetricJet {
            g11: GradedPoly::constant(int(1)),
            g12: GradedPoly::zero(),
            g22: GradedPoly::constant(int(1)),
        }
    }

    pub fn max_degree(&self) -> usize {
        [&self.g11, &self.g12, &self.g22]
            .iter()
            .filter_map(|g| g.max_degree())
            .max()
            .unwrap_or(0)
    }
}

/// `[[-g¹², -g²²], [g¹¹, g¹²]]` truncated at degree `max_degree`.
pub fn star_from_metric(g: &MetricJet, max_degree: usize) -> StarJet {
    StarJet::from_entries(
        [[-&g.g12, -&g.g22], [g.g11.clone(), g.g12.clone()]],
        max_degree,
    )
}

/// Reads the metric off a traceless star.
pub fn metric_from_star(t: &StarJet) -> Result<MetricJet> {
    let [[t11, t12], [t21, t22]] = t.entries();
    if !(t11 + t22).is_zero() {
        return Err(domain("star jet is not traceless"));
    }
    MetricJet::new(t21.clone(), t22.clone(), -t12)
}

/// `(g¹²f_x + g²²f_y)_y + (g¹¹f_x + g¹²f_y)_x`, components of degree `<= max_degree`.
pub fn laplacian_graded(g: &MetricJet, f: &Jet, max_degree: usize) -> GradedPoly {
    let full = f.full();
    let (fx, fy) = (full.derive(Var::X), full.derive(Var::Y));
    let d = max_degree + 1;
    let a = &g.g12.mul_truncated(&fx, d) + &g.g22.mul_truncated(&fy, d);
    let b = &g.g11.mul_truncated(&fx, d) + &g.g12.mul_truncated(&fy, d);
    &a.derive(Var::Y) + &b.derive(Var::X)
}

/// Samples of `|d(T df)|` on circles of shrinking radius.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualProbe {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
    /// `values[i][j]` at radius `radii[i]` and angle `angles[j]`.
    pub values: Vec<Vec<f64>>,
    /// Least-squares slope of log(mean |residual|) against log(radius);
    /// `f64::INFINITY` when the residual polynomial is identically zero.
    pub fitted_slope: f64,
}

impl ResidualProbe {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "radius,angle,abs_residual")?;
        for (r, row) in self.radii.iter().zip(&self.values) {
            for (a, v) in self.angles.iter().zip(row) {
                writeln!(out, "{r:e},{a},{v:e}")?;
            }
        }
        Ok(())
    }
}

/// Radii `2^-3, …, 2^-10`.
pub fn default_radii() -> Vec<f64> {
    (3..=10).map(|e| 2f64.powi(-e)).collect()
}

pub fn default_angles(count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / count as f64)
        .collect()
}

/// Evaluates the exact residual `d(T df)` of the star `t` on the polynomial
/// represented by `f`, and fits its decay exponent.
pub fn residual_decay(
    t: &StarJet,
    f: &Jet,
    radii: &[f64],
    angles: &[f64],
) -> Result<ResidualProbe> {
    if radii.len() < 4 {
        return Err(domain(format!(
            "need at least 4 radii, got {}",
            radii.len()
        )));
    }
    if angles.is_empty() {
        return Err(domain("need at least one sample angle"));
    }
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(domain("radii must lie in (0, 1)"));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(domain("radii must be strictly decreasing"));
    }
    f.ensure_order(t.max_degree() + f.m())?;
    let residual = t.divergence_full(&f.full());
    let values: Vec<Vec<f64>> = radii
        .iter()
        .map(|&r| {
            angles
                .iter()
                .map(|&a| residual.eval(r * a.cos(), r * a.sin()).abs())
                .collect()
        })
        .collect();
    let fitted_slope = if residual.is_zero() {
        f64::INFINITY
    } else {
        let pts: Vec<(f64, f64)> = radii
            .iter()
            .zip(&values)
            .map(|(r, row)| (r.ln(), (row.iter().sum::<f64>() / row.len() as f64).ln()))
            .collect();
        fit_slope(&pts)
    };
    Ok(ResidualProbe {
        radii: radii.to_vec(),
        angles: angles.to_vec(),
        values,
        fitted_slope,
    })
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

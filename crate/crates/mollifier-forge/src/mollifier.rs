//! The finished mollifier: profile, certificates, scaling, serialization.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::piecewise::PiecewiseLinear;

/// A constructed mollifier together with the quantities that certify it.
#[derive(Debug, Clone, PartialEq)]
pub struct Mollifier {
    order: usize,
    profile: PiecewiseLinear,
    achieved_moments: Vec<f64>,
    achieved_l1: f64,
    peak_bound: f64,
}

/// Summary of a construction, serialized as the JSON sidecar of the profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MollifierMetadata {
    pub n: usize,
    pub support_radius: f64,
    pub grid_points: usize,
    /// Moments 0..=n of the exact piecewise-linear profile.
    pub achieved_moments: Vec<f64>,
    /// ∫|φ|, evaluated exactly on the profile.
    pub achieved_l1: f64,
}

impl Mollifier {
    pub(crate) fn new(
        order: usize,
        profile: PiecewiseLinear,
        achieved_moments: Vec<f64>,
        achieved_l1: f64,
        peak_bound: f64,
    ) -> Self {
        Mollifier {
            order,
            profile,
            achieved_moments,
            achieved_l1,
            peak_bound,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn support_radius(&self) -> f64 {
        self.profile.support().1
    }

    pub fn grid_points(&self) -> usize {
        self.profile.breakpoints().len()
    }

    pub fn profile(&self) -> &PiecewiseLinear {
        &self.profile
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.profile.eval(x)
    }

    /// ∫ xᵏ φ, recomputed exactly from the profile.
    pub fn moment(&self, k: usize) -> f64 {
        self.profile.moment(k)
    }

    /// Moments 0..=order recorded at construction time.
    pub fn achieved_moments(&self) -> &[f64] {
        &self.achieved_moments
    }

    pub fn achieved_l1(&self) -> f64 {
        self.achieved_l1
    }

    /// The amplitude cap the construction ran under.
    pub fn peak_bound(&self) -> f64 {
        self.peak_bound
    }

    /// The delta-sequence member φ_ε(x) = φ(x/ε)/ε: support shrinks to
    /// ε·R, mass and all vanishing-moment certificates survive the scaling
    /// (the k-th moment picks up a factor εᵏ).
    pub fn scale_to_delta(&self, eps: f64) -> PiecewiseLinear {
        assert!(eps > 0.0 && eps.is_finite(), "scale must be positive");
        self.profile.scaled(eps, 1.0 / eps)
    }

    pub fn metadata(&self) -> MollifierMetadata {
        MollifierMetadata {
            n: self.order,
            support_radius: self.support_radius(),
            grid_points: self.grid_points(),
            achieved_moments: self.achieved_moments.clone(),
            achieved_l1: self.achieved_l1,
        }
    }

    /// Profile as `x,phi` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,phi")?;
        for (x, y) in self
            .profile
            .breakpoints()
            .iter()
            .zip(self.profile.values())
        {
            writeln!(w, "{x},{y}")?;
        }
        Ok(())
    }

    pub fn write_metadata_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.metadata())?;
        writeln!(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build, MollifierRequest};

    fn sample() -> Mollifier {
        build(&MollifierRequest::for_order(2).with_grid_points(21)).unwrap()
    }

    #[test]
    fn csv_has_header_and_one_row_per_node() {
        let m = sample();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,phi");
        assert_eq!(lines.len(), 1 + m.grid_points());
        for line in &lines[1..] {
            let mut parts = line.split(',');
            parts.next().unwrap().parse::<f64>().unwrap();
            parts.next().unwrap().parse::<f64>().unwrap();
            assert!(parts.next().is_none());
        }
    }

    #[test]
    fn metadata_json_round_trips() {
        let m = sample();
        let mut buf = Vec::new();
        m.write_metadata_json(&mut buf).unwrap();
        let parsed: MollifierMetadata = serde_json::from_slice(&buf).unwrap();
        assert_eq!(parsed, m.metadata());
        // Field names follow the camelCase sidecar convention.
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"supportRadius\""));
        assert!(text.contains("\"achievedMoments\""));
        assert!(text.contains("\"achievedL1\""));
    }

    #[test]
    fn delta_scaling_contracts_support_and_keeps_mass() {
        let m = sample();
        let eps = 0.125;
        let d = m.scale_to_delta(eps);
        let (lo, hi) = d.support();
        assert!((hi - eps * m.support_radius()).abs() < 1e-12);
        assert!((lo + eps * m.support_radius()).abs() < 1e-12);
        assert!((d.integral() - 1.0).abs() < 1e-10);
        // Second moment scales by ε², so it stays at rounding level.
        assert!(d.moment(2).abs() < 1e-12);
    }
}

//! Central tolerance record shared by the library, its tests and the CLI.
//!
//! The record is read once per process. Setting `QG_TOL` overrides
//! individual fields with a comma separated list of `key=value` pairs, e.g.
//! `QG_TOL=point=1e-8,minus_one_angle=1e-6`. Unknown keys are ignored with a
//! warning on standard error.

use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative skewness residual `‖X + Xᵀ‖_F / ‖X‖_F` accepted for skew matrices.
    pub skew: f64,
    /// `‖QᵀQ − I‖_F` accepted for square orthogonal matrices.
    pub orthogonal: f64,
    /// `|det Q − 1|` accepted for special orthogonal matrices.
    pub det: f64,
    /// `‖UᵀU − I‖_F` accepted for Stiefel points.
    pub point: f64,
    /// Orthonormality and `UᵀQ = 0` residuals accepted for tangent frames.
    pub frame: f64,
    /// Angular distance to π below which a rotation is treated as an eigenvalue at −1.
    pub minus_one_angle: f64,
    /// Overshoot above 1 tolerated by the clamped arcsin.
    pub arcsin_overshoot: f64,
    /// Smallest singular value of `ŨᵀU` below which the subspaces count as orthogonal.
    pub singular_floor: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        skew: 1e-12,
        orthogonal: 1e-12,
        det: 1e-10,
        point: 1e-10,
        frame: 1e-10,
        minus_one_angle: 1e-8,
        arcsin_overshoot: 1e-8,
        singular_floor: 1e-10,
    };

    /// The process-wide record, `DEFAULT` unless `QG_TOL` is set.
    pub fn get() -> &'static Tolerances {
        static CELL: OnceLock<Tolerances> = OnceLock::new();
        CELL.get_or_init(|| match std::env::var("QG_TOL") {
            Ok(spec) => {
                let (tol, unknown) = Tolerances::DEFAULT.with_overrides(&spec);
                for key in unknown {
                    eprintln!("QG_TOL: ignoring unknown entry `{key}`");
                }
                tol
            }
            Err(_) => Tolerances::DEFAULT,
        })
    }

    /// Applies `key=value` overrides. Returns the new record and the entries
    /// that could not be applied.
    pub fn with_overrides(mut self, spec: &str) -> (Tolerances, Vec<String>) {
        let mut rejected = Vec::new();
        for entry in spec.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let parsed = entry
                .split_once('=')
                .and_then(|(k, v)| v.trim().parse::<f64>().ok().map(|v| (k.trim(), v)))
                .filter(|(_, v)| v.is_finite() && *v > 0.0);
            let slot = match parsed {
                Some((key, value)) => self.field_mut(key).map(|slot| (slot, value)),
                None => None,
            };
            match slot {
                Some((slot, value)) => *slot = value,
                None => rejected.push(entry.to_string()),
            }
        }
        (self, rejected)
    }

    fn field_mut(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "skew" => &mut self.skew,
            "orthogonal" => &mut self.orthogonal,
            "det" => &mut self.det,
            "point" => &mut self.point,
            "frame" => &mut self.frame,
            "minus_one_angle" => &mut self.minus_one_angle,
            "arcsin_overshoot" => &mut self.arcsin_overshoot,
            "singular_floor" => &mut self.singular_floor,
            _ => return None,
        })
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::DEFAULT
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply_known_keys() {
        let (tol, rejected) = Tolerances::DEFAULT.with_overrides("point=1e-8, det=2e-9,bogus=1");
        assert_eq!(tol.point, 1e-8);
        assert_eq!(tol.det, 2e-9);
        assert_eq!(tol.skew, Tolerances::DEFAULT.skew);
        assert_eq!(rejected, vec!["bogus=1".to_string()]);
    }

    #[test]
    fn malformed_values_rejected() {
        let (tol, rejected) = Tolerances::DEFAULT.with_overrides("point=abc,frame=-1");
        assert_eq!(tol, Tolerances::DEFAULT);
        assert_eq!(rejected.len(), 2);
    }
}

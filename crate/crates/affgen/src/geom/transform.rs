use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for accepting a rotation matrix as orthonormal.
const ORTHONORMAL_TOL: f64 = 1e-9;

/// Drift threshold beyond which a composed rotation is re-orthonormalized.
const DRIFT_TOL: f64 = 1e-12;

/// A proper rigid-body transform (rotation + translation, no scale or shear).
///
/// Composition and inversion keep the rotation numerically orthonormal:
/// whenever accumulated floating-point drift exceeds `1e-12` the rotation is
/// snapped back onto SO(3) by Gram-Schmidt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidTransform {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

/// Largest absolute element of `R Rᵀ - I`, plus the determinant error.
fn orthonormality_drift(r: &Matrix3<f64>) -> f64 {
    let gram = r * r.transpose() - Matrix3::identity();
    let mut drift = 0.0f64;
    for e in gram.iter() {
        drift = drift.max(e.abs());
    }
    drift.max((r.determinant() - 1.0).abs())
}

/// Rebuild the nearest right-handed orthonormal frame from the columns of `r`.
fn reorthonormalize(r: &Matrix3<f64>) -> Matrix3<f64> {
    let c0 = r.column(0).normalize();
    let mut c1 = r.column(1).into_owned();
    c1 -= c0 * c0.dot(&c1);
    let c1 = c1.normalize();
    let c2 = c0.cross(&c1);
    Matrix3::from_columns(&[c0, c1, c2])
}

impl RigidTransform {
    /// The identity transform.
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// Builds a transform from an explicit rotation matrix and translation.
    ///
    /// Fails with [`Error::Param`] if `rotation` is not orthonormal with
    /// determinant +1 within `1e-9`.
    pub fn try_new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        let drift = orthonormality_drift(&rotation);
        if drift > ORTHONORMAL_TOL {
            return Err(Error::param(
                "rotation",
                format!("matrix is not orthonormal (drift {drift:.3e} > {ORTHONORMAL_TOL:.0e})"),
            ));
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    /// Pure translation.
    pub fn from_translation(translation: Vector3<f64>) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation,
        }
    }

    /// Rotation by `angle` radians about the world z axis, with translation.
    pub fn from_z_rotation(angle: f64, translation: Vector3<f64>) -> Self {
        let (s, c) = angle.sin_cos();
        let rotation = Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0);
        Self {
            rotation,
            translation,
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    /// `self ∘ other`: the transform that applies `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut rotation = self.rotation * other.rotation;
        if orthonormality_drift(&rotation) > DRIFT_TOL {
            rotation = reorthonormalize(&rotation);
        }
        Self {
            rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    /// The inverse transform. For rigid transforms this is exact:
    /// `(R, t)⁻¹ = (Rᵀ, -Rᵀ t)`.
    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    /// Applies the transform to a point: `R p + t`.
    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    /// Rotates a direction vector without translating it.
    pub fn transform_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    /// Camera-to-world pose for a camera at `eye` looking at `target`.
    ///
    /// Camera axes: x right, y down, z forward. `up` is the world up hint
    /// (usually `(0, 0, 1)`); when the view direction is parallel to `up`
    /// the right axis falls back to world x so the result is still a valid
    /// rotation.
    pub fn look_at(eye: Vector3<f64>, target: Vector3<f64>, up: Vector3<f64>) -> Self {
        let forward = (target - eye).normalize();
        let mut right = forward.cross(&up);
        if right.norm() < 1e-9 {
            right = Vector3::new(1.0, 0.0, 0.0);
            right -= forward * forward.dot(&right);
            if right.norm() < 1e-9 {
                right = Vector3::new(0.0, 1.0, 0.0);
                right -= forward * forward.dot(&right);
            }
        }
        let right = right.normalize();
        // `forward x right` is unit-length and completes a right-handed frame.
        let down = forward.cross(&right);
        // Columns are the camera axes expressed in world coordinates.
        let rotation = Matrix3::from_columns(&[right, down, forward]);
        let rotation = if orthonormality_drift(&rotation) > DRIFT_TOL {
            reorthonormalize(&rotation)
        } else {
            rotation
        };
        Self {
            rotation,
            translation: eye,
        }
    }
}

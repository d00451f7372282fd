use core::f64::consts::PI;

use num_traits::Float;

use crate::{Error, Result, C64};

/// Tolerance on `|P| = 1` and on `R^T R = I`, `det R = 1`.
pub const UNIT_TOL: f64 = 1e-12;

/// Unit vector in `R^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    xyz: [f64; 3],
}

impl SpherePoint {
    pub const NORTH: SpherePoint = SpherePoint { xyz: [0.0, 0.0, 1.0] };
    pub const SOUTH: SpherePoint = SpherePoint { xyz: [0.0, 0.0, -1.0] };

    /// Rejects vectors whose length differs from 1 by more than [`UNIT_TOL`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if !((r - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::OutOfRange(alloc::format!(
                "sphere point ({x}, {y}, {z}) has length {r}"
            )));
        }
        Ok(Self { xyz: [x, y, z] })
    }

    /// Caller guarantees unit length.
    pub(crate) fn from_xyz_unchecked(x: f64, y: f64, z: f64) -> Self {
        Self { xyz: [x, y, z] }
    }

    /// Point with polar angle `theta` from the north pole and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            xyz: [st * cp, st * sp, ct],
        }
    }

    /// Inverse of the chart `w = (X + iY) / (1 + Z)` centred at the north pole.
    pub fn from_chart(w: C64) -> Self {
        let r2 = w.norm_sqr();
        let d = 1.0 + r2;
        Self {
            xyz: [2.0 * w.re / d, 2.0 * w.im / d, (1.0 - r2) / d],
        }
    }

    pub fn x(&self) -> f64 {
        self.xyz[0]
    }

    pub fn y(&self) -> f64 {
        self.xyz[1]
    }

    pub fn z(&self) -> f64 {
        self.xyz[2]
    }

    pub fn xyz(&self) -> [f64; 3] {
        self.xyz
    }

    pub fn antipode(&self) -> Self {
        Self {
            xyz: [-self.xyz[0], -self.xyz[1], -self.xyz[2]],
        }
    }

    /// `(u, phi)` with `u = cos(theta) = Z`.
    pub fn polar(&self) -> (f64, f64) {
        (self.z().clamp(-1.0, 1.0), self.y().atan2(self.x()))
    }

    /// Great-circle distance.
    pub fn distance(&self, other: &SpherePoint) -> f64 {
        let [a, b, c] = self.xyz;
        let [d, e, f] = other.xyz;
        let cross = [b * f - c * e, c * d - a * f, a * e - b * d];
        let s = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        s.atan2(a * d + b * e + c * f)
    }
}

/// Element of `SO(3)`, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Checks orthogonality and orientation to [`UNIT_TOL`].
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        let mut deviation = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((dot - want).abs());
            }
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        deviation = deviation.max((det - 1.0).abs());
        if !(deviation <= UNIT_TOL) {
            return Err(Error::NotARotation { deviation });
        }
        Ok(Self { m })
    }

    /// Rodrigues formula; `axis` need not be normalized but must be nonzero.
    pub fn about_axis(axis: [f64; 3], angle: f64) -> Result<Self> {
        let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(len > 0.0) {
            return Err(Error::OutOfRange("rotation axis is zero".into()));
        }
        let [x, y, z] = [axis[0] / len, axis[1] / len, axis[2] / len];
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Self::new([
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ])
    }

    /// Rotation about the axis `north x p` carrying the north pole to `p`.
    /// The south pole is reached by a half turn about the X axis.
    pub fn taking_north_to(p: &SpherePoint) -> Self {
        let axis = [-p.y(), p.x(), 0.0];
        let s = (axis[0] * axis[0] + axis[1] * axis[1]).sqrt();
        if s == 0.0 {
            return if p.z() > 0.0 {
                Self::IDENTITY
            } else {
                Self::about_axis([1.0, 0.0, 0.0], PI).expect("unit axis")
            };
        }
        let angle = s.atan2(p.z());
        Self::about_axis(axis, angle).expect("nonzero axis")
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        let v = p.xyz();
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|k| self.m[i][k] * v[k]).sum();
        }
        SpherePoint { xyz: out }
    }

    pub fn inverse(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[j][i];
            }
        }
        Self { m: t }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unit_points() {
        assert!(SpherePoint::new(1.0, 1.0, 0.0).is_err());
        assert!(SpherePoint::new(0.6, 0.0, 0.8).is_ok());
    }

    #[test]
    fn rejects_reflections() {
        let r = Rotation::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]);
        assert!(matches!(r, Err(Error::NotARotation { .. })));
        assert!(Rotation::new([[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
    }

    #[test]
    fn north_is_carried_to_target() {
        let targets = [
            SpherePoint::NORTH,
            SpherePoint::SOUTH,
            SpherePoint::from_angles(1.1, -0.4),
            SpherePoint::from_angles(3.0, 2.0),
        ];
        for p in targets {
            let q = Rotation::taking_north_to(&p).apply(&SpherePoint::NORTH);
            assert!(q.distance(&p) < 1e-14, "{p:?} -> {q:?}");
        }
    }

    #[test]
    fn distance_and_inverse() {
        let p = SpherePoint::from_angles(0.7, 0.2);
        assert!((SpherePoint::NORTH.distance(&p) - 0.7).abs() < 1e-15);
        assert!((SpherePoint::NORTH.distance(&SpherePoint::SOUTH) - PI).abs() < 1e-15);
        let r = Rotation::about_axis([1.0, 2.0, -0.5], 0.9).unwrap();
        assert!(r.inverse().apply(&r.apply(&p)).distance(&p) < 1e-15);
    }
}

use crate::error::{Error, Result};
use crate::qla::{hermitian_eig, ComplexMatrix, C64};

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// `p (I + s·σ⃗) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub p: f64,
    pub s: Vec3,
}

pub fn bloch_decompose(m: &ComplexMatrix) -> Result<BlochState> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: m.rows(),
        });
    }
    let sd = hermitian_eig(m)?;
    if sd.eigenvalues[1] < -1e-10 {
        return Err(Error::NotPsd(sd.eigenvalues[1]));
    }
    let p = m.trace().re;
    if p <= 0.0 {
        return Ok(BlochState {
            p: p.max(0.0),
            s: [0.0; 3],
        });
    }
    let off = m[(0, 1)];
    let s = [
        2.0 * off.re / p,
        -2.0 * off.im / p,
        (m[(0, 0)].re - m[(1, 1)].re) / p,
    ];
    Ok(BlochState { p, s })
}

pub fn bloch_compose(b: &BlochState) -> ComplexMatrix {
    let h = 0.5 * b.p;
    let [x, y, z] = b.s;
    ComplexMatrix::from_vec(
        2,
        2,
        vec![
            C64::new(h * (1.0 + z), 0.0),
            C64::new(h * x, -h * y),
            C64::new(h * x, h * y),
            C64::new(h * (1.0 - z), 0.0),
        ],
    )
    .expect("2x2 shape")
}

/// π-rotation of `s` about the axis `a`: `2(s·a)a/‖a‖² − s`.
pub fn rotate_half_turn(s: Vec3, a: Vec3) -> Vec3 {
    let aa = dot(a, a);
    add(scale(a, 2.0 * dot(s, a) / aa), scale(s, -1.0))
}

/// Reflection of `s` through the axis `r0 + r1`.
pub fn reflect_bloch(s: Vec3, r0: Vec3, r1: Vec3) -> Result<Vec3> {
    let a = add(r0, r1);
    if norm3(a) <= 1e-9 {
        return Err(Error::AntipodalAxes);
    }
    Ok(rotate_half_turn(s, a))
}

/// Unit vector orthogonal to `r` (deterministic choice).
pub fn perpendicular(r: Vec3) -> Vec3 {
    let k = (0..3)
        .min_by(|&i, &j| r[i].abs().total_cmp(&r[j].abs()))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let w = add(e, scale(r, -dot(e, r) / dot(r, r).max(1e-300)));
    scale(w, 1.0 / norm3(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::{DensityMatrix, PureVector, RngStream};

    #[test]
    fn examples() {
        let b = bloch_decompose(DensityMatrix::maximally_mixed(2).matrix()).unwrap();
        assert_eq!(
            b,
            BlochState {
                p: 1.0,
                s: [0.0; 3]
            }
        );
        let b =
            bloch_decompose(DensityMatrix::from_pure(&PureVector::basis(2, 0)).matrix()).unwrap();
        assert_eq!(
            b,
            BlochState {
                p: 1.0,
                s: [0.0, 0.0, 1.0]
            }
        );
        assert!(matches!(
            bloch_decompose(&ComplexMatrix::diag(&[1.0, -0.5])),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn round_trip() {
        let mut rng = RngStream::new(31);
        for _ in 0..100 {
            let m = rng.density(2).matrix().scale_re(rng.uniform());
            let b = bloch_decompose(&m).unwrap();
            assert!(norm3(b.s) <= 1.0 + 1e-9);
            assert!(bloch_compose(&b).max_abs_diff(&m) <= 1e-12);
        }
    }

    #[test]
    fn reflection_fixed_axis_and_equal_axes() {
        let r0 = [0.0, 0.6, 0.8];
        let r1 = [0.6, 0.0, 0.8];
        let a = add(r0, r1);
        let s = scale(a, 0.3);
        let out = reflect_bloch(s, r0, r1).unwrap();
        assert!(norm3(add(out, scale(s, -1.0))) < 1e-15);
        let s = [0.1, -0.2, 0.3];
        let out = reflect_bloch(s, r0, r0).unwrap();
        assert!((dot(r0, out) - dot(r0, s)).abs() < 1e-15);
        assert_eq!(
            reflect_bloch(s, r0, scale(r0, -1.0)),
            Err(Error::AntipodalAxes)
        );
    }

    #[test]
    fn perpendicular_is_unit_and_orthogonal() {
        for r in [
            [1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0],
            [0.6, 0.8, 0.0],
            [0.2, -0.3, 0.932_737],
        ] {
            let p = perpendicular(r);
            assert!(dot(p, r).abs() < 1e-12);
            assert!((norm3(p) - 1.0).abs() < 1e-12);
        }
    }
}

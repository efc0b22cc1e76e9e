use num_complex::Complex64;

use crate::error::{input, Result};
use crate::statevector::bitstring_index;

use super::{build_ansatz, AnsatzKind, ParamRole};

/// Single-qubit state `[<0|psi>, <1|psi>]`.
pub type QubitState = [Complex64; 2];

/// One XYZ2F layer mapping the reference bitstring onto the product of
/// `targets` (up to a global phase), with every two-qubit block at the
/// identity.
///
/// With the bonds off, qubit `n` sees `Rx(-a) Ry(-b) Rz(g) Ry(b) Rx(a)`, a
/// rotation by `g` about the axis `Rx(-a) Ry(-b) z`; the axis is chosen
/// perpendicular to both Bloch vectors and `g` is the angle between them.
pub fn prepare_product_state(targets: &[QubitState], reference: &str) -> Result<Vec<f64>> {
    let n = targets.len();
    if n == 0 {
        return input("no target states given");
    }
    let reference_index = bitstring_index(n, reference)?;
    let mut angles = Vec::with_capacity(n);
    for (q, t) in targets.iter().enumerate() {
        let norm = t[0].norm_sqr() + t[1].norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return input(format!("target state for qubit {q} has norm^2 {norm}"));
        }
        let source = if reference_index >> q & 1 == 1 { -1.0 } else { 1.0 };
        angles.push(sandwich_angles(source, bloch(t)));
    }

    let layer = build_ansatz(AnsatzKind::Xyz2F, n, 1)?;
    Ok(layer
        .labels()
        .iter()
        .map(|label| {
            let (alpha, beta, gamma) = angles[label.site];
            match label.role {
                ParamRole::Alpha => alpha,
                ParamRole::Beta => beta,
                ParamRole::Gamma => gamma,
                _ => 0.0,
            }
        })
        .collect())
}

fn bloch(t: &QubitState) -> [f64; 3] {
    let c = t[0].conj() * t[1];
    [2.0 * c.re, 2.0 * c.im, t[0].norm_sqr() - t[1].norm_sqr()]
}

/// `(alpha, beta, gamma)` rotating `source * z` onto `target`.
fn sandwich_angles(source: f64, target: [f64; 3]) -> (f64, f64, f64) {
    let s = [0.0, 0.0, source];
    let cross = [s[1] * target[2] - s[2] * target[1], s[2] * target[0] - s[0] * target[2], 0.0];
    let sin = (cross[0] * cross[0] + cross[1] * cross[1]).sqrt();
    let cos = source * target[2];
    if sin < 1e-14 {
        if cos > 0.0 {
            return (0.0, 0.0, 0.0);
        }
        // antipodal: rotate by pi about x
        return axis_angles([1.0, 0.0, 0.0], std::f64::consts::PI);
    }
    let axis = [cross[0] / sin, cross[1] / sin, 0.0];
    axis_angles(axis, sin.atan2(cos))
}

/// Solves `axis = (-sin b, sin a cos b, cos a cos b)`.
fn axis_angles(axis: [f64; 3], gamma: f64) -> (f64, f64, f64) {
    let beta = -axis[0].clamp(-1.0, 1.0).asin();
    let alpha = axis[1].atan2(axis[2]);
    (alpha, beta, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::Statevector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn targets_equal_to_reference_give_zero() {
        let targets = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        let p = prepare_product_state(&targets, "10").unwrap();
        assert!(p.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn flip_is_pi_rotation_about_x() {
        let targets = [[c(0.0, 0.0), c(1.0, 0.0)]];
        let p = prepare_product_state(&targets, "0").unwrap();
        assert!((p[0].abs() - std::f64::consts::FRAC_PI_2).abs() < 1e-15 || p[0] == 0.0);
        assert!((p[2] - std::f64::consts::PI).abs() < 1e-15);
        let layer = build_ansatz(AnsatzKind::Xyz2F, 1, 1).unwrap();
        let out = layer.run(&p, &Statevector::zero(1).unwrap()).unwrap();
        assert!((out.amplitudes()[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(prepare_product_state(&[[c(1.0, 0.0), c(1.0, 0.0)]], "0").is_err());
        assert!(prepare_product_state(&[[c(1.0, 0.0), c(0.0, 0.0)]], "01").is_err());
    }
}

//! Thermo-piezoelectric constitutive relations: generalized stress, entropy
//! density and electric displacement, plus the third-order tensor algebra.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::laplace::MaterialParams;
use crate::C64;

/// Voigt index pairs; shear entries carry a factor 2 in contractions.
const VOIGT: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

/// Third-order piezoelectric tensor `e_kij`, symmetric in `(i, j)` by
/// construction through its 3x6 Voigt storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiezoTensor {
    /// `entries[k][a]` is `e_kij` with `a` the Voigt index of `(i, j)`.
    pub entries: [[f64; 6]; 3],
}

impl PiezoTensor {
    pub fn uniform(value: f64) -> Self {
        Self {
            entries: [[value; 6]; 3],
        }
    }

    pub fn zero() -> Self {
        Self::uniform(0.0)
    }

    /// Builds from a full 27-entry table, averaging the `(i, j)` pair to
    /// restore symmetry exactly.
    pub fn from_full(full: &[[[f64; 3]; 3]; 3]) -> Self {
        let mut entries = [[0.0; 6]; 3];
        for k in 0..3 {
            for (a, &(i, j)) in VOIGT.iter().enumerate() {
                entries[k][a] = 0.5 * (full[k][i][j] + full[k][j][i]);
            }
        }
        Self { entries }
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        let a = VOIGT
            .iter()
            .position(|&(p, q)| (p, q) == (i.min(j), i.max(j)))
            .expect("valid voigt pair");
        self.entries[k][a]
    }

    pub fn min_entry(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Matrix-to-vector action `(e M)_k = sum_ij e_kij M_ij` for symmetric `M`.
    pub fn apply(&self, m: &Matrix3<C64>) -> Vector3<C64> {
        let mut out = Vector3::zeros();
        for k in 0..3 {
            let mut acc = C64::new(0.0, 0.0);
            for (a, &(i, j)) in VOIGT.iter().enumerate() {
                let weight = if i == j { 1.0 } else { 2.0 };
                acc += m[(i, j)] * (weight * self.entries[k][a]);
            }
            out[k] = acc;
        }
        out
    }

    /// Vector-to-symmetric-matrix adjoint `(e^T d)_ij = sum_k e_kij d_k`.
    pub fn apply_adjoint(&self, d: &Vector3<C64>) -> Matrix3<C64> {
        let mut out = Matrix3::zeros();
        for (a, &(i, j)) in VOIGT.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..3 {
                acc += d[k] * self.entries[k][a];
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc;
        }
        out
    }

    /// Real-valued adjoint action, for assembly code paths.
    pub fn apply_adjoint_real(&self, d: &Vector3<f64>) -> Matrix3<f64> {
        let dc = Vector3::new(
            C64::new(d[0], 0.0),
            C64::new(d[1], 0.0),
            C64::new(d[2], 0.0),
        );
        self.apply_adjoint(&dc).map(|v| v.re)
    }

    pub fn apply_real(&self, m: &Matrix3<f64>) -> Vector3<f64> {
        self.apply(&m.map(|v| C64::new(v, 0.0))).map(|v| v.re)
    }
}

/// Pointwise state entering the constitutive relations.
#[derive(Debug, Clone)]
pub struct StateAtPoint {
    /// Symmetric strain tensor.
    pub strain: Matrix3<C64>,
    /// Temperature deviation from the reference temperature.
    pub theta: C64,
    /// Electric field, `E = -grad(phi)`.
    pub e_field: Vector3<C64>,
}

impl StateAtPoint {
    pub fn zero() -> Self {
        Self {
            strain: Matrix3::zeros(),
            theta: C64::new(0.0, 0.0),
            e_field: Vector3::zeros(),
        }
    }
}

fn trace(m: &Matrix3<C64>) -> C64 {
    m[(0, 0)] + m[(1, 1)] + m[(2, 2)]
}

/// Generalized stress `lambda tr(eps) I + 2 mu eps - zeta theta I - e^T E`.
pub fn stress(state: &StateAtPoint, mat: &MaterialParams) -> Matrix3<C64> {
    let mut out = state.strain * C64::new(2.0 * mat.lame_mu, 0.0);
    let iso = trace(&state.strain) * mat.lame_lambda - state.theta * mat.zeta;
    for d in 0..3 {
        out[(d, d)] += iso;
    }
    out - mat.piezo_e.apply_adjoint(&state.e_field)
}

/// Entropy density `zeta tr(eps) + (c_eps / T0) theta + p . E`.
pub fn entropy_density(state: &StateAtPoint, mat: &MaterialParams) -> C64 {
    let p = Vector3::from(mat.pyro_p);
    trace(&state.strain) * mat.zeta
        + state.theta * (mat.c_eps / mat.t0)
        + state.e_field.x * p.x
        + state.e_field.y * p.y
        + state.e_field.z * p.z
}

/// Electric displacement `e eps + theta p + eps_dielectric E`.
pub fn electric_displacement(state: &StateAtPoint, mat: &MaterialParams) -> Vector3<C64> {
    let p = Vector3::from(mat.pyro_p);
    mat.piezo_e.apply(&state.strain)
        + Vector3::new(state.theta * p.x, state.theta * p.y, state.theta * p.z)
        + state.e_field * C64::new(mat.dielectric_eps, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(rng: &mut ChaCha8Rng) -> Matrix3<C64> {
        let mut m = Matrix3::zeros();
        for i in 0..3 {
            for j in i..3 {
                let v = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    fn random_vec(rng: &mut ChaCha8Rng) -> Vector3<C64> {
        Vector3::new(
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
        )
    }

    fn random_piezo(rng: &mut ChaCha8Rng) -> PiezoTensor {
        let mut full = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in i..3 {
                    let v = rng.gen::<f64>();
                    full[k][i][j] = v;
                    full[k][j][i] = v;
                }
            }
        }
        PiezoTensor::from_full(&full)
    }

    #[test]
    fn isotropic_stress_on_identity_strain() {
        let mut state = StateAtPoint::zero();
        state.strain = Matrix3::identity().map(|v: f64| C64::new(v, 0.0));
        let mut mat = MaterialParams::default_solid_fluid();
        mat.lame_lambda = 1.0;
        mat.lame_mu = 1.0;
        mat.zeta = 2.0;
        mat.piezo_e = PiezoTensor::zero();
        let s = stress(&state, &mat);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 5.0 } else { 0.0 };
                assert!((s[(i, j)].re - expected).abs() < 1e-14);
                assert!(s[(i, j)].im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn thermal_stress_sign() {
        let mut state = StateAtPoint::zero();
        state.theta = C64::new(1.0, 0.0);
        let mut mat = MaterialParams::default_solid_fluid();
        mat.zeta = 2.0;
        mat.piezo_e = PiezoTensor::zero();
        let s = stress(&state, &mat);
        for d in 0..3 {
            assert!((s[(d, d)].re + 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn entropy_of_pure_temperature() {
        let mut state = StateAtPoint::zero();
        let mat = MaterialParams::default_solid_fluid();
        state.theta = C64::new(mat.t0, 0.0);
        let p = entropy_density(&state, &mat);
        assert!((p.re - mat.c_eps).abs() < 1e-14);
        assert_eq!(entropy_density(&StateAtPoint::zero(), &mat).re, 0.0);
    }

    #[test]
    fn displacement_of_pure_temperature_is_pyro_vector() {
        let mut state = StateAtPoint::zero();
        state.theta = C64::new(1.0, 0.0);
        let mat = MaterialParams::default_solid_fluid();
        let d = electric_displacement(&state, &mat);
        for k in 0..3 {
            assert!((d[k].re - mat.pyro_p[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn adjoint_pairing_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let e = random_piezo(&mut rng);
            let m = random_sym(&mut rng);
            let d = random_vec(&mut rng);
            // <e M, d> against <M, e^T d>, both plain (unconjugated) pairings
            let em = e.apply(&m);
            let lhs: C64 = (0..3).map(|k| em[k] * d[k]).sum();
            let etd = e.apply_adjoint(&d);
            let mut rhs = C64::new(0.0, 0.0);
            for i in 0..3 {
                for j in 0..3 {
                    rhs += m[(i, j)] * etd[(i, j)];
                }
            }
            assert!((lhs - rhs).norm() < 1e-14 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn voigt_matches_full_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut full = [[[0.0; 3]; 3]; 3];
            for k in 0..3 {
                for i in 0..3 {
                    for j in i..3 {
                        let v = rng.gen::<f64>();
                        full[k][i][j] = v;
                        full[k][j][i] = v;
                    }
                }
            }
            let e = PiezoTensor::from_full(&full);
            let m = random_sym(&mut rng);
            let em = e.apply(&m);
            for k in 0..3 {
                let mut direct = C64::new(0.0, 0.0);
                for i in 0..3 {
                    for j in 0..3 {
                        direct += m[(i, j)] * full[k][i][j];
                    }
                }
                assert!((em[k] - direct).norm() < 1e-14 * (1.0 + direct.norm()));
            }
        }
    }

    #[test]
    fn joint_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mat = MaterialParams::default_solid_fluid();
        for _ in 0..100 {
            let s1 = StateAtPoint {
                strain: random_sym(&mut rng),
                theta: C64::new(rng.gen(), rng.gen()),
                e_field: random_vec(&mut rng),
            };
            let s2 = StateAtPoint {
                strain: random_sym(&mut rng),
                theta: C64::new(rng.gen(), rng.gen()),
                e_field: random_vec(&mut rng),
            };
            let alpha = C64::new(rng.gen(), rng.gen());
            let combined = StateAtPoint {
                strain: s1.strain + s2.strain * alpha,
                theta: s1.theta + s2.theta * alpha,
                e_field: s1.e_field + s2.e_field * alpha,
            };
            let lhs = stress(&combined, &mat);
            let rhs = stress(&s1, &mat) + stress(&s2, &mat) * alpha;
            assert!((lhs - rhs).norm() < 1e-13);
            let le = entropy_density(&combined, &mat);
            let re = entropy_density(&s1, &mat) + entropy_density(&s2, &mat) * alpha;
            assert!((le - re).norm() < 1e-13);
            let ld = electric_displacement(&combined, &mat);
            let rd =
                electric_displacement(&s1, &mat) + electric_displacement(&s2, &mat) * alpha;
            assert!((ld - rd).norm() < 1e-13);
        }
    }
}

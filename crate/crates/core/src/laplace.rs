//! Laplace parameter, material constants and the parameter-weighted energy
//! norms, together with the inequalities that relate them across frequencies.

use nalgebra::Vector3;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::constitutive::PiezoTensor;
use crate::error::{Error, Result};
use crate::interior::{elastic_stiffness, scalar_mass, scalar_stiffness, vector_mass};
use crate::linalg::SparseReal;
use crate::mesh::CoupledMesh;
use crate::C64;

/// A point `s` in the right complex half plane with its derived rates.
///
/// `sigma = Re s` and `sigma_under = min(1, sigma)` appear in every stability
/// exponent, so they are computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceParameter {
    pub s: C64,
    pub sigma: f64,
    pub sigma_under: f64,
}

impl LaplaceParameter {
    pub fn new(s: C64) -> Result<Self> {
        if !(s.re > 0.0) || !s.re.is_finite() || !s.im.is_finite() {
            return Err(Error::NotInRightHalfPlane(s.re));
        }
        let sigma = s.re;
        let sigma_under = sigma.min(1.0);
        debug_assert!(sigma_under <= s.norm().min(1.0) + 1e-15);
        debug_assert!(s.norm().max(1.0) * sigma_under <= s.norm() * (1.0 + 1e-12));
        Ok(Self {
            s,
            sigma,
            sigma_under,
        })
    }

    /// Shorthand for a real positive parameter.
    pub fn real(sigma: f64) -> Result<Self> {
        Self::new(Complex::new(sigma, 0.0))
    }

    pub fn abs(&self) -> f64 {
        self.s.norm()
    }

    /// Row weights of the scaling factor Z(s), in block order
    /// (displacement, temperature, potential, pressure).
    pub fn z_weights(&self) -> [C64; 4] {
        let s = self.s;
        [s.conj(), Complex::new(1.0, 0.0), s, s.conj() / s.norm_sqr()]
    }
}

/// Physical constants of the solid and the fluid.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MaterialParams {
    /// Solid density.
    pub rho_e: f64,
    /// First Lame constant.
    pub lame_lambda: f64,
    /// Second Lame constant (shear modulus).
    pub lame_mu: f64,
    /// Piezoelectric tensor, symmetric in its last two indices.
    pub piezo_e: PiezoTensor,
    /// Thermal stress constant.
    pub zeta: f64,
    /// Specific heat at constant strain.
    pub c_eps: f64,
    /// Pyroelectric moduli vector.
    pub pyro_p: [f64; 3],
    /// Dielectric constant.
    pub dielectric_eps: f64,
    /// Reference temperature.
    pub t0: f64,
    /// Fluid density.
    pub rho_f: f64,
    /// Fluid sound speed.
    pub sound_c: f64,
}

impl MaterialParams {
    /// Nondimensionalized defaults used by the shipped configs and the
    /// verification suites.
    pub fn default_solid_fluid() -> Self {
        Self {
            rho_e: 1.0,
            lame_lambda: 2.0,
            lame_mu: 1.0,
            piezo_e: PiezoTensor::uniform(0.05),
            zeta: 0.5,
            c_eps: 2.0,
            pyro_p: [0.1, 0.0, 0.0],
            dielectric_eps: 1.0,
            t0: 1.0,
            rho_f: 0.8,
            sound_c: 1.25,
        }
    }

    pub fn pyro_norm(&self) -> f64 {
        Vector3::from(self.pyro_p).norm()
    }

    /// Upper bound the pyroelectric vector must stay strictly below.
    pub fn pyro_limit(&self) -> f64 {
        self.dielectric_eps.min(self.c_eps / self.t0)
    }

    /// Checks the sign conditions and the pyroelectric constraint.
    ///
    /// Returns the list of non-fatal warnings (the positivity condition on
    /// the piezoelectric entries excludes common crystal classes, so it is
    /// reported rather than enforced).
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if !(self.rho_e > 0.0) {
            return Err(Error::Config(format!("rho_e must be > 0, got {}", self.rho_e)));
        }
        if !(self.lame_mu > 0.0) {
            return Err(Error::Config(format!("mu must be > 0, got {}", self.lame_mu)));
        }
        if !(3.0 * self.lame_lambda + 2.0 * self.lame_mu > 0.0) {
            return Err(Error::Config(format!(
                "bulk condition 3*lambda + 2*mu > 0 violated: {}",
                3.0 * self.lame_lambda + 2.0 * self.lame_mu
            )));
        }
        if !(self.zeta > 0.0) {
            return Err(Error::Config(format!("zeta must be > 0, got {}", self.zeta)));
        }
        if !(self.c_eps > 0.0) {
            return Err(Error::Config(format!("c_eps must be > 0, got {}", self.c_eps)));
        }
        if !(self.t0 > 0.0) {
            return Err(Error::Config(format!("T0 must be > 0, got {}", self.t0)));
        }
        if !(self.rho_f > 0.0) {
            return Err(Error::Config(format!("rho_f must be > 0, got {}", self.rho_f)));
        }
        if !(self.sound_c > 0.0) {
            return Err(Error::Config(format!("sound speed must be > 0, got {}", self.sound_c)));
        }
        if !(self.dielectric_eps > 0.0) {
            return Err(Error::Config(format!(
                "dielectric constant must be > 0, got {}",
                self.dielectric_eps
            )));
        }
        let p_norm = self.pyro_norm();
        let limit = self.pyro_limit();
        if !(p_norm < limit) {
            return Err(Error::PyroConstraint {
                p_norm,
                eps: self.dielectric_eps,
                c_over_t0: self.c_eps / self.t0,
            });
        }
        if self.piezo_e.min_entry() <= 0.0 {
            warnings.push(format!(
                "piezoelectric tensor has non-positive entries (min = {}); \
                 the sign condition e_kij > 0 is not satisfied",
                self.piezo_e.min_entry()
            ));
        }
        Ok(warnings)
    }
}

/// The four parameter-weighted norms of a discrete field tuple, reported both
/// at parameter |s| and at parameter 1.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyNormReport {
    pub u_norm: f64,
    pub theta_norm: f64,
    pub phi_norm: f64,
    pub p_norm: f64,
    pub u_norm_at_one: f64,
    pub theta_norm_at_one: f64,
    pub phi_norm_at_one: f64,
    pub p_norm_at_one: f64,
}

/// Slack of one two-sided norm equivalence. Both entries must be nonnegative
/// up to rounding for the inequality to hold.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityMargin {
    pub name: String,
    /// `|||.|||_{|s|} - lower_factor * |||.|||_1`, relative to the norm scale.
    pub left_slack: f64,
    /// `upper_factor * |||.|||_1 - |||.|||_{|s|}`, relative to the norm scale.
    pub right_slack: f64,
}

/// Precomputed mass and stiffness forms of one interior mesh, from which any
/// parameter-weighted energy norm can be evaluated.
pub struct EnergyForms {
    pub elastic_k: SparseReal,
    pub vector_m: SparseReal,
    pub scalar_k: SparseReal,
    pub scalar_m: SparseReal,
    pub n_vertices: usize,
}

impl EnergyForms {
    pub fn new(mesh: &CoupledMesh, mat: &MaterialParams) -> Self {
        Self {
            elastic_k: elastic_stiffness(mesh, mat.lame_lambda, mat.lame_mu),
            vector_m: vector_mass(mesh),
            scalar_k: scalar_stiffness(mesh),
            scalar_m: scalar_mass(mesh),
            n_vertices: mesh.vertices.len(),
        }
    }

    fn check_dim(&self, field: &[C64], expected: usize, what: &str) -> Result<()> {
        if field.len() != expected {
            return Err(Error::Dimension {
                expected,
                got: field.len(),
                context: what.to_string(),
            });
        }
        Ok(())
    }

    /// `sqrt( u^H K_e u + rho_e * w^2 * u^H M u )` at weight `w`.
    pub fn u_norm_at(&self, u: &[C64], rho_e: f64, weight: f64) -> Result<f64> {
        self.check_dim(u, 3 * self.n_vertices, "displacement field")?;
        let k = self.elastic_k.quadratic_form(u);
        let m = self.vector_m.quadratic_form(u);
        Ok((k + rho_e * weight * weight * m).max(0.0).sqrt())
    }

    /// `sqrt( |grad theta|^2 + c_eps^{-1} * w * |theta|^2 )` at weight `w`.
    pub fn theta_norm_at(&self, theta: &[C64], c_eps: f64, weight: f64) -> Result<f64> {
        self.check_dim(theta, self.n_vertices, "temperature field")?;
        let k = self.scalar_k.quadratic_form(theta);
        let m = self.scalar_m.quadratic_form(theta);
        Ok((k + weight / c_eps * m).max(0.0).sqrt())
    }

    /// Mean of a scalar field with respect to the mesh volume.
    pub fn mean(&self, phi: &[C64]) -> Result<C64> {
        self.check_dim(phi, self.n_vertices, "scalar field")?;
        let ones = vec![Complex::new(1.0, 0.0); self.n_vertices];
        let volume = self.scalar_m.bilinear_form(&ones, &ones).re;
        Ok(self.scalar_m.bilinear_form(&ones, phi) / volume)
    }

    /// `|grad phi|` after explicit mean subtraction.
    pub fn phi_norm(&self, phi: &[C64]) -> Result<f64> {
        let mean = self.mean(phi)?;
        let centered: Vec<C64> = phi.iter().map(|v| v - mean).collect();
        Ok(self.scalar_k.quadratic_form(&centered).max(0.0).sqrt())
    }

    /// L2 norm of the mean-subtracted field.
    pub fn phi_l2_norm(&self, phi: &[C64]) -> Result<f64> {
        let mean = self.mean(phi)?;
        let centered: Vec<C64> = phi.iter().map(|v| v - mean).collect();
        Ok(self.scalar_m.quadratic_form(&centered).max(0.0).sqrt())
    }

    /// Component-wise H1 norm of a vector field, for the Korn-type ratio.
    pub fn u_h1_norm(&self, u: &[C64]) -> Result<f64> {
        self.check_dim(u, 3 * self.n_vertices, "displacement field")?;
        let n = self.n_vertices;
        let mut total = 0.0;
        for c in 0..3 {
            let comp: Vec<C64> = (0..n).map(|v| u[3 * v + c]).collect();
            total += self.scalar_k.quadratic_form(&comp) + self.scalar_m.quadratic_form(&comp);
        }
        Ok(total.max(0.0).sqrt())
    }
}

/// Energy norms of an annulus field standing in for the unbounded exterior:
/// `sqrt( |grad p|^2 + c^{-2} w^2 |p|^2 )`.
pub struct ExteriorForms {
    pub stiffness: SparseReal,
    pub mass: SparseReal,
    pub n_vertices: usize,
}

impl ExteriorForms {
    pub fn new(annulus: &CoupledMesh) -> Self {
        Self {
            stiffness: scalar_stiffness(annulus),
            mass: scalar_mass(annulus),
            n_vertices: annulus.vertices.len(),
        }
    }

    pub fn p_norm_at(&self, p: &[C64], sound_c: f64, weight: f64) -> Result<f64> {
        if p.len() != self.n_vertices {
            return Err(Error::Dimension {
                expected: self.n_vertices,
                got: p.len(),
                context: "exterior surrogate field".to_string(),
            });
        }
        let k = self.stiffness.quadratic_form(p);
        let m = self.mass.quadratic_form(p);
        Ok((k + weight * weight / (sound_c * sound_c) * m).max(0.0).sqrt())
    }
}

/// Full energy-norm report for a field tuple at a given parameter.
pub fn energy_norms(
    forms: &EnergyForms,
    exterior: &ExteriorForms,
    mat: &MaterialParams,
    s: &LaplaceParameter,
    u: &[C64],
    theta: &[C64],
    phi: &[C64],
    p: &[C64],
) -> Result<EnergyNormReport> {
    let w = s.abs();
    Ok(EnergyNormReport {
        u_norm: forms.u_norm_at(u, mat.rho_e, w)?,
        theta_norm: forms.theta_norm_at(theta, mat.c_eps, w)?,
        phi_norm: forms.phi_norm(phi)?,
        p_norm: exterior.p_norm_at(p, mat.sound_c, w)?,
        u_norm_at_one: forms.u_norm_at(u, mat.rho_e, 1.0)?,
        theta_norm_at_one: forms.theta_norm_at(theta, mat.c_eps, 1.0)?,
        phi_norm_at_one: forms.phi_norm(phi)?,
        p_norm_at_one: exterior.p_norm_at(p, mat.sound_c, 1.0)?,
    })
}

/// Evaluates the two-sided inequalities between the parameter-1 and
/// parameter-|s| energy norms and returns the slack of every bound.
pub fn check_norm_equivalences(
    report: &EnergyNormReport,
    s: &LaplaceParameter,
) -> Vec<InequalityMargin> {
    let w = s.abs();
    let su = s.sigma_under;
    let rel = |slack: f64, scale: f64| {
        if scale > 0.0 {
            slack / scale
        } else {
            slack
        }
    };
    let two_sided = |name: &str, at_s: f64, at_one: f64, lo: f64, hi: f64| InequalityMargin {
        name: name.to_string(),
        left_slack: rel(at_s - lo * at_one, at_s.max(at_one)),
        right_slack: rel(hi * at_one - at_s, at_s.max(at_one)),
    };
    vec![
        two_sided("u-norm sandwich", report.u_norm, report.u_norm_at_one, su, w / su),
        two_sided(
            "theta-norm sandwich",
            report.theta_norm,
            report.theta_norm_at_one,
            su.sqrt(),
            (w / su).sqrt(),
        ),
        two_sided(
            "exterior-norm sandwich",
            report.p_norm,
            report.p_norm_at_one,
            su,
            w / su,
        ),
    ]
}

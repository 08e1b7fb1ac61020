//! P1 tetrahedral finite elements for the interior weak form: elastic,
//! thermal and electric blocks plus all coupling pairings. Displacement
//! degrees of freedom are vertex-major, `dof = 3 * vertex + component`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex;

use crate::laplace::{LaplaceParameter, MaterialParams};
use crate::linalg::{SparseBuilder, SparseReal};
use crate::mesh::{CoupledMesh, Point};
use crate::C64;

/// Constant barycentric gradients and volume of one tet.
pub fn tet_gradients(mesh: &CoupledMesh, t: usize) -> ([Vector3<f64>; 4], f64) {
    let tet = &mesh.tets[t];
    let p: Vec<Point> = tet.iter().map(|&v| mesh.vertices[v]).collect();
    let e1 = p[1] - p[0];
    let e2 = p[2] - p[0];
    let e3 = p[3] - p[0];
    let vol6 = e1.cross(&e2).dot(&e3);
    let vol = vol6 / 6.0;
    // grad of the barycentric function of vertex i is the inward-scaled
    // normal of the opposite face
    let g1 = e2.cross(&e3) / vol6;
    let g2 = e3.cross(&e1) / vol6;
    let g3 = e1.cross(&e2) / vol6;
    let g0 = -(g1 + g2 + g3);
    ([g0, g1, g2, g3], vol)
}

/// Scalar stiffness `int grad(phi_i) . grad(phi_j)`.
pub fn scalar_stiffness(mesh: &CoupledMesh) -> SparseReal {
    let n = mesh.vertices.len();
    let mut b = SparseBuilder::new(n, n);
    for t in 0..mesh.tets.len() {
        let (g, vol) = tet_gradients(mesh, t);
        let tet = &mesh.tets[t];
        for i in 0..4 {
            for j in 0..4 {
                b.add(tet[i], tet[j], vol * g[i].dot(&g[j]));
            }
        }
    }
    b.build()
}

/// Scalar mass `int phi_i phi_j`, exact for P1.
pub fn scalar_mass(mesh: &CoupledMesh) -> SparseReal {
    let n = mesh.vertices.len();
    let mut b = SparseBuilder::new(n, n);
    for t in 0..mesh.tets.len() {
        let (_, vol) = tet_gradients(mesh, t);
        let tet = &mesh.tets[t];
        for i in 0..4 {
            for j in 0..4 {
                let w = if i == j { vol / 10.0 } else { vol / 20.0 };
                b.add(tet[i], tet[j], w);
            }
        }
    }
    b.build()
}

/// Vector mass, the scalar mass repeated per displacement component.
pub fn vector_mass(mesh: &CoupledMesh) -> SparseReal {
    let n = mesh.vertices.len();
    let mut b = SparseBuilder::new(3 * n, 3 * n);
    for t in 0..mesh.tets.len() {
        let (_, vol) = tet_gradients(mesh, t);
        let tet = &mesh.tets[t];
        for i in 0..4 {
            for j in 0..4 {
                let w = if i == j { vol / 10.0 } else { vol / 20.0 };
                for c in 0..3 {
                    b.add(3 * tet[i] + c, 3 * tet[j] + c, w);
                }
            }
        }
    }
    b.build()
}

/// Isotropic elastic stiffness `int sigma_e(phi_b e_d) : eps(phi_a e_c)`.
pub fn elastic_stiffness(mesh: &CoupledMesh, lambda: f64, mu: f64) -> SparseReal {
    let n = mesh.vertices.len();
    let mut b = SparseBuilder::new(3 * n, 3 * n);
    for t in 0..mesh.tets.len() {
        let (g, vol) = tet_gradients(mesh, t);
        let tet = &mesh.tets[t];
        for a in 0..4 {
            for bb in 0..4 {
                let dot = g[a].dot(&g[bb]);
                for c in 0..3 {
                    for d in 0..3 {
                        let mut v = lambda * g[a][c] * g[bb][d] + mu * g[a][d] * g[bb][c];
                        if c == d {
                            v += mu * dot;
                        }
                        b.add(3 * tet[a] + c, 3 * tet[bb] + d, vol * v);
                    }
                }
            }
        }
    }
    b.build()
}

/// Assembled frequency-independent interior blocks; the `s`-dependence is
/// composed on demand.
pub struct InteriorBlocks {
    pub n_vertices: usize,
    pub n_boundary_vertices: usize,
    pub elastic_k: SparseReal,
    pub vector_m: SparseReal,
    pub theta_k: SparseReal,
    pub theta_m: SparseReal,
    pub phi_k: SparseReal,
    /// Divergence pairing `int phi_j d_c(phi_a)`, rows are u-dofs.
    pub g_div: SparseReal,
    /// Piezo pairing `int (e eps(phi_a e_c)) . grad(phi_j)`, rows are u-dofs.
    pub g_piezo: SparseReal,
    /// Pyro pairing `int phi_i (p . grad(phi_j))`.
    pub g_pyro: SparseReal,
    /// Boundary trace pairing `int_Gamma phi^G_m n_c phi_a`, rows are u-dofs,
    /// columns indexed by boundary vertices.
    pub t_trace: SparseReal,
    /// Volume integrals of the scalar basis functions (zero-mean constraint row).
    pub mean_vec: Vec<f64>,
}

/// Assembles every interior block of the coupled weak form.
pub fn assemble_interior(mesh: &CoupledMesh, mat: &MaterialParams) -> InteriorBlocks {
    let n = mesh.vertices.len();
    let nb = mesh.n_boundary_vertices();
    let p = Vector3::from(mat.pyro_p);

    let mut g_div = SparseBuilder::new(3 * n, n);
    let mut g_piezo = SparseBuilder::new(3 * n, n);
    let mut g_pyro = SparseBuilder::new(n, n);
    let mut mean_vec = vec![0.0; n];

    for t in 0..mesh.tets.len() {
        let (g, vol) = tet_gradients(mesh, t);
        let tet = &mesh.tets[t];
        for a in 0..4 {
            mean_vec[tet[a]] += vol / 4.0;
            for c in 0..3 {
                // strain of the basis field phi_a e_c is constant
                let mut strain = Matrix3::zeros();
                for i in 0..3 {
                    strain[(c, i)] += 0.5 * g[a][i];
                    strain[(i, c)] += 0.5 * g[a][i];
                }
                let e_strain = mat.piezo_e.apply_real(&strain);
                for j in 0..4 {
                    g_div.add(3 * tet[a] + c, tet[j], vol * g[a][c] / 4.0);
                    g_piezo.add(3 * tet[a] + c, tet[j], vol * e_strain.dot(&g[j]));
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                g_pyro.add(tet[i], tet[j], vol / 4.0 * p.dot(&g[j]));
            }
        }
    }

    let mut t_trace = SparseBuilder::new(3 * n, nb);
    for f in 0..mesh.boundary_tris.len() {
        let tri = &mesh.boundary_tris[f];
        let area = mesh.panel_area(f);
        let normal = mesh.panel_normal(f);
        for i in 0..3 {
            for j in 0..3 {
                let w = if i == j { area / 6.0 } else { area / 12.0 };
                for c in 0..3 {
                    t_trace.add(3 * tri[i] + c, mesh.boundary_index[tri[j]], w * normal[c]);
                }
            }
        }
    }

    InteriorBlocks {
        n_vertices: n,
        n_boundary_vertices: nb,
        elastic_k: elastic_stiffness(mesh, mat.lame_lambda, mat.lame_mu),
        vector_m: vector_mass(mesh),
        theta_k: scalar_stiffness(mesh),
        theta_m: scalar_mass(mesh),
        phi_k: scalar_stiffness(mesh),
        g_div: g_div.build(),
        g_piezo: g_piezo.build(),
        g_pyro: g_pyro.build(),
        t_trace: t_trace.build(),
        mean_vec,
    }
}

impl InteriorBlocks {
    /// `A_s u = (K_e + s^2 rho_e M) u`.
    pub fn apply_a_s(&self, u: &[C64], mat: &MaterialParams, s: &LaplaceParameter) -> Vec<C64> {
        let k = self.elastic_k.matvec(u);
        let m = self.vector_m.matvec(u);
        let s2rho = s.s * s.s * mat.rho_e;
        k.iter().zip(m.iter()).map(|(a, b)| a + b * s2rho).collect()
    }

    /// `B_s theta = (K + c_eps s M) theta`.
    pub fn apply_b_s(&self, theta: &[C64], mat: &MaterialParams, s: &LaplaceParameter) -> Vec<C64> {
        let k = self.theta_k.matvec(theta);
        let m = self.theta_m.matvec(theta);
        let cs = s.s * mat.c_eps;
        k.iter().zip(m.iter()).map(|(a, b)| a + b * cs).collect()
    }
}

/// Result of the exact off-diagonal cancellation audit.
#[derive(Debug, Clone)]
pub struct SkewCheck {
    /// `|Re(total)|` of the Z-weighted off-diagonal pairing.
    pub residual: f64,
    /// Magnitude scale the residual is relative to.
    pub scale: f64,
}

/// Evaluates the Z-weighted off-diagonal pairing with test equal to trial.
/// Its real part cancels exactly; the returned residual is rounding noise.
pub fn coupling_skew_check(
    blocks: &InteriorBlocks,
    mat: &MaterialParams,
    s: &LaplaceParameter,
    u: &[C64],
    theta: &[C64],
    phi: &[C64],
    phi_gamma: &[C64],
) -> SkewCheck {
    let dot = |x: &[C64], y: &[C64]| -> C64 {
        x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
    };
    let sb = s.s.conj();
    let zeta = Complex::new(mat.zeta, 0.0);

    let d_theta = blocks.g_div.matvec(theta);
    let p_phi = blocks.g_piezo.matvec(phi);
    let t_pg = blocks.t_trace.matvec(phi_gamma);

    let a = dot(u, &d_theta); // u^H D theta
    let b = dot(u, &p_phi); // u^H P phi
    let c = dot(u, &t_pg); // u^H T phi_gamma

    // theta row (weight 1): + s zeta theta^H D^T u = s zeta conj(a)
    // phi row (weight s): - s phi^H P^T u = -s conj(b)
    // pressure row (weight conj(s)/|s|^2): -s^2 phig^H T^T u
    let term_u_row = sb * (-zeta * a + b + c);
    let term_theta_row = s.s * zeta * a.conj();
    let term_phi_row = s.s * (-b.conj());
    let term_p_row = (sb / s.s.norm_sqr()) * (-s.s * s.s) * c.conj();

    let total = term_u_row + term_theta_row + term_phi_row + term_p_row;
    let scale = term_u_row.norm()
        + term_theta_row.norm()
        + term_phi_row.norm()
        + term_p_row.norm();
    SkewCheck {
        residual: total.re.abs(),
        scale: scale.max(1e-300),
    }
}

//! The obstruction map `φ : ℝ_{m+1≤2m-4}[x,y] → ℝ_{m-1≤2m-6}[x,y]`, its exact
//! Jacobian, and the dimension counts built on it.
//!
//! Coordinates on the domain are the monomial coefficients of
//! `h = h₁ + … + h_{m-4}` with `h_l ∈ ℝ_{m+l}[x,y]`, block by block; the
//! target is split the same way into `φ_k ∈ ℝ_{m+k-2}[x,y]`.

use num_traits::Zero;

use crate::error::{domain, Result};
use crate::jetflow::{star_divergence_component, GradedMat2, Jet, JetFlow, StarJet};
use crate::linalg::Matrix;
use crate::poly::{GradedPoly, HomPoly};
use crate::rational::{int, Rational};
use crate::theta::Pairing;

/// One block of a graded coordinate splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    /// `l` for domain blocks, `k` for target blocks (1-based).
    pub index: usize,
    pub degree: usize,
    pub offset: usize,
    pub dim: usize,
}

fn blocks(count: usize, degree_of: impl Fn(usize) -> usize) -> Vec<Block> {
    let mut offset = 0;
    (1..=count)
        .map(|index| {
            let degree = degree_of(index);
            let b = Block {
                index,
                degree,
                offset,
                dim: degree + 1,
            };
            offset += b.dim;
            b
        })
        .collect()
}

fn check_m(m: usize) -> Result<()> {
    if m < 5 {
        return Err(domain(format!("the obstruction map needs m >= 5, got {m}")));
    }
    Ok(())
}

/// Evaluator for `φ` at a fixed `m`, with the Θ_k solvers cached.
#[derive(Debug, Clone)]
pub struct PhiMap {
    flow: JetFlow,
    domain_blocks: Vec<Block>,
    target_blocks: Vec<Block>,
}

impl PhiMap {
    pub fn new(m: usize) -> Result<Self> {
        Self::with_pairing(m, Pairing::CircleAverage)
    }

    pub fn with_pairing(m: usize, pairing: Pairing) -> Result<Self> {
        check_m(m)?;
        let n = m - 4;
        Ok(PhiMap {
            flow: JetFlow::new(m, n, pairing)?,
            domain_blocks: blocks(n, |l| m + l),
            target_blocks: blocks(n, |k| m + k - 2),
        })
    }

    pub fn m(&self) -> usize {
        self.flow.m()
    }

    pub fn flow(&self) -> &JetFlow {
        &self.flow
    }

    pub fn domain_blocks(&self) -> &[Block] {
        &self.domain_blocks
    }

    pub fn target_blocks(&self) -> &[Block] {
        &self.target_blocks
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_blocks.iter().map(|b| b.dim).sum()
    }

    pub fn target_dim(&self) -> usize {
        self.target_blocks.iter().map(|b| b.dim).sum()
    }

    fn check_h(&self, h: &GradedPoly) -> Result<()> {
        let m = self.m();
        for n in h.degrees() {
            if n <= m || n > 2 * m - 4 {
                return Err(domain(format!(
                    "h has a component of degree {n}; only degrees {}..={} are allowed",
                    m + 1,
                    2 * m - 4
                )));
            }
        }
        Ok(())
    }

    /// `(φ₁, …, φ_{m-4})` for the jet `Re z^m + h`.
    pub fn evaluate(&self, h: &GradedPoly) -> Result<Vec<HomPoly>> {
        self.check_h(h)?;
        let m = self.m();
        let f = Jet::truncated(m, h.clone(), 2 * m - 4)?;
        let (steps, _) = self.flow.steps(&f, m - 4)?;
        Ok(steps.into_iter().map(|s| s.phi).collect())
    }

    pub fn h_to_vector(&self, h: &GradedPoly) -> Vec<Rational> {
        self.domain_blocks
            .iter()
            .flat_map(|b| h.component(b.degree).into_coeffs())
            .collect()
    }

    pub fn vector_to_h(&self, v: &[Rational]) -> GradedPoly {
        GradedPoly::from_components(
            self.domain_blocks
                .iter()
                .map(|b| HomPoly::from_coeffs(v[b.offset..b.offset + b.dim].to_vec())),
        )
    }

    pub fn phi_to_vector(&self, phi: &[HomPoly]) -> Vec<Rational> {
        phi.iter()
            .flat_map(|p| p.coeffs().iter().cloned())
            .collect()
    }
}

pub fn phi_of_h(m: usize, h: &GradedPoly) -> Result<Vec<HomPoly>> {
    PhiMap::new(m)?.evaluate(h)
}

/// Weights `w_i` with `p'(0) = Σ w_i p(t_i)` for every polynomial of degree
/// below `nodes.len()`.
pub fn derivative_weights_at_zero(nodes: &[Rational]) -> Vec<Rational> {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Rational::from_integer(1.into()), |acc, j| {
                    acc * (&nodes[i] - &nodes[j])
                });
            let mut numer = Rational::zero();
            for l in (0..n).filter(|&l| l != i) {
                numer += (0..n)
                    .filter(|&j| j != i && j != l)
                    .fold(Rational::from_integer(1.into()), |acc, j| acc * -&nodes[j]);
            }
            numer / denom
        })
        .collect()
}

/// Integer nodes centred on zero, `degree + 1` of them.
fn centred_nodes(degree: usize) -> Vec<Rational> {
    let half = (degree / 2) as i64;
    (0..=degree as i64).map(|i| int(i - half)).collect()
}

/// Degree in `t` of `φ(h + t·e)` for `e` in domain block `l`: `φ_k` does not
/// move for `k < l`, is affine for `k = l`, and at most doubles per step after
/// that through the quadratic determinant term.
fn t_degree_bound(block_count: usize, l: usize) -> usize {
    1 << (block_count - l)
}

/// Exact Jacobian of `φ` at `h`.
#[derive(Debug, Clone)]
pub struct PhiJacobian {
    pub m: usize,
    pub base_point: GradedPoly,
    pub matrix: Matrix,
    pub row_blocks: Vec<Block>,
    pub col_blocks: Vec<Block>,
}

impl PhiJacobian {
    /// `∂φ_k / ∂h_l`.
    pub fn block(&self, k: usize, l: usize) -> Matrix {
        let r = self.row_blocks[k - 1];
        let c = self.col_blocks[l - 1];
        self.matrix.block(r.offset, c.offset, r.dim, c.dim)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn full_row_rank(&self) -> usize {
        self.row_blocks.iter().map(|b| b.dim).sum()
    }
}

impl PhiMap {
    fn jacobian_from_columns(
        &self,
        h: &GradedPoly,
        column: impl Fn(usize) -> Result<Vec<Rational>>,
    ) -> Result<PhiJacobian> {
        let mut matrix = Matrix::zeros(self.target_dim(), self.domain_dim());
        for col in 0..self.domain_dim() {
            for (i, v) in column(col)?.into_iter().enumerate() {
                matrix[(i, col)] = v;
            }
        }
        Ok(PhiJacobian {
            m: self.m(),
            base_point: h.clone(),
            matrix,
            row_blocks: self.target_blocks.clone(),
            col_blocks: self.domain_blocks.clone(),
        })
    }

    fn unit_direction(&self, col: usize) -> GradedPoly {
        let mut e = vec![Rational::zero(); self.domain_dim()];
        e[col] = int(1);
        self.vector_to_h(&e)
    }

    /// Exact Jacobian of `φ` at `h`, one column per forward-mode pass through
    /// the linearised recurrence.
    pub fn jacobian(&self, h: &GradedPoly) -> Result<PhiJacobian> {
        self.check_h(h)?;
        let m = self.m();
        let f = Jet::truncated(m, h.clone(), 2 * m - 4)?;
        let (_, t) = self.flow.steps(&f, m - 4)?;
        let full = f.full();
        self.jacobian_from_columns(h, |col| {
            let dphi = self.tangent(&t, &full, &self.unit_direction(col))?;
            Ok(self.phi_to_vector(&dphi))
        })
    }

    /// `dφ(h)·dh`, given the star `t` solved along `f = Re z^m + h`.
    fn tangent(&self, t: &StarJet, f: &GradedPoly, dh: &GradedPoly) -> Result<Vec<HomPoly>> {
        let m = self.m();
        let mut dt: GradedMat2 = Default::default();
        let mut out = Vec::with_capacity(m - 4);
        for k in 1..=m - 4 {
            let tk = t.truncate(k - 1);
            let te = tk.entries();
            let det_k = tk.det_component(k);
            let ddet_k = &(&te[0][0].product_component(&dt[1][1], k)
                + &dt[0][0].product_component(&te[1][1], k))
                - &(&te[0][1].product_component(&dt[1][0], k)
                    + &dt[0][1].product_component(&te[1][0], k));
            let mut t_shift = te.clone();
            t_shift[0][1].add_component(&det_k);
            let mut dt_shift = dt.clone();
            dt_shift[0][1].add_component(&ddet_k);
            let n = k + m - 2;
            let dphi = -&(&star_divergence_component(&dt_shift, &f.truncate(k + m), n)
                + &star_divergence_component(&t_shift, &dh.truncate(k + m), n));
            let mut q = self.flow.theta(k).min_norm_inverse().mul_vec(dphi.coeffs());
            let dg12 = HomPoly::from_coeffs(q.split_off(k + 1));
            let dg11 = HomPoly::from_coeffs(q);
            let dg22 = &(-&ddet_k) - &dg11;
            for (e, g) in dt.iter_mut().flatten().zip([-&dg12, -&dg22, dg11, dg12]) {
                e.add_component(&g);
            }
            out.push(dphi);
        }
        Ok(out)
    }

    /// The same Jacobian by exact polynomial interpolation of
    /// `t ↦ φ(h + t·e)` at integer nodes. Much slower; kept as a cross-check.
    pub fn jacobian_by_interpolation(&self, h: &GradedPoly) -> Result<PhiJacobian> {
        self.check_h(h)?;
        let base = self.h_to_vector(h);
        let n_blocks = self.domain_blocks.len();
        self.jacobian_from_columns(h, |col| {
            let b = self
                .domain_blocks
                .iter()
                .find(|b| col < b.offset + b.dim)
                .expect("column inside the domain");
            let nodes = centred_nodes(t_degree_bound(n_blocks, b.index));
            let weights = derivative_weights_at_zero(&nodes);
            let mut acc = vec![Rational::zero(); self.target_dim()];
            for (t, w) in nodes.iter().zip(&weights) {
                if w.is_zero() {
                    continue;
                }
                let mut point = base.clone();
                point[col] += t;
                let phi = self.phi_to_vector(&self.evaluate(&self.vector_to_h(&point))?);
                for (a, v) in acc.iter_mut().zip(&phi) {
                    if !v.is_zero() {
                        *a += w * v;
                    }
                }
            }
            Ok(acc)
        })
    }

    /// Block-diagonal matrix of `Θ_k*` over `k = 1..=m-4`.
    pub fn adjoint_blocks(&self) -> Matrix {
        let domain: usize = (1..=self.m() - 4).map(|k| 2 * k + 2).sum();
        let mut out = Matrix::zeros(domain, self.target_dim());
        let mut r = 0;
        for b in &self.target_blocks {
            let adj = self.flow.theta(b.index).adjoint_matrix();
            out.set_block(r, b.offset, &adj);
            r += adj.rows();
        }
        out
    }

    /// Block-diagonal matrix of `I - P_k`, the cokernel residual maps.
    pub fn residual_blocks(&self) -> Matrix {
        let n = self.target_dim();
        let mut out = Matrix::zeros(n, n);
        for b in &self.target_blocks {
            let p = self.flow.theta(b.index).projector();
            out.set_block(b.offset, b.offset, &Matrix::identity(b.dim).sub(p));
        }
        out
    }
}

pub fn phi_jacobian(m: usize, h: &GradedPoly) -> Result<PhiJacobian> {
    PhiMap::new(m)?.jacobian(h)
}

/// Whether the Jacobian of `φ` at `h` has full row rank.
pub fn submersion_check(m: usize, h: &GradedPoly) -> Result<bool> {
    let jac = phi_jacobian(m, h)?;
    Ok(jac.rank() == jac.full_row_rank())
}

/// `(m-2)(m-3) - 2`, the dimension of `⊕_{k=1}^{m-4} ℝ_k[x,y]²`.
pub fn codim(m: usize) -> Result<usize> {
    check_m(m)?;
    Ok((m - 2) * (m - 3) - 2)
}

/// `Σ_{k=1}^{m-4} 2(k+1)`.
pub fn codim_by_sum(m: usize) -> Result<usize> {
    check_m(m)?;
    Ok((1..=m - 4).map(|k| 2 * (k + 1)).sum())
}

/// `Σ_{k=1}^{m-4} (m-3-k) = (m-3)(m-4)/2`, the total cokernel dimension of
/// the Θ_k over `k ∈ S`.
pub fn cokernel_codim(m: usize) -> Result<usize> {
    check_m(m)?;
    Ok((m - 3) * (m - 4) / 2)
}

/// Matrix of the flat Laplacian `ℝ_n[x,y] → ℝ_{n-2}[x,y]` in monomial coordinates.
pub fn laplacian_matrix(n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(domain(format!("flat Laplacian needs degree >= 2, got {n}")));
    }
    let cols: Vec<Vec<Rational>> = (0..=n)
        .map(|j| {
            HomPoly::monomial(n, j, int(1))
                .laplace_flat()
                .map(HomPoly::into_coeffs)
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_columns(n - 1, &cols))
}

/// Which composition with the Jacobian of `φ` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    /// `Θ* ∘ φ`, the literal adjoint.
    Adjoint,
    /// `(I - P) ∘ φ`, the cokernel residual.
    Residual,
}

/// Kernel dimension of the derivative of the composed map at `h`.
pub fn composed_kernel_dim(m: usize, h: &GradedPoly, composition: Composition) -> Result<usize> {
    let map = PhiMap::new(m)?;
    let jac = map.jacobian(h)?;
    let outer = match composition {
        Composition::Adjoint => map.adjoint_blocks(),
        Composition::Residual => map.residual_blocks(),
    };
    let composed = &outer * &jac.matrix;
    Ok(composed.cols() - composed.rank())
}

//! The linearized operator `Θ_k(Q₁, Q₂) = d(L(Q₁, Q₂) df₀) / dx∧dy` on
//! `ℝ_k[x,y]²`, its rank, image, least-squares projection and adjoint.
//!
//! Domain coordinates are the monomial coefficients of `Q₁` followed by
//! those of `Q₂`; target coordinates are the monomial coefficients of
//! `ℝ_{k+m-2}[x,y]`.

use std::ops::Neg;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::linalg::Matrix;
use crate::poly::{expand_re_im_zm, hp_mul, irr_basis, CxHomPoly, HomPoly, Var};
use crate::rational::{double_factorial, int, Rational};

/// `L(a, b) = [[-b, a], [a, b]]`, traceless by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LMatrix<T = Rational> {
    pub a: T,
    pub b: T,
}

impl<T> LMatrix<T>
where
    T: Clone,
    for<'a> &'a T: Neg<Output = T>,
{
    pub fn entries(&self) -> [[T; 2]; 2] {
        [[-&self.b, self.a.clone()], [self.a.clone(), self.b.clone()]]
    }
}

/// Inner product used for projections, minimum-norm solves and adjoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Pairing {
    /// Mean of `P·Q` over the unit circle. S¹-invariant; the Irr summands are
    /// mutually orthogonal.
    #[default]
    CircleAverage,
    /// Plain dot product of monomial coefficients.
    Coefficient,
}

/// Mean of `cos^a θ · sin^b θ` over the circle.
pub fn circle_moment(a: usize, b: usize) -> Rational {
    if a % 2 == 1 || b % 2 == 1 {
        return Rational::zero();
    }
    let num = double_factorial(a as i64 - 1) * double_factorial(b as i64 - 1);
    Rational::new(num, double_factorial((a + b) as i64))
}

/// Gram matrix of `pairing` on the monomial basis of `ℝ_n[x,y]`.
pub fn gram_matrix(n: usize, pairing: Pairing) -> Matrix {
    match pairing {
        Pairing::Coefficient => Matrix::identity(n + 1),
        Pairing::CircleAverage => {
            let mut g = Matrix::zeros(n + 1, n + 1);
            for i in 0..=n {
                for j in 0..=n {
                    g[(i, j)] = circle_moment(2 * n - i - j, i + j);
                }
            }
            g
        }
    }
}

pub fn pairing_value(p: &HomPoly, q: &HomPoly, pairing: Pairing) -> Rational {
    assert_eq!(p.degree(), q.degree());
    let g = gram_matrix(p.degree(), pairing);
    dot(p.coeffs(), &g.mul_vec(q.coeffs()))
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn check_mk(m: usize, k: usize) -> Result<()> {
    if m < 2 || k < 1 {
        return Err(domain(format!(
            "Θ_k needs m >= 2 and k >= 1, got m={m}, k={k}"
        )));
    }
    Ok(())
}

/// Θ applied to the real pair `(Q₁, Q₂)` through `d(L(Q₁,Q₂) df₀)`.
fn theta_real_form(m: usize, q1: &HomPoly, q2: &HomPoly) -> HomPoly {
    let f0 = expand_re_im_zm(m).0;
    let (fx, fy) = (f0.derive(Var::X), f0.derive(Var::Y));
    let [[t11, t12], [t21, t22]] = LMatrix {
        a: q1.clone(),
        b: q2.clone(),
    }
    .entries();
    // d(P dx + Q dy) = (Q_x - P_y) dx∧dy with (P, Q) = T·(f_x, f_y)
    let p = &hp_mul(&t11, &fx) + &hp_mul(&t12, &fy);
    let q = &hp_mul(&t21, &fx) + &hp_mul(&t22, &fy);
    &q.derive(Var::X) - &p.derive(Var::Y)
}

/// Θ applied to `Q = Q₁ + iQ₂` through `2m Re ∂_z(Q z^(m-1))`.
fn theta_complex_form(m: usize, q: &CxHomPoly) -> HomPoly {
    q.mul(&CxHomPoly::z_pow(m - 1))
        .d_z()
        .re
        .scale(&int(2 * m as i64))
}

fn unit(degree: usize, j: usize) -> HomPoly {
    HomPoly::monomial(degree, j, int(1))
}

/// Θ_k assembled column by column from the real form.
pub fn theta_matrix_real(m: usize, k: usize) -> Result<Matrix> {
    check_mk(m, k)?;
    let zero = HomPoly::zero(k);
    let mut cols = Vec::with_capacity(2 * k + 2);
    for j in 0..=k {
        cols.push(theta_real_form(m, &unit(k, j), &zero).into_coeffs());
    }
    for j in 0..=k {
        cols.push(theta_real_form(m, &zero, &unit(k, j)).into_coeffs());
    }
    Ok(Matrix::from_columns(k + m - 1, &cols))
}

/// Θ_k assembled column by column from the complex form.
pub fn theta_matrix_complex(m: usize, k: usize) -> Result<Matrix> {
    check_mk(m, k)?;
    let mut cols = Vec::with_capacity(2 * k + 2);
    for j in 0..=k {
        cols.push(theta_complex_form(m, &CxHomPoly::real(unit(k, j))).into_coeffs());
    }
    for j in 0..=k {
        let q = CxHomPoly::real(unit(k, j)).times_i();
        cols.push(theta_complex_form(m, &q).into_coeffs());
    }
    Ok(Matrix::from_columns(k + m - 1, &cols))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
    /// `M(k) = min(k, ⌊(k+m-2)/2⌋)`.
    pub m_k: usize,
}

/// Result of testing `φ` against the image of Θ_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub in_image: bool,
    /// Exact preimage, present only when `φ` lies in the image.
    pub preimage: Option<(HomPoly, HomPoly)>,
    /// Minimum-norm solution of `Θ(Q) = Pφ`; always defined.
    pub projected_preimage: (HomPoly, HomPoly),
    /// `Pφ`, the orthogonal projection onto the image.
    pub projection: HomPoly,
    /// `φ - Pφ`; zero exactly when `φ` lies in the image.
    pub residual: HomPoly,
}

/// Exact matrix of Θ_k together with the Gram matrices of the chosen pairing
/// and the precomputed projector and minimum-norm inverse.
#[derive(Debug, Clone)]
pub struct ThetaOperator {
    m: usize,
    k: usize,
    pairing: Pairing,
    matrix: Matrix,
    gram_domain: Matrix,
    gram_target: Matrix,
    rank: usize,
    projector: Matrix,
    min_norm_inverse: Matrix,
}

/// Θ_k with the circle-average pairing.
pub fn build_theta(m: usize, k: usize) -> Result<ThetaOperator> {
    ThetaOperator::new(m, k, Pairing::CircleAverage)
}

impl ThetaOperator {
    pub fn new(m: usize, k: usize, pairing: Pairing) -> Result<Self> {
        let matrix = theta_matrix_real(m, k)?;
        let n_target = k + m - 2;
        let gram_target = gram_matrix(n_target, pairing);
        let g = gram_matrix(k, pairing);
        let mut gram_domain = Matrix::zeros(2 * k + 2, 2 * k + 2);
        gram_domain.set_block(0, 0, &g);
        gram_domain.set_block(k + 1, k + 1, &g);

        let (_, pivots) = matrix.rref();
        let rank = pivots.len();
        let basis = matrix.select_columns(&pivots);
        let bt_w = &basis.transpose() * &gram_target;
        let normal = (&bt_w * &basis)
            .inverse()
            .expect("independent columns give an invertible normal matrix");
        // Coordinates of Pφ in the pivot-column basis.
        let coords = &normal * &bt_w;
        let projector = &basis * &coords;

        let mut particular = Matrix::zeros(2 * k + 2, n_target + 1);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..=n_target {
                particular[(pc, j)] = coords[(row, j)].clone();
            }
        }
        let kernel = matrix.nullspace();
        let min_norm_inverse = if kernel.is_empty() {
            particular
        } else {
            // Remove the gram_domain-orthogonal projection onto the kernel.
            let kmat = Matrix::from_columns(2 * k + 2, &kernel);
            let kt_v = &kmat.transpose() * &gram_domain;
            let kn = (&kt_v * &kmat)
                .inverse()
                .expect("kernel basis is independent");
            let kernel_proj = &(&kmat * &kn) * &kt_v;
            let keep = Matrix::identity(2 * k + 2).sub(&kernel_proj);
            &keep * &particular
        };

        Ok(ThetaOperator {
            m,
            k,
            pairing,
            matrix,
            gram_domain,
            gram_target,
            rank,
            projector,
            min_norm_inverse,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn gram_domain(&self) -> &Matrix {
        &self.gram_domain
    }

    pub fn gram_target(&self) -> &Matrix {
        &self.gram_target
    }

    pub fn projector(&self) -> &Matrix {
        &self.projector
    }

    pub fn min_norm_inverse(&self) -> &Matrix {
        &self.min_norm_inverse
    }

    pub fn target_degree(&self) -> usize {
        self.k + self.m - 2
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn apply(&self, q: &CxHomPoly) -> Result<HomPoly> {
        if q.degree() != self.k {
            return Err(domain(format!(
                "Θ_{} takes degree-{} input, got degree {}",
                self.k,
                self.k,
                q.degree()
            )));
        }
        let mut v = q.re.to_vector();
        v.extend(q.im.to_vector());
        Ok(HomPoly::from_coeffs(self.matrix.mul_vec(&v)))
    }

    fn split_domain(&self, v: Vec<Rational>) -> (HomPoly, HomPoly) {
        let mut v = v;
        let q2 = v.split_off(self.k + 1);
        (HomPoly::from_coeffs(v), HomPoly::from_coeffs(q2))
    }

    fn check_target(&self, phi: &HomPoly) -> Result<()> {
        if phi.degree() != self.target_degree() {
            return Err(domain(format!(
                "Θ_{} maps into degree {}, got a degree-{} right-hand side",
                self.k,
                self.target_degree(),
                phi.degree()
            )));
        }
        Ok(())
    }

    pub fn project(&self, phi: &HomPoly) -> Result<HomPoly> {
        self.check_target(phi)?;
        Ok(HomPoly::from_coeffs(self.projector.mul_vec(phi.coeffs())))
    }

    pub fn solve(&self, phi: &HomPoly) -> Result<SolveOutcome> {
        self.check_target(phi)?;
        let projection = HomPoly::from_coeffs(self.projector.mul_vec(phi.coeffs()));
        let residual = phi - &projection;
        let in_image = residual.is_zero();
        let projected_preimage = self.split_domain(self.min_norm_inverse.mul_vec(phi.coeffs()));
        Ok(SolveOutcome {
            in_image,
            preimage: in_image.then(|| projected_preimage.clone()),
            projected_preimage,
            projection,
            residual,
        })
    }

    /// Matrix of the adjoint `Θ* = V⁻¹ Θᵀ W` for the domain and target Gram matrices.
    pub fn adjoint_matrix(&self) -> Matrix {
        let v_inv = self
            .gram_domain
            .inverse()
            .expect("Gram matrices are positive definite");
        &(&v_inv * &self.matrix.transpose()) * &self.gram_target
    }

    pub fn apply_adjoint(&self, phi: &HomPoly) -> Result<(HomPoly, HomPoly)> {
        self.check_target(phi)?;
        Ok(self.split_domain(self.adjoint_matrix().mul_vec(phi.coeffs())))
    }

    pub fn rank_report(&self) -> RankReport {
        let m = self.m;
        let k = self.k;
        RankReport {
            rank: self.rank,
            injective: self.rank == 2 * (k + 1),
            surjective: self.rank == k + m - 1,
            m_k: k.min((k + m - 2) / 2),
        }
    }

    pub fn contains(&self, phi: &HomPoly) -> Result<bool> {
        Ok(self.solve(phi)?.residual.is_zero())
    }

    /// Basis of the orthogonal complement of the image, each vector scaled so
    /// its first nonzero coefficient is 1.
    pub fn cokernel_directions(&self) -> Vec<HomPoly> {
        let adj = &self.matrix.transpose() * &self.gram_target;
        adj.nullspace()
            .into_iter()
            .map(|v| {
                let lead = v
                    .iter()
                    .find(|c| !c.is_zero())
                    .cloned()
                    .expect("nonzero kernel vector");
                HomPoly::from_coeffs(v.iter().map(|c| c / &lead).collect())
            })
            .collect()
    }

    /// For each Irr summand of the target: whether both basis vectors lie in the image.
    pub fn irr_inclusion(&self) -> Vec<(usize, bool)> {
        let n = self.target_degree();
        (0..=n / 2)
            .map(|q| {
                let (re, im) = irr_basis(n, q).expect("q in range");
                let inside =
                    self.contains(&re).unwrap_or(false) && self.contains(&im).unwrap_or(false);
                (q, inside)
            })
            .collect()
    }
}

pub fn theta_apply(op: &ThetaOperator, q: &CxHomPoly) -> Result<HomPoly> {
    op.apply(q)
}

pub fn rank_report(op: &ThetaOperator) -> RankReport {
    op.rank_report()
}

pub fn solve_in_image(op: &ThetaOperator, phi: &HomPoly) -> Result<SolveOutcome> {
    op.solve(phi)
}

/// `min(2(k+1), k+m-1)`.
pub fn expected_rank(m: usize, k: usize) -> usize {
    (2 * (k + 1)).min(k + m - 1)
}

//! Degree-by-degree construction of a formal Hodge star `T = G₀ + G₁ + …`
//! with `d(T df) = 0` and `det T = 1` to increasing order, and the resulting
//! equivalence verdict.
//!
//! At step `k` the unknowns `(G¹¹_k, G¹²_k)` solve `Θ_k(G¹¹_k, G¹²_k) = φ_k`
//! (projected onto the image of Θ_k when the equation is not solvable) and
//! `G²²_k` is fixed by the determinant condition.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::poly::{expand_re_im_zm, GradedPoly, HomPoly, Var};
use crate::rational::{int, Rational};
use crate::theta::{Pairing, SolveOutcome, ThetaOperator};

/// A 2×2 matrix of graded polynomials.
pub type GradedMat2 = [[GradedPoly; 2]; 2];

/// A jet `Re(x+iy)^m + tail`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jet {
    m: usize,
    tail: GradedPoly,
    /// `None` marks an exact polynomial: every Taylor term beyond the tail is zero.
    order: Option<usize>,
}

impl Jet {
    pub fn new(m: usize, tail: GradedPoly, order: Option<usize>) -> Result<Self> {
        if m < 2 {
            return Err(domain(format!("leading degree m must be >= 2, got {m}")));
        }
        if let Some(low) = tail.min_degree() {
            if low <= m {
                return Err(domain(format!(
                    "tail term of degree {low} does not exceed the leading degree {m}"
                )));
            }
        }
        if let (Some(n), Some(high)) = (order, tail.max_degree()) {
            if high > n {
                return Err(domain(format!(
                    "tail term of degree {high} exceeds the jet order {n}"
                )));
            }
        }
        Ok(Jet { m, tail, order })
    }

    /// Jet known through degree `order`.
    pub fn truncated(m: usize, tail: GradedPoly, order: usize) -> Result<Self> {
        Self::new(m, tail, Some(order.max(m)))
    }

    /// The exact polynomial `Re(x+iy)^m + tail`.
    pub fn polynomial(m: usize, tail: GradedPoly) -> Result<Self> {
        Self::new(m, tail, None)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tail(&self) -> &GradedPoly {
        &self.tail
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn leading(&self) -> HomPoly {
        expand_re_im_zm(self.m).0
    }

    pub fn full(&self) -> GradedPoly {
        let mut f = self.tail.clone();
        f.add_component(&self.leading());
        f
    }

    pub fn ensure_order(&self, required: usize) -> Result<()> {
        match self.order {
            Some(n) if n < required => Err(Error::JetTooShort {
                required,
                available: n,
            }),
            _ => Ok(()),
        }
    }
}

/// `max(m, 2m - 4)`.
pub fn s_of_m(m: usize) -> usize {
    m.max((2 * m).saturating_sub(4))
}

/// `Re(x+iy)^m + C(x²+y²)^(m-2)` as a jet of order `2m - 4`.
pub fn make_fstar(m: usize, c: &Rational) -> Result<Jet> {
    if m < 5 {
        return Err(domain(format!("the witness f★ needs m >= 5, got {m}")));
    }
    if num_traits::Zero::is_zero(c) {
        return Err(domain("the witness f★ needs C != 0"));
    }
    let tail = GradedPoly::from_component(HomPoly::r2_pow(m - 2).scale(c));
    Jet::truncated(m, tail, 2 * m - 4)
}

/// `d(T df) / dx∧dy = (T₂₁f_x + T₂₂f_y)_x - (T₁₁f_x + T₁₂f_y)_y`, components
/// of degree `<= max_degree`.
pub fn star_divergence(t: &GradedMat2, f: &GradedPoly, max_degree: usize) -> GradedPoly {
    let (fx, fy) = (f.derive(Var::X), f.derive(Var::Y));
    let d = max_degree + 1;
    let p = &t[0][0].mul_truncated(&fx, d) + &t[0][1].mul_truncated(&fy, d);
    let q = &t[1][0].mul_truncated(&fx, d) + &t[1][1].mul_truncated(&fy, d);
    &q.derive(Var::X) - &p.derive(Var::Y)
}

/// The single component `[d(T df)]_n`.
pub fn star_divergence_component(t: &GradedMat2, f: &GradedPoly, n: usize) -> HomPoly {
    let (fx, fy) = (f.derive(Var::X), f.derive(Var::Y));
    let p = &t[0][0].product_component(&fx, n + 1) + &t[0][1].product_component(&fy, n + 1);
    let q = &t[1][0].product_component(&fx, n + 1) + &t[1][1].product_component(&fy, n + 1);
    &q.derive(Var::X) - &p.derive(Var::Y)
}

/// Truncated formal Hodge star `T_k = G₀ + … + G_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarJet {
    entries: GradedMat2,
    max_degree: usize,
}

impl StarJet {
    /// `G₀ = [[0, -1], [1, 0]]`, the flat star.
    pub fn flat() -> Self {
        StarJet {
            entries: [
                [GradedPoly::zero(), GradedPoly::constant(int(-1))],
                [GradedPoly::constant(int(1)), GradedPoly::zero()],
            ],
            max_degree: 0,
        }
    }

    pub fn from_entries(entries: GradedMat2, max_degree: usize) -> Self {
        let entries = entries.map(|row| row.map(|e| e.truncate(max_degree)));
        StarJet {
            entries,
            max_degree,
        }
    }

    pub fn entries(&self) -> &GradedMat2 {
        &self.entries
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn truncate(&self, max_degree: usize) -> StarJet {
        Self::from_entries(self.entries.clone(), max_degree.min(self.max_degree))
    }

    /// The degree-`n` component as a matrix of homogeneous polynomials.
    pub fn component(&self, n: usize) -> [[HomPoly; 2]; 2] {
        [
            [
                self.entries[0][0].component(n),
                self.entries[0][1].component(n),
            ],
            [
                self.entries[1][0].component(n),
                self.entries[1][1].component(n),
            ],
        ]
    }

    /// Adds a homogeneous degree-`n` matrix and raises `max_degree` to at least `n`.
    pub fn push_component(&mut self, n: usize, g: &[[HomPoly; 2]; 2]) {
        for (row, grow) in self.entries.iter_mut().zip(g) {
            for (e, ge) in row.iter_mut().zip(grow) {
                e.add_component(ge);
            }
        }
        self.max_degree = self.max_degree.max(n);
    }

    pub fn trace(&self) -> GradedPoly {
        &self.entries[0][0] + &self.entries[1][1]
    }

    pub fn det_truncated(&self, max_degree: usize) -> GradedPoly {
        let [[a, b], [c, d]] = &self.entries;
        &a.mul_truncated(d, max_degree) - &b.mul_truncated(c, max_degree)
    }

    pub fn det_component(&self, n: usize) -> HomPoly {
        let [[a, b], [c, d]] = &self.entries;
        &a.product_component(d, n) - &b.product_component(c, n)
    }

    pub fn divergence(&self, f: &GradedPoly, max_degree: usize) -> GradedPoly {
        star_divergence(&self.entries, f, max_degree)
    }

    /// `d(T df)` without truncation, treating `f` as a polynomial.
    pub fn divergence_full(&self, f: &GradedPoly) -> GradedPoly {
        let top = self.max_degree + f.max_degree().unwrap_or(0);
        star_divergence(&self.entries, f, top)
    }
}

/// The outcome of one inductive step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub k: usize,
    pub phi: HomPoly,
    pub outcome: SolveOutcome,
    pub g11: HomPoly,
    pub g12: HomPoly,
    pub g22: HomPoly,
}

impl StepRecord {
    /// `G_k = [[-G¹², -G²²], [G¹¹, G¹²]]`.
    pub fn g_matrix(&self) -> [[HomPoly; 2]; 2] {
        [
            [-&self.g12, -&self.g22],
            [self.g11.clone(), self.g12.clone()],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    #[serde(rename = "undetermined_jet_too_short")]
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "equivalent",
            Verdict::NotEquivalent => "not_equivalent",
            Verdict::Undetermined => "undetermined_jet_too_short",
        })
    }
}

/// Cokernel residuals over `S = {1, …, m-4}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub m: usize,
    /// The full index set `S`; empty for `m <= 4`.
    pub s: Vec<usize>,
    /// `(k, φ_k - Pφ_k)` for the steps actually run. Entries after
    /// `first_failure` depend on the projected continuation.
    pub residuals: Vec<(usize, HomPoly)>,
    pub first_failure: Option<usize>,
    pub verdict: Verdict,
}

impl ObstructionReport {
    fn from_steps(m: usize, steps: &[StepRecord]) -> Self {
        let s: Vec<usize> = (1..=m.saturating_sub(4)).collect();
        let residuals: Vec<(usize, HomPoly)> = steps
            .iter()
            .filter(|st| s.contains(&st.k))
            .map(|st| (st.k, st.outcome.residual.clone()))
            .collect();
        let first_failure = residuals
            .iter()
            .find(|(_, r)| !r.is_zero())
            .map(|(k, _)| *k);
        let verdict = match first_failure {
            Some(_) => Verdict::NotEquivalent,
            None if residuals.len() == s.len() => Verdict::Equivalent,
            None => Verdict::Undetermined,
        };
        ObstructionReport {
            m,
            s,
            residuals,
            first_failure,
            verdict,
        }
    }

    pub fn is_conditional(&self, k: usize) -> bool {
        self.first_failure.is_some_and(|f| k > f)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub metric: StarJet,
    pub steps: Vec<StepRecord>,
    pub report: ObstructionReport,
    /// `assertions[k-1]` is the result of [`assert_ak`] at step `k`.
    pub assertions: Vec<bool>,
}

/// `φ_k`, the right-hand side at step `k`, from `T_{k-1}` and `[f]_{<= k+m}`.
///
/// The determinant condition fixes `G²²_k = -[det T_{k-1}]_k - G¹¹_k`; its
/// `-[det T_{k-1}]_k` part is moved to the right-hand side here so that the
/// remaining unknowns enter only through Θ_k.
pub fn phi_next(t_prev: &StarJet, f: &Jet, k: usize) -> Result<HomPoly> {
    if k == 0 {
        return Err(domain("steps start at k = 1"));
    }
    if t_prev.max_degree() + 1 < k {
        return Err(domain(format!(
            "step {k} needs the star through degree {}, got {}",
            k - 1,
            t_prev.max_degree()
        )));
    }
    let m = f.m();
    f.ensure_order(k + m)?;
    let mut t = t_prev.truncate(k - 1);
    let det_k = t.det_component(k);
    let z = HomPoly::zero(k);
    t.push_component(k, &[[z.clone(), det_k], [z.clone(), z]]);
    let full = f.full().truncate(k + m);
    Ok(-star_divergence_component(t.entries(), &full, k + m - 2))
}

/// Degree-by-degree solver for a fixed leading degree `m`, with Θ_k cached
/// for `k = 1..=horizon`.
#[derive(Debug, Clone)]
pub struct JetFlow {
    m: usize,
    pairing: Pairing,
    thetas: Vec<ThetaOperator>,
}

impl JetFlow {
    pub fn new(m: usize, horizon: usize, pairing: Pairing) -> Result<Self> {
        let thetas = (1..=horizon)
            .map(|k| ThetaOperator::new(m, k, pairing))
            .collect::<Result<Vec<_>>>()?;
        Ok(JetFlow { m, pairing, thetas })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn horizon(&self) -> usize {
        self.thetas.len()
    }

    pub fn theta(&self, k: usize) -> &ThetaOperator {
        &self.thetas[k - 1]
    }

    fn check_jet(&self, f: &Jet) -> Result<()> {
        if f.m() != self.m {
            return Err(domain(format!(
                "solver built for m={}, jet has m={}",
                self.m,
                f.m()
            )));
        }
        Ok(())
    }

    pub fn step(&self, t_prev: &StarJet, f: &Jet, k: usize) -> Result<(StepRecord, StarJet)> {
        self.check_jet(f)?;
        if k == 0 || k > self.horizon() {
            return Err(domain(format!(
                "step {k} outside the solver horizon {}",
                self.horizon()
            )));
        }
        let phi = phi_next(t_prev, f, k)?;
        let outcome = self.theta(k).solve(&phi)?;
        let (g11, g12) = outcome.projected_preimage.clone();
        let det_k = t_prev.truncate(k - 1).det_component(k);
        let g22 = &(-&det_k) - &g11;
        let record = StepRecord {
            k,
            phi,
            outcome,
            g11,
            g12,
            g22,
        };
        let mut next = t_prev.truncate(k - 1);
        next.push_component(k, &record.g_matrix());
        Ok((record, next))
    }

    /// Runs steps `1..=horizon` on `f`.
    pub fn run(&self, f: &Jet) -> Result<RunOutput> {
        self.run_to(f, self.horizon())
    }

    pub fn run_to(&self, f: &Jet, horizon: usize) -> Result<RunOutput> {
        self.check_jet(f)?;
        if horizon > self.horizon() {
            return Err(domain(format!(
                "horizon {horizon} exceeds the solver horizon {}",
                self.horizon()
            )));
        }
        let (steps, t) = self.steps(f, horizon)?;
        let assertions = (1..=horizon)
            .map(|k| assert_ak(&t, f, k))
            .collect::<Result<Vec<_>>>()?;
        let report = ObstructionReport::from_steps(self.m, &steps);
        Ok(RunOutput {
            metric: t,
            steps,
            report,
            assertions,
        })
    }

    /// Step records for `k = 1..=horizon` and the final star, without
    /// re-verifying the assertions.
    pub fn steps(&self, f: &Jet, horizon: usize) -> Result<(Vec<StepRecord>, StarJet)> {
        self.check_jet(f)?;
        if horizon > self.horizon() {
            return Err(domain(format!(
                "horizon {horizon} exceeds the solver horizon {}",
                self.horizon()
            )));
        }
        f.ensure_order(horizon + self.m)?;
        let mut t = StarJet::flat();
        let mut steps = Vec::with_capacity(horizon);
        for k in 1..=horizon {
            let (record, next) = self.step(&t, f, k)?;
            steps.push(record);
            t = next;
        }
        Ok((steps, t))
    }

    /// Runs exactly the obstruction steps `k ∈ S`.
    pub fn obstruct(&self, f: &Jet) -> Result<ObstructionReport> {
        let horizon = self.m.saturating_sub(4);
        let (steps, _) = self.steps(f, horizon)?;
        Ok(ObstructionReport::from_steps(self.m, &steps))
    }
}

/// Runs `horizon` steps with the circle-average pairing.
pub fn run(f: &Jet, horizon: usize) -> Result<RunOutput> {
    f.ensure_order(horizon + f.m())?;
    JetFlow::new(f.m(), horizon, Pairing::CircleAverage)?.run(f)
}

/// The verdict for `f`; needs the jet through degree `2m - 4`.
pub fn obstruct(f: &Jet) -> Result<ObstructionReport> {
    let horizon = f.m().saturating_sub(4);
    f.ensure_order(horizon + f.m())?;
    JetFlow::new(f.m(), horizon, Pairing::CircleAverage)?.obstruct(f)
}

/// Checks `[d T_k df]_n = 0` for `n <= k+m-2` and `[det T_k]_n = 0` for
/// `1 <= n <= k`, where `T_k` is `t` truncated at degree `k`.
pub fn assert_ak(t: &StarJet, f: &Jet, k: usize) -> Result<bool> {
    if t.max_degree() < k {
        return Err(domain(format!(
            "assertion at step {k} needs the star through degree {k}, got {}",
            t.max_degree()
        )));
    }
    let m = f.m();
    f.ensure_order(k + m)?;
    let tk = t.truncate(k);
    let full = f.full().truncate(k + m);
    let harmonic = tk.divergence(&full, k + m - 2).is_zero();
    let det = tk.det_truncated(k);
    let unimodular = (1..=k).all(|n| det.get(n).is_none());
    Ok(harmonic && unimodular)
}

//! Quick self-check run by `harmjet verify`: a reduced-size pass over the
//! invariants of every module.

use serde::Serialize;

use crate::analysis::{codim, codim_by_sum, PhiMap};
use crate::error::Result;
use crate::geometry::{laplacian_graded, metric_from_star};
use crate::io::{jet_from_document, jet_to_document};
use crate::jetflow::{make_fstar, obstruct, run, s_of_m, Jet, Verdict};
use crate::poly::{harmonic_decompose, harmonic_reconstruct, hp_mul, GradedPoly};
use crate::rational::{int, rat};
use crate::sampling::{random_graded, random_hom_poly, rng};
use crate::theta::{
    expected_rank, theta_matrix_complex, theta_matrix_real, Pairing, ThetaOperator,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

type Check = fn() -> Result<bool>;

const CHECKS: &[(&str, Check)] = &[
    ("poly: Leibniz rule for products", leibniz),
    (
        "poly: harmonic decomposition round trip",
        harmonic_roundtrip,
    ),
    ("theta: rank law for m <= 8", rank_law),
    ("theta: real and complex constructions agree", two_paths),
    (
        "theta: projection is idempotent and self-adjoint",
        projection,
    ),
    (
        "jetflow: random flat-through-s(m) jets are equivalent",
        equivalent_jets,
    ),
    ("jetflow: f* is obstructed at k = m-4", fstar),
    (
        "geometry: star divergence matches the metric Laplacian",
        laplacian_agrees,
    ),
    ("analysis: codimension formulas agree", codims),
    (
        "analysis: Jacobian has full row rank at 0 for m = 5, 6",
        submersion,
    ),
    ("cli: jet documents round trip", documents),
];

pub fn run_suite() -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|(name, check)| match check() {
            Ok(passed) => CheckResult {
                name,
                passed,
                error: None,
            },
            Err(e) => CheckResult {
                name,
                passed: false,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

fn leibniz() -> Result<bool> {
    let mut r = rng(1);
    for (a, b) in [(2, 3), (4, 1), (5, 5)] {
        let p = random_hom_poly(&mut r, a);
        let q = random_hom_poly(&mut r, b);
        for var in [crate::poly::Var::X, crate::poly::Var::Y] {
            let lhs = hp_mul(&p, &q).derive(var);
            let rhs = &hp_mul(&p.derive(var), &q) + &hp_mul(&p, &q.derive(var));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn harmonic_roundtrip() -> Result<bool> {
    let mut r = rng(2);
    for n in 0..=12 {
        let p = random_hom_poly(&mut r, n);
        if harmonic_reconstruct(n, &harmonic_decompose(&p))? != p {
            return Ok(false);
        }
    }
    Ok(true)
}

fn rank_law() -> Result<bool> {
    for m in 2..=8 {
        for k in 1..=2 * m {
            if ThetaOperator::new(m, k, Pairing::CircleAverage)?.rank() != expected_rank(m, k) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn two_paths() -> Result<bool> {
    for m in 2..=7 {
        for k in 1..=6 {
            if theta_matrix_real(m, k)? != theta_matrix_complex(m, k)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn projection() -> Result<bool> {
    for (m, k) in [(5, 1), (6, 2), (7, 1), (4, 3)] {
        let op = ThetaOperator::new(m, k, Pairing::CircleAverage)?;
        let p = op.projector();
        let w = op.gram_target();
        if &(p * p) != p || !(w * p).is_symmetric() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn equivalent_jets() -> Result<bool> {
    let mut r = rng(3);
    for m in 2..=7 {
        let s = s_of_m(m);
        for _ in 0..3 {
            let tail = random_graded(&mut r, s + 1, s + 2);
            let jet = Jet::truncated(m, tail, s + 2)?;
            let out = run(&jet, s + 2 - m)?;
            if out.report.verdict != Verdict::Equivalent || !out.assertions.iter().all(|&a| a) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn fstar() -> Result<bool> {
    for m in 5..=8 {
        let report = obstruct(&make_fstar(m, &rat(3, 2))?)?;
        if report.verdict != Verdict::NotEquivalent || report.first_failure != Some(m - 4) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn laplacian_agrees() -> Result<bool> {
    let mut r = rng(4);
    let m = 4;
    let tail = random_graded(&mut r, m + 1, m + 4);
    let jet = Jet::polynomial(m, tail)?;
    let out = run(&jet, 4)?;
    let g = metric_from_star(&out.metric)?;
    let top = 4 + m - 2;
    Ok(laplacian_graded(&g, &jet, top) == out.metric.divergence(&jet.full(), top))
}

fn codims() -> Result<bool> {
    for m in 5..=30 {
        if codim(m)? != codim_by_sum(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn submersion() -> Result<bool> {
    for m in [5, 6] {
        let jac = PhiMap::new(m)?.jacobian(&GradedPoly::zero())?;
        if jac.rank() != jac.full_row_rank() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn documents() -> Result<bool> {
    let mut r = rng(5);
    let tail = random_graded(&mut r, 6, 8);
    let jet = Jet::truncated(5, tail, 9)?;
    let again = jet_from_document(&jet_to_document(&jet))?;
    let fstar = make_fstar(6, &int(-1))?;
    Ok(again == jet && jet_from_document(&jet_to_document(&fstar))? == fstar)
}

//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each, and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use harmjet::analysis::{
    codim, codim_by_sum, composed_kernel_dim, laplacian_matrix, Composition, PhiMap,
};
use harmjet::geometry::{default_angles, default_radii, residual_decay};
use harmjet::jetflow::JetFlow;
use harmjet::rational::{int, rat};
use harmjet::sampling::{random_graded, random_hom_poly, rng, small_rational};
use harmjet::theta::{expected_rank, theta_matrix_real};
use harmjet::{
    make_fstar, obstruct, run, s_of_m, CxHomPoly, GradedPoly, HomPoly, Jet, Matrix, Pairing,
    Rational, ThetaOperator, Verdict,
};
use num_bigint::BigInt;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn hom(coeffs: Vec<BigInt>) -> HomPoly {
    HomPoly::from_coeffs(common::to_rationals(&coeffs))
}

fn rows_of(m: &Matrix) -> Vec<Vec<Rational>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rank_law() -> Outcome {
    let mut count = 0;
    for m in 2..=12 {
        for k in 1..=2 * m {
            let mat = theta_matrix_real(m, k).map_err(|e| e.to_string())?;
            let expected = expected_rank(m, k);
            check(mat.rank() == expected, || {
                format!("m={m} k={k}: rank {} != {expected}", mat.rank())
            })?;
            let oracle = common::bareiss_rank(common::clear_denominators(rows_of(&mat)));
            check(oracle == expected, || {
                format!("m={m} k={k}: Bareiss rank {oracle} != {expected}")
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} operators, elimination and Bareiss ranks both equal min(2(k+1), k+m-1)"
    ))
}

fn explicit_images() -> Outcome {
    let mut count = 0;
    for m in 2..=10 {
        for k in 1..=12 {
            let op = ThetaOperator::new(m, k, Pairing::CircleAverage).map_err(|e| e.to_string())?;
            let m_k = k.min((k + m - 2) / 2);
            for q in 0..=m_k {
                let n = k - q;
                let p = n + m - 2 - q;
                let input = CxHomPoly::zbar_pow(q).mul(&CxHomPoly::z_pow(n));
                let factor = BigInt::from(2 * m * (n + m - 1));
                let r2q = common::r2_pow(q);
                let (re, im) = common::re_im_zp(p);
                let want_re = hom(common::scale(&common::convolve(&r2q, &re), &factor));
                let want_im = hom(common::scale(
                    &common::convolve(&r2q, &im),
                    &-factor.clone(),
                ));
                let got_re = op.apply(&input).map_err(|e| e.to_string())?;
                let got_im = op.apply(&input.times_i()).map_err(|e| e.to_string())?;
                check(got_re == want_re, || {
                    format!("m={m} k={k} q={q}: real image {got_re}")
                })?;
                check(got_im == want_im, || {
                    format!("m={m} k={k} q={q}: i-companion {got_im}")
                })?;
                count += 2;
            }
        }
    }
    Ok(format!(
        "{count} images match 2m(n+m-1)(x²+y²)^q Re z^p and -2m(n+m-1)(x²+y²)^q Im z^p"
    ))
}

fn missed_direction() -> Outcome {
    for m in 5..=12 {
        let k = m - 4;
        let op = ThetaOperator::new(m, k, Pairing::CircleAverage).map_err(|e| e.to_string())?;
        let missed = hom(common::r2_pow(m - 3));
        let inside = op.contains(&missed).map_err(|e| e.to_string())?;
        check(!inside, || {
            format!("m={m}: (x²+y²)^{} lies in the image", m - 3)
        })?;
        for (q, included) in op.irr_inclusion() {
            check(included == (q <= m - 4), || {
                format!("m={m}: Irr^{q} inclusion is {included}")
            })?;
        }
        // dim ⊕_{q<=m-4} Irr^q = (2m-6+1) - 1, so inclusion of the summands plus
        // this rank makes the image equal to their sum
        check(op.rank() == 2 * m - 6, || {
            format!("m={m}: rank {}", op.rank())
        })?;
        let dirs = op.cokernel_directions();
        check(dirs == vec![missed.clone()], || {
            format!("m={m}: cokernel {dirs:?}")
        })?;
    }
    Ok(
        "m=5..12: (x²+y²)^(m-3) is the only missed direction and Im Θ_(m-4) = ⊕_(q<=m-4) Irr^q"
            .into(),
    )
}

fn random_equivalent() -> Outcome {
    let mut r = rng(20240501);
    let mut jets = 0;
    for m in 2..=10 {
        let s = s_of_m(m);
        let horizon = s + 4 - m;
        let flow = JetFlow::new(m, horizon, Pairing::CircleAverage).map_err(|e| e.to_string())?;
        for i in 0..50 {
            let tail = random_graded(&mut r, s + 1, s + 4);
            let jet = Jet::truncated(m, tail, s + 4).map_err(|e| e.to_string())?;
            let out = flow.run(&jet).map_err(|e| e.to_string())?;
            check(out.report.verdict == Verdict::Equivalent, || {
                format!("m={m} jet {i}: {}", out.report.verdict)
            })?;
            check(
                out.report.residuals.iter().all(|(_, p)| p.is_zero()),
                || format!("m={m} jet {i}: nonzero residual"),
            )?;
            let failed: Vec<usize> = (1..=horizon).filter(|k| !out.assertions[k - 1]).collect();
            check(failed.is_empty(), || {
                format!("m={m} jet {i}: A_k fails at {failed:?}")
            })?;
            jets += 1;
        }
    }
    Ok(format!(
        "{jets} jets equivalent, all residuals zero, A_k true for k <= s(m)+4-m"
    ))
}

fn fstar_obstructed() -> Outcome {
    let mut count = 0;
    for m in 5..=12 {
        for c in [int(1), int(-1), rat(3, 2)] {
            let jet = make_fstar(m, &c).map_err(|e| e.to_string())?;
            let report = obstruct(&jet).map_err(|e| e.to_string())?;
            check(report.verdict == Verdict::NotEquivalent, || {
                format!("m={m} C={c}: {}", report.verdict)
            })?;
            check(report.first_failure == Some(m - 4), || {
                format!("m={m} C={c}: first failure {:?}", report.first_failure)
            })?;
            let flow = JetFlow::new(m, m - 4, Pairing::CircleAverage).map_err(|e| e.to_string())?;
            let (steps, _) = flow.steps(&jet, m - 4).map_err(|e| e.to_string())?;
            let factor = int(-4) * &c * int(((m - 2) * (m - 2)) as i64);
            let want = hom(common::r2_pow(m - 3)).scale(&factor);
            let phi = &steps[m - 5].phi;
            check(*phi == want, || format!("m={m} C={c}: φ_(m-4) = {phi}"))?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} witnesses: not_equivalent, first failure m-4, φ_(m-4) = -4C(m-2)²(x²+y²)^(m-3)"
    ))
}

fn single_degree_tails() -> Outcome {
    let mut r = rng(77);
    let mut count = 0;
    for m in 5..=9 {
        for n in m + 1..=2 * m - 4 {
            let k_top = n - m;
            let flow = JetFlow::new(m, k_top, Pairing::CircleAverage).map_err(|e| e.to_string())?;
            for trial in 0..3 {
                let component = if trial == 0 {
                    HomPoly::monomial(n, n / 2, small_rational(&mut r))
                } else {
                    random_hom_poly(&mut r, n)
                };
                let jet = Jet::polynomial(m, GradedPoly::from_component(component.clone()))
                    .map_err(|e| e.to_string())?;
                let (steps, _) = flow.steps(&jet, k_top).map_err(|e| e.to_string())?;
                for s in &steps[..k_top - 1] {
                    check(s.phi.is_zero(), || {
                        format!("m={m} N={n}: φ_{} = {}", s.k, s.phi)
                    })?;
                }
                let want: Vec<Rational> = common::laplacian(component.coeffs())
                    .into_iter()
                    .map(|c| -c)
                    .collect();
                let got = steps[k_top - 1].phi.coeffs().to_vec();
                check(got == want, || {
                    format!("m={m} N={n}: φ_(N-m) differs from -Δ[f]_N")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} single-degree tails: φ_k = 0 below N-m and φ_(N-m) = -Δ[f]_N"
    ))
}

fn submersion() -> Outcome {
    let mut r = rng(5150);
    let mut points = 0;
    for m in 5..=9 {
        let map = PhiMap::new(m).map_err(|e| e.to_string())?;
        let mut bases = vec![GradedPoly::zero()];
        bases.extend((0..20).map(|_| random_graded(&mut r, m + 1, 2 * m - 4)));
        for (i, h) in bases.iter().enumerate() {
            let jac = map.jacobian(h).map_err(|e| e.to_string())?;
            check(jac.rank() == jac.full_row_rank(), || {
                format!("m={m} point {i}: rank {}", jac.rank())
            })?;
            for k in 1..=m - 4 {
                let minus_lap = Matrix::zeros(m + k - 1, m + k + 1)
                    .sub(&laplacian_matrix(m + k).map_err(|e| e.to_string())?);
                check(jac.block(k, k) == minus_lap, || {
                    format!("m={m} point {i}: block ({k},{k}) is not -Δ")
                })?;
                let oracle: Vec<Vec<Rational>> = (0..=m + k)
                    .map(|j| {
                        let mut e = vec![int(0); m + k + 1];
                        e[j] = int(1);
                        common::laplacian(&e)
                    })
                    .collect();
                let block = jac.block(k, k);
                let matches =
                    (0..=m + k).all(|j| (0..m + k - 1).all(|i| block[(i, j)] == -&oracle[j][i]));
                check(matches, || {
                    format!("m={m} point {i}: block ({k},{k}) differs from the Laplacian oracle")
                })?;
            }
            points += 1;
        }
    }
    Ok(format!(
        "{points} base points (h = 0 and 20 random per m): full row rank, diagonal blocks = -Δ"
    ))
}

fn codimension() -> Outcome {
    for m in 5..=50 {
        let c = codim(m).map_err(|e| e.to_string())?;
        let sum = codim_by_sum(m).map_err(|e| e.to_string())?;
        let direct: usize = (1..=m - 4).map(|k| 2 * (k + 1)).sum();
        check(
            c == (m - 2) * (m - 3) - 2 && c == sum && c == direct,
            || format!("m={m}: {c} vs {sum}"),
        )?;
    }
    let mut dims = Vec::new();
    for m in 5..=9 {
        let domain: usize = (m + 1..=2 * m - 4).map(|n| n + 1).sum();
        let h = GradedPoly::zero();
        let kernel = composed_kernel_dim(m, &h, Composition::Adjoint).map_err(|e| e.to_string())?;
        let expected = domain - codim(m).map_err(|e| e.to_string())?;
        check(kernel == expected, || {
            format!("m={m}: kernel {kernel} != {expected}")
        })?;
        let residual_kernel =
            composed_kernel_dim(m, &h, Composition::Residual).map_err(|e| e.to_string())?;
        dims.push(format!("m={m}: {kernel} (residual map: {residual_kernel})"));
    }
    Ok(format!(
        "closed form = Σ2(k+1) for m=5..50; kernel of Θ*∘dφ at 0 = dim - codim: {}",
        dims.join(", ")
    ))
}

fn decay_slope() -> Outcome {
    let mut r = rng(99);
    let mut worst = f64::INFINITY;
    for m in 5..=7 {
        let k = m - 1;
        let s = s_of_m(m);
        for i in 0..5 {
            let tail = random_graded(&mut r, s + 1, k + m);
            let jet = Jet::truncated(m, tail, k + m).map_err(|e| e.to_string())?;
            let out = run(&jet, k).map_err(|e| e.to_string())?;
            check(out.report.verdict == Verdict::Equivalent, || {
                format!("m={m} jet {i}: not equivalent")
            })?;
            let probe = residual_decay(&out.metric, &jet, &default_radii(), &default_angles(32))
                .map_err(|e| e.to_string())?;
            let bound = (k + m - 1) as f64 - 0.2;
            check(probe.fitted_slope >= bound, || {
                format!("m={m} jet {i}: slope {:.4} < {bound}", probe.fitted_slope)
            })?;
            worst = worst.min(probe.fitted_slope - (k + m - 1) as f64);
        }
    }
    Ok(format!(
        "15 jets, min(slope - (K+m-1)) = {worst:.4} >= -0.2"
    ))
}

fn two_paths_and_projection() -> Outcome {
    let mut r = rng(4242);
    use rand::Rng;
    for i in 0..100 {
        let m = r.random_range(2..=10);
        let k = r.random_range(1..=12);
        let op = ThetaOperator::new(m, k, Pairing::CircleAverage).map_err(|e| e.to_string())?;
        let q = CxHomPoly::new(random_hom_poly(&mut r, k), random_hom_poly(&mut r, k))
            .map_err(|e| e.to_string())?;
        let matrix_path = op.apply(&q).map_err(|e| e.to_string())?;
        let complex_path = q
            .mul(&CxHomPoly::z_pow(m - 1))
            .d_z()
            .re
            .scale(&int(2 * m as i64));
        check(matrix_path == complex_path, || {
            format!("instance {i} (m={m}, k={k}): paths differ")
        })?;
        let phi = random_hom_poly(&mut r, k + m - 2);
        let once = op.project(&phi).map_err(|e| e.to_string())?;
        let twice = op.project(&once).map_err(|e| e.to_string())?;
        check(once == twice, || {
            format!("instance {i} (m={m}, k={k}): P² != P")
        })?;
        check(op.contains(&once).map_err(|e| e.to_string())?, || {
            format!("instance {i}: Pφ not in image")
        })?;
        let p = op.projector();
        check(&(p * p) == p, || {
            format!("instance {i}: projector matrix not idempotent")
        })?;
    }
    Ok("100 instances: d(L df₀) = 2m Re ∂_z(Q z^(m-1)) and P² = P".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("rank law", Duration::from_secs(30), rank_law),
        ("explicit images", Duration::from_secs(30), explicit_images),
        (
            "missed direction",
            Duration::from_secs(10),
            missed_direction,
        ),
        (
            "random equivalent jets",
            Duration::from_secs(120),
            random_equivalent,
        ),
        ("f★ obstruction", Duration::from_secs(30), fstar_obstructed),
        (
            "single-degree tails",
            Duration::from_secs(30),
            single_degree_tails,
        ),
        ("submersion", Duration::from_secs(120), submersion),
        ("codimension", Duration::from_secs(60), codimension),
        (
            "Laplacian vanishing order",
            Duration::from_secs(30),
            decay_slope,
        ),
        (
            "two-path Θ and projection",
            Duration::from_secs(30),
            two_paths_and_projection,
        ),
    ];
    let mut failures = 0;
    for (i, (name, budget, run_criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run_criterion();
        let elapsed = start.elapsed();
        let over = if elapsed > *budget {
            format!(" [over the {}s budget]", budget.as_secs())
        } else {
            String::new()
        };
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {} ({name}): {detail} ({:.1}s){over}",
                i + 1,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failures += 1;
                println!(
                    "FAIL criterion {} ({name}): {why} ({:.1}s)",
                    i + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

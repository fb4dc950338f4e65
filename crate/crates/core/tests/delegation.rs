//! Cross-module paths: the Heisenberg and affine projections feed the
//! real-measure defect machinery, and Riesz products feed the circle-side
//! transform-infimum evidence.

use num_complex::Complex64;

use kazlab_core::groups::{affine_projection, heisenberg_projection, AffineElement, HeisenbergElement};
use kazlab_core::kazhdan::{bounded_momentum_witness, transform_infimum};
use kazlab_core::measure::riesz_product;
use kazlab_core::realmeasure::RealMeasure;
use kazlab_core::weyl::IntegerSequence;
use kazlab_core::Angle;

#[test]
fn bounded_momentum_heisenberg_sets_get_a_witness() {
    // Elements with arbitrary centers and q, but |p| ≤ 2: the projection
    // forgets t, and the cube witness beats any ε with no atom at 0.
    let q: Vec<HeisenbergElement> = (0..25)
        .map(|i| {
            HeisenbergElement::new(
                i as f64 * 3.1,
                vec![i as f64 * 5.0, -(i as f64)],
                vec![2.0 * ((i % 5) as f64) / 4.0, (i % 3) as f64 / 2.0],
            )
            .unwrap()
        })
        .collect();
    let projected = heisenberg_projection(&q);
    assert!(projected.iter().all(|pt| pt.len() == 4));
    for epsilon in [0.3, 0.05] {
        let (measure, verdict) = bounded_momentum_witness(&projected, epsilon).unwrap();
        assert!(verdict.defect < epsilon);
        assert!(measure.atoms().is_empty());
    }
}

#[test]
fn product_sets_project_to_products() {
    let a = HeisenbergElement::new(1.0, vec![2.0], vec![3.0]).unwrap();
    let b = HeisenbergElement::new(-0.5, vec![1.0], vec![-1.0]).unwrap();
    let ab = a.compose(&b).unwrap();
    let projected = heisenberg_projection(&[a, b, ab]);
    // The projection is a homomorphism onto (ℝ^{2n}, +).
    assert!((projected[2][0] - (projected[0][0] + projected[1][0])).abs() < 1e-12);
    assert!((projected[2][1] - (projected[0][1] + projected[1][1])).abs() < 1e-12);
}

#[test]
fn pure_translations_project_to_zero_and_defeat_nothing() {
    // Q = {(1, b_k)}: the projection is {0}, and every probability measure
    // on ℝ has defect 0 there — no Kazhdan constant can exist.
    let q: Vec<AffineElement> = (0..10)
        .map(|k| AffineElement::new(1.0, k as f64 * 1.7).unwrap())
        .collect();
    let projected = affine_projection(&q);
    assert!(projected.iter().all(|t| t.abs() < 1e-15));
    for measure in [
        RealMeasure::dirac(vec![3.7]),
        RealMeasure::product_density(
            1.0,
            vec![kazlab_core::Component1d::Uniform { radius: 0.4 }],
        ),
    ] {
        let points: Vec<Vec<f64>> = projected.iter().map(|t| vec![*t]).collect();
        let (sup, _) = measure.invariance_defect(&points).unwrap();
        assert!(sup < 1e-12, "defect at t = 0 must vanish");
    }
}

#[test]
fn riesz_product_is_kaplus_evidence_for_three_adic_set() {
    // Continuous measure with |σ̂| bounded away from 0 on {3^k+k}: the
    // window infimum stays ≥ 0.4 while the measure has no atoms.
    let freqs: Vec<u64> = (1..=6u32).map(|k| 3u64.pow(k) + k as u64).collect();
    let coeffs = vec![1.0; freqs.len()];
    let measure = riesz_product(&freqs, &coeffs, 1 << 16).unwrap();
    assert!(measure.atoms().is_empty());
    let seq = IntegerSequence::lacunary(3, true);
    let inf = transform_infimum(&measure, &seq, 6).unwrap();
    assert!(inf >= 0.4, "infimum {inf}");
    // Same evidence fails for Lebesgue (transform vanishes off 0).
    let leb = kazlab_core::CircleMeasure::lebesgue(1.0);
    let inf = transform_infimum(&leb, &seq, 6).unwrap();
    assert!(inf < 1e-9);
    // The full transform still peaks at 1 at the trivial character.
    assert!((measure.coefficient_value(0) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    let _ = Angle::ZERO;
}

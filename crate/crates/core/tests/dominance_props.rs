mod common;

use common::strategies::{any_sample, cone, matrix, point, proper_cone, sample};
use common::{grid, padded_box, TestCone};
use conequant::dominance::{attainable_levels, fsd_dominates, var_consistency_check};
use conequant::empirical::cone_cdf;
use conequant::{Error, OrderingCone, ProbabilityLevel, Sample};
use proptest::prelude::*;

const EXACT: f64 = 1e-12;

fn shifted(s: &Sample, c: [f64; 2], k: f64) -> Sample {
    s.translated(&[k * c[0], k * c[1]]).unwrap()
}

/// Largest `F_Y - F_X` over a grid covering both samples and the sample
/// points themselves.
fn grid_excess(sy: &Sample, sx: &Sample, cone: &OrderingCone, k: usize) -> f64 {
    let (bx, by) = (padded_box(sx, 0.3), padded_box(sy, 0.3));
    let b = [bx[0].min(by[0]), bx[1].min(by[1]), bx[2].max(by[2]), bx[3].max(by[3])];
    let mut pts = grid(b, k, k);
    pts.extend(sy.points().chain(sx.points()).map(|p| [p[0], p[1]]));
    pts.iter()
        .map(|z| cone_cdf(sy, cone, z).unwrap() - cone_cdf(sx, cone, z).unwrap())
        .fold(f64::NEG_INFINITY, f64::max)
}

fn check_verdict(sy: &Sample, sx: &Sample, tc: &TestCone) -> Result<bool, TestCaseError> {
    let v = fsd_dominates(sy, sx, &tc.cone).unwrap();
    prop_assert!(v.exact);
    if v.dominates {
        prop_assert!(v.counterexample.is_none());
        let excess = grid_excess(sy, sx, &tc.cone, 40);
        prop_assert!(excess <= EXACT, "grid violation {} ({})", excess, tc.label);
    } else {
        let ce = v.counterexample.clone().expect("false verdicts carry a counterexample");
        let fy = cone_cdf(sy, &tc.cone, &ce.z).unwrap();
        let fx = cone_cdf(sx, &tc.cone, &ce.z).unwrap();
        prop_assert!(fy > fx + EXACT, "unverified counterexample {:?}", ce);
        prop_assert_eq!((fy, fx), (ce.f_y, ce.f_x));
    }
    Ok(v.dominates)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn verdict_matches_the_pointwise_oracle(sx in any_sample(10), sy in any_sample(10), tc in cone()) {
        check_verdict(&sy, &sx, &tc)?;
    }

    #[test]
    fn shifted_pairs(sx in any_sample(10), tc in proper_cone(), k in 0.1..2.0f64) {
        let c = tc.interior.unwrap();
        prop_assert!(check_verdict(&sx, &sx, &tc)?);
        prop_assert!(check_verdict(&shifted(&sx, c, k), &sx, &tc)?);
        prop_assert!(!check_verdict(&shifted(&sx, c, -k), &sx, &tc)?);
    }

    #[test]
    fn transitive_on_chains(sx in any_sample(10), tc in proper_cone(), k in 0.1..2.0f64) {
        let c = tc.interior.unwrap();
        let (y1, y2) = (shifted(&sx, c, k), shifted(&sx, c, 2.0 * k));
        prop_assert!(fsd_dominates(&y1, &sx, &tc.cone).unwrap().dominates);
        prop_assert!(fsd_dominates(&y2, &y1, &tc.cone).unwrap().dominates);
        prop_assert!(fsd_dominates(&y2, &sx, &tc.cone).unwrap().dominates);
        prop_assert!(!fsd_dominates(&sx, &y2, &tc.cone).unwrap().dominates);
    }

    #[test]
    fn invariant_under_joint_affine_maps(sx in sample(8), sy in sample(8), tc in cone(), a in matrix(), b in point(2.0), k in -1.0..1.0f64) {
        // Mix an arbitrary pair with a shifted one so both verdicts occur.
        let pairs = match tc.interior {
            Some(c) => vec![(sy.clone(), sx.clone()), (shifted(&sx, c, k), sx.clone())],
            None => vec![(sy.clone(), sx.clone()), (sx.clone(), sx.clone())],
        };
        let mapped_cone = tc.cone.linear_image_2d(a).unwrap();
        for (y, x) in pairs {
            let before = fsd_dominates(&y, &x, &tc.cone).unwrap().dominates;
            let after = fsd_dominates(&y.map_affine_2d(a, b).unwrap(), &x.map_affine_2d(a, b).unwrap(), &mapped_cone)
                .unwrap()
                .dominates;
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn dominance_implies_var_inclusion(sx in any_sample(10), tc in proper_cone(), k in 0.1..2.0f64) {
        let c = tc.interior.unwrap();
        let up = shifted(&sx, c, k);
        let mut alphas: Vec<ProbabilityLevel> =
            attainable_levels(&sx).into_iter().map(|p| ProbabilityLevel::new(p.min(1.0)).unwrap()).collect();
        alphas.extend([0.25, 0.5, 0.75].map(|p| ProbabilityLevel::new(p).unwrap()));
        prop_assert!(var_consistency_check(&up, &sx, &tc.cone, &alphas).unwrap());
        prop_assert!(var_consistency_check(&sx, &sx, &tc.cone, &alphas).unwrap());
        prop_assert!(!var_consistency_check(&sx, &up, &tc.cone, &alphas).unwrap());
    }
}

#[test]
fn univariate_dominance_is_exact() {
    let x = Sample::new(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
    let c = OrderingCone::orthant(1).unwrap();
    let y = Sample::new(vec![vec![0.5], vec![1.0], vec![2.5]]).unwrap();
    let v = fsd_dominates(&y, &x, &c).unwrap();
    assert!(v.dominates && v.exact);
    let z = Sample::new(vec![vec![-0.5], vec![3.0], vec![3.0]]).unwrap();
    let v = fsd_dominates(&z, &x, &c).unwrap();
    assert!(!v.dominates);
    let ce = v.counterexample.unwrap();
    assert!(ce.f_y > ce.f_x);
}

#[test]
fn higher_dimensions_are_labelled_approximate() {
    let x = Sample::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 2.0, 0.5]]).unwrap();
    let y = x.translated(&[1.0, 1.0, 1.0]).unwrap();
    let c = OrderingCone::orthant(3).unwrap().with_direction_count(64).unwrap();
    let v = fsd_dominates(&y, &x, &c).unwrap();
    assert!(v.dominates && !v.exact);
    assert!(!fsd_dominates(&x, &y, &c).unwrap().dominates);
    let alpha = [ProbabilityLevel::new(0.5).unwrap()];
    assert!(matches!(var_consistency_check(&y, &x, &c, &alpha), Err(Error::Unsupported(_))));
}

#[test]
fn dimension_mismatch_is_an_error() {
    let x = Sample::new(vec![vec![0.0, 0.0]]).unwrap();
    let y = Sample::new(vec![vec![0.0]]).unwrap();
    assert!(fsd_dominates(&y, &x, &OrderingCone::orthant(2).unwrap()).is_err());
}

use uniaxial_cp::oracle::{builtin_pinned, pinned_cases, pinned_tolerance, validate, ValidateMode};
use uniaxial_cp::QuadSpec;

#[test]
fn main_paths_reproduce_pinned_oracle_values() {
    let pinned = builtin_pinned();
    let spec = QuadSpec::default();
    for c in pinned_cases() {
        let p = pinned.iter().find(|p| p.label == c.label).unwrap();
        let (v, err) = (c.main)(&spec).unwrap();
        let tol = pinned_tolerance(p, err);
        assert!((v - p.value).abs() <= tol, "{}: {v} vs {} (tol {tol})", c.label, p.value);
    }
}

#[test]
fn quick_validation_passes() {
    let r = validate(ValidateMode::Quick, &builtin_pinned(), &QuadSpec::default()).unwrap();
    for row in &r {
        assert!(row.passed, "{row:?}");
    }
}

#[test]
fn perturbed_table_fails_by_name() {
    let mut pinned = builtin_pinned();
    pinned[2].value *= 1.01;
    let r = validate(ValidateMode::Quick, &pinned, &QuadSpec::default()).unwrap();
    let failed: Vec<_> = r.iter().filter(|x| !x.passed).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].quantity_label, pinned[2].label);
}

#[test]
fn oracles_converge_at_second_order() {
    use uniaxial_cp::oracle::brute_f;
    use uniaxial_cp::{AxisResponse, Geometry, Material};
    let m = Material::new(AxisResponse::drude_conductor(2.0, 0.3).unwrap(), AxisResponse::dielectric(1.5).unwrap())
        .unwrap();
    let g = Geometry::HalfSpace;
    let a = brute_f(&m, &g, 0.5, 1000).unwrap();
    let b = brute_f(&m, &g, 0.5, 2000).unwrap();
    let c = brute_f(&m, &g, 0.5, 4000).unwrap();
    let ratio = (b.0 - a.0) / (c.0 - b.0);
    assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
}

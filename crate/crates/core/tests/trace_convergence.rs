mod common;

#[test]
fn rigid_rotation_quarter_turn() {
    let e = common::rotation_quarter_error(1e-3);
    assert!(e <= 1e-8, "end point error {e:e}");
}

#[test]
fn rk4_is_fourth_order() {
    let r = common::rk4_self_convergence_ratio();
    assert!((12.0..=20.0).contains(&r), "ratio {r}");
}

#[test]
fn stitching_is_first_order() {
    let r = common::stitching_ratio();
    assert!((1.8..=2.2).contains(&r), "ratio {r}");
}

#[test]
fn bernoulli_and_liouville_are_transported() {
    let (da, dl) = common::invariant_drift();
    assert!(da <= 1e-8 && dl <= 1e-8, "drift α {da:e}, w·∇α {dl:e}");
}

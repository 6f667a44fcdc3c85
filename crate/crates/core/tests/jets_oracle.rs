mod common;

#[test]
fn partials_match_central_differences() {
    let (gap, at) = common::finite_difference_gap(100, 1e-4);
    assert!(gap <= 1e-5, "relative gap {gap:e} at {at}");
}
